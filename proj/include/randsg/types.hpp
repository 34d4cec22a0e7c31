#pragma once

#include <Eigen/Core>

namespace randsg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace randsg
