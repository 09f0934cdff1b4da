#pragma once

#include <Eigen/Core>

namespace dmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace dmm
