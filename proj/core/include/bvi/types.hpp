#pragma once

#include <Eigen/Dense>
#include <random>

namespace bvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

}  // namespace bvi
