#pragma once

#include <complex>
#include <functional>
#include <Eigen/Dense>

namespace wt {

using Complex = std::complex<double>;
using Eigen::ArrayXd;
using Eigen::ArrayXcd;
using Eigen::ArrayXXd;
using Eigen::ArrayXXcd;

// Integer lattice index vector and physical wavevector, zero-padded
// beyond the lattice dimension.
using IndexVec = Eigen::Vector3i;
using KVec = Eigen::Vector3d;

inline constexpr double pi = 3.141592653589793238462643383279502884;

using DispersionFn = std::function<double(const KVec&)>;

} // namespace wt
