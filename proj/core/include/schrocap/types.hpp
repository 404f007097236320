#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>

namespace schrocap {

using Real = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Real>;

inline constexpr Real kTwoPi = 6.283185307179586476925286766559;

/// Render a real with 17 significant digits (lossless double round-trip).
/// NaN renders as the empty string; CSV and reports use it for absent values.
std::string format_real(Real x);

/// Compact rendering (6 significant digits) for human-readable descriptors.
std::string format_real_short(Real x);

} // namespace schrocap
