#pragma once

#include <Eigen/Core>

namespace oadc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Deterministic orthonormal completion of a unit vector.
///
/// Column 0 equals `first`. The remaining columns are built by
/// largest-pivot Gram-Schmidt over the coordinate axes: at every step the
/// axis with the largest residual norm after projecting out the columns
/// found so far is orthonormalized and appended (lowest index wins ties).
/// Identical input yields a bitwise-identical matrix.
///
/// Throws ZeroVectorError if ||first|| < 1e-12.
Mat orthonormal_completion(const Vec& first);

/// Completion of a partial orthonormal set given as matrix columns.
/// Same pivot rule; the input columns are copied through unchanged.
Mat orthonormal_completion(const Mat& partial);

}  // namespace oadc
