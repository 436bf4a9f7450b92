#include "oadc/basis.hpp"

#include <cmath>

#include "oadc/errors.hpp"

namespace oadc {

Mat orthonormal_completion(const Mat& partial) {
  const Eigen::Index n = partial.rows();
  Mat q(n, n);
  q.leftCols(partial.cols()) = partial;

  for (Eigen::Index col = partial.cols(); col < n; ++col) {
    // Largest-pivot rule: take the coordinate axis with the biggest
    // residual after removing the span of the columns found so far.
    double best_norm = -1.0;
    Vec best;
    for (Eigen::Index axis = 0; axis < n; ++axis) {
      Vec residual = Vec::Unit(n, axis);
      for (Eigen::Index j = 0; j < col; ++j) {
        residual -= q.col(j).dot(residual) * q.col(j);
      }
      const double norm = residual.norm();
      if (norm > best_norm + 1e-15) {
        best_norm = norm;
        best = residual;
      }
    }
    if (!(best_norm > 1e-12) || !best.allFinite()) {
      throw ZeroVectorError("cannot complete a degenerate basis");
    }
    // Second projection pass for orthogonality near machine precision.
    for (Eigen::Index j = 0; j < col; ++j) {
      best -= q.col(j).dot(best) * q.col(j);
    }
    q.col(col) = best / best.norm();
  }
  return q;
}

Mat orthonormal_completion(const Vec& first) {
  const double norm = first.norm();
  if (norm < 1e-12) throw ZeroVectorError("cannot build a basis from a zero vector");
  Mat seed(first.size(), 1);
  seed.col(0) = first / norm;
  return orthonormal_completion(seed);
}

}  // namespace oadc
