#pragma once

#include <vector>

#include "fractsig/matrix.hpp"

namespace fractsig {

// Per-image PCA over rows: the H rows are treated as H samples of dimension
// W, centered by the column mean. components holds all min(H,W) eigenvectors
// of the W x W sample covariance (divide-by-H convention), so eigenvalue-zero
// directions are kept with zero scores and reconstruction is defined for any
// n up to component_count().
struct PcaDecomposition {
  std::vector<double> column_mean;  // length W
  Matrix components;                // K x W, row k = u_k, descending eigenvalue
  std::vector<double> eigenvalues;  // length K, descending, clamped >= 0
  Matrix scores;                    // H x K, scores(r,k) = (row_r - mean) . u_k
  int numerical_rank = 0;           // eigenvalues above 1e-12 * lambda_max

  int component_count() const { return components.rows; }
};

PcaDecomposition pca_decompose(const Matrix& img);

// Rank-n reconstruction: row_r = column_mean + sum_{k<n} scores(r,k) u_k.
// n = 0 gives the mean-only image. Throws argument_error if n is out of
// [0, component_count()].
Matrix reconstruct(const PcaDecomposition& dec, int n);

// R^(n) = img - reconstruct(pca_decompose(img), n).
ResidualImage residual(const Matrix& img, int n);

// Same, reusing an existing decomposition of img.
ResidualImage residual(const Matrix& img, const PcaDecomposition& dec, int n);

}  // namespace fractsig
