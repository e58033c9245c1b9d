#include "fractsig/pca.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "fractsig/errors.hpp"

namespace fractsig {

namespace {
constexpr double kRankTolerance = 1e-12;  // relative to lambda_max
}

PcaDecomposition pca_decompose(const Matrix& img) {
  const int h = img.rows;
  const int w = img.cols;
  if (h < 2 || w < 2) {
    throw argument_error("pca_decompose needs at least a 2x2 matrix");
  }

  Eigen::MatrixXd x(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) x(r, c) = img.at(r, c);

  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;

  // W x W sample covariance with the divide-by-H convention, so the
  // eigenvalue sum equals ||x - mean||_F^2 / H.
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("eigendecomposition failed");
  }

  const int k = std::min(h, w);
  PcaDecomposition dec;
  dec.column_mean.assign(mean.data(), mean.data() + w);
  dec.components = Matrix(k, w);
  dec.eigenvalues.resize(k);

  // Solver returns ascending order; take the top k in descending order and
  // fix each component's sign so its first nonzero coordinate is positive.
  Eigen::MatrixXd basis(w, k);
  for (int i = 0; i < k; ++i) {
    const int src = w - 1 - i;
    Eigen::VectorXd u = solver.eigenvectors().col(src);
    for (int j = 0; j < w; ++j) {
      if (u(j) != 0.0) {
        if (u(j) < 0.0) u = -u;
        break;
      }
    }
    basis.col(i) = u;
    dec.eigenvalues[i] = std::max(0.0, solver.eigenvalues()(src));
    for (int j = 0; j < w; ++j) dec.components.at(i, j) = u(j);
  }

  const double lambda_max = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues[0];
  dec.numerical_rank = 0;
  for (double ev : dec.eigenvalues) {
    if (ev > kRankTolerance * lambda_max && ev > 0.0) ++dec.numerical_rank;
  }

  const Eigen::MatrixXd sc = centered * basis;  // H x K
  dec.scores = Matrix(h, k);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < k; ++c) dec.scores.at(r, c) = sc(r, c);

  return dec;
}

Matrix reconstruct(const PcaDecomposition& dec, int n) {
  const int k = dec.component_count();
  if (n < 0 || n > k) {
    throw argument_error("component count " + std::to_string(n) +
                         " out of range [0, " + std::to_string(k) + "]");
  }
  const int h = dec.scores.rows;
  const int w = static_cast<int>(dec.column_mean.size());

  Matrix out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out.at(r, c) = dec.column_mean[c];
  for (int comp = 0; comp < n; ++comp) {
    for (int r = 0; r < h; ++r) {
      const double s = dec.scores.at(r, comp);
      if (s == 0.0) continue;
      for (int c = 0; c < w; ++c) out.at(r, c) += s * dec.components.at(comp, c);
    }
  }
  return out;
}

ResidualImage residual(const Matrix& img, const PcaDecomposition& dec, int n) {
  Matrix rec = reconstruct(dec, n);
  if (rec.rows != img.rows || rec.cols != img.cols) {
    throw argument_error("decomposition does not match image shape");
  }
  ResidualImage res;
  res.removed_components = n;
  res.data = Matrix(img.rows, img.cols);
  for (size_t i = 0; i < img.data.size(); ++i) {
    res.data.data[i] = img.data[i] - rec.data[i];
  }
  return res;
}

ResidualImage residual(const Matrix& img, int n) {
  return residual(img, pca_decompose(img), n);
}

}  // namespace fractsig
