#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

namespace vjm {

template <typename Scalar>
constexpr Scalar kRankTolerance = Scalar(1e-10);

template <typename Scalar>
struct SpectralReport {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;  // descending
  int rank = 0;
  // Orthonormal basis of the eigenvectors whose eigenvalue is below the
  // threshold, one basis vector per column.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> null_space;
};

// Symmetric eigen-analysis with rank counted as the number of eigenvalues
// above rel_tol * lambda_max. The zero matrix has rank 0.
template <typename Derived>
SpectralReport<typename Derived::Scalar> spectral_report(
    const Eigen::MatrixBase<Derived>& k,
    typename Derived::Scalar rel_tol = kRankTolerance<typename Derived::Scalar>) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix sym = (k + k.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Eigen::Index n = sym.rows();

  SpectralReport<Scalar> report;
  report.eigenvalues = solver.eigenvalues().reverse();
  const Scalar lambda_max = n > 0 ? report.eigenvalues.cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar cutoff = rel_tol * lambda_max;

  std::vector<Eigen::Index> null_columns;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda_max > Scalar(0) && solver.eigenvalues()(i) > cutoff) {
      ++report.rank;
    } else {
      null_columns.push_back(i);
    }
  }
  report.null_space.resize(n, static_cast<Eigen::Index>(null_columns.size()));
  for (std::size_t c = 0; c < null_columns.size(); ++c) {
    report.null_space.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(null_columns[c]);
  }
  return report;
}

template <typename Derived>
int numeric_rank(const Eigen::MatrixBase<Derived>& k,
                 typename Derived::Scalar rel_tol = kRankTolerance<typename Derived::Scalar>) {
  return spectral_report(k, rel_tol).rank;
}

// Rank of a general (possibly rectangular) matrix from its singular values.
template <typename Derived>
int matrix_rank(const Eigen::MatrixBase<Derived>& m,
                typename Derived::Scalar rel_tol = kRankTolerance<typename Derived::Scalar>) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == Scalar(0)) return 0;
  return static_cast<int>((sv.array() > rel_tol * sv(0)).count());
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar relative_difference(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar scale = std::max(a.norm(), b.norm());
  return scale == Scalar(0) ? Scalar(0) : (a - b).norm() / scale;
}

}  // namespace vjm
