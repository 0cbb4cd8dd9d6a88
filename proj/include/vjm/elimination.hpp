#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vjm/chain.hpp"
#include "vjm/errors.hpp"
#include "vjm/spatial.hpp"
#include "vjm/spectral.hpp"

namespace vjm {

// How a passive column was produced. Translational and rotational columns
// follow the [e; 0] and [e x r; e] templates; trivial ones are a signed unit
// basis vector.
enum class ColumnKind { translational, rotational, trivial, general };

template <typename Scalar>
struct PassiveColumn {
  Vector6<Scalar> values;
  ColumnKind kind = ColumnKind::general;
  int index = -1;  // 0-based position of the nonzero entry for trivial columns

  static PassiveColumn translational(const Vector3<Scalar>& axis) {
    Vector6<Scalar> v;
    v << axis.normalized(), Vector3<Scalar>::Zero();
    return {v, ColumnKind::translational, -1};
  }

  // lever: from the joint centre to the reference point.
  static PassiveColumn rotational(const Vector3<Scalar>& axis, const Vector3<Scalar>& lever) {
    const Vector3<Scalar> e = axis.normalized();
    Vector6<Scalar> v;
    v << e.cross(lever), e;
    return {v, ColumnKind::rotational, -1};
  }

  static PassiveColumn trivial(int p) {
    if (p < 0 || p > 5) throw ModelError("trivial passive column index must be in 0..5");
    return {Vector6<Scalar>::Unit(p), ColumnKind::trivial, p};
  }

  static PassiveColumn general(const Vector6<Scalar>& v) { return {v, ColumnKind::general, -1}; }
};

template <typename Scalar>
class PassiveJacobian {
 public:
  PassiveJacobian() = default;
  explicit PassiveJacobian(std::vector<PassiveColumn<Scalar>> columns) : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) check(columns_[i], static_cast<int>(i));
  }

  static PassiveJacobian from_matrix(const Eigen::Ref<const Matrix6X<Scalar>>& m) {
    std::vector<PassiveColumn<Scalar>> cols;
    for (Eigen::Index i = 0; i < m.cols(); ++i) cols.push_back(PassiveColumn<Scalar>::general(m.col(i)));
    return PassiveJacobian(std::move(cols));
  }

  void push_back(const PassiveColumn<Scalar>& c) {
    check(c, size());
    columns_.push_back(c);
  }

  int size() const { return static_cast<int>(columns_.size()); }
  bool empty() const { return columns_.empty(); }
  const PassiveColumn<Scalar>& operator[](int i) const { return columns_[static_cast<std::size_t>(i)]; }
  auto begin() const { return columns_.begin(); }
  auto end() const { return columns_.end(); }

  Matrix6X<Scalar> matrix() const {
    Matrix6X<Scalar> m(6, size());
    for (int i = 0; i < size(); ++i) m.col(i) = columns_[static_cast<std::size_t>(i)].values;
    return m;
  }

 private:
  static void check(const PassiveColumn<Scalar>& c, int i) {
    if (!c.values.allFinite() || c.values.isZero(Scalar(0))) {
      throw ModelError("passive column " + std::to_string(i) + " is zero or non-finite");
    }
    if (c.kind == ColumnKind::trivial &&
        (c.index < 0 || c.index > 5 || c.values != Vector6<Scalar>::Unit(c.index))) {
      throw ModelError("passive column " + std::to_string(i) + " is tagged trivial but is not a unit basis vector");
    }
  }

  std::vector<PassiveColumn<Scalar>> columns_;
};

template <typename Scalar>
constexpr Scalar kRedundancyTolerance = Scalar(1e-10);

enum class RedundancyPolicy {
  strict,      // throw RedundantJointError
  permissive,  // skip the column and record it in the report
};

namespace detail {

// mu must exceed eps * trace(K)/6 * |jq|^2 for the column to carry stiffness.
template <typename Scalar>
bool column_accepted(const Matrix6<Scalar>& k, const Vector6<Scalar>& jq, Scalar mu) {
  const Scalar threshold = kRedundancyTolerance<Scalar> * k.trace() / Scalar(6) * jq.squaredNorm();
  return mu > threshold && threshold >= Scalar(0);
}

template <typename Scalar>
RedundantJointError redundant(int column, Scalar mu) {
  return RedundantJointError("passive column " + std::to_string(column) +
                                 " is redundant or already stiffness-free (mu = " + std::to_string(mu) + ")",
                             column);
}

}  // namespace detail

// Scalar single-joint update K+ = K - u u^T / mu, u = K jq, mu = jq^T K jq.
template <typename Scalar>
Matrix6<Scalar> eliminate_single(const Matrix6<Scalar>& k, const Vector6<Scalar>& jq, int column = 0) {
  const Vector6<Scalar> u = k * jq;
  const Scalar mu = jq.dot(u);
  if (!detail::column_accepted(k, jq, mu)) throw detail::redundant(column, mu);
  return symmetrize(k - u * u.transpose() / mu);
}

// Row/column rule for a column equal to +-e_p: K_jk - K_jp K_pk / K_pp, with
// row and column p set exactly to zero.
template <typename Scalar>
Matrix6<Scalar> eliminate_trivial(const Matrix6<Scalar>& k, int p, int column = 0) {
  if (p < 0 || p > 5) throw ModelError("eliminate_trivial: index must be in 0..5");
  const Scalar kpp = k(p, p);
  if (!detail::column_accepted<Scalar>(k, Vector6<Scalar>::Unit(p), kpp)) throw detail::redundant(column, kpp);
  Matrix6<Scalar> out = k - k.col(p) * k.row(p) / kpp;
  out.row(p).setZero();
  out.col(p).setZero();
  return symmetrize(out);
}

// One-shot Schur complement K0 - K0 Jq (Jq^T K0 Jq)^-1 Jq^T K0.
template <typename Scalar>
Matrix6<Scalar> eliminate_full(const Matrix6<Scalar>& k0, const Eigen::Ref<const Matrix6X<Scalar>>& jq) {
  if (jq.cols() == 0) return k0;
  const Matrix6X<Scalar> kj = k0 * jq;
  const MatrixX<Scalar> middle = symmetrize(MatrixX<Scalar>(jq.transpose() * kj));
  const Scalar threshold =
      kRedundancyTolerance<Scalar> * k0.trace() / Scalar(6) * jq.colwise().squaredNorm().maxCoeff();
  if (spectral_report(middle).eigenvalues.minCoeff() <= threshold) {
    throw RedundantJointError("passive Jacobian makes J_q^T K J_q singular: passive joints are redundant",
                              detail::first_dependent_column<Scalar>(jq));
  }
  const Eigen::LDLT<MatrixX<Scalar>> solver(middle);
  return symmetrize(k0 - kj * solver.solve(kj.transpose()));
}

template <typename Scalar>
Matrix6<Scalar> eliminate_full(const Matrix6<Scalar>& k0, const PassiveJacobian<Scalar>& jq) {
  return eliminate_full<Scalar>(k0, jq.matrix());
}

struct ColumnClass {
  enum Kind { trivial, quasi_trivial, general };
  Kind kind = general;
  int index = -1;  // 0-based nonzero position for trivial, rotational axis for quasi-trivial
};

// trivial: single nonzero entry equal to +-1. quasi_trivial: a unit rotation
// about a global axis plus lever entries of equal magnitude (or zero) on the
// two other translational axes.
template <typename Scalar>
ColumnClass classify_column(const Vector6<Scalar>& jq, Scalar tol = Scalar(1e-12)) {
  if (!jq.allFinite() || jq.isZero(Scalar(0))) throw ModelError("classify_column: zero column");
  const Scalar scale = jq.cwiseAbs().maxCoeff();
  const auto is_zero = [&](Scalar x) { return std::abs(x) <= tol * scale; };

  int nonzero = 0;
  int last = -1;
  for (int i = 0; i < 6; ++i) {
    if (!is_zero(jq(i))) {
      ++nonzero;
      last = i;
    }
  }
  if (nonzero == 1 && std::abs(std::abs(jq(last)) - Scalar(1)) <= tol) return {ColumnClass::trivial, last};

  const Vector3<Scalar> d = jq.template head<3>();
  const Vector3<Scalar> e = jq.template tail<3>();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(std::abs(e(axis)) - Scalar(1)) > tol || !is_zero(e((axis + 1) % 3)) || !is_zero(e((axis + 2) % 3))) {
      continue;
    }
    if (!is_zero(d(axis))) return {ColumnClass::general, -1};
    Scalar lever = Scalar(0);
    for (int j = 0; j < 3; ++j) {
      if (j == axis || is_zero(d(j))) continue;
      const Scalar m = std::abs(d(j));
      if (lever != Scalar(0) && std::abs(m - lever) > tol * scale) return {ColumnClass::general, -1};
      lever = m;
    }
    return {ColumnClass::quasi_trivial, axis + 3};
  }
  return {ColumnClass::general, -1};
}

template <typename Scalar>
struct EliminationReport {
  Matrix6<Scalar> result;
  int rank_before = 0;
  int rank_after = 0;
  std::vector<Scalar> mu_values;  // one per accepted step, in elimination order
  std::vector<int> order;         // column indices in the order they were eliminated
  std::vector<int> skipped;       // columns dropped under RedundancyPolicy::permissive
};

// Column-by-column elimination. An empty order means natural order.
template <typename Scalar>
EliminationReport<Scalar> eliminate_recursive(const Matrix6<Scalar>& k0, const PassiveJacobian<Scalar>& jq,
                                              std::span<const int> order = {},
                                              RedundancyPolicy policy = RedundancyPolicy::strict) {
  std::vector<int> sequence(order.begin(), order.end());
  if (sequence.empty()) {
    sequence.resize(static_cast<std::size_t>(jq.size()));
    std::iota(sequence.begin(), sequence.end(), 0);
  }
  {
    std::vector<int> sorted = sequence;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(static_cast<std::size_t>(jq.size()));
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected) throw ModelError("eliminate_recursive: order is not a permutation of the columns");
  }

  EliminationReport<Scalar> report;
  report.rank_before = numeric_rank(k0);
  Matrix6<Scalar> k = k0;
  for (std::size_t step = 0; step < sequence.size(); ++step) {
    const int c = sequence[step];
    const Vector6<Scalar>& column = jq[c].values;
    const Scalar mu = column.dot(k * column);
    if (!detail::column_accepted(k, column, mu)) {
      if (policy == RedundancyPolicy::permissive) {
        report.skipped.push_back(c);
        continue;
      }
      throw RedundantJointError("elimination step " + std::to_string(step) + ": passive column " + std::to_string(c) +
                                    " is redundant or already stiffness-free (mu = " + std::to_string(mu) + ")",
                                c);
    }
    const ColumnClass cls = classify_column(column);
    k = cls.kind == ColumnClass::trivial ? eliminate_trivial(k, cls.index, c) : eliminate_single(k, column, c);
    report.mu_values.push_back(mu);
    report.order.push_back(c);
  }
  report.result = k;
  report.rank_after = numeric_rank(k);
  return report;
}

}  // namespace vjm
