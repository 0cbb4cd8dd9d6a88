#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vjm/errors.hpp"
#include "vjm/spatial.hpp"
#include "vjm/spectral.hpp"

namespace vjm {

enum class FrameTag { local, global };

// One leg of a parallel manipulator: its Cartesian stiffness at the leg
// end-point, the rotation of its local frame, and the lever v from the leg
// end-point to the platform reference point (global axes).
template <typename Scalar>
struct LegAssembly {
  Matrix6<Scalar> stiffness = Matrix6<Scalar>::Zero();
  Matrix3<Scalar> orientation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> lever = Vector3<Scalar>::Zero();
  FrameTag frame = FrameTag::local;
};

// The platform is rigid; every leg is expressed about the same reference point
// once shifted by its lever.
template <typename Scalar>
struct ManipulatorModel {
  std::vector<LegAssembly<Scalar>> legs;
};

template <typename Scalar>
LegAssembly<Scalar> leg_to_global(const LegAssembly<Scalar>& leg) {
  if (leg.frame == FrameTag::global) throw ModelError("leg_to_global: leg is already in the global frame");
  LegAssembly<Scalar> out = leg;
  out.stiffness = rotate_stiffness(leg.stiffness, leg.orientation);
  out.frame = FrameTag::global;
  return out;
}

template <typename Scalar>
Matrix6<Scalar> aggregate(const ManipulatorModel<Scalar>& model) {
  if (model.legs.empty()) throw ModelError("aggregate: manipulator has no legs");
  Matrix6<Scalar> k = Matrix6<Scalar>::Zero();
  for (std::size_t i = 0; i < model.legs.size(); ++i) {
    const auto& leg = model.legs[i];
    if (leg.frame != FrameTag::global) {
      throw ModelError("aggregate: leg " + std::to_string(i) + " has not been transformed to the global frame");
    }
    k += shift_stiffness(leg.stiffness, leg.lever);
  }
  return symmetrize(k);
}

template <typename Scalar>
constexpr Scalar kUnresistedTolerance = Scalar(1e-9);

template <typename Scalar>
struct DeflectionSolution {
  Twist<Scalar> twist;                 // minimum-norm solution of K t = F_resisted
  Vector6<Scalar> unresisted;          // component of F in the null space of K
  Scalar residual = Scalar(0);         // |K t - F| / |F|
  Eigen::Matrix<Scalar, 6, Eigen::Dynamic> null_space;
};

// Spectral pseudo-inverse solve; eigenvalues below rel_tol * lambda_max are
// treated as free directions.
template <typename Scalar>
DeflectionSolution<Scalar> solve_deflection(const Matrix6<Scalar>& k, const Wrench<Scalar>& wrench,
                                            Scalar rel_tol = kRankTolerance<Scalar>) {
  const Vector6<Scalar> f = wrench.vector();
  Eigen::SelfAdjointEigenSolver<Matrix6<Scalar>> solver(symmetrize(k));
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const Scalar cutoff = rel_tol * values.cwiseAbs().maxCoeff();

  DeflectionSolution<Scalar> sol;
  Vector6<Scalar> t = Vector6<Scalar>::Zero();
  sol.unresisted.setZero();
  std::vector<int> free;
  for (int i = 0; i < 6; ++i) {
    const Scalar projection = vectors.col(i).dot(f);
    if (values(i) > cutoff && cutoff > Scalar(0)) {
      t += vectors.col(i) * (projection / values(i));
    } else {
      sol.unresisted += vectors.col(i) * projection;
      free.push_back(i);
    }
  }
  sol.null_space.resize(6, static_cast<Eigen::Index>(free.size()));
  for (std::size_t c = 0; c < free.size(); ++c) sol.null_space.col(static_cast<Eigen::Index>(c)) = vectors.col(free[c]);
  sol.twist = Twist<Scalar>::from_vector(t);
  const Scalar fn = f.norm();
  sol.residual = fn > Scalar(0) ? (k * t - f).norm() / fn : (k * t).norm();
  return sol;
}

// F = K t. Throws UnresistedWrenchError when F has a component along a free
// direction larger than 1e-9 |F|.
template <typename Scalar>
Twist<Scalar> deflection(const Matrix6<Scalar>& k, const Wrench<Scalar>& wrench,
                         Scalar rel_tol = kRankTolerance<Scalar>) {
  const auto sol = solve_deflection(k, wrench, rel_tol);
  const Scalar fn = wrench.vector().norm();
  if (sol.unresisted.norm() > kUnresistedTolerance<Scalar> * fn) {
    const Vector6<Scalar> dir = sol.unresisted.normalized();
    std::array<double, 6> d{};
    for (int i = 0; i < 6; ++i) d[static_cast<std::size_t>(i)] = static_cast<double>(dir(i));
    throw UnresistedWrenchError("wrench excites a free motion of the platform", d);
  }
  return sol.twist;
}

}  // namespace vjm
