#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "vjm/assembly.hpp"
#include "vjm/chain.hpp"
#include "vjm/elimination.hpp"
#include "vjm/errors.hpp"
#include "vjm/spatial.hpp"

namespace vjm {

// Euler-Bernoulli beam, x along the beam axis.
template <typename Scalar>
struct BeamParams {
  Scalar E;   // Young's modulus
  Scalar G;   // shear modulus
  Scalar A;   // cross-section area
  Scalar Iy;  // second moment about local y
  Scalar Iz;  // second moment about local z
  Scalar Jt;  // torsion constant
  Scalar L;   // length

  void validate() const {
    for (Scalar x : {E, G, A, Iy, Iz, Jt, L}) {
      if (!(x > Scalar(0)) || !std::isfinite(x)) throw ModelError("beam parameters must be finite and positive");
    }
  }

  // Steel rod of circular section whose axial stiffness EA/L equals k11.
  static BeamParams circular_rod(Scalar k11, Scalar length) {
    const Scalar e(2.1e11);
    const Scalar area = k11 * length / e;
    const Scalar second_moment = area * area / (Scalar(4) * std::numbers::pi_v<Scalar>);
    return {e, Scalar(8.1e10), area, second_moment, second_moment, Scalar(2) * second_moment, length};
  }
};

// Tip stiffness of a cantilever clamped at the origin, about the tip point.
template <typename Scalar>
Matrix6<Scalar> beam_stiffness(const BeamParams<Scalar>& p) {
  p.validate();
  const Scalar l = p.L;
  const Scalar l2 = l * l;
  const Scalar l3 = l2 * l;
  Matrix6<Scalar> k = Matrix6<Scalar>::Zero();
  k(0, 0) = p.E * p.A / l;
  k(3, 3) = p.G * p.Jt / l;
  // bending in the x-y plane: uy with rotation about z
  k(1, 1) = Scalar(12) * p.E * p.Iz / l3;
  k(1, 5) = k(5, 1) = Scalar(-6) * p.E * p.Iz / l2;
  k(5, 5) = Scalar(4) * p.E * p.Iz / l;
  // bending in the x-z plane: uz with rotation about y
  k(2, 2) = Scalar(12) * p.E * p.Iy / l3;
  k(2, 4) = k(4, 2) = Scalar(6) * p.E * p.Iy / l2;
  k(4, 4) = Scalar(4) * p.E * p.Iy / l;
  return k;
}

// Spherical joint at the leg end (Rx, Ry, Rz) and universal joint at the
// base, a distance L behind it along -x (Ry+, Rz+).
template <typename Scalar>
PassiveJacobian<Scalar> stewart_leg_passive_columns(Scalar length) {
  if (!(length > Scalar(0))) throw ModelError("leg length must be positive");
  const Vector3<Scalar> to_end(length, Scalar(0), Scalar(0));
  using Col = PassiveColumn<Scalar>;
  return PassiveJacobian<Scalar>({Col::trivial(3), Col::trivial(4), Col::trivial(5),
                                  Col::rotational(Vector3<Scalar>::UnitY(), to_end),
                                  Col::rotational(Vector3<Scalar>::UnitZ(), to_end)});
}

template <typename Scalar>
Matrix6<Scalar> stewart_leg_stiffness(const Matrix6<Scalar>& beam, Scalar length) {
  return eliminate_recursive(beam, stewart_leg_passive_columns(length)).result;
}

enum class StewartCase { A, B };

// Home configuration: platform parallel to the base at height h.
template <typename Scalar>
struct StewartParams {
  Scalar R = Scalar(0.5);    // base attachment radius
  Scalar r = Scalar(0.2);    // platform attachment radius
  Scalar h = Scalar(1.0);    // base-platform distance
  Scalar k11 = Scalar(1e6);  // axial leg stiffness
  StewartCase layout = StewartCase::A;

  void validate() const {
    for (Scalar x : {R, r, h, k11}) {
      if (!(x > Scalar(0)) || !std::isfinite(x)) throw ModelError("Stewart parameters R, r, h, k11 must be positive");
    }
  }
};

template <typename Scalar>
struct LegVectors {
  Vector3<Scalar> u;  // base attachment to platform attachment
  Vector3<Scalar> v;  // platform attachment to platform centre
};

namespace detail {

struct AnglePair {
  double base_deg;
  double platform_deg;
};

inline AnglePair stewart_angles(StewartCase layout, int i) {
  constexpr std::array<AnglePair, 6> a{{{0, 0}, {60, 60}, {120, 120}, {180, 180}, {240, 240}, {300, 300}}};
  constexpr std::array<AnglePair, 6> b{{{0, 60}, {120, 60}, {120, 180}, {240, 180}, {240, 300}, {360, 300}}};
  return layout == StewartCase::A ? a[static_cast<std::size_t>(i)] : b[static_cast<std::size_t>(i)];
}

}  // namespace detail

template <typename Scalar>
LegVectors<Scalar> stewart_leg_vectors(const StewartParams<Scalar>& p, int i) {
  p.validate();
  if (i < 0 || i > 5) throw ModelError("Stewart leg index must be in 0..5");
  const auto angles = detail::stewart_angles(p.layout, i);
  const Scalar deg = std::numbers::pi_v<Scalar> / Scalar(180);
  const Scalar phi = Scalar(angles.base_deg) * deg;
  const Scalar psi = Scalar(angles.platform_deg) * deg;
  LegVectors<Scalar> out;
  out.u << p.r * std::cos(psi) - p.R * std::cos(phi), p.r * std::sin(psi) - p.R * std::sin(phi), p.h;
  out.v << -p.r * std::cos(psi), -p.r * std::sin(psi), Scalar(0);
  return out;
}

template <typename Scalar>
ManipulatorModel<Scalar> stewart_assembly(const StewartParams<Scalar>& p) {
  ManipulatorModel<Scalar> model;
  for (int i = 0; i < 6; ++i) {
    const auto legv = stewart_leg_vectors(p, i);
    const Scalar length = legv.u.norm();
    const Matrix6<Scalar> beam = beam_stiffness(BeamParams<Scalar>::circular_rod(p.k11, length));
    LegAssembly<Scalar> leg;
    leg.stiffness = stewart_leg_stiffness(beam, length);
    leg.orientation = frame_from_x_axis<Scalar>(legv.u);
    leg.lever = legv.v;
    model.legs.push_back(leg_to_global(leg));
  }
  return model;
}

template <typename Scalar>
Matrix6<Scalar> stewart_stiffness_pipeline(const StewartParams<Scalar>& p) {
  return aggregate(stewart_assembly(p));
}

// Closed-form home-configuration matrices, prefactor 3 K11 / L^2.
template <typename Scalar>
Matrix6<Scalar> stewart_closed_form(const StewartParams<Scalar>& p) {
  p.validate();
  const Scalar da = p.R - p.r;
  const Scalar db = p.R / Scalar(2) - p.r;
  const bool b = p.layout == StewartCase::B;
  const Scalar l2 = b ? p.R * p.R + p.r * p.r - p.R * p.r + p.h * p.h : da * da + p.h * p.h;
  const Scalar lateral = b ? da * da + p.R * p.r : da * da;
  const Scalar coupling = p.r * p.h * (b ? db : da);
  const Scalar tilt = p.r * p.r * p.h * p.h;
  const Scalar yaw = b ? Scalar(1.5) * p.r * p.r * p.R * p.R : Scalar(0);

  Matrix6<Scalar> k = Matrix6<Scalar>::Zero();
  k(0, 0) = lateral;
  k(1, 1) = lateral;
  k(2, 2) = Scalar(2) * p.h * p.h;
  k(3, 3) = tilt;
  k(4, 4) = tilt;
  k(5, 5) = yaw;
  k(0, 4) = k(4, 0) = coupling;
  k(1, 3) = k(3, 1) = -coupling;
  return Scalar(3) * p.k11 / l2 * k;
}

template <typename Scalar>
struct PlanarElimination {
  Matrix3<Scalar> stiffness;
  // dphi = passive_map . (dx, dy)
  Eigen::Matrix<Scalar, 1, 2> passive_map;
};

// Planar link with a passive rotation about z at the loaded end.
template <typename Scalar>
PlanarElimination<Scalar> motivating_2d(const Matrix3<Scalar>& k) {
  const Scalar k33 = k(2, 2);
  if (!(k33 > Scalar(0))) throw ModelError("motivating_2d: K33 must be positive");
  PlanarElimination<Scalar> out;
  out.stiffness.setZero();
  for (int j = 0; j < 2; ++j) {
    for (int c = 0; c < 2; ++c) out.stiffness(j, c) = k(j, c) - k(j, 2) * k(2, c) / k33;
  }
  out.passive_map << -k(0, 2) / k33, -k(1, 2) / k33;
  return out;
}

}  // namespace vjm
