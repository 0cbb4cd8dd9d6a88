#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vjm/errors.hpp"
#include "vjm/spatial.hpp"
#include "vjm/spectral.hpp"

namespace vjm {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix6X = Eigen::Matrix<Scalar, 6, Eigen::Dynamic>;
template <typename Scalar>
using MatrixX6 = Eigen::Matrix<Scalar, Eigen::Dynamic, 6>;

// Elementary motion of one spring coordinate, along or about a local axis.
enum class Motion { tx, ty, tz, rx, ry, rz };

inline std::string_view to_string(Motion m) {
  constexpr std::array<std::string_view, 6> names{"tx", "ty", "tz", "rx", "ry", "rz"};
  return names[static_cast<std::size_t>(m)];
}

inline std::optional<Motion> parse_motion(std::string_view s) {
  for (int i = 0; i < 6; ++i) {
    const auto m = static_cast<Motion>(i);
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

inline bool is_translation(Motion m) { return static_cast<int>(m) < 3; }
inline int motion_axis(Motion m) { return static_cast<int>(m) % 3; }

template <typename Scalar>
struct RigidLink {
  Transform<Scalar> offset;
};

// Lumped elastic element. Coordinate j moves the frame by axes[j] (applied in
// order), and stiffness is the d x d matrix over those coordinates.
template <typename Scalar>
struct VirtualSpring {
  std::vector<Motion> axes;
  MatrixX<Scalar> stiffness;

  static VirtualSpring full(const Matrix6<Scalar>& k) {
    return {{Motion::tx, Motion::ty, Motion::tz, Motion::rx, Motion::ry, Motion::rz}, k};
  }
};

template <typename Scalar>
struct PassiveRevolute {
  Vector3<Scalar> axis;
};

template <typename Scalar>
struct PassivePrismatic {
  Vector3<Scalar> axis;
};

template <typename Scalar>
using ChainElement = std::variant<RigidLink<Scalar>, VirtualSpring<Scalar>,
                                  PassiveRevolute<Scalar>, PassivePrismatic<Scalar>>;

template <typename Scalar>
constexpr Scalar kUnitAxisTolerance = Scalar(1e-9);

template <typename Scalar>
struct ChainModel {
  Transform<Scalar> base;
  std::vector<ChainElement<Scalar>> elements;

  int passive_count() const {
    return static_cast<int>(std::count_if(elements.begin(), elements.end(), [](const auto& e) {
      return std::holds_alternative<PassiveRevolute<Scalar>>(e) ||
             std::holds_alternative<PassivePrismatic<Scalar>>(e);
    }));
  }

  int spring_dof() const {
    int n = 0;
    for (const auto& e : elements) {
      if (const auto* s = std::get_if<VirtualSpring<Scalar>>(&e)) n += static_cast<int>(s->axes.size());
    }
    return n;
  }

  // Throws ModelError naming the first offending element.
  void validate() const {
    if (!is_rotation(base.rotation)) throw ModelError("chain base rotation is not orthonormal");
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const std::string where = "element " + std::to_string(i) + ": ";
      std::visit(
          [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, RigidLink<Scalar>>) {
              if (!is_rotation(e.offset.rotation)) throw ModelError(where + "link rotation is not orthonormal");
            } else if constexpr (std::is_same_v<T, VirtualSpring<Scalar>>) {
              validate_spring(e, where);
            } else {
              if (!e.axis.allFinite() || std::abs(e.axis.norm() - Scalar(1)) > kUnitAxisTolerance<Scalar>) {
                throw ModelError(where + "joint axis is not a unit vector");
              }
            }
          },
          elements[i]);
    }
  }

 private:
  static void validate_spring(const VirtualSpring<Scalar>& s, const std::string& where) {
    const auto d = static_cast<Eigen::Index>(s.axes.size());
    if (d < 1 || d > 6) throw ModelError(where + "spring must have 1..6 coordinates");
    std::array<bool, 6> seen{};
    for (Motion m : s.axes) {
      if (seen[static_cast<std::size_t>(m)]) throw ModelError(where + "spring repeats an axis");
      seen[static_cast<std::size_t>(m)] = true;
    }
    if (s.stiffness.rows() != d || s.stiffness.cols() != d) {
      throw ModelError(where + "spring stiffness size does not match its axis list");
    }
    const Scalar scale = s.stiffness.cwiseAbs().maxCoeff();
    if (!s.stiffness.allFinite() || (s.stiffness - s.stiffness.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-9) * scale) {
      throw ModelError(where + "spring stiffness is not symmetric");
    }
    if (Eigen::LLT<MatrixX<Scalar>>(s.stiffness).info() != Eigen::Success) {
      throw ModelError(where + "spring stiffness is not positive-definite");
    }
  }
};

template <typename Scalar>
struct ChainConfig {
  VectorX<Scalar> q;
  VectorX<Scalar> theta;

  static ChainConfig zero(const ChainModel<Scalar>& model) {
    return {VectorX<Scalar>::Zero(model.passive_count()), VectorX<Scalar>::Zero(model.spring_dof())};
  }
};

template <typename Scalar>
struct JacobianSet {
  Matrix6X<Scalar> spring;   // J_theta, 6 x n_theta
  Matrix6X<Scalar> passive;  // J_q, 6 x n_q
};

namespace detail {

template <typename Scalar>
Transform<Scalar> elementary(Motion m, Scalar value) {
  Vector3<Scalar> axis = Vector3<Scalar>::Zero();
  axis(motion_axis(m)) = Scalar(1);
  if (is_translation(m)) return Transform<Scalar>::from_translation(axis * value);
  return Transform<Scalar>::from_rotation(axis_rotation<Scalar>(axis, value));
}

template <typename Scalar>
void check_config(const ChainModel<Scalar>& model, const ChainConfig<Scalar>& cfg) {
  if (cfg.q.size() != model.passive_count() || cfg.theta.size() != model.spring_dof()) {
    throw ModelError("chain configuration size mismatch: expected " + std::to_string(model.passive_count()) +
                     " passive and " + std::to_string(model.spring_dof()) + " spring coordinates");
  }
}

// Walks the chain, calling on_axis(pose, axis_local, is_translation, is_passive)
// for every scalar coordinate before its motion is applied.
template <typename Scalar, typename OnAxis>
Transform<Scalar> walk(const ChainModel<Scalar>& model, const ChainConfig<Scalar>& cfg, OnAxis&& on_axis) {
  Transform<Scalar> pose = model.base;
  Eigen::Index iq = 0;
  Eigen::Index it = 0;
  for (const auto& element : model.elements) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, RigidLink<Scalar>>) {
            pose = compose(pose, e.offset);
          } else if constexpr (std::is_same_v<T, VirtualSpring<Scalar>>) {
            for (Motion m : e.axes) {
              Vector3<Scalar> axis = Vector3<Scalar>::Zero();
              axis(motion_axis(m)) = Scalar(1);
              on_axis(pose, axis, is_translation(m), false);
              pose = compose(pose, elementary<Scalar>(m, cfg.theta(it++)));
            }
          } else if constexpr (std::is_same_v<T, PassiveRevolute<Scalar>>) {
            on_axis(pose, e.axis, false, true);
            pose = compose(pose, Transform<Scalar>::from_rotation(axis_rotation<Scalar>(e.axis, cfg.q(iq++))));
          } else {
            on_axis(pose, e.axis, true, true);
            pose = compose(pose, Transform<Scalar>::from_translation(e.axis.normalized() * cfg.q(iq++)));
          }
        },
        element);
  }
  return pose;
}

}  // namespace detail

template <typename Scalar>
Transform<Scalar> forward_kinematics(const ChainModel<Scalar>& model, const ChainConfig<Scalar>& cfg) {
  detail::check_config(model, cfg);
  return detail::walk(model, cfg, [](const auto&, const auto&, bool, bool) {});
}

// Columns are expressed in the base-world axes about the end-frame origin:
// translational [e; 0], rotational [e x (p_end - p_joint); e].
template <typename Scalar>
JacobianSet<Scalar> jacobians(const ChainModel<Scalar>& model, const ChainConfig<Scalar>& cfg) {
  const Vector3<Scalar> end = forward_kinematics(model, cfg).translation;
  JacobianSet<Scalar> j{Matrix6X<Scalar>(6, model.spring_dof()), Matrix6X<Scalar>(6, model.passive_count())};
  Eigen::Index iq = 0;
  Eigen::Index it = 0;
  detail::walk(model, cfg, [&](const Transform<Scalar>& pose, const Vector3<Scalar>& axis, bool translation, bool passive) {
    const Vector3<Scalar> e = pose.rotation * axis.normalized();
    Vector6<Scalar> column;
    if (translation) {
      column << e, Vector3<Scalar>::Zero();
    } else {
      column << e.cross(end - pose.translation), e;
    }
    if (passive) {
      j.passive.col(iq++) = column;
    } else {
      j.spring.col(it++) = column;
    }
  });
  return j;
}

template <typename Scalar>
MatrixX<Scalar> aggregate_spring_stiffness(const ChainModel<Scalar>& model) {
  const int n = model.spring_dof();
  MatrixX<Scalar> k = MatrixX<Scalar>::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& element : model.elements) {
    if (const auto* s = std::get_if<VirtualSpring<Scalar>>(&element)) {
      const auto d = s->stiffness.rows();
      k.block(offset, offset, d, d) = s->stiffness;
      offset += d;
    }
  }
  return k;
}

// Stiffness of the chain with every passive joint locked:
// (J_theta K_theta^-1 J_theta^T)^-1.
template <typename Scalar>
Matrix6<Scalar> base_stiffness(const Eigen::Ref<const Matrix6X<Scalar>>& j_theta,
                               const Eigen::Ref<const MatrixX<Scalar>>& k_theta) {
  if (k_theta.rows() != j_theta.cols() || k_theta.cols() != j_theta.cols()) {
    throw ModelError("base_stiffness: spring stiffness size does not match the Jacobian");
  }
  const int rank = matrix_rank(j_theta);
  if (rank < 6) {
    throw SingularChainError("chain springs constrain only " + std::to_string(rank) +
                                 " of 6 end-frame directions (rank(J_theta) = " + std::to_string(rank) + ")",
                             rank);
  }
  const Eigen::LDLT<MatrixX<Scalar>> springs(k_theta);
  const Matrix6<Scalar> compliance = j_theta * springs.solve(j_theta.transpose());
  const Eigen::LLT<Matrix6<Scalar>> llt(symmetrize(compliance));
  if (llt.info() != Eigen::Success) {
    throw SingularChainError("chain compliance is not positive-definite", rank);
  }
  return symmetrize(llt.solve(Matrix6<Scalar>::Identity()));
}

namespace detail {

// Index of the first column that is linearly dependent on the preceding ones.
template <typename Scalar>
int first_dependent_column(const Eigen::Ref<const Matrix6X<Scalar>>& j_q) {
  for (Eigen::Index i = 0; i < j_q.cols(); ++i) {
    if (matrix_rank(j_q.leftCols(i + 1)) < i + 1) return static_cast<int>(i);
  }
  return -1;
}

template <typename Scalar>
void require_independent_columns(const Eigen::Ref<const Matrix6X<Scalar>>& j_q) {
  const int bad = first_dependent_column<Scalar>(j_q);
  if (bad >= 0) {
    throw RedundantJointError("passive joint " + std::to_string(bad) +
                                  " is redundant: its Jacobian column depends on the preceding ones",
                              bad);
  }
}

}  // namespace detail

template <typename Scalar>
constexpr Scalar kPivotTolerance = Scalar(1e-12);

template <typename Scalar>
struct KktResult {
  Matrix6<Scalar> stiffness;
  MatrixX6<Scalar> passive_sensitivity;  // delta_q = passive_sensitivity * delta_t
};

// Inverts [[J_theta K_theta^-1 J_theta^T, J_q], [J_q^T, 0]] and keeps the
// blocks acting on [delta_t; 0].
template <typename Scalar>
KktResult<Scalar> kkt_stiffness(const Eigen::Ref<const Matrix6X<Scalar>>& j_theta,
                                const Eigen::Ref<const MatrixX<Scalar>>& k_theta,
                                const Eigen::Ref<const Matrix6X<Scalar>>& j_q) {
  const Matrix6<Scalar> k0 = base_stiffness<Scalar>(j_theta, k_theta);
  const Eigen::Index nq = j_q.cols();
  if (nq == 0) return {k0, MatrixX6<Scalar>(0, 6)};
  detail::require_independent_columns<Scalar>(j_q);

  const Eigen::Index n = 6 + nq;
  MatrixX<Scalar> saddle = MatrixX<Scalar>::Zero(n, n);
  const Eigen::LDLT<MatrixX<Scalar>> springs(k_theta);
  saddle.topLeftCorner(6, 6) = j_theta * springs.solve(j_theta.transpose());
  saddle.topRightCorner(6, nq) = j_q;
  saddle.bottomLeftCorner(nq, 6) = j_q.transpose();

  const Eigen::PartialPivLU<MatrixX<Scalar>> lu(saddle);
  const VectorX<Scalar> pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.minCoeff() < kPivotTolerance<Scalar> * pivots.maxCoeff()) {
    throw RedundantJointError("saddle-point matrix is singular: passive joints are redundant", -1);
  }
  const MatrixX<Scalar> inverse = lu.inverse();
  return {symmetrize(inverse.topLeftCorner(6, 6)), inverse.bottomLeftCorner(nq, 6)};
}

namespace detail {

// Minimal elastic energy for a prescribed end twist when the passive
// coordinates are free. Minimised over delta_q by conjugate gradients.
template <typename Scalar>
Scalar minimal_energy(const Matrix6<Scalar>& k0, const Eigen::Ref<const Matrix6X<Scalar>>& j_q,
                      const Vector6<Scalar>& twist) {
  const auto energy = [&](const VectorX<Scalar>& dq) {
    const Vector6<Scalar> r = twist - j_q * dq;
    return Scalar(0.5) * r.dot(k0 * r);
  };
  const Eigen::Index nq = j_q.cols();
  VectorX<Scalar> dq = VectorX<Scalar>::Zero(nq);
  if (nq == 0) return energy(dq);

  const auto gradient = [&](const VectorX<Scalar>& x) -> VectorX<Scalar> {
    return -(j_q.transpose() * (k0 * (twist - j_q * x)));
  };
  VectorX<Scalar> g = gradient(dq);
  VectorX<Scalar> d = -g;
  const Scalar g0 = g.norm();
  for (Eigen::Index iter = 0; iter < 20 * nq && g.norm() > Scalar(1e-15) * g0; ++iter) {
    const VectorX<Scalar> hd = j_q.transpose() * (k0 * (j_q * d));
    const Scalar curvature = d.dot(hd);
    if (!(curvature > Scalar(0))) break;
    const Scalar step = -g.dot(d) / curvature;
    dq += step * d;
    const VectorX<Scalar> g_next = gradient(dq);
    const Scalar beta = std::max(Scalar(0), g_next.dot(g_next - g) / g.dot(g));
    d = -g_next + beta * d;
    g = g_next;
  }
  return energy(dq);
}

}  // namespace detail

// Brute-force route: minimise the energy over the passive coordinates for a
// set of probe twists and read K_c off central second differences.
template <typename Scalar>
Matrix6<Scalar> energy_oracle_stiffness(const Eigen::Ref<const Matrix6X<Scalar>>& j_theta,
                                        const Eigen::Ref<const MatrixX<Scalar>>& k_theta,
                                        const Eigen::Ref<const Matrix6X<Scalar>>& j_q) {
  const Matrix6<Scalar> k0 = base_stiffness<Scalar>(j_theta, k_theta);
  detail::require_independent_columns<Scalar>(j_q);
  {
    // Same singularity contract as the saddle-point route.
    const MatrixX<Scalar> middle = j_q.transpose() * k0 * j_q;
    if (j_q.cols() > 0 && matrix_rank(middle) < j_q.cols()) {
      throw RedundantJointError("passive joints are redundant with respect to the chain stiffness", -1);
    }
  }
  const Scalar h(1);
  const auto e = [&](const Vector6<Scalar>& t) { return detail::minimal_energy<Scalar>(k0, j_q, t); };
  Matrix6<Scalar> k;
  for (int a = 0; a < 6; ++a) {
    for (int b = a; b < 6; ++b) {
      const Vector6<Scalar> ua = h * Vector6<Scalar>::Unit(a);
      const Vector6<Scalar> ub = h * Vector6<Scalar>::Unit(b);
      const Scalar value = (e(ua + ub) - e(ua - ub) - e(ub - ua) + e(-ua - ub)) / (Scalar(4) * h * h);
      k(a, b) = value;
      k(b, a) = value;
    }
  }
  return k;
}

}  // namespace vjm
