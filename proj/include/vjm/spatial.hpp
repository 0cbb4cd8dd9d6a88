#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "vjm/errors.hpp"

namespace vjm {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

// Twists and wrenches are stacked translational part first:
// [dx dy dz rx ry rz] and [fx fy fz mx my mz].
template <typename Scalar>
struct Wrench {
  Vector3<Scalar> force = Vector3<Scalar>::Zero();
  Vector3<Scalar> torque = Vector3<Scalar>::Zero();

  static Wrench from_vector(const Vector6<Scalar>& w) {
    return {w.template head<3>(), w.template tail<3>()};
  }
  Vector6<Scalar> vector() const {
    Vector6<Scalar> w;
    w << force, torque;
    return w;
  }
};

template <typename Scalar>
struct Twist {
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();
  Vector3<Scalar> rotation = Vector3<Scalar>::Zero();

  static Twist from_vector(const Vector6<Scalar>& t) {
    return {t.template head<3>(), t.template tail<3>()};
  }
  Vector6<Scalar> vector() const {
    Vector6<Scalar> t;
    t << translation, rotation;
    return t;
  }
};

template <typename Scalar>
struct Transform {
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();

  static Transform identity() { return {}; }
  static Transform from_translation(const Vector3<Scalar>& t) {
    return {Matrix3<Scalar>::Identity(), t};
  }
  static Transform from_rotation(const Matrix3<Scalar>& r) {
    return {r, Vector3<Scalar>::Zero()};
  }

  Vector3<Scalar> apply(const Vector3<Scalar>& p) const { return rotation * p + translation; }
};

template <typename Scalar>
constexpr Scalar kOrthonormalityTolerance = Scalar(1e-9);

// Sign of the lever term in the reference-point transport
//   K' = S K S^T,  S = [[I, 0], [kLeverSign * (v x), I]],
// with v pointing from the point where K is expressed to the new reference
// point. A force f acting at the old point produces the moment (-v) x f about
// the new point, which fixes the sign to -1. The rigid-extension test in
// test_spatial.cpp checks this against the saddle-point solution.
inline constexpr int kLeverSign = -1;

template <typename Derived>
Matrix3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  Matrix3<Scalar> s;
  s << Scalar(0), -v(2), v(1),
       v(2), Scalar(0), -v(0),
       -v(1), v(0), Scalar(0);
  return s;
}

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& r,
                 typename Derived::Scalar tol = kOrthonormalityTolerance<typename Derived::Scalar>) {
  using Scalar = typename Derived::Scalar;
  if (r.rows() != 3 || r.cols() != 3 || !r.allFinite()) return false;
  const Matrix3<Scalar> gram = r * r.transpose();
  return (gram - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(r.determinant() - Scalar(1)) <= tol;
}

template <typename Derived>
typename Derived::PlainObject symmetrize(const Eigen::MatrixBase<Derived>& k) {
  return (k + k.transpose()) / typename Derived::Scalar(2);
}

template <typename Scalar>
Matrix6<Scalar> block_diagonal(const Matrix3<Scalar>& r) {
  Matrix6<Scalar> b = Matrix6<Scalar>::Zero();
  b.template topLeftCorner<3, 3>() = r;
  b.template bottomRightCorner<3, 3>() = r;
  return b;
}

// Maps a stiffness from a local frame into the frame in which r expresses
// the local axes: blockdiag(R,R) K blockdiag(R,R)^T.
template <typename Scalar>
Matrix6<Scalar> rotate_stiffness(const Matrix6<Scalar>& k, const Matrix3<Scalar>& r) {
  if (!is_rotation(r)) {
    throw ModelError("rotate_stiffness: rotation matrix is not orthonormal with det +1");
  }
  const Matrix6<Scalar> b = block_diagonal<Scalar>(r);
  return symmetrize(b * k * b.transpose());
}

template <typename Scalar>
Matrix6<Scalar> lever_transport(const Vector3<Scalar>& v) {
  Matrix6<Scalar> s = Matrix6<Scalar>::Identity();
  s.template bottomLeftCorner<3, 3>() = Scalar(kLeverSign) * skew(v);
  return s;
}

// Re-expresses K about a reference point displaced by v, assuming a rigid
// connection between the two points and parallel axes.
template <typename Scalar>
Matrix6<Scalar> shift_stiffness(const Matrix6<Scalar>& k, const Vector3<Scalar>& v) {
  const Matrix6<Scalar> s = lever_transport(v);
  return symmetrize(s * k * s.transpose());
}

template <typename Scalar>
Transform<Scalar> compose(const Transform<Scalar>& a, const Transform<Scalar>& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

template <typename Scalar>
Matrix3<Scalar> axis_rotation(const Vector3<Scalar>& axis, Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, axis.normalized()).toRotationMatrix();
}

// Completes a unit vector to a right-handed orthonormal frame whose first
// column is the vector itself.
template <typename Scalar>
Matrix3<Scalar> frame_from_x_axis(const Vector3<Scalar>& x_axis) {
  const Vector3<Scalar> x = x_axis.normalized();
  Eigen::Index smallest;
  x.cwiseAbs().minCoeff(&smallest);
  Vector3<Scalar> helper = Vector3<Scalar>::Zero();
  helper(smallest) = Scalar(1);
  const Vector3<Scalar> y = x.cross(helper).normalized();
  Matrix3<Scalar> r;
  r << x, y, x.cross(y);
  return r;
}

}  // namespace vjm
