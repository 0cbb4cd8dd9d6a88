#include "builtins.hpp"

#include <filesystem>

namespace vjm::cli {

namespace {

ElementRecord revolute(const Eigen::Vector3d& axis) { return {PassiveRevolute<double>{axis}, std::nullopt}; }

ElementRecord spring(std::vector<Motion> axes, const Eigen::MatrixXd& k) {
  return {VirtualSpring<double>{std::move(axes), k}, std::nullopt};
}

ElementRecord full_spring(const Eigen::Matrix<double, 6, 6>& k) {
  return {VirtualSpring<double>::full(k), std::nullopt};
}

ElementRecord link_along_x(double length) {
  return {RigidLink<double>{Transform<double>::from_translation({length, 0.0, 0.0})}, std::nullopt};
}

LegRecord bare_leg() {
  LegRecord leg;
  leg.base = Transform<double>::identity();
  return leg;
}

ModelFile isotropic_model(double k) {
  LegRecord leg = bare_leg();
  leg.elements.push_back(full_spring(k * Eigen::Matrix<double, 6, 6>::Identity()));
  return {"platform", {leg}};
}

ModelFile single_beam_model(double k11, double length) {
  LegRecord leg = bare_leg();
  leg.elements.push_back(link_along_x(length));
  leg.elements.push_back(full_spring(beam_stiffness(BeamParams<double>::circular_rod(k11, length))));
  return {"platform", {leg}};
}

// The planar stiffness sits in the (x, y, rz) coordinates; the out-of-plane
// coordinates get unit springs so the chain is stiff in all six directions.
ModelFile demo_2d_model(const Eigen::Matrix3d& k3) {
  LegRecord leg = bare_leg();
  leg.elements.push_back(spring({Motion::tx, Motion::ty, Motion::rz}, k3));
  leg.elements.push_back(spring({Motion::tz, Motion::rx, Motion::ry}, Eigen::Matrix3d::Identity()));
  leg.elements.push_back(revolute(Eigen::Vector3d::UnitZ()));
  return {"platform", {leg}};
}

}  // namespace

const std::vector<std::string_view>& builtin_names() {
  static const std::vector<std::string_view> names{"stewart-a", "stewart-b", "demo-2d", "single-beam", "isotropic"};
  return names;
}

ModelFile stewart_model(const StewartParams<double>& p) {
  ModelFile model{"platform", {}};
  for (int i = 0; i < 6; ++i) {
    const auto legv = stewart_leg_vectors(p, i);
    const double length = legv.u.norm();
    LegRecord leg = bare_leg();
    leg.elements.push_back(revolute(Eigen::Vector3d::UnitY()));
    leg.elements.push_back(revolute(Eigen::Vector3d::UnitZ()));
    leg.elements.push_back(link_along_x(length));
    leg.elements.push_back(full_spring(beam_stiffness(BeamParams<double>::circular_rod(p.k11, length))));
    leg.elements.push_back(revolute(Eigen::Vector3d::UnitX()));
    leg.elements.push_back(revolute(Eigen::Vector3d::UnitY()));
    leg.elements.push_back(revolute(Eigen::Vector3d::UnitZ()));
    leg.lever_v = legv.v;
    leg.orientation_R = frame_from_x_axis<double>(legv.u);
    model.legs.push_back(std::move(leg));
  }
  return model;
}

Eigen::Matrix3d demo_2d_stiffness() {
  Eigen::Matrix3d k;
  k << 4, 1, 1,
       1, 3, 1,
       1, 1, 2;
  return k;
}

std::optional<Problem> builtin(std::string_view name, const BuiltinParams& params) {
  if (name == "stewart-a" || name == "stewart-b") {
    const StewartParams<double> p{params.R, params.r, params.h, params.k11,
                                  name == "stewart-a" ? StewartCase::A : StewartCase::B};
    return Problem{std::string(name), stewart_model(p), std::nullopt};
  }
  if (name == "demo-2d") {
    const Eigen::Matrix3d k3 = demo_2d_stiffness();
    return Problem{std::string(name), demo_2d_model(k3), k3};
  }
  if (name == "single-beam") return Problem{std::string(name), single_beam_model(params.k11, params.length), std::nullopt};
  if (name == "isotropic") {
    if (!(params.k > 0.0)) throw SchemaError("k", "isotropic stiffness must be positive");
    return Problem{std::string(name), isotropic_model(params.k), std::nullopt};
  }
  return std::nullopt;
}

Problem resolve_problem(const std::string& name_or_path, const BuiltinParams& params) {
  try {
    if (auto p = builtin(name_or_path, params)) return *p;
  } catch (const ModelError& e) {
    throw SchemaError("model", e.what());
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw SchemaError("model", "'" + name_or_path + "' is neither a built-in model nor an existing file");
  }
  return Problem{name_or_path, load_model(name_or_path), std::nullopt};
}

}  // namespace vjm::cli
