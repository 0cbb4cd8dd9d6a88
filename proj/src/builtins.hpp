#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "model_file.hpp"
#include "vjm/models.hpp"

namespace vjm::cli {

// Flag-controlled parameters shared by the built-in models (SI units).
struct BuiltinParams {
  double r = 0.2;       // platform attachment radius
  double R = 0.5;       // base attachment radius
  double h = 1.0;       // platform height
  double k11 = 1e6;     // axial leg or beam stiffness
  double k = 1.0;       // isotropic stiffness
  double length = 1.0;  // single-beam length
};

struct Problem {
  std::string name;
  ModelFile model;
  // Set for the planar demo: the 3x3 (x, y, phi) stiffness whose passive
  // rotation is eliminated in closed form.
  std::optional<Eigen::Matrix3d> planar;
};

const std::vector<std::string_view>& builtin_names();

// Six legs, each a beam between a universal joint at the base and a
// spherical joint at the platform, written as a chain along local x.
ModelFile stewart_model(const StewartParams<double>& p);

Eigen::Matrix3d demo_2d_stiffness();

std::optional<Problem> builtin(std::string_view name, const BuiltinParams& params);

// Built-in name first, then a model file path.
Problem resolve_problem(const std::string& name_or_path, const BuiltinParams& params);

}  // namespace vjm::cli
