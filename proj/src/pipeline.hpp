#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "model_file.hpp"

namespace vjm::cli {

// Four independent ways to remove the passive coordinates of each leg.
enum class Route { full, recursive, kkt, energy };

inline constexpr Route kAllRoutes[] = {Route::full, Route::recursive, Route::kkt, Route::energy};

std::string_view to_string(Route route);

struct StiffnessResult {
  Eigen::Matrix<double, 6, 6> stiffness;
  std::vector<std::vector<double>> mu;  // per leg, filled by Route::recursive
};

// Stiffness of one leg about its chain end, in the chain's world axes.
Eigen::Matrix<double, 6, 6> leg_stiffness(const LegRecord& leg, Route route, std::vector<double>* mu = nullptr);

// Legs rotated by orientation_R, shifted by lever_v, then summed. Errors
// raised inside a leg are rethrown with "legs[i]" prepended.
StiffnessResult model_stiffness(const ModelFile& model, Route route);

}  // namespace vjm::cli
