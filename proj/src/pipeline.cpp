#include "pipeline.hpp"

#include <string>

#include "vjm/assembly.hpp"
#include "vjm/chain.hpp"
#include "vjm/elimination.hpp"

namespace vjm::cli {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

std::string_view to_string(Route route) {
  switch (route) {
    case Route::full: return "full";
    case Route::recursive: return "recursive";
    case Route::kkt: return "kkt";
    case Route::energy: return "energy";
  }
  return "unknown";
}

Matrix6d leg_stiffness(const LegRecord& leg, Route route, std::vector<double>* mu) {
  const ChainModel<double> chain = chain_of(leg);
  chain.validate();
  const auto j = jacobians(chain, config_of(leg));
  const MatrixX<double> k_theta = aggregate_spring_stiffness(chain);

  switch (route) {
    case Route::full:
      return eliminate_full<double>(base_stiffness<double>(j.spring, k_theta), j.passive);
    case Route::recursive: {
      const Matrix6d k0 = base_stiffness<double>(j.spring, k_theta);
      if (j.passive.cols() == 0) return k0;
      const auto report = eliminate_recursive(k0, PassiveJacobian<double>::from_matrix(j.passive));
      if (mu) *mu = report.mu_values;
      return report.result;
    }
    case Route::kkt:
      return kkt_stiffness<double>(j.spring, k_theta, j.passive).stiffness;
    case Route::energy:
      return energy_oracle_stiffness<double>(j.spring, k_theta, j.passive);
  }
  throw ModelError("unknown elimination route");
}

StiffnessResult model_stiffness(const ModelFile& model, Route route) {
  StiffnessResult out;
  ManipulatorModel<double> assembly;
  for (std::size_t i = 0; i < model.legs.size(); ++i) {
    const auto& record = model.legs[i];
    const std::string where = "legs[" + std::to_string(i) + "]: ";
    LegAssembly<double> leg;
    std::vector<double> mu;
    try {
      leg.stiffness = leg_stiffness(record, route, &mu);
    } catch (const RedundantJointError& e) {
      throw RedundantJointError(where + e.what(), e.column());
    } catch (const SingularChainError& e) {
      throw SingularChainError(where + e.what(), e.rank());
    } catch (const ModelError& e) {
      throw ModelError(where + e.what());
    }
    leg.orientation = record.orientation_R.value_or(Eigen::Matrix3d::Identity());
    leg.lever = record.lever_v;
    assembly.legs.push_back(leg_to_global(leg));
    out.mu.push_back(std::move(mu));
  }
  out.stiffness = aggregate(assembly);
  return out;
}

}  // namespace vjm::cli
