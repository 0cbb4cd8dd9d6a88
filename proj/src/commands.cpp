#include "commands.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "pipeline.hpp"
#include "vjm/assembly.hpp"
#include "vjm/errors.hpp"
#include "vjm/models.hpp"
#include "vjm/spectral.hpp"

namespace vjm::cli {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

namespace {

double rank_tolerance(const Options& opts) {
  const double tol = opts.tol.value_or(kRankTolerance<double>);
  if (!(tol > 0.0) || !std::isfinite(tol)) throw SchemaError("tol", "must be a positive number");
  return tol;
}

void add_spectrum(Report& report, const Eigen::MatrixXd& k, double tol) {
  const auto spectrum = spectral_report(k, tol);
  report.add("eigenvalues", Eigen::VectorXd(spectrum.eigenvalues));
  report.add("rank", spectrum.rank);
  report.add("null_space", Eigen::MatrixXd(spectrum.null_space.transpose()));
}

Vector6d parse_wrench(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  for (std::string field; std::getline(in, field, ',');) {
    char* end = nullptr;
    const double x = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0' || !std::isfinite(x)) {
      throw SchemaError("wrench", "expected six comma-separated reals fx,fy,fz,mx,my,mz");
    }
    values.push_back(x);
  }
  if (values.size() != 6) throw SchemaError("wrench", "expected six comma-separated reals fx,fy,fz,mx,my,mz");
  return Vector6d(values.data());
}

Eigen::Matrix3d planar_block(const Matrix6d& k) {
  constexpr std::array<int, 3> idx{0, 1, 5};
  Eigen::Matrix3d out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out(a, b) = k(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

struct Comparison {
  std::string pair;
  double delta;
  double tolerance;
};

}  // namespace

std::string describe_direction(const Vector6d& direction) {
  static const std::array<const char*, 6> names{"translation along x", "translation along y", "translation along z",
                                                "rotation about x",    "rotation about y",    "rotation about z"};
  Eigen::Index i = 0;
  direction.cwiseAbs().maxCoeff(&i);
  return names[static_cast<std::size_t>(i)];
}

void cmd_stiff(const Options& opts, std::ostream& out) {
  const double tol = rank_tolerance(opts);
  const Problem problem = resolve_problem(opts.model, opts.params);
  Report report;
  report.add("model", problem.name);

  if (problem.planar) {
    const auto planar = motivating_2d<double>(*problem.planar);
    report.add("stiffness", Eigen::MatrixXd(planar.stiffness));
    report.add("passive_map", Eigen::VectorXd(planar.passive_map.transpose()));
    add_spectrum(report, planar.stiffness, tol);
  } else {
    const auto result = model_stiffness(problem.model, Route::recursive);
    report.add("stiffness", Eigen::MatrixXd(result.stiffness));
    add_spectrum(report, result.stiffness, tol);
    for (std::size_t i = 0; i < result.mu.size(); ++i) {
      const auto& mu = result.mu[i];
      report.add("mu leg " + std::to_string(i), Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                                                    mu.data(), static_cast<Eigen::Index>(mu.size()))));
    }
  }
  out << report.render(opts.format);
}

void cmd_deflect(const Options& opts, const std::string& wrench, std::ostream& out) {
  const double tol = rank_tolerance(opts);
  const Vector6d f = parse_wrench(wrench);
  const Problem problem = resolve_problem(opts.model, opts.params);
  if (problem.planar) throw SchemaError("model", "deflect needs a spatial model; '" + problem.name + "' is planar");

  const Matrix6d k = model_stiffness(problem.model, Route::recursive).stiffness;
  const auto sol = solve_deflection<double>(k, Wrench<double>::from_vector(f), tol);

  Report report;
  report.add("model", problem.name);
  report.add("wrench", Eigen::VectorXd(f));
  report.add("twist", Eigen::VectorXd(sol.twist.vector()));
  report.add("residual", sol.residual);
  report.add("unresisted", Eigen::VectorXd(sol.unresisted));
  report.add("null_space", Eigen::MatrixXd(sol.null_space.transpose()));
  out << report.render(opts.format);

  if (sol.unresisted.norm() > kUnresistedTolerance<double> * f.norm()) {
    const Vector6d dir = sol.unresisted.normalized();
    std::array<double, 6> d{};
    for (int i = 0; i < 6; ++i) d[static_cast<std::size_t>(i)] = dir(i);
    std::string components;
    for (int i = 0; i < 6; ++i) components += (i ? "," : "") + format_number(dir(i));
    throw UnresistedWrenchError("wrench is not resisted: free motion is " + describe_direction(dir) +
                                    " (direction " + components + ")",
                                d);
  }
}

void cmd_analyze(const Options& opts, const std::string& matrix_path, std::ostream& out) {
  const double tol = rank_tolerance(opts);
  std::ifstream in(matrix_path);
  if (!in) throw SchemaError("matrix", "cannot open '" + matrix_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const Eigen::MatrixXd k = parse_matrix(text.str());
  if (k.rows() != k.cols()) throw SchemaError("matrix", "must be square");
  if (!k.allFinite()) throw SchemaError("matrix", "entries must be finite");
  if ((k - k.transpose()).norm() > 1e-9 * k.norm()) throw SchemaError("matrix", "must be symmetric");

  Report report;
  report.add("matrix", k);
  add_spectrum(report, k, tol);
  out << report.render(opts.format);
}

void cmd_validate(const Options& opts, std::ostream& out) {
  const Problem problem = resolve_problem(opts.model, opts.params);

  std::vector<std::pair<Route, Matrix6d>> results;
  std::vector<std::pair<Route, std::string>> refused;
  std::exception_ptr first_refusal;
  for (Route route : kAllRoutes) {
    try {
      results.emplace_back(route, model_stiffness(problem.model, route).stiffness);
    } catch (const RedundantJointError& e) {
      refused.emplace_back(route, e.what());
      if (!first_refusal) first_refusal = std::current_exception();
    } catch (const SingularChainError& e) {
      refused.emplace_back(route, e.what());
      if (!first_refusal) first_refusal = std::current_exception();
    }
  }
  if (!refused.empty()) {
    if (results.empty()) std::rethrow_exception(first_refusal);
    std::string which;
    for (const auto& [route, what] : refused) which += std::string(which.empty() ? "" : ", ") + std::string(to_string(route));
    throw ValidationBreach("routes disagree on redundancy: " + which + " refused the model");
  }

  std::vector<Comparison> comparisons;
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      const bool energy = results[a].first == Route::energy || results[b].first == Route::energy;
      comparisons.push_back({std::string(to_string(results[a].first)) + "/" + std::string(to_string(results[b].first)),
                             relative_difference(results[a].second, results[b].second),
                             energy ? kEnergyRouteTolerance : kExactRouteTolerance});
    }
  }
  if (problem.planar) {
    const Eigen::Matrix3d analytic = motivating_2d<double>(*problem.planar).stiffness;
    for (const auto& [route, k] : results) {
      comparisons.push_back({"planar/" + std::string(to_string(route)), relative_difference(analytic, planar_block(k)),
                             kPlanarTolerance});
    }
  }

  Table table{{"pair", "delta", "tolerance", "status"}, {}};
  const Comparison* worst = nullptr;
  for (const auto& c : comparisons) {
    const bool ok = c.delta <= c.tolerance;
    table.rows.push_back({c.pair, format_number(c.delta), format_number(c.tolerance), ok ? "ok" : "BREACH"});
    if (!worst || c.delta / c.tolerance > worst->delta / worst->tolerance) worst = &c;
  }

  Report report;
  report.add("model", problem.name);
  report.add("deltas", table);
  if (worst) report.add("worst", worst->pair);
  const bool pass = !worst || worst->delta <= worst->tolerance;
  report.add("verdict", std::string(pass ? "pass" : "breach"));
  out << report.render(opts.format);

  if (!pass) {
    throw ValidationBreach("worst pair " + worst->pair + ": delta " + format_number(worst->delta) +
                           " exceeds tolerance " + format_number(worst->tolerance));
  }
}

int run_command(const std::function<void()>& command, std::ostream& err) {
  try {
    command();
    return exit_code::ok;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return exit_code::schema;
  } catch (const ModelError& e) {
    err << "invalid model: " << e.what() << '\n';
    return exit_code::schema;
  } catch (const RedundantJointError& e) {
    err << "redundant passive joint";
    if (e.column() >= 0) err << " " << e.column();
    err << ": " << e.what() << '\n';
    return exit_code::redundancy;
  } catch (const SingularChainError& e) {
    err << "singular chain (spring Jacobian rank " << e.rank() << "): " << e.what() << '\n';
    return exit_code::redundancy;
  } catch (const UnresistedWrenchError& e) {
    err << e.what() << '\n';
    return exit_code::unresisted;
  } catch (const ValidationBreach& e) {
    err << "validation breach: " << e.what() << '\n';
    return exit_code::breach;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
}

}  // namespace vjm::cli
