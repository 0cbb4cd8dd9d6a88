// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Built with the path of the vjm executable so the CLI
// contract can be exercised end to end.

#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "builtins.hpp"
#include "model_file.hpp"
#include "report.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vjm/assembly.hpp"
#include "vjm/chain.hpp"
#include "vjm/elimination.hpp"
#include "vjm/models.hpp"

#ifndef VJM_CLI_PATH
#error "VJM_CLI_PATH must name the vjm executable"
#endif

using namespace vjm;
using vjm::testing::Rng;
using Mat6 = Matrix6<double>;
using Vec6 = Vector6<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome planar_example() {
  Stopwatch clock;
  Rng rng(1001);
  double worst_entry = 0.0, worst_oracle = 0.0;
  std::vector<Eigen::Matrix3d> inputs;
  for (int i = 0; i < 1000; ++i) {
    Eigen::Matrix3d k;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) k(a, b) = k(b, a) = testing::uniform(rng, -5.0, 5.0);
    k(2, 2) = testing::uniform(rng, 0.1, 5.0);
    inputs.push_back(k);
  }

  for (const auto& k : inputs) {
    const Eigen::Matrix3d got = motivating_2d(k).stiffness;
    Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
    expected(0, 0) = k(0, 0) - k(0, 2) * k(0, 2) / k(2, 2);
    expected(1, 1) = k(1, 1) - k(1, 2) * k(1, 2) / k(2, 2);
    expected(0, 1) = expected(1, 0) = k(0, 1) - k(0, 2) * k(1, 2) / k(2, 2);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double err = std::abs(got(a, b) - expected(a, b));
        const double rel = expected(a, b) == 0.0 ? (err == 0.0 ? 0.0 : INFINITY) : err / std::abs(expected(a, b));
        worst_entry = std::max(worst_entry, rel);
      }
    }
    worst_oracle = std::max(worst_oracle, relative_difference(got, testing::planar_energy_oracle(k)));
  }
  const double elapsed = clock.seconds();
  const bool pass = worst_entry <= 1e-12 && worst_oracle <= 1e-9 && elapsed < 1.0;
  return {pass, "1000 cases, worst entry rel err " + sci(worst_entry) + " (<= 1e-12), worst energy-oracle delta " +
                    sci(worst_oracle) + " (<= 1e-9), " + sci(elapsed) + " s including the oracle (< 1 s)"};
}

Outcome naive_rule_refuted() {
  Rng rng(1002);
  int checked = 0, refuted = 0;
  double weakest = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    Eigen::Matrix3d k;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) k(a, b) = k(b, a) = testing::uniform(rng, -5.0, 5.0);
    k(2, 2) = testing::uniform(rng, 0.1, 5.0);
    if (k(0, 2) == 0.0 && k(1, 2) == 0.0) continue;
    ++checked;
    const Eigen::Matrix3d exact = motivating_2d(k).stiffness;
    Eigen::Matrix3d naive = k;
    naive.row(2).setZero();
    naive.col(2).setZero();
    double largest = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double scale = std::max(std::abs(exact(a, b)), std::abs(naive(a, b)));
        if (scale > 0.0) largest = std::max(largest, std::abs(exact(a, b) - naive(a, b)) / scale);
      }
    }
    weakest = std::min(weakest, largest);
    if (largest > 1e-6) ++refuted;
  }
  return {refuted == checked, std::to_string(refuted) + "/" + std::to_string(checked) +
                                  " coupled cases differ from row/column zeroing, smallest largest-entry gap " +
                                  sci(weakest) + " (> 1e-6)"};
}

struct ChainCase {
  Mat6 k0;
  Matrix6X<double> j_theta;
  MatrixX<double> k_theta;
  Matrix6X<double> j_q;
};

std::vector<ChainCase> random_chain_cases(int count) {
  Rng rng(1003);
  std::vector<ChainCase> cases;
  while (static_cast<int>(cases.size()) < count) {
    const int nq = 1 + static_cast<int>(cases.size()) % 5;
    const ChainModel<double> chain = testing::random_chain(rng, nq);
    const auto cfg = ChainConfig<double>::zero(chain);
    const auto j = jacobians(chain, cfg);
    if (matrix_rank(j.passive) != nq) continue;
    const MatrixX<double> k_theta = aggregate_spring_stiffness(chain);
    cases.push_back({base_stiffness<double>(j.spring, k_theta), j.spring, k_theta, j.passive});
  }
  return cases;
}

Outcome oracle_triangle(const std::vector<ChainCase>& cases, std::vector<Mat6>& eliminated) {
  Stopwatch clock;
  double exact = 0.0, energy = 0.0;
  for (const auto& c : cases) {
    const Mat6 full = eliminate_full<double>(c.k0, c.j_q);
    const Mat6 recursive = eliminate_recursive(c.k0, PassiveJacobian<double>::from_matrix(c.j_q)).result;
    const Mat6 kkt = kkt_stiffness<double>(c.j_theta, c.k_theta, c.j_q).stiffness;
    const Mat6 oracle = energy_oracle_stiffness<double>(c.j_theta, c.k_theta, c.j_q);
    exact = std::max({exact, relative_difference(full, recursive), relative_difference(full, kkt),
                      relative_difference(recursive, kkt)});
    energy = std::max({energy, relative_difference(full, oracle), relative_difference(recursive, oracle),
                       relative_difference(kkt, oracle)});
    eliminated.push_back(full);
  }
  const double elapsed = clock.seconds();
  return {exact <= 1e-9 && energy <= 1e-6 && elapsed < 30.0,
          std::to_string(cases.size()) + " chains, worst exact-route delta " + sci(exact) +
              " (<= 1e-9), worst energy-oracle delta " + sci(energy) + " (<= 1e-6), " + sci(elapsed) + " s (< 30 s)"};
}

Outcome rank_law(const std::vector<ChainCase>& cases, const std::vector<Mat6>& eliminated) {
  int rank_ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Mat6& kc = eliminated[i];
    if (numeric_rank(kc) == 6 - cases[i].j_q.cols()) ++rank_ok;
    for (Eigen::Index c = 0; c < cases[i].j_q.cols(); ++c) {
      worst = std::max(worst, (kc * cases[i].j_q.col(c)).norm() / kc.norm());
    }
  }
  return {rank_ok == static_cast<int>(cases.size()) && worst <= 1e-9,
          std::to_string(rank_ok) + "/" + std::to_string(cases.size()) + " have rank 6 - n_q, worst |K_c j|/|K_c| " +
              sci(worst) + " (<= 1e-9)"};
}

Outcome order_invariance() {
  Rng rng(1005);
  double worst = 0.0;
  int instances = 0;
  while (instances < 100) {
    const Mat6 k = testing::random_spd6(rng);
    PassiveJacobian<double> jq;
    for (int c = 0; c < 3; ++c) {
      jq.push_back(PassiveColumn<double>::general(testing::random_passive_column(rng, (instances + c) % 2 == 0)));
    }
    if (matrix_rank(jq.matrix()) != 3) continue;
    ++instances;
    std::vector<int> order{0, 1, 2};
    const Mat6 reference = eliminate_recursive(k, jq, order).result;
    while (std::next_permutation(order.begin(), order.end())) {
      worst = std::max(worst, relative_difference(eliminate_recursive(k, jq, order).result, reference));
    }
  }
  return {worst <= 1e-10, "100 instances x 6 orders, worst delta " + sci(worst) + " (<= 1e-10)"};
}

Outcome stewart_leg() {
  bool pass = true;
  double worst_rest = 0.0, worst_axial = 0.0;
  std::vector<BeamParams<double>> beams{BeamParams<double>::circular_rod(1e6, std::sqrt(0.09 + 1.0)),
                                        BeamParams<double>::circular_rod(1e6, std::sqrt(1.19)),
                                        {2.1e11, 8.1e10, 3e-4, 2e-8, 5e-8, 7e-8, 0.9},
                                        {7e10, 2.6e10, 1e-3, 4e-7, 1e-7, 3e-7, 1.7}};
  for (const auto& beam : beams) {
    const Mat6 k = beam_stiffness(beam);
    const auto columns = stewart_leg_passive_columns(beam.L);
    for (const Mat6& leg : {stewart_leg_stiffness(k, beam.L), eliminate_full(k, columns)}) {
      const double k11 = beam.E * beam.A / beam.L;
      Mat6 rest = leg;
      rest(0, 0) = 0.0;
      worst_rest = std::max(worst_rest, rest.cwiseAbs().maxCoeff() / k11);
      worst_axial = std::max(worst_axial, std::abs(leg(0, 0) - k11) / k11);
      pass = pass && numeric_rank(leg) == 1;
    }
  }
  pass = pass && worst_rest <= 1e-9 && worst_axial <= 1e-9;
  return {pass, "4 beams x 2 routes rank 1, worst off-axial entry " + sci(worst_rest) +
                    " K11 (<= 1e-9), axial entry rel err " + sci(worst_axial)};
}

Outcome stewart_case_a() {
  const StewartParams<double> p{0.5, 0.2, 1.0, 1e6, StewartCase::A};
  const Mat6 k = stewart_stiffness_pipeline(p);
  const auto spectrum = spectral_report(k);
  const double lambda_max = spectrum.eigenvalues(0);
  const double l2 = (p.R - p.r) * (p.R - p.r) + p.h * p.h;

  const double sixth = std::max(k.row(5).cwiseAbs().maxCoeff(), k.col(5).cwiseAbs().maxCoeff()) / lambda_max;
  const double e11 = std::abs(k(0, 0) - 3 * p.k11 / l2 * (p.R - p.r) * (p.R - p.r)) / k(0, 0);
  const double e33 = std::abs(k(2, 2) - 6 * p.k11 * p.h * p.h / l2) / k(2, 2);
  const bool one_null_vector = spectrum.null_space.cols() == 1;
  const double alignment = one_null_vector ? 1.0 - std::abs(spectrum.null_space(5, 0)) : INFINITY;

  const bool pass = sixth <= 1e-9 && spectrum.rank == 5 && alignment <= 1e-6 && e11 <= 1e-9 && e33 <= 1e-9;
  std::string detail = "sixth row/col " + sci(sixth) + " lambda_max (<= 1e-9), rank " + std::to_string(spectrum.rank) +
                       " (want 5), null space dim " + std::to_string(spectrum.null_space.cols()) +
                       " (want 1, aligned with e6 to 1e-6), (1,1) rel err " + sci(e11) + ", (3,3) rel err " + sci(e33);
  if (!pass && spectrum.rank == 3) {
    detail += "; all six leg lines pass through one point on the z axis, so the leg wrenches span 3 dimensions";
  }
  return {pass, detail};
}

Outcome stewart_case_b() {
  const StewartParams<double> p{0.5, 0.2, 1.0, 1e6, StewartCase::B};
  const Mat6 k = stewart_stiffness_pipeline(p);
  const double l2 = p.R * p.R + p.r * p.r - p.R * p.r + p.h * p.h;
  const int rank = numeric_rank(k);
  const double e66 = std::abs(k(5, 5) - 4.5 * p.k11 * p.r * p.r * p.R * p.R / l2) / k(5, 5);
  const double e33 = std::abs(k(2, 2) - 6 * p.k11 * p.h * p.h / l2) / k(2, 2);

  bool finite = false;
  double residual = INFINITY;
  try {
    const Vec6 f = Vec6::Unit(5);
    const Vec6 t = deflection<double>(k, Wrench<double>::from_vector(f)).vector();
    finite = t.allFinite();
    residual = (k * t - f).norm() / f.norm();
  } catch (const UnresistedWrenchError&) {
    finite = false;
  }
  return {rank == 6 && e66 <= 1e-9 && e33 <= 1e-9 && finite && residual <= 1e-10,
          "rank " + std::to_string(rank) + " (want 6), (6,6) rel err " + sci(e66) + ", (3,3) rel err " + sci(e33) +
              " (<= 1e-9), yaw deflection " + (finite ? "finite" : "not finite") + " with residual " + sci(residual)};
}

Outcome frame_algebra() {
  Rng rng(1009);
  double shift = 0.0, spectrum = 0.0, covariance = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat6 k = i % 2 ? testing::random_spd6(rng) : testing::random_psd6(rng, 1 + i % 6);
    const Eigen::Vector3d v = testing::random_vector(rng, 2.0);
    shift = std::max(shift, relative_difference(shift_stiffness<double>(shift_stiffness(k, v), -v), k));

    const auto before = spectral_report(k);
    const auto after = spectral_report(rotate_stiffness(k, testing::random_rotation(rng)));
    spectrum = std::max(spectrum, (before.eigenvalues - after.eigenvalues).norm() / before.eigenvalues.norm());

    std::vector<LegAssembly<double>> legs(6);
    for (int l = 0; l < 6; ++l) {
      legs[l].stiffness = testing::random_psd6(rng, 1 + (i + l) % 6);
      legs[l].orientation = testing::random_rotation(rng);
      legs[l].lever = testing::random_vector(rng);
    }
    const Eigen::Matrix3d q = testing::random_rotation(rng);
    ManipulatorModel<double> original, rotated;
    for (auto leg : legs) {
      original.legs.push_back(leg_to_global(leg));
      leg.orientation = q * leg.orientation;
      leg.lever = q * leg.lever;
      rotated.legs.push_back(leg_to_global(leg));
    }
    covariance = std::max(covariance, relative_difference(aggregate(rotated), rotate_stiffness(aggregate(original), q)));
  }
  return {shift <= 1e-12 && spectrum <= 1e-10 && covariance <= 1e-10,
          "100 instances each: shift round trip " + sci(shift) + " (<= 1e-12), rotated spectrum " + sci(spectrum) +
              " (<= 1e-10), aggregate covariance " + sci(covariance) + " (<= 1e-10)"};
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args, const std::filesystem::path& stdout_file) {
  const std::string command =
      std::string("\"") + VJM_CLI_PATH + "\" " + args + " > \"" + stdout_file.string() + "\" 2>/dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Outcome cli_contract() {
  const auto dir = std::filesystem::temp_directory_path() / "vjm_acceptance";
  std::filesystem::create_directories(dir);
  const auto out = dir / "out.txt";

  const int validate = run_cli("validate --model stewart-b", out);
  const int deflect = run_cli("deflect --model stewart-a --wrench 0,0,0,0,0,1", out);

  const auto bad = dir / "malformed.json";
  std::ofstream(bad) << R"({"frame": "platform", "legs": [{"base": {}, "lever_v": [0, 0, 0], "elements": [)"
                     << R"({"type": "virtual_spring", "axes": ["tx"], "stiffness": [[1]]},)"
                     << R"({"type": "rigid_link", "offset": {}},)"
                     << R"({"type": "hinge", "axis": [0, 0, 1]}]}]})";
  const int malformed = run_cli("stiff --model \"" + bad.string() + "\"", out);

  bool formats_agree = true;
  std::vector<Eigen::MatrixXd> parsed;
  for (const char* format : {"pretty", "csv", "json"}) {
    const auto file = dir / (std::string("stiff.") + format);
    formats_agree = formats_agree && run_cli(std::string("stiff --model stewart-b --format ") + format, file) == 0;
    try {
      parsed.push_back(cli::parse_matrix(read_file(file), *cli::parse_format(format)));
    } catch (const std::exception&) {
      formats_agree = false;
    }
  }
  if (formats_agree) {
    for (const auto& m : parsed) {
      formats_agree = formats_agree && m.rows() == 6 && m.cols() == 6;
      for (Eigen::Index i = 0; formats_agree && i < m.size(); ++i) {
        formats_agree = std::bit_cast<std::uint64_t>(m.data()[i]) == std::bit_cast<std::uint64_t>(parsed[0].data()[i]);
      }
    }
    const Mat6 library = stewart_stiffness_pipeline(StewartParams<double>{0.5, 0.2, 1.0, 1e6, StewartCase::B});
    formats_agree = formats_agree && relative_difference(Mat6(parsed[0]), library) <= 1e-9;
  }

  const cli::ModelFile model = cli::stewart_model(StewartParams<double>{0.5, 0.2, 1.0, 1e6, StewartCase::B});
  const bool model_round_trip = cli::parse_model(cli::serialize_model(model)) == model;

  const bool pass = validate == 0 && deflect == 4 && malformed == 2 && formats_agree && model_round_trip;
  return {pass, "validate stewart-b exit " + std::to_string(validate) + " (want 0), deflect stewart-a mz exit " +
                    std::to_string(deflect) + " (want 4), malformed model exit " + std::to_string(malformed) +
                    " (want 2), pretty/csv/json parse-back " + (formats_agree ? "identical" : "differs") +
                    ", model file round trip " + (model_round_trip ? "lossless" : "lossy")};
}

}  // namespace

int main() {
  const std::vector<ChainCase> cases = random_chain_cases(500);
  std::vector<Mat6> eliminated;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"planar passive rotation: closed form and energy oracle", planar_example},
      {"row/column zeroing is wrong whenever the passive joint couples", naive_rule_refuted},
      {"elimination routes agree on random chains", [&] { return oracle_triangle(cases, eliminated); }},
      {"rank drops by n_q and passive columns are annihilated", [&] { return rank_law(cases, eliminated); }},
      {"recursive elimination is order independent", order_invariance},
      {"Stewart leg keeps only the axial term", stewart_leg},
      {"Stewart case A (legs in radial planes)", stewart_case_a},
      {"Stewart case B (crossed legs)", stewart_case_b},
      {"frame algebra", frame_algebra},
      {"command-line contract", cli_contract},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << (i + 1 < 10 ? " " : "") << i + 1 << "  " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
