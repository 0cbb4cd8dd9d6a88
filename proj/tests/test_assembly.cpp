#include <doctest.h>

#include <vector>

#include "support/generators.hpp"
#include "vjm/assembly.hpp"
#include "vjm/models.hpp"

using namespace vjm;
using vjm::testing::Rng;
using Mat6 = Matrix6<double>;
using Vec6 = Vector6<double>;

namespace {

LegAssembly<double> random_leg(Rng& rng, int rank) {
  LegAssembly<double> leg;
  leg.stiffness = testing::random_psd6(rng, rank);
  leg.orientation = testing::random_rotation(rng);
  leg.lever = testing::random_vector(rng, 1.0);
  return leg;
}

ManipulatorModel<double> globalised(const std::vector<LegAssembly<double>>& legs) {
  ManipulatorModel<double> m;
  for (const auto& l : legs) m.legs.push_back(leg_to_global(l));
  return m;
}

}  // namespace

TEST_CASE("leg_to_global") {
  Rng rng(41);

  SUBCASE("identity orientation leaves the stiffness unchanged") {
    auto leg = random_leg(rng, 6);
    leg.orientation.setIdentity();
    const auto g = leg_to_global(leg);
    CHECK(g.stiffness.isApprox(leg.stiffness, 1e-15));
    CHECK(g.frame == FrameTag::global);
  }

  SUBCASE("rank is preserved") {
    for (int i = 0; i < 30; ++i) {
      const int rank = 1 + i % 6;
      const auto leg = random_leg(rng, rank);
      CHECK(numeric_rank(leg_to_global(leg).stiffness) == rank);
    }
  }

  SUBCASE("axial leg aligned with u0") {
    const Eigen::Vector3d u0 = testing::random_unit(rng);
    LegAssembly<double> leg;
    leg.stiffness(0, 0) = 3.0;
    leg.orientation = frame_from_x_axis<double>(u0);
    Mat6 expected = Mat6::Zero();
    expected.topLeftCorner<3, 3>() = 3.0 * u0 * u0.transpose();
    CHECK((leg_to_global(leg).stiffness - expected).norm() <= 1e-14);
  }

  SUBCASE("a global leg cannot be transformed twice") {
    CHECK_THROWS_AS(leg_to_global(leg_to_global(random_leg(rng, 3))), ModelError);
  }
}

TEST_CASE("aggregate") {
  Rng rng(42);

  SUBCASE("single leg at the reference point") {
    auto leg = random_leg(rng, 4);
    leg.lever.setZero();
    const auto g = leg_to_global(leg);
    CHECK(aggregate(ManipulatorModel<double>{{g}}) == g.stiffness);
  }

  SUBCASE("empty or local legs are rejected") {
    CHECK_THROWS_AS(aggregate(ManipulatorModel<double>{}), ModelError);
    CHECK_THROWS_AS(aggregate(ManipulatorModel<double>{{random_leg(rng, 2)}}), ModelError);
  }

  SUBCASE("superposition over legs") {
    for (int i = 0; i < 30; ++i) {
      std::vector<LegAssembly<double>> legs;
      for (int j = 0; j < 1 + i % 6; ++j) legs.push_back(random_leg(rng, 1 + j % 6));
      const auto model = globalised(legs);
      Mat6 sum = Mat6::Zero();
      for (const auto& l : model.legs) sum += aggregate(ManipulatorModel<double>{{l}});
      CHECK(relative_difference(aggregate(model), sum) <= 1e-12);
    }
  }

  SUBCASE("frame covariance") {
    for (int i = 0; i < 30; ++i) {
      std::vector<LegAssembly<double>> legs;
      for (int j = 0; j < 6; ++j) legs.push_back(random_leg(rng, 1 + (i + j) % 6));
      const Eigen::Matrix3d q = testing::random_rotation(rng);
      auto rotated = legs;
      for (auto& l : rotated) {
        l.orientation = q * l.orientation;
        l.lever = q * l.lever;
      }
      const Mat6 expected = rotate_stiffness(aggregate(globalised(legs)), q);
      CHECK(relative_difference(aggregate(globalised(rotated)), expected) <= 1e-10);
    }
  }

  SUBCASE("rank-one legs sum to K11 * sum w w^T") {
    for (int i = 0; i < 20; ++i) {
      const int n = 1 + i % 7;
      const double k11 = 2.5;
      std::vector<LegAssembly<double>> legs;
      Eigen::Matrix<double, 6, Eigen::Dynamic> w(6, n);
      Mat6 expected = Mat6::Zero();
      for (int j = 0; j < n; ++j) {
        const Eigen::Vector3d u0 = testing::random_unit(rng);
        LegAssembly<double> leg;
        leg.stiffness(0, 0) = k11;
        leg.orientation = frame_from_x_axis<double>(u0);
        leg.lever = testing::random_vector(rng);
        w.col(j) << u0, -leg.lever.cross(u0);
        expected += k11 * w.col(j) * w.col(j).transpose();
        legs.push_back(leg);
      }
      const Mat6 k = aggregate(globalised(legs));
      CHECK(relative_difference(k, expected) <= 1e-12);
      CHECK(numeric_rank(k) == matrix_rank(w));
    }
  }
}

TEST_CASE("deflection") {
  Rng rng(43);

  SUBCASE("isotropic stiffness") {
    const double k = 4.0, f = 2.0;
    const auto t = deflection<double>(k * Mat6::Identity(), Wrench<double>{{f, 0, 0}, {0, 0, 0}});
    Vec6 expected = Vec6::Zero();
    expected(0) = f / k;
    CHECK((t.vector() - expected).norm() <= 1e-15);
  }

  SUBCASE("residual on random SPD matrices") {
    for (int i = 0; i < 100; ++i) {
      const Mat6 k = testing::random_spd6(rng, 0.1, 100.0);
      const Vec6 f = testing::random_vector6(rng, 10.0);
      const auto t = deflection<double>(k, Wrench<double>::from_vector(f));
      CHECK((k * t.vector() - f).norm() <= 1e-10 * f.norm());
    }
  }

  SUBCASE("pure yaw torque on the regular-hexagon platform is unresisted") {
    StewartParams<double> p;
    p.layout = StewartCase::A;
    const Mat6 k = stewart_stiffness_pipeline(p);
    try {
      deflection<double>(k, Wrench<double>{{0, 0, 0}, {0, 0, 1}});
      FAIL("expected UnresistedWrenchError");
    } catch (const UnresistedWrenchError& e) {
      CHECK(std::abs(std::abs(e.direction()[5]) - 1.0) <= 1e-6);
    }
  }

  SUBCASE("singular K, wrench in the range: minimum-norm solution") {
    const Mat6 k = testing::random_psd6(rng, 4);
    const Vec6 f = k * testing::random_vector6(rng);
    const auto sol = solve_deflection<double>(k, Wrench<double>::from_vector(f));
    CHECK(sol.residual <= 1e-10);
    CHECK(sol.null_space.cols() == 2);
    CHECK((sol.null_space.transpose() * sol.twist.vector()).norm() <= 1e-12 * sol.twist.vector().norm());
    CHECK_NOTHROW(deflection<double>(k, Wrench<double>::from_vector(f)));
  }
}
