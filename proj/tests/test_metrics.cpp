#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qcadmm/metrics.hpp"

using namespace qcadmm;

TEST_CASE("data average") {
  REQUIRE(data_average({-1.5, -3.5}) == -2.5);
  REQUIRE(data_average({4.0}) == 4.0);
  REQUIRE_THROWS_AS(data_average({}), std::invalid_argument);
}

TEST_CASE("iterative error is the root-mean-square deviation from the average") {
  // all nodes right on target
  REQUIRE(iterative_error({2.0, 2.0, 2.0}, 2.0) == 0.0);
  // ||(1,-1)||/sqrt(2) = 1
  REQUIRE_THAT(iterative_error({3.0, 1.0}, 2.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(iterative_error({1.0, 0.0, -1.0}, 0.0),
               Catch::Matchers::WithinAbs(std::sqrt(2.0 / 3.0), 1e-15));
}

TEST_CASE("consensus error bound (1/2 + 2E rho / N) delta") {
  REQUIRE(error_bound(1.0, 1, 2, 1.0) == 1.5);
  REQUIRE_THAT(error_bound(1.0, 500, 50, 1.0), Catch::Matchers::WithinAbs(20.5, 1e-12));
  REQUIRE_THAT(error_bound(0.5, 10, 5, 0.1), Catch::Matchers::WithinAbs(0.25, 1e-12));
  // scales linearly in delta
  REQUIRE(error_bound(1.0, 7, 4, 2.0) == 2.0 * error_bound(1.0, 7, 4, 1.0));
}

TEST_CASE("weighted edge-space norm") {
  // rho ||z||^2 + (1/rho) ||beta||^2 with u = [z; beta]
  GMetric gm{2.0, 2};  // rho = 2, two arcs
  Vec u{1.0, 2.0, 3.0, 4.0};  // z = (1,2), beta = (3,4)
  REQUIRE_THAT(g_norm_sq(u, gm), Catch::Matchers::WithinAbs(2.0 * 5.0 + 25.0 / 2.0, 1e-14));
  REQUIRE_THROWS_AS(g_norm_sq(Vec{1.0, 2.0}, gm), std::invalid_argument);
}

TEST_CASE("objective value of the consensus least-squares problem") {
  REQUIRE(objective_value({1.0, 1.0}, {1.0, 1.0}) == 0.0);
  REQUIRE_THAT(objective_value({0.0, 0.0}, {3.0, 4.0}),
               Catch::Matchers::WithinAbs(12.5, 1e-14));
}
