#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "treedecay/continents.hpp"
#include "treedecay/decay.hpp"
#include "treedecay/steiner.hpp"

using namespace treedecay;

TEST_CASE("bound constants") {
  const double e = std::numbers::e;
  const BoundConstants c = bound_constants(2, 2, 12.0);
  CHECK(c.A == doctest::Approx(4.0));
  CHECK(c.k_d == doctest::Approx(12.0 * e));
  CHECK(c.B == doctest::Approx(2.0 * e * e * 144.0 * e * e));
  CHECK(c.b == doctest::Approx(std::log(c.B)));
  CHECK(c.b == doctest::Approx(9.6634).epsilon(1e-4));
  CHECK(c.delta_n == doctest::Approx(12.0 - c.b * std::log(2.0)));
  CHECK(c.applicable);
  CHECK(c.a == doctest::Approx(4.0 / (1.0 - std::exp(-c.delta_n))));
  CHECK(c.a <= c.a_max);
  CHECK(c.a_max == doctest::Approx(4.0 * e / (e - 1.0)));
  CHECK(c.threshold_beta() == doctest::Approx(1.0 + c.b * std::log(2.0)));
  CHECK(bound_constants(3, 2, 1.0).A == doctest::Approx(18.0));
  CHECK(bound_constants(3, 2, 1.0).k_d == doctest::Approx(24.0 * e));

  const BoundConstants at_threshold = bound_constants(2, 3, bound_constants(2, 3, 1.0).threshold_beta());
  CHECK(at_threshold.delta_n == doctest::Approx(1.0));
  CHECK(at_threshold.a == doctest::Approx(at_threshold.a_max));
  CHECK_FALSE(bound_constants(2, 2, 5.0).applicable);

  CHECK_THROWS_AS(bound_constants(1, 2, 1.0), std::domain_error);
  CHECK_THROWS_AS(bound_constants(2, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bound_constants(2, 2, 0.0), std::domain_error);
}

TEST_CASE("a stays below its ceiling once delta_n >= 1") {
  for (int n = 2; n <= 6; ++n) {
    const double beta0 = bound_constants(2, n, 1.0).threshold_beta();
    for (double extra = 0.0; extra <= 20.0; extra += 0.25) {
      const BoundConstants c = bound_constants(2, n, beta0 + extra);
      REQUIRE(c.applicable);
      CHECK(c.a <= c.a_max * (1 + 1e-12));
      CHECK(c.a >= c.A);
    }
  }
}

TEST_CASE("bound is log-linear in tau") {
  const BoundConstants c = bound_constants(2, 3, 14.0);
  for (int tau = 0; tau < 20; ++tau) {
    CHECK(c.log_bound(tau) == doctest::Approx(std::log(c.a) + 3 * std::log(3.0) - c.delta_n * tau));
    CHECK(c.log_bound(tau + 1) < c.log_bound(tau));
  }
}

TEST_CASE("entropy factor") {
  for (int r = 0; r <= 30; ++r) {
    const BoundConstants c = bound_constants(2, 2, 1.0);
    const double direct = std::log(c.A * std::pow(c.B, r) * std::pow(2.0, r));
    CHECK(log_entropy_factor_bound(2, 2, r) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(log_entropy_factor_bound(2, 2, r + 1) > log_entropy_factor_bound(2, 2, r));
  }
}

TEST_CASE("geometric tails") {
  SUBCASE("sum of A exp(-delta_n r) from tau") {
    for (double beta : {8.0, 12.0, 20.0}) {
      const BoundConstants c = bound_constants(2, 2, beta);
      for (int tau : {1, 5, 12}) CHECK(delta_tail(c, tau).relative_gap() < 1e-12);
    }
  }
  SUBCASE("sum of A B^r n^r exp(-beta r) from tau") {
    const BoundConstants c = bound_constants(2, 2, 14.0);
    for (int tau : {1, 5, 12}) CHECK(entropy_energy_tail(c, tau).relative_gap() < 1e-12);
    CHECK_THROWS_AS(entropy_energy_tail(bound_constants(2, 2, 9.0), 1), std::domain_error);
  }
  SUBCASE("the two series decay at different rates") {
    // Rates: delta_n = beta - b ln n against beta - b - ln n.
    const BoundConstants c = bound_constants(2, 2, 14.0);
    const double rate_gap = (entropy_energy_tail(c, 1).log_closed - entropy_energy_tail(c, 2).log_closed) -
                            (delta_tail(c, 1).log_closed - delta_tail(c, 2).log_closed);
    CHECK(rate_gap == doctest::Approx((c.beta - c.b - std::log(2.0)) - c.delta_n));
    CHECK(std::abs(rate_gap) > 1.0);
  }
}

TEST_CASE("contour census is dominated by the entropy factor") {
  const Box box({3, 3});
  const auto census = continent_contour_census(box, 2, Site{1, 1});
  CHECK_FALSE(census.empty());
  for (const auto& [r, count] : census) {
    if (r > 6) continue;
    CHECK(std::log(static_cast<double>(count)) <= log_entropy_factor_bound(2, 2, r));
  }
  // Smallest contour around a single site: one copy flipped at the anchor, |C| = 4.
  CHECK(census.begin()->first == 4);
}

TEST_CASE("verify_decay") {
  SUBCASE("above threshold the inequality holds") {
    const Box box({4, 4});
    const std::vector<SiteTuple> tuples{{Site{0, 0}, Site{3, 3}}, {Site{1, 1}, Site{2, 1}}, {Site{0, 3}, Site{0, 3}}};
    for (double beta : {8.0, 12.0}) {
      const auto records = verify_decay(box, beta, 2, tuples);
      REQUIRE(records.size() == 3);
      for (const auto& r : records) {
        CHECK(r.applicable);
        CHECK(r.satisfied);
        CHECK(r.tau == tau(SteinerInstance{box, r.sites}));
        CHECK(r.log_abs_T <= r.log_bound);
      }
      CHECK(records[0].tau == 6);
      CHECK(records[2].tau == 0);
    }
  }
  SUBCASE("below threshold the bound is not asserted") {
    const auto records = verify_decay(Box({2, 2}), 2.0, 2, {{Site{0, 0}, Site{1, 1}}});
    CHECK_FALSE(records[0].applicable);
    CHECK(records[0].satisfied);
  }
  SUBCASE("tuple length must be n") {
    CHECK_THROWS_AS(verify_decay(Box({2, 2}), 12.0, 3, {{Site{0, 0}, Site{1, 1}}}), std::domain_error);
  }
  SUBCASE("csv and json") {
    const auto records = verify_decay(Box({3, 3}), 12.0, 2, {{Site{0, 0}, Site{2, 2}}});
    std::ostringstream os;
    write_csv(os, records);
    const std::string csv = os.str();
    CHECK(csv.rfind("n,beta,sites,tau,abs_T,bound,delta_n,satisfied\n", 0) == 0);
    CHECK(csv.find("\"(0,0);(2,2)\"") != std::string::npos);
    CHECK(csv.find(",true\n") != std::string::npos);
    const std::string json = to_json(records);
    for (const char* key : {"\"n\"", "\"beta\"", "\"sites\"", "\"tau\"", "\"abs_T\"", "\"bound\"", "\"delta_n\"", "\"satisfied\""}) {
      CHECK(json.find(key) != std::string::npos);
    }
  }
}

TEST_CASE("decay is monotone along a row") {
  const Box box({6, 6});
  std::vector<SiteTuple> tuples;
  for (int k = 1; k <= 5; ++k) tuples.push_back({Site{0, 2}, Site{k, 2}});
  for (double beta : {1.0, 2.0, 4.0}) {
    const auto records = verify_decay(box, beta, 2, tuples);
    for (std::size_t i = 1; i < records.size(); ++i) {
      CHECK(records[i].tau == records[i - 1].tau + 1);
      CHECK(-records[i].log_abs_T >= -records[i - 1].log_abs_T);
    }
  }
}

TEST_CASE("triple at the threshold temperature") {
  const double beta = bound_constants(2, 3, 1.0).threshold_beta();
  const auto records = verify_decay(Box({3, 3}), beta, 3, {{Site{0, 0}, Site{2, 0}, Site{1, 2}}});
  CHECK(records[0].applicable);
  CHECK(records[0].tau == 4);
  CHECK(records[0].satisfied);
}

TEST_CASE("experiment config") {
  const ExperimentConfig c = parse_config(R"json({
    "dim": 2, "interior": "5x5", "beta_grid": [8, 12.5], "n": 2,
    "tuples": ["(1,1);(4,4)", [[0, 0], [2, 3]]], "caps": {"enumeration": 4096}, "output": "out.csv"
  })json");
  CHECK(c.dim == 2);
  CHECK(c.interior == "5x5");
  CHECK(c.beta_grid == std::vector<double>{8.0, 12.5});
  CHECK(c.n == 2);
  REQUIRE(c.tuples.size() == 2);
  CHECK(c.tuples[0] == "(1,1);(4,4)");
  CHECK(c.tuples[1] == "(0,0);(2,3)");
  CHECK(c.cap == 4096u);
  CHECK(c.output == "out.csv");

  const ExperimentConfig d = parse_config(R"({"beta_grid": 3, "caps": 100})");
  CHECK(d.beta_grid == std::vector<double>{3.0});
  CHECK(d.cap == 100u);
  CHECK_FALSE(d.n.has_value());

  CHECK_THROWS_AS(parse_config("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{\"n\": \"two\"}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::invalid_argument);
}
