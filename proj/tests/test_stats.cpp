#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bsm/bsm.hpp"
#include "helpers.hpp"

using bsm::ErrorKind;

TEST_CASE("descriptives match a reference computation") {
  const std::vector<double> values = {0.5, 0.6, 0.7};
  const bsm::Descriptives d = bsm::describe(values);

  CHECK(d.count == 3);
  CHECK(d.mean == Catch::Approx(0.6).margin(1e-15));
  CHECK(d.stddev == Catch::Approx(0.1).margin(1e-12));
  CHECK(d.std_error == Catch::Approx(0.1 / std::sqrt(3.0)).margin(1e-12));

  // Reference: t(0.975, 2) = 4.30265272974946 from standard tables.
  const double t = 4.30265272974946;
  CHECK(d.ci_lower == Catch::Approx(0.6 - t * 0.1 / std::sqrt(3.0)).margin(1e-6));
  CHECK(d.ci_upper == Catch::Approx(0.6 + t * 0.1 / std::sqrt(3.0)).margin(1e-6));
  CHECK(d.ci_lower == Catch::Approx(0.3516).margin(5e-5));
  CHECK(d.ci_upper == Catch::Approx(0.8484).margin(5e-5));
  CHECK_FALSE(d.degenerate);
}

TEST_CASE("identical samples give a zero-width interval") {
  const std::vector<double> values(21, 0.7200);
  const bsm::Descriptives d = bsm::describe(values);
  CHECK(d.mean == Catch::Approx(0.7200).margin(1e-12));
  CHECK(d.stddev == Catch::Approx(0.0).margin(1e-12));
  CHECK(d.ci_lower == Catch::Approx(0.7200).margin(1e-12));
  CHECK(d.ci_upper == Catch::Approx(0.7200).margin(1e-12));
}

TEST_CASE("single samples are flagged degenerate") {
  const bsm::Descriptives d = bsm::describe(std::vector<double>{0.42});
  CHECK(d.degenerate);
  CHECK(d.mean == 0.42);
  CHECK(d.ci_lower == 0.42);
  CHECK(d.ci_upper == 0.42);
  CHECK(helpers::raised_kind([] { bsm::describe(std::vector<double>{}); }) ==
        ErrorKind::InsufficientData);
}

TEST_CASE("three-group anova reproduces the textbook case") {
  const std::vector<std::vector<double>> groups = {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
  const bsm::AnovaResult anova = bsm::one_way_anova(groups);

  CHECK(anova.f == Catch::Approx(3.0).margin(1e-12));
  CHECK(anova.df_between == 2);
  CHECK(anova.df_within == 6);

  // Oracle: for F(2, m), the survival function has the closed form
  // (1 + 2x/m)^(-m/2); at x = 3, m = 6 that is 2^-3 = 0.125.
  const double reference = std::pow(1.0 + 2.0 * 3.0 / 6.0, -3.0);
  CHECK(reference == 0.125);
  CHECK(anova.p_value == Catch::Approx(reference).margin(1e-6));
}

TEST_CASE("flat groups give no effect, separated groups give certainty") {
  const bsm::AnovaResult flat = bsm::one_way_anova({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  CHECK(flat.f == Catch::Approx(0.0).margin(1e-12));
  CHECK(flat.p_value == Catch::Approx(1.0).margin(1e-12));

  const bsm::AnovaResult wide =
      bsm::one_way_anova({{0.001, 0.0, -0.001}, {10.0, 10.001, 9.999}, {20.0, 19.999, 20.001}});
  CHECK(wide.p_value < 1e-6);
  CHECK(bsm::format_p_value(wide.p_value) == "~0");
}

TEST_CASE("two-group anova equals the squared pooled t statistic") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> group_size(2, 12);

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(group_size(rng));
    std::vector<double> b(group_size(rng));
    for (double& v : a) v = value(rng);
    for (double& v : b) v = value(rng);

    double mean_a = 0.0;
    double mean_b = 0.0;
    for (double v : a) mean_a += v;
    for (double v : b) mean_b += v;
    mean_a /= a.size();
    mean_b /= b.size();
    double ss = 0.0;
    for (double v : a) ss += (v - mean_a) * (v - mean_a);
    for (double v : b) ss += (v - mean_b) * (v - mean_b);
    const double pooled = ss / static_cast<double>(a.size() + b.size() - 2);
    if (pooled <= 0.0) continue;
    const double t =
        (mean_a - mean_b) / std::sqrt(pooled * (1.0 / a.size() + 1.0 / b.size()));

    const bsm::AnovaResult anova = bsm::one_way_anova({a, b});
    CHECK(anova.f == Catch::Approx(t * t).margin(1e-9));
  }
}

TEST_CASE("contrasts are pooled two-group t tests") {
  const std::vector<std::vector<double>> groups = {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
  const bsm::AnovaResult anova = bsm::one_way_anova(groups);
  const bsm::ContrastResult c = bsm::contrast(anova, 2, 0);

  CHECK(c.group_a == 2);
  CHECK(c.group_b == 0);
  CHECK(c.mean_difference == Catch::Approx(2.0).margin(1e-12));
  // se = sqrt(MSW * (1/3 + 1/3)) with MSW = 1, so t = 2 / sqrt(2/3).
  CHECK(c.t == Catch::Approx(2.0 / std::sqrt(2.0 / 3.0)).margin(1e-12));
  CHECK(c.df == 6);
  CHECK(c.p_value > 0.0);
  CHECK(c.p_value < 1.0);

  CHECK(helpers::raised_kind([&] { bsm::contrast(anova, 0, 3); }) == ErrorKind::DomainError);
  CHECK(helpers::raised_kind([&] { bsm::contrast(anova, 1, 1); }) == ErrorKind::DomainError);
}

TEST_CASE("anova rejects degenerate shapes") {
  CHECK(helpers::raised_kind([] { bsm::one_way_anova({{1.0, 2.0}}); }) ==
        ErrorKind::InsufficientData);
  CHECK(helpers::raised_kind([] { bsm::one_way_anova({{1.0, 2.0}, {1.0}}); }) ==
        ErrorKind::InsufficientData);
  CHECK(helpers::raised_kind([] {
          bsm::one_way_anova({{1.0, 1.0}, {2.0, 2.0}});
        }) == ErrorKind::DegenerateVariance);
}

TEST_CASE("p values format as the reports display them") {
  CHECK(bsm::format_p_value(0.125) == "0.125000");
  CHECK(bsm::format_p_value(0.002) == "0.002000");
  CHECK(bsm::format_p_value(9.9e-7) == "~0");
  CHECK(bsm::format_p_value(0.0) == "~0");
}
