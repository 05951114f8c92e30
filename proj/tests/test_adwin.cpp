#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "bsm/bsm.hpp"
#include "helpers.hpp"

using bsm::Adwin;
using bsm::CutRule;
using bsm::ErrorKind;

namespace {

// Independent evaluation of the Hoeffding-style cut over every prefix split:
// diff^2 >= ln(4W/delta)/k * (1/n0 + 1/n1) with k = 4 for the harmonic rule
// and k = 2 for the reciprocal rule.
std::optional<std::size_t> oracle_cut(const std::vector<double>& window, double delta,
                                      double k) {
  const double w = static_cast<double>(window.size());
  const double scale = std::log(4.0 * w / delta) / k;
  for (std::size_t i = 1; i < window.size(); ++i) {
    double left = 0.0;
    for (std::size_t j = 0; j < i; ++j) left += window[j];
    double right = 0.0;
    for (std::size_t j = i; j < window.size(); ++j) right += window[j];
    const double n0 = static_cast<double>(i);
    const double n1 = w - n0;
    const double diff = left / n0 - right / n1;
    if (diff * diff >= scale * (1.0 / n0 + 1.0 / n1)) return i;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("constant signal never drifts") {
  Adwin detector(0.99);
  for (int i = 0; i < 2000; ++i) {
    CHECK_FALSE(detector.add(0.5).has_value());
  }
  CHECK(detector.window_size() == 2000);
  CHECK(detector.cumulative_drifts() == 0);
  CHECK(detector.window_mean() == 0.5);
}

TEST_CASE("clean step window cuts at the boundary") {
  const std::vector<double> window = {0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
  const double delta = 0.9;  // permissive so the six-element example fires

  const auto cut = Adwin::find_cut(window, delta, CutRule::HoeffdingHarmonic);
  REQUIRE(cut.has_value());
  CHECK(*cut == 3);

  // Oracle: exhaustive evaluation of all five prefix splits.
  CHECK(oracle_cut(window, delta, 4.0) == cut);

  // The reciprocal rule doubles the threshold; this window stays whole.
  CHECK_FALSE(Adwin::find_cut(window, delta, CutRule::HoeffdingReciprocal).has_value());
  CHECK_FALSE(oracle_cut(window, delta, 2.0).has_value());
}

TEST_CASE("sub-threshold mean difference keeps the window") {
  std::vector<double> window(10, 0.45);
  for (std::size_t i = 5; i < 10; ++i) window[i] = 0.55;
  const double delta = 0.01;

  // Oracle: every split difference stays below the bound for its sub-window
  // sizes; the whole-window sum is 5 * 0.45 + 5 * 0.55 = 5.0.
  for (std::size_t i = 1; i < window.size(); ++i) {
    double left = 0.0;
    for (std::size_t j = 0; j < i; ++j) left += window[j];
    const double n0 = static_cast<double>(i);
    const double n1 = static_cast<double>(window.size()) - n0;
    const double diff = std::abs(left / n0 - (5.0 - left) / n1);
    const double bound = std::sqrt(std::log(4.0 * 10.0 / delta) / 4.0 * (1.0 / n0 + 1.0 / n1));
    CHECK(diff < bound);
  }
  CHECK_FALSE(Adwin::find_cut(window, delta, CutRule::HoeffdingHarmonic).has_value());
}

TEST_CASE("window retains only post-cut values") {
  Adwin detector(0.99);
  for (int i = 0; i < 200; ++i) detector.add(0.0);
  std::optional<bsm::DriftEvent> event;
  int ones = 0;
  while (!event && ones < 500) {
    event = detector.add(1.0);
    ++ones;
  }
  REQUIRE(event.has_value());
  CHECK(event->discarded_mean < event->retained_mean);
  CHECK(event->discarded_count >= 200u);  // the zero block is dropped
  CHECK(detector.last_cut_index() == event->discarded_count);
  CHECK(detector.cumulative_drifts() == 1);
  CHECK(detector.window_size() + event->discarded_count ==
        static_cast<std::size_t>(200 + ones));
  for (double v : detector.window()) CHECK(v == 1.0);
}

TEST_CASE("each detection increments the cumulative count by one") {
  std::mt19937_64 rng(5);
  Adwin detector(0.99);
  std::uint64_t events = 0;
  const auto feed = [&](double p, int n) {
    std::bernoulli_distribution draw(p);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t before = detector.cumulative_drifts();
      if (detector.add(draw(rng) ? 1.0 : 0.0)) {
        ++events;
        CHECK(detector.cumulative_drifts() == before + 1);
      } else {
        CHECK(detector.cumulative_drifts() == before);
      }
    }
  };
  feed(0.2, 600);
  feed(0.8, 600);
  feed(0.2, 600);
  CHECK(events >= 2);
  CHECK(detector.cumulative_drifts() == events);
}

TEST_CASE("step change is caught quickly across seeds") {
  int detected = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    Adwin detector(0.99);
    bool hit = false;
    for (int t = 0; t < 1300 && !hit; ++t) {
      const double p = t < 1000 ? 0.2 : 0.8;
      std::bernoulli_distribution draw(p);
      if (detector.add(draw(rng) ? 1.0 : 0.0) && t >= 1000) hit = true;
    }
    if (hit) ++detected;
  }
  CHECK(detected >= 95);
}

TEST_CASE("bernstein mode uses the variance-sensitive bound") {
  const std::vector<double> flat(50, 0.7);
  CHECK_FALSE(Adwin::find_cut(flat, 0.1, CutRule::Bernstein).has_value());

  std::mt19937_64 rng(11);
  Adwin detector(0.99, CutRule::Bernstein);
  bool hit = false;
  for (int t = 0; t < 1300 && !hit; ++t) {
    std::bernoulli_distribution draw(t < 1000 ? 0.2 : 0.8);
    if (detector.add(draw(rng) ? 1.0 : 0.0) && t >= 1000) hit = true;
  }
  CHECK(hit);
}

TEST_CASE("signal and configuration domains are enforced") {
  Adwin detector(0.99);
  CHECK(helpers::raised_kind([&] { detector.add(-0.1); }) == ErrorKind::SignalOutOfRange);
  CHECK(helpers::raised_kind([&] { detector.add(1.1); }) == ErrorKind::SignalOutOfRange);
  CHECK(helpers::raised_kind([] { Adwin bad(0.0); }) == ErrorKind::ConfigError);
  CHECK(helpers::raised_kind([] { Adwin bad(1.0); }) == ErrorKind::ConfigError);
  CHECK(Adwin(0.99).delta() == Catch::Approx(0.01));
}
