#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "qchan/capacity.hpp"
#include "qchan/energetics.hpp"

using namespace qchan;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

// Energy-accounting route: the window delta_t at which the paper's power
// convention P = E/delta_t holds with E = pi*hbar*(1 - 2^-m)/(2*delta_t),
// solved numerically by bisection.
double window_for_power(double power, int m, double hbar) {
  const double mean_overlap = average_overlap(m);
  auto consumed = [&](double dt) { return swap_energy_closed_form(mean_overlap, dt, hbar) / dt; };
  double lo = 1e-9, hi = 1e9;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (consumed(mid) > power) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("single-channel capacity", "[capacity]") {
  REQUIRE_THAT(capacity_single(kPi / 4.0, 1.0), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(capacity_single(kPi, 1.0), WithinAbs(2.0, 1e-12));
  for (double p : {0.3, 1.0, 7.5}) {
    REQUIRE(capacity_single(4.0 * p, 1.0) == 2.0 * capacity_single(p, 1.0));
  }
  REQUIRE_THROWS_AS(capacity_single(0.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(capacity_single(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("beta coefficient", "[capacity]") {
  REQUIRE_THAT(beta(1), WithinAbs(2.0 / std::sqrt(kPi), 1e-12));
  REQUIRE_THAT(beta(30), WithinAbs(std::sqrt(2.0 / kPi), 1e-8));
  for (int m = 1; m < 40; ++m) {
    REQUIRE(beta(m + 1) < beta(m));
  }
  REQUIRE_THROWS_AS(beta(0), std::invalid_argument);
}

TEST_CASE("entangled capacity reduces to the single channel at m=1", "[capacity]") {
  for (double p : {0.2, 1.0, 3.7}) {
    for (double hbar : {1.0, 0.5}) {
      REQUIRE_THAT(capacity_entangled(p, 1, hbar),
                   WithinRel(capacity_single(p, hbar), 1e-12));
    }
  }
}

TEST_CASE("entangled capacity hand values", "[capacity]") {
  REQUIRE_THAT(capacity_entangled(kPi, 2, 1.0), WithinAbs(2.0 * std::sqrt(8.0 / 3.0), 1e-12));
  REQUIRE_THAT(capacity_entangled(kPi, 2, 1.0), WithinAbs(3.265986323710904, 1e-12));
}

TEST_CASE("unentangled capacity follows the square-root law", "[capacity]") {
  for (double p : {0.4, 2.0}) {
    REQUIRE(capacity_unentangled(p, 1, 1.0) == capacity_single(p, 1.0));
    REQUIRE(capacity_unentangled(p, 4, 1.0) == 2.0 * capacity_single(p, 1.0));
  }
  REQUIRE_THAT(capacity_unentangled(kPi, 2, 1.0), WithinAbs(2.0 * std::sqrt(2.0), 1e-12));
}

TEST_CASE("bosonic reference constant", "[capacity]") {
  // sqrt(pi/3)/ln 2 evaluates to 1.4763483667636277.
  REQUIRE_THAT(capacity_bosonic_ref(1.0, 1.0), WithinAbs(1.4763483667636277, 1e-12));
  for (double p : {0.5, 2.0, 9.0}) {
    const double ratio = capacity_bosonic_ref(p, 1.0) / capacity_single(p, 1.0);
    REQUIRE_THAT(ratio, WithinAbs(1.3083796739741305, 1e-12));
  }
}

TEST_CASE("entangled over unentangled ratio", "[capacity]") {
  for (int m = 1; m <= 16; ++m) {
    const double expected = std::sqrt(m / (2.0 * (1.0 - std::ldexp(1.0, -m))));
    for (double p : {0.3, 1.0, 5.0}) {
      REQUIRE_THAT(capacity_entangled(p, m, 1.0) / capacity_unentangled(p, m, 1.0),
                   WithinRel(expected, 1e-12));
    }
  }
  REQUIRE_THAT(capacity_entangled(1.0, 8, 1.0) / capacity_unentangled(1.0, 8, 1.0),
               WithinAbs(2.0039177314724785, 1e-10));
}

TEST_CASE("entangled capacity matches the energy-accounting oracle", "[capacity]") {
  for (int m : {1, 2, 3, 4, 5, 6}) {
    for (double p : {0.37, 1.0, 4.2}) {
      const double dt = window_for_power(p, m, 1.0);
      REQUIRE_THAT(capacity_entangled(p, m, 1.0), WithinRel(m / dt, 1e-10));
    }
  }
}

TEST_CASE("all rates scale as sqrt(P)", "[capacity]") {
  for (double p : {0.6, 2.4}) {
    REQUIRE_THAT(capacity_entangled(4.0 * p, 5, 1.0),
                 WithinRel(2.0 * capacity_entangled(p, 5, 1.0), 1e-12));
    REQUIRE_THAT(capacity_unentangled(4.0 * p, 5, 1.0),
                 WithinRel(2.0 * capacity_unentangled(p, 5, 1.0), 1e-12));
    REQUIRE_THAT(capacity_bosonic_ref(4.0 * p, 1.0),
                 WithinRel(2.0 * capacity_bosonic_ref(p, 1.0), 1e-12));
  }
}

TEST_CASE("figure sweep ordering and relations", "[capacity]") {
  const std::vector<double> powers{2.0, 0.5, 1.0};
  const std::vector<int> ms{1, 2, 8};
  const auto points = figure1_sweep(powers, ms, 1.0);
  REQUIRE(points.size() == 3 + 9 + 9 + 3);

  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    const bool ordered = a.mode < b.mode || (a.mode == b.mode && a.m < b.m) ||
                         (a.mode == b.mode && a.m == b.m && a.power < b.power);
    REQUIRE(ordered);
  }

  auto rate_of = [&](ChannelMode mode, int m, double p) {
    for (const auto& point : points) {
      if (point.mode == mode && point.m == m && point.power == p) return point.rate;
    }
    throw std::logic_error("missing sweep point");
  };
  for (double p : powers) {
    for (int m : {2, 8}) {
      REQUIRE(rate_of(ChannelMode::entangled, m, p) > rate_of(ChannelMode::unentangled, m, p));
      REQUIRE(rate_of(ChannelMode::unentangled, m, p) > rate_of(ChannelMode::single, 1, p));
    }
    REQUIRE_THAT(rate_of(ChannelMode::entangled, 1, p),
                 WithinRel(rate_of(ChannelMode::single, 1, p), 1e-12));
    REQUIRE_THAT(rate_of(ChannelMode::entangled, 8, p) / rate_of(ChannelMode::unentangled, 8, p),
                 WithinAbs(2.0039177314724785, 1e-10));
  }

  REQUIRE_THROWS_AS(figure1_sweep(std::vector<double>{}, ms, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(figure1_sweep(powers, std::vector<int>{0}, 1.0), std::invalid_argument);
}
