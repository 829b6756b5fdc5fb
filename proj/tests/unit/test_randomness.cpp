#include <doctest.h>

#include <cmath>

#include "redox/error.h"
#include "redox/randomness.h"

using namespace redox;

TEST_CASE("bound at evaluation scale: divisor (4!)^64, log10 = 88.33") {
  const RandomnessBound b = compute_bound(1'280'000, 5000, 64);
  CHECK(b.pcs_size == 4);
  CHECK(b.per_vc_files == 256);
  CHECK(b.log10_divisor == doctest::Approx(64.0 * std::log10(24.0)).epsilon(1e-12));
  CHECK(b.log10_divisor == doctest::Approx(88.33).epsilon(0.0002));
  // 10^88.33 is the 2.16e88 figure.
  CHECK(std::pow(10.0, b.log10_divisor - 88.0) == doctest::Approx(2.16).epsilon(0.005));
  CHECK(b.log10_lower_bound == doctest::Approx(b.log10_full - b.log10_divisor));
  CHECK(b.log10_lower_bound > 400);  // the formula's own value is ~1e418.6
  CHECK_FALSE(b.exact_available);
}

TEST_CASE("G=1 degenerates: divisor 1, bound equals full randomness") {
  const RandomnessBound b = compute_bound(64, 8, 8);  // F/M = 8 = K
  CHECK(b.pcs_size == 1);
  CHECK(b.log10_divisor == doctest::Approx(0.0));
  CHECK(b.log10_lower_bound == doctest::Approx(b.log10_full));
  CHECK(b.exact_available);
  CHECK(b.exact_lower_bound == 40320);  // 8!
}

TEST_CASE("exact integer bound: 4!/(2!)^2 = 6") {
  const RandomnessBound b = compute_bound(4, 1, 2);
  CHECK(b.exact_available);
  CHECK(b.exact_lower_bound == 6);
}

TEST_CASE("log-domain evaluation matches exact integers to 1e-9 relative") {
  for (uint64_t k = 1; k <= 10; ++k)
    for (uint64_t g = 1; g <= 10; ++g) {
      if (k * g > 20) continue;
      const RandomnessBound b = compute_bound(k * g, 1, k);
      REQUIRE(b.exact_available);
      const double from_logs = std::pow(10.0, b.log10_lower_bound);
      CHECK(std::abs(from_logs - static_cast<double>(b.exact_lower_bound)) <=
            1e-9 * static_cast<double>(b.exact_lower_bound));
    }
}

TEST_CASE("bound rejects inadmissible parameters") {
  CHECK_THROWS_AS(compute_bound(10, 3, 2), ConfigError);  // F % M
  CHECK_THROWS_AS(compute_bound(12, 2, 4), ConfigError);  // (F/M) % K
  CHECK_THROWS_AS(compute_bound(0, 1, 1), ConfigError);
}

TEST_CASE("enumeration oracle: G=1 reaches every permutation") {
  CHECK(enumerate_reachable(4, 4) == 24);
  CHECK(enumerate_reachable(6, 6) == 720);
}

TEST_CASE("enumeration oracle: strict reduction, bound respected") {
  // Frozen counts from the exhaustive runs; the fixed tie-break protocol
  // lands exactly on the counting bound for these shapes.
  const uint64_t c422 = enumerate_reachable(4, 2);  // L=4, K=2, G=2
  CHECK(c422 == 6);
  CHECK(c422 >= 6);    // bound 4!/(2!)^2
  CHECK(c422 < 24);    // strict reduction

  const uint64_t c623 = enumerate_reachable(6, 2);  // L=6, K=2, G=3
  CHECK(c623 == 20);
  CHECK(c623 >= 20);   // bound 6!/(3!)^2
  CHECK(c623 < 720);

  const uint64_t c632 = enumerate_reachable(6, 3);  // L=6, K=3, G=2
  CHECK(c632 == 90);   // bound 6!/(2!)^3 = 90
}

TEST_CASE("oracle sandwich across every feasible tiny shape") {
  for (uint64_t per_vc : {2, 4, 6, 8}) {
    for (uint64_t k = 1; k <= per_vc; ++k) {
      if (per_vc % k != 0) continue;
      const uint64_t g = per_vc / k;
      const RandomnessBound b = compute_bound(per_vc, 1, k);
      const uint64_t count = enumerate_reachable(per_vc, k);
      uint64_t full = 1;
      for (uint64_t i = 2; i <= per_vc; ++i) full *= i;
      CHECK(count >= b.exact_lower_bound);
      CHECK(count <= full);
      if (g >= 2 && k >= 2) CHECK(count < full);  // redirection strictly reduces
      if (g == 1) CHECK(count == full);
    }
  }
}

TEST_CASE("enumeration guard rejects infeasible spaces") {
  CHECK_THROWS_WITH_AS(enumerate_reachable(12, 2), doctest::Contains("guard"), ConfigError);
}

TEST_CASE("uniformity diagnostics: seeded greedy passes, 'first' is flagged") {
  const UniformityReport greedy =
      position_uniformity(2, 3, 10'000, 0.001, /*seed=*/1234, RefillPolicy::greedy);
  CHECK(greedy.order_bins == 6);
  CHECK_FALSE(greedy.flagged_order);
  CHECK_FALSE(greedy.flagged_delivery);

  const UniformityReport degenerate =
      position_uniformity(2, 3, 10'000, 0.001, 1234, RefillPolicy::greedy_first);
  CHECK(degenerate.flagged_order);  // the negative control: fixed tie-breaks skew the order
}

TEST_CASE("uniformity diagnostics: G=1 reduces to a slot-order test") {
  const UniformityReport r =
      position_uniformity(4, 1, 2000, 0.001, 7, RefillPolicy::greedy);
  CHECK(r.order_bins == 1);
  CHECK_FALSE(r.flagged_order);  // vacuous
  CHECK(r.delivery_bins == 4);
  CHECK_FALSE(r.flagged_delivery);
  CHECK_THROWS_AS(position_uniformity(2, 3, 10, 0.001, 1), ConfigError);  // trials guard
}
