#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ellband/potential.hpp"
#include "ellband/tolerances.hpp"

using namespace ellband;

TEST_CASE("evaluation at the sn = 0 and cn = 0 points") {
  const PotentialSpec v = PotentialSpec::from_pq(6.0, 2.0, Modulus(0.5));
  const double K = ellip_k(Modulus(0.5));
  CHECK(v(0.0) == doctest::Approx(1.0).epsilon(1e-12));   // q m
  CHECK(v(K) == doctest::Approx(3.0).epsilon(1e-12));     // p m

  const PotentialSpec zero = PotentialSpec::from_pq(0.0, 0.0, Modulus(0.5));
  for (double x : {-1.3, 0.0, 0.7, 2.9}) CHECK(zero(x) == doctest::Approx(0.0));
}

TEST_CASE("parameter conversion and canonicalization") {
  const PotentialSpec v = PotentialSpec::from_pq(6.0, 2.0, Modulus(0.5));
  CHECK(v.a() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(v.b() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(v.swapped());

  const PotentialSpec w = PotentialSpec::from_pq(2.0, 6.0, Modulus(0.5));
  CHECK(w.p() == doctest::Approx(6.0));
  CHECK(w.q() == doctest::Approx(2.0));
  CHECK(w.swapped());

  // from_ab keeps the given order: the tabulated families need p < q too.
  const PotentialSpec u = PotentialSpec::from_ab(1.0, 2.0, Modulus(0.5));
  CHECK(u.p() == doctest::Approx(2.0));
  CHECK(u.q() == doctest::Approx(6.0));

  CHECK_THROWS_AS(PotentialSpec::from_pq(-1.0, 0.0, Modulus(0.5)), std::domain_error);
  CHECK_THROWS_AS(PotentialSpec::from_ab(-0.5, 0.0, Modulus(0.5)), std::domain_error);
}

TEST_CASE("period rule") {
  const double K05 = ellip_k(Modulus(0.5));
  CHECK(std::abs(PotentialSpec::from_pq(6.0, 0.0, Modulus(0.5)).period() - 3.708) < 2e-3);
  CHECK(PotentialSpec::from_pq(6.0, 0.0, Modulus(0.5)).period() ==
        doctest::Approx(2.0 * K05).epsilon(1e-15));
  CHECK(PotentialSpec::from_pq(2.0, 2.0, Modulus(0.5)).period() ==
        doctest::Approx(K05).epsilon(1e-15));
  CHECK(PotentialSpec::from_pq(6.0, 6.0, Modulus(0.9)).period() ==
        doctest::Approx(ellip_k(Modulus(0.9))).epsilon(1e-15));
}

TEST_CASE("eval is periodic") {
  std::mt19937 rng(77001);
  std::uniform_real_distribution<double> pq(0.0, 12.0);
  std::uniform_real_distribution<double> md(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    double p = pq(rng), q = pq(rng);
    if (p < q) std::swap(p, q);
    const PotentialSpec v = PotentialSpec::from_pq(p, q, Modulus(md(rng)));
    const double L = v.period();
    for (int i = 0; i < 500; ++i) {
      const double x = -L + 2.0 * L * i / 499.0;
      CHECK(std::abs(v(x + L) - v(x)) < 1e-10);
    }
  }
}

TEST_CASE("(p,q) <-> (q,p) equivalence under a quarter-period shift") {
  std::mt19937 rng(77002);
  std::uniform_real_distribution<double> pq(0.0, 10.0);
  std::uniform_real_distribution<double> md(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = pq(rng), q = pq(rng), m = md(rng);
    const PotentialSpec v1 = PotentialSpec::from_ab(
        0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * p)), 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * q)),
        Modulus(m));
    const PotentialSpec v2 = PotentialSpec::from_ab(
        0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * q)), 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * p)),
        Modulus(m));
    const double K = ellip_k(Modulus(m));
    for (int i = 0; i < 100; ++i) {
      const double x = -2.0 * K + 4.0 * K * i / 99.0;
      CHECK(std::abs(v1(x + K) - v2(x)) < 1e-10);
    }
  }
}

namespace {

// Dense-grid oracle: every analytic extremum must be a grid-local extremum,
// and no grid-local extremum may be missing from the analytic list.
void cross_check_extrema(const PotentialSpec& v) {
  const double K = ellip_k(v.modulus());
  const double cell = 2.0 * K;
  const auto list = v.extrema();

  for (const Extremum& e : list) {
    // First derivative vanishes (central difference).
    const double h = 1e-6;
    const double d1 = (v(e.x + h) - v(e.x - h)) / (2.0 * h);
    CHECK(std::abs(d1) < tol::extremum_gradient);
    CHECK(v(e.x) == doctest::Approx(e.value).epsilon(1e-12));
  }

  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double x0 = cell * i / n;
    const double x1 = cell * (i + 1) / n;
    const double xm = 0.5 * (x0 + x1);
    const double va = v(x0), vb = v(xm), vc = v(x1);
    const bool grid_extremum = (vb - va) * (vc - vb) < 0.0;
    if (!grid_extremum) continue;
    const bool found = std::any_of(list.begin(), list.end(), [&](const Extremum& e) {
      return std::abs(e.x - xm) < 2.0 * cell / n + 1e-9 ||
             std::abs(e.x + cell - xm) < 2.0 * cell / n + 1e-9;
    });
    CHECK_MESSAGE(found, "grid extremum near x = ", xm, " missing from analytic list");
  }
}

}  // namespace

TEST_CASE("extrema families inside and outside the critical range") {
  // m below the critical value 1 - q/p: only the sn = 0 and cn = 0 families.
  const PotentialSpec low = PotentialSpec::from_pq(4.0, 2.0, Modulus(0.4));
  const auto le = low.extrema();
  CHECK(le.size() == 2);
  cross_check_extrema(low);

  // m above the critical value: the dn^4 family appears.
  const PotentialSpec high = PotentialSpec::from_pq(4.0, 2.0, Modulus(0.6));
  const auto he = high.extrema();
  CHECK(he.size() == 4);
  cross_check_extrema(high);

  // Maxima at x = 0 for small p, minima for large p (character change).
  const PotentialSpec small_p = PotentialSpec::from_pq(2.0, 2.0, Modulus(0.5));
  const PotentialSpec large_p = PotentialSpec::from_pq(8.0, 2.0, Modulus(0.5));
  CHECK(small_p.extrema().front().kind != ExtremumKind::maximum);
  CHECK(large_p.extrema().front().kind != ExtremumKind::maximum);
}

TEST_CASE("p = q extremum set is invariant under a half-cell shift, value-wise") {
  const PotentialSpec v = PotentialSpec::from_pq(2.0, 2.0, Modulus(0.5));
  const double K = ellip_k(Modulus(0.5));
  const auto list = v.extrema();
  cross_check_extrema(v);

  // Positions map onto positions under x -> x + K/2 ...
  for (const Extremum& e : list) {
    const double shifted = std::fmod(e.x + 0.5 * K, 2.0 * K);
    const bool match = std::any_of(list.begin(), list.end(), [&](const Extremum& o) {
      return std::abs(o.x - shifted) < 1e-7;
    });
    CHECK_MESSAGE(match, "no extremum at x + K/2 for x = ", e.x);
    // ... and the value at the shifted position is an extremal value too.
    const bool value_match = std::any_of(list.begin(), list.end(), [&](const Extremum& o) {
      return std::abs(o.value - v(shifted)) < 1e-9;
    });
    CHECK(value_match);
  }

  // The multiset of extremal values is unchanged by the shift.
  std::vector<double> before, after;
  for (const Extremum& e : list) {
    before.push_back(e.value);
    after.push_back(v(e.x + 0.5 * K));
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(before[i] == doctest::Approx(after[i]).epsilon(1e-9));
}

TEST_CASE("solvability parabola membership") {
  const auto p20 = on_parabola(2.0, 0.0);
  REQUIRE(p20.size() == 2);
  CHECK(p20[0].first == 1);
  CHECK(p20[0].second == doctest::Approx(1.0));
  CHECK(p20[1].first == 2);
  CHECK(p20[1].second == doctest::Approx(1.0));

  const auto p62 = on_parabola(6.0, 2.0);
  REQUIRE(p62.size() == 2);  // the n = 1 and n = 4 curves intersect here
  CHECK(p62[0].first == 1);
  CHECK(p62[0].second == doctest::Approx(2.0));
  CHECK(p62[1].first == 4);

  const auto p120 = on_parabola(12.0, 0.0);
  REQUIRE(p120.size() == 2);
  CHECK(p120[0].first == 3);
  CHECK(p120[0].second == doctest::Approx(3.0));
  CHECK(p120[1].first == 4);

  CHECK(on_parabola(5.0, 1.0).empty());
}

TEST_CASE("membership satisfies the closed-form parabola equations") {
  // n = 1: (p-q)^2 = 2(p+q);  n = 2: (p-q)^2 = 8(p+q) - 12.
  for (double a : {0.5, 1.0, 1.7, 2.0, 3.25}) {
    const double p = a * (a + 1.0);
    const double q1 = a * (a - 1.0);
    if (q1 >= 0.0) {
      CHECK(std::abs((p - q1) * (p - q1) - 2.0 * (p + q1)) < 1e-9);
      const auto hits = on_parabola(p, q1);
      CHECK(std::any_of(hits.begin(), hits.end(), [](auto h) { return h.first == 1; }));
    }
    const double q2 = (a - 1.0) * (a - 2.0);
    if (q2 >= 0.0) {
      CHECK(std::abs((p - q2) * (p - q2) - (8.0 * (p + q2) - 12.0)) < 1e-9);
      const auto hits = on_parabola(p, q2);
      CHECK(std::any_of(hits.begin(), hits.end(), [](auto h) { return h.first == 2; }));
    }
  }
}
