#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ellband/errors.hpp"
#include "ellband/residual.hpp"
#include "ellband/susy.hpp"
#include "ellband/tolerances.hpp"

using namespace ellband;

namespace {

// Max |f - c*g| over a grid after fitting the scalar c: proportionality test
// for wavefunctions that the tables list only up to normalization.
double proportional_deviation(const std::function<double(double)>& f,
                              const std::function<double(double)>& g, double L) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double x = L * (i + 0.5) / 400.0;
    num += f(x) * g(x);
    den += g(x) * g(x);
  }
  const double c = num / den;
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double x = L * (i + 0.5) / 400.0;
    worst = std::max(worst, std::abs(f(x) - c * g(x)));
    scale = std::max(scale, std::abs(f(x)));
  }
  return worst / scale;
}

}  // namespace

TEST_CASE("superpotential closed forms") {
  const double m = 0.5;
  const Modulus mod(m);
  const Deltas dl = Deltas::at(2.0, m);

  SUBCASE("a = 2 ground") {
    const EdgeSet set = lame_states(2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    for (int i = 1; i < 40; ++i) {
      const double x = -2.0 + 4.0 * i / 40.0;
      const JacobiTriple t = jacobi(x, mod);
      const double expected = 6.0 * m * t.sn * t.cn * t.dn /
                              (1.0 + m + dl.delta - 3.0 * m * t.sn * t.sn);
      CHECK(w(x) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("dn^a ground of the one-state family") {
    for (double a : {1.0, 2.0, 2.7}) {
      const EdgeSet set = table3_states(a, 1, mod);
      const Superpotential w = superpotential_from_ground(set.states[0]);
      for (int i = 1; i < 30; ++i) {
        const double x = -1.5 + 3.0 * i / 30.0;
        const JacobiTriple t = jacobi(x, mod);
        CHECK(w(x) == doctest::Approx(a * m * t.sn * t.cn / t.dn).epsilon(1e-12));
      }
    }
  }

  SUBCASE("(63/4, 3/4) ground: two-term form") {
    const EdgeSet set = named_states(NamedPotential::p63_4_q3_4, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const double d9 = Deltas::at(0.0, m).delta9;
    for (int i = 1; i < 30; ++i) {
      const double x = -1.5 + 3.0 * i / 30.0;
      const JacobiTriple t = jacobi(x, mod);
      const double expected =
          1.5 * m * t.sn * t.cn / t.dn -
          24.0 * m * t.sn * t.cn * t.dn /
              (12.0 * m * t.sn * t.sn - 2.0 - 5.0 * m - d9);
      CHECK(w(x) == doctest::Approx(expected).epsilon(1e-11));
    }
  }

  SUBCASE("three-state family ground: two-term form at general a") {
    // W = m(a-2) sn cn / dn - 2m(2a-1) sn cn dn / [m(1-a) - 1 - d4 + m(2a-1) sn^2]
    // q = (a-2)(a-3) >= 0 needs a <= 2 or a >= 3.
    for (double a : {1.0, 2.0, 3.3}) {
      const EdgeSet set = table3_states(a, 3, mod);
      REQUIRE(set.states[0].nodes == 0);
      const Superpotential w = superpotential_from_ground(set.states[0]);
      const double d4 = Deltas::at(a, m).delta4;
      for (int i = 1; i < 30; ++i) {
        const double x = -1.5 + 3.0 * i / 30.0;
        const JacobiTriple t = jacobi(x, mod);
        const double denom = m * (1.0 - a) - 1.0 - d4 + m * (2.0 * a - 1.0) * t.sn * t.sn;
        const double expected = m * (a - 2.0) * t.sn * t.cn / t.dn -
                                2.0 * m * (2.0 * a - 1.0) * t.sn * t.cn * t.dn / denom;
        CHECK(w(x) == doctest::Approx(expected).epsilon(1e-11));
      }
    }
  }

  SUBCASE("states with nodes are rejected") {
    const EdgeSet set = lame_states(2, mod);
    CHECK_THROWS_AS(superpotential_from_ground(set.states[1]), std::domain_error);
  }
}

TEST_CASE("superpotential invariants: odd, zero mean, bounded zero modes") {
  for (double m : {0.3, 0.7, 0.95}) {
    const Modulus mod(m);
    std::vector<Superpotential> ws;
    ws.push_back(superpotential_from_ground(lame_states(2, mod).states[0]));
    ws.push_back(superpotential_from_ground(lame_states(3, mod).states[0]));
    ws.push_back(superpotential_from_ground(named_states(NamedPotential::p6_q6, mod).states[0]));
    for (const Superpotential& w : ws) {
      const double L = w.period();
      for (int i = 1; i <= 20; ++i) {
        const double x = L * i / 20.5;
        CHECK(std::abs(w(x) + w(-x)) < tol::superpotential_odd);
        CHECK(std::abs(w(x + L) - w(x)) < 1e-9);
      }
      // Both zero modes exp(+/- int W) stay bounded over one period.
      double integral = 0.0, hi = 0.0, lo = 0.0;
      const int n = 4000;
      for (int i = 0; i < n; ++i) {
        const double x0 = L * i / n, x1 = L * (i + 1) / n;
        integral += 0.5 * (w(x0) + w(x1)) * (L / n);
        hi = std::max(hi, integral);
        lo = std::min(lo, integral);
      }
      CHECK(std::abs(integral) < 1e-7);
      CHECK(std::isfinite(std::exp(hi)));
      CHECK(std::isfinite(std::exp(-lo)));
      CHECK(std::exp(hi) < 1e6);
      CHECK(std::exp(-lo) < 1e6);
    }
  }
}

TEST_CASE("partner potentials") {
  const double m = 0.5;
  const Modulus mod(m);

  SUBCASE("a = 2: explicit partner form") {
    const EdgeSet set = lame_states(2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const Deltas dl = Deltas::at(2.0, m);
    for (int i = 0; i < 60; ++i) {
      const double x = -2.0 + 4.0 * i / 59.0;
      const JacobiTriple t = jacobi(x, mod);
      const double vm = set.potential(x);
      const double denom = 1.0 + m + dl.delta - 3.0 * m * t.sn * t.sn;
      const double vp = -vm + 72.0 * m * m * t.sn * t.sn * t.cn * t.cn * t.dn * t.dn /
                                  (denom * denom);
      CHECK(pair.v_minus(x) == doctest::Approx(vm).epsilon(1e-10));
      CHECK(pair.v_plus(x) == doctest::Approx(vp).epsilon(1e-10));
      // V+ = -V- + 2 W^2 pointwise.
      CHECK(std::abs(pair.v_plus(x) + pair.v_minus(x) - 2.0 * w(x) * w(x)) < 1e-8);
    }
  }

  SUBCASE("one-state family: both partners in closed form") {
    const double a = 2.4;
    const EdgeSet set = table3_states(a, 1, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, 2.0 * ellip_k(mod));
    for (int i = 0; i < 60; ++i) {
      const double x = -2.0 + 4.0 * i / 59.0;
      const JacobiTriple t = jacobi(x, mod);
      const double cd2 = t.cn * t.cn / (t.dn * t.dn);
      const double vm = (a - 1.0) * a * m * cd2 + m * a * (a + 1.0) * t.sn * t.sn -
                        m * a * a;
      const double vp = a * (a + 1.0) * m * cd2 + m * (a - 1.0) * a * t.sn * t.sn -
                        m * a * a;
      CHECK(pair.v_minus(x) == doctest::Approx(vm).epsilon(1e-10));
      CHECK(pair.v_plus(x) == doctest::Approx(vp).epsilon(1e-10));
    }
  }

  SUBCASE("(2,2): partner matches the closed form") {
    const EdgeSet set = named_states(NamedPotential::p2_q2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const double kp = std::sqrt(1.0 - m);
    for (int i = 0; i < 60; ++i) {
      const double x = -1.0 + 2.0 * i / 59.0;
      const JacobiTriple t = jacobi(x, mod);
      const double denom = t.dn * t.dn + kp;
      const double vp = 2.0 - m - 2.0 * kp -
                        8.0 * kp * m * m * t.sn * t.sn * t.cn * t.cn / (denom * denom);
      CHECK(pair.v_plus(x) == doctest::Approx(vp).epsilon(1e-9));
    }
  }
}

TEST_CASE("partner state mapping") {
  const double m = 0.5;
  const Modulus mod(m);

  SUBCASE("a = 3 ground maps to 1/psi0") {
    const EdgeSet set = lame_states(3, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const AnalyticState mapped = map_state(w, set.states[0], true);
    CHECK(mapped.energy == 0.0);
    CHECK(mapped.nodes == 0);
    CHECK(mapped.period_class == PeriodClass::periodic);
    const Deltas dl = Deltas::at(3.0, m);
    const auto expected = [&](double x) {
      const JacobiTriple t = jacobi(x, mod);
      return 1.0 / (t.dn * (1.0 + 2.0 * m + dl.delta1 - 5.0 * m * t.sn * t.sn));
    };
    const auto got = [&](double x) { return mapped.psi(x); };
    CHECK(proportional_deviation(got, expected, set.potential.period()) < 1e-10);
  }

  SUBCASE("a = 2 two-node state maps to the tabulated partner form") {
    const EdgeSet set = lame_states(2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const Deltas dl = Deltas::at(2.0, m);
    // State at E = 2 delta + 2 - m has psi(-) = sn cn.
    const auto it = std::find_if(set.states.begin(), set.states.end(), [&](const auto& s) {
      return std::abs(s.energy - (2.0 * dl.delta + 2.0 - m)) < 1e-12;
    });
    REQUIRE(it != set.states.end());
    const AnalyticState mapped = map_state(w, *it, false);
    CHECK(mapped.energy == it->energy);
    const double B = dl.B;
    const auto expected = [&](double x) {
      const JacobiTriple t = jacobi(x, mod);
      // dn [B + sn^2 (3m - 2B)] / psi0
      return t.dn * (B + t.sn * t.sn * (3.0 * m - 2.0 * B)) /
             (B - 3.0 * m * t.sn * t.sn);
    };
    const auto got = [&](double x) { return mapped.psi(x); };
    CHECK(proportional_deviation(got, expected, set.potential.period()) < 1e-10);
  }

  SUBCASE("energies are copied exactly; node count and class recomputed") {
    const EdgeSet set = lame_states(2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    for (std::size_t i = 0; i < set.states.size(); ++i) {
      const AnalyticState mapped = map_state(w, set.states[i], i == 0);
      CHECK(mapped.energy == set.states[i].energy);
      CHECK(mapped.nodes == set.states[i].nodes);
      CHECK((mapped.period_class == set.states[i].period_class));
    }
  }

  SUBCASE("excited map on the ground state is rejected") {
    const EdgeSet set = lame_states(2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    CHECK_THROWS_AS(map_state(w, set.states[0], false), numerical_error);
  }
}

TEST_CASE("mapped partner states satisfy the V+ Schroedinger equation") {
  for (double m : {0.5}) {
    const Modulus mod(m);
    std::vector<EdgeSet> sets;
    sets.push_back(lame_states(2, mod));
    sets.push_back(lame_states(3, mod));
    sets.push_back(named_states(NamedPotential::p6_q2, mod));
    sets.push_back(named_states(NamedPotential::p2_q2, mod));
    sets.push_back(named_states(NamedPotential::p6_q6, mod));
    sets.push_back(named_states(NamedPotential::p63_4_q3_4, mod));
    for (const EdgeSet& set : sets) {
      const Superpotential w = superpotential_from_ground(set.states[0]);
      const PartnerPair pair = partner_pair(w, set.potential.period());
      for (std::size_t i = 0; i < set.states.size(); ++i) {
        const AnalyticState mapped = map_state(w, set.states[i], i == 0);
        const auto psi = [&mapped](double x) { return mapped.psi(x); };
        const double r = schrodinger_residual(pair.v_plus, psi, mapped.energy,
                                              set.potential.period());
        CHECK_MESSAGE(r < tol::residual, mapped.provenance, " V+ residual = ", r);
      }
    }
  }
}

TEST_CASE("self-isospectrality verdicts") {
  SUBCASE("a = 1 is self-isospectral") {
    const EdgeSet set = lame_states(1, Modulus(0.5));
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const auto res = self_isospectral_deviation(partner_pair(w, set.potential.period()));
    CHECK(res.deviation < tol::self_iso_pass);
    CHECK(res.verdict == SelfIsoVerdict::self_isospectral);
  }

  SUBCASE("the one-state family is self-isospectral at any a") {
    for (double a : {1.4, 2.7, 3.3}) {
      const EdgeSet set = table3_states(a, 1, Modulus(0.6));
      const Superpotential w = superpotential_from_ground(set.states[0]);
      const auto res =
          self_isospectral_deviation(partner_pair(w, 2.0 * ellip_k(Modulus(0.6))));
      CHECK(res.deviation < tol::self_iso_pass);
    }
  }

  SUBCASE("a = 2, 3 are not, at several m") {
    for (double m : {0.5, 0.8, 0.998}) {
      for (int a : {2, 3}) {
        const EdgeSet set = lame_states(a, Modulus(m));
        const Superpotential w = superpotential_from_ground(set.states[0]);
        const auto res =
            self_isospectral_deviation(partner_pair(w, set.potential.period()));
        CHECK(res.deviation > tol::self_iso_fail);
        CHECK(res.verdict == SelfIsoVerdict::distinct);
      }
    }
  }

  SUBCASE("(6,6) is not") {
    const EdgeSet set = named_states(NamedPotential::p6_q6, Modulus(0.5));
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const auto res = self_isospectral_deviation(partner_pair(w, set.potential.period()));
    CHECK(res.deviation > tol::self_iso_fail);
  }

  SUBCASE("(6,2) is: it sits on the one-state parabola at a = 2") {
    const EdgeSet set = named_states(NamedPotential::p6_q2, Modulus(0.7));
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const auto res = self_isospectral_deviation(partner_pair(w, set.potential.period()));
    CHECK(res.deviation < tol::self_iso_pass);
    CHECK(res.verdict == SelfIsoVerdict::self_isospectral);
  }

  SUBCASE("(2,2) is, both numerically and through the half-shift identities") {
    const double m = 0.5;
    const Modulus mod(m);
    const EdgeSet set = named_states(NamedPotential::p2_q2, mod);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const auto res = self_isospectral_deviation(pair);
    CHECK(res.deviation < tol::self_iso_pass);

    // Same statement via the closed-form half-quarter-period translation:
    // V-(x - K/2) composed from the shift identities equals V+(x).
    const double K = ellip_k(mod);
    for (int i = 0; i < 200; ++i) {
      const double x = -K + 2.0 * K * i / 199.0;
      const JacobiTriple shifted = jacobi_shift(x - K, mod, QuarterShift::half_k);
      const double vm_shifted = set.potential.eval_triple(shifted);
      CHECK(std::abs(pair.v_plus(x) - vm_shifted) < tol::self_iso_pass);
    }
  }
}
