#include "ellband/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ellband {

namespace {

constexpr int kMaxAgm = 32;

// AGM scale for one modulus value.  The scan-style callers evaluate millions
// of points at a fixed m, so the chain is cached per thread.
struct AgmChain {
  double m = -1.0;
  int n = 0;
  double a[kMaxAgm + 1];
  double c[kMaxAgm + 1];
  double quarter_period = 0.0;
};

const AgmChain& agm_chain(double m) {
  thread_local AgmChain chain;
  if (chain.m == m) return chain;
  chain.m = m;
  chain.a[0] = 1.0;
  chain.c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(chain.c[n]) > 1e-17 * chain.a[n] && n < kMaxAgm) {
    chain.a[n + 1] = 0.5 * (chain.a[n] + b);
    chain.c[n + 1] = 0.5 * (chain.a[n] - b);
    b = std::sqrt(chain.a[n] * b);
    ++n;
  }
  chain.n = n;
  chain.quarter_period = std::numbers::pi / (2.0 * chain.a[n]);
  return chain;
}

}  // namespace

Modulus::Modulus(double m) : m_(m) {
  if (!(m >= 0.0 && m <= 1.0))
    throw std::domain_error("elliptic modulus m must lie in [0, 1], got " +
                            std::to_string(m));
}

double ellip_k(Modulus mod) {
  const double m = mod.value();
  if (m == 1.0) throw std::domain_error("K(m) diverges as m -> 1");
  if (m == 0.0) return std::numbers::pi / 2.0;
  return agm_chain(m).quarter_period;
}

JacobiTriple jacobi(double x, Modulus mod) {
  const double m = mod.value();
  if (m == 1.0)
    throw std::domain_error("jacobi elliptic kernel requires m < 1");
  if (m == 0.0) return {std::sin(x), std::cos(x), 1.0};

  const AgmChain& chain = agm_chain(m);
  const double four_k = 4.0 * chain.quarter_period;
  double u = std::fmod(x, four_k);
  if (u < 0.0) u += four_k;

  // Backward phase recurrence through the Landen ladder.
  double phi = std::ldexp(chain.a[chain.n] * u, chain.n);
  for (int i = chain.n; i > 0; --i) {
    const double s = std::clamp(chain.c[i] * std::sin(phi) / chain.a[i], -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = (1 - m) + m cn^2 keeps both Pythagorean identities exact and is
  // stable as sn -> 1; dn > 0 everywhere for m < 1.
  const double dn = std::sqrt((1.0 - m) + m * cn * cn);
  return {sn, cn, dn};
}

JacobiTriple jacobi_shift(double x, Modulus mod, QuarterShift shift) {
  const double m = mod.value();
  const JacobiTriple t = jacobi(x, mod);
  switch (shift) {
    case QuarterShift::two_k:
      return {-t.sn, -t.cn, t.dn};
    case QuarterShift::k: {
      const double kp = std::sqrt(1.0 - m);
      return {t.cn / t.dn, -kp * t.sn / t.dn, kp / t.dn};
    }
    case QuarterShift::half_k: {
      const double kp = std::sqrt(1.0 - m);
      const double quartic = std::sqrt(kp);  // (1-m)^(1/4)
      const double root = std::sqrt(1.0 + kp);
      const double denom = t.dn * t.dn + kp;
      const double sn = root * (kp * t.sn + t.cn * t.dn) / denom;
      const double cn = quartic * root * (t.cn - t.sn * t.dn) / denom;
      const double dn = quartic * ((1.0 + kp) * t.dn - m * t.sn * t.cn) / denom;
      return {sn, cn, dn};
    }
  }
  throw std::logic_error("unknown shift");
}

}  // namespace ellband
