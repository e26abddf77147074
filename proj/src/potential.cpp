#include "ellband/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ellband/tolerances.hpp"

namespace ellband {

namespace {

double strength_to_param(double s) {
  return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * s));
}

}  // namespace

PotentialSpec::PotentialSpec(double a, double b, Modulus m, double offset, bool swapped)
    : a_(a), b_(b), m_(m), offset_(offset), swapped_(swapped) {}

PotentialSpec PotentialSpec::from_ab(double a, double b, Modulus m, double offset) {
  if (a * (a + 1.0) < 0.0 || b * (b + 1.0) < 0.0)
    throw std::domain_error("potential strengths a(a+1), b(b+1) must be nonnegative");
  return PotentialSpec(a, b, m, offset, false);
}

PotentialSpec PotentialSpec::from_pq(double p, double q, Modulus m, double offset) {
  if (p < 0.0 || q < 0.0)
    throw std::domain_error("potential strengths p, q must be nonnegative");
  const bool swap = p < q;
  if (swap) std::swap(p, q);
  return PotentialSpec(strength_to_param(p), strength_to_param(q), m, offset, swap);
}

double PotentialSpec::operator()(double x) const {
  return eval_triple(jacobi(x, m_));
}

double PotentialSpec::eval_triple(const JacobiTriple& t) const {
  const double m = m_.value();
  return p() * m * t.sn * t.sn + q() * m * t.cn * t.cn / (t.dn * t.dn) + offset_;
}

double PotentialSpec::period() const {
  const double quarter = ellip_k(m_);
  return std::abs(p() - q()) <= 1e-12 ? quarter : 2.0 * quarter;
}

double PotentialSpec::second_derivative(const JacobiTriple& t) const {
  const double m = m_.value();
  const double sn2 = t.sn * t.sn, cn2 = t.cn * t.cn, dn2 = t.dn * t.dn;
  const double sc = sn2 * cn2;
  return 2.0 * m *
         (p() * (dn2 * (cn2 - sn2) - m * sc) -
          q() * (1.0 - m) * ((cn2 - sn2) / dn2 + 3.0 * m * sc / (dn2 * dn2)));
}

std::vector<Extremum> PotentialSpec::extrema() const {
  if (p() == 0.0 && q() == 0.0)
    throw std::domain_error("extrema of the zero potential are undefined");
  const double m = m_.value();
  const double quarter = ellip_k(m_);

  std::vector<double> xs{0.0, quarter};
  // dn^4(x0) = (1-m) q/p has interior solutions exactly in the critical range
  // q(1-m) <= p <= q/(1-m).
  if (p() > 0.0 && q() > 0.0 && m < 1.0) {
    const double target = (1.0 - m) * q() / p();
    const double lo = (1.0 - m) * (1.0 - m);
    if (target >= lo - 1e-15 && target <= 1.0 + 1e-15) {
      // dn^4 decreases monotonically from 1 to (1-m)^2 on [0, K].
      double xl = 0.0, xr = quarter;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (xl + xr);
        const JacobiTriple t = jacobi(mid, m_);
        const double d4 = t.dn * t.dn * t.dn * t.dn;
        (d4 > target ? xl : xr) = mid;
      }
      const double x0 = 0.5 * (xl + xr);
      if (x0 > 1e-9 && x0 < quarter - 1e-9) {
        xs.push_back(x0);
        xs.push_back(2.0 * quarter - x0);
      }
    }
  }
  std::sort(xs.begin(), xs.end());

  std::vector<Extremum> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const JacobiTriple t = jacobi(x, m_);
    const double v = eval_triple(t);
    const double curv = second_derivative(t);
    ExtremumKind kind;
    if (std::abs(curv) < tol::extremum_curvature)
      kind = ExtremumKind::degenerate;
    else if (curv < 0.0)
      kind = ExtremumKind::maximum;
    else
      kind = ExtremumKind::local_minimum;
    out.push_back(Extremum{x, v, kind});
  }

  // Promote the lowest minima to global.
  double vmin = out.front().value;
  for (const Extremum& e : out)
    if (e.kind == ExtremumKind::local_minimum) vmin = std::min(vmin, e.value);
  for (Extremum& e : out)
    if (e.kind == ExtremumKind::local_minimum && e.value <= vmin + 1e-9)
      e.kind = ExtremumKind::global_minimum;
  return out;
}

PotentialSpec PotentialSpec::with_offset(double offset) const {
  PotentialSpec out = *this;
  out.offset_ = offset;
  return out;
}

std::vector<std::pair<int, double>> on_parabola(double p, double q) {
  if (p < 0.0 || q < 0.0)
    throw std::domain_error("parabola membership requires p, q >= 0");
  const double a = strength_to_param(p);
  std::vector<std::pair<int, double>> out;
  for (int n = 1; n <= 5; ++n) {
    const double qn = (a - n + 1.0) * (a - n);
    if (std::abs(q - qn) <= tol::parabola) out.emplace_back(n, a);
  }
  return out;
}

}  // namespace ellband
