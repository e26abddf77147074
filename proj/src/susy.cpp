#include "ellband/susy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ellband/errors.hpp"
#include "ellband/tolerances.hpp"

namespace ellband {

namespace {

double rational_eval(const EllExpr& num, const EllExpr& den, const JacobiTriple& t) {
  return num.eval(t) / den.eval(t);
}

}  // namespace

Superpotential::Superpotential(EllExpr num, EllExpr den, Modulus m, double period,
                               std::string source)
    : num_(std::move(num)),
      den_(std::move(den)),
      dnum_(num_.derivative(m.value())),
      dden_(den_.derivative(m.value())),
      m_(m),
      period_(period),
      source_(std::move(source)) {
  // Typed invariants: oddness and zero mean over one period.
  for (int i = 1; i <= 7; ++i) {
    const double x = period_ * i / 7.9;
    if (std::abs((*this)(x) + (*this)(-x)) > tol::superpotential_odd)
      throw numerical_error("superpotential is not odd: " + source_);
  }
  const int n = 4096;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x0 = period_ * i / n;
    const double x1 = period_ * (i + 1) / n;
    integral += (period_ / n) *
                ((*this)(x0) + 4.0 * (*this)(0.5 * (x0 + x1)) + (*this)(x1)) / 6.0;
  }
  if (std::abs(integral) > tol::superpotential_mean)
    throw numerical_error("superpotential has nonzero mean over one period: " + source_);
}

double Superpotential::operator()(double x) const {
  return rational_eval(num_, den_, jacobi(x, m_));
}

double Superpotential::derivative(double x) const {
  const JacobiTriple t = jacobi(x, m_);
  const double n = num_.eval(t);
  const double d = den_.eval(t);
  return (dnum_.eval(t) * d - n * dden_.eval(t)) / (d * d);
}

Superpotential superpotential_from_ground(const AnalyticState& psi0) {
  if (psi0.nodes != 0)
    throw std::domain_error(
        "superpotential requires a nodeless ground state (got nodes > 0): " +
        psi0.provenance);
  const Modulus m = psi0.psi.modulus();
  // W = -psi0'/psi0 with psi0 = n/d:  W = -(n'd - nd')/(nd).
  const EllExpr& n = psi0.psi.numerator();
  const EllExpr& d = psi0.psi.denominator();
  const EllExpr dn = n.derivative(m.value());
  const EllExpr dd = d.derivative(m.value());
  EllExpr w_num = (dn * d - n * dd).scaled(-1.0);
  EllExpr w_den = n * d;
  return Superpotential(std::move(w_num), std::move(w_den), m, psi0.potential_period,
                        psi0.provenance);
}

PartnerPair partner_pair(const Superpotential& w, double period) {
  auto v_minus = [w](double x) {
    const double wx = w(x);
    return wx * wx - w.derivative(x);
  };
  auto v_plus = [w](double x) {
    const double wx = w(x);
    return wx * wx + w.derivative(x);
  };
  return PartnerPair{std::move(v_minus), std::move(v_plus), w, period};
}

AnalyticState map_state(const Superpotential& w, const AnalyticState& state,
                        bool is_ground) {
  const Modulus m = state.psi.modulus();
  const double L = state.potential_period;

  const EllExpr& n = state.psi.numerator();
  const EllExpr& d = state.psi.denominator();
  WaveFunction mapped = [&]() -> WaveFunction {
    if (is_ground) {
      // psi0(+) = 1/psi0(-)
      return WaveFunction(d, n, m, 1.0 / state.psi.scale());
    }
    // psi(+) = psi' + W psi with psi = n/d, W = wn/wd:
    //   ((n'd - nd') wd + n d wn) / (d^2 wd)
    const EllExpr dn = n.derivative(m.value());
    const EllExpr dd = d.derivative(m.value());
    EllExpr num = (dn * d - n * dd) * w.denominator() + (n * d) * w.numerator();
    EllExpr den = d * d * w.denominator();
    return WaveFunction(std::move(num), std::move(den), m, state.psi.scale());
  }();

  // Scale reference for the degenerate-output check: the excited-state map
  // applied to the ground state vanishes identically.
  double raw_peak = 0.0, input_peak = 0.0, w_peak = 0.0;
  const int grid = 1024;
  for (int i = 0; i < grid; ++i) {
    const double x = L * i / grid;
    raw_peak = std::max(raw_peak, std::abs(mapped(x)));
    input_peak = std::max(input_peak, std::abs(state.psi(x)));
    w_peak = std::max(w_peak, std::abs(w(x)));
  }
  if (!is_ground && raw_peak < 1e-9 * input_peak * (1.0 + w_peak))
    throw numerical_error(
        "partner map produced an identically zero state (excited-state map "
        "applied to the ground state): " + state.provenance);

  mapped = mapped.rescaled(1.0 / raw_peak);

  // Recompute, never copy, the period class and node count.
  double same = 0.0, flipped = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double x = L * i / 256.0;
    same = std::max(same, std::abs(mapped(x + L) - mapped(x)));
    flipped = std::max(flipped, std::abs(mapped(x + L) + mapped(x)));
  }
  PeriodClass pc;
  if (same < tol::period_class)
    pc = PeriodClass::periodic;
  else if (flipped < tol::period_class)
    pc = PeriodClass::antiperiodic;
  else
    throw numerical_error("mapped state is neither periodic nor antiperiodic: " +
                          state.provenance);

  AnalyticState out;
  out.energy = state.energy;
  out.psi = mapped;
  out.period_class = pc;
  out.nodes = count_nodes([&mapped](double x) { return mapped(x); }, L);
  out.provenance = "partner/" + state.provenance;
  out.form = "partner";
  out.potential_period = L;
  return out;
}

SelfIsoResult self_isospectral_deviation(const PartnerPair& pair) {
  const double L = pair.period;
  int n = 2000;
  double dev = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    dev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = L * i / n;
      dev = std::max(dev, std::abs(pair.v_plus(x) - pair.v_minus(x - 0.5 * L)));
    }
    if (dev < tol::self_iso_pass || dev > tol::self_iso_fail) break;
    n *= 4;
  }
  SelfIsoVerdict verdict = SelfIsoVerdict::inconclusive;
  if (dev < tol::self_iso_pass) verdict = SelfIsoVerdict::self_isospectral;
  else if (dev > tol::self_iso_fail) verdict = SelfIsoVerdict::distinct;
  return SelfIsoResult{dev, verdict};
}

}  // namespace ellband
