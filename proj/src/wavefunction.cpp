#include "ellband/wavefunction.hpp"

namespace ellband {

namespace {

bool is_unit(const EllExpr& e) {
  return e.size() == 1 && e.terms()[0].sn_pow == 0 && e.terms()[0].cn_pow == 0 &&
         e.terms()[0].dn_pow == 0.0 && e.terms()[0].coef == 1.0;
}

}  // namespace

WaveFunction::WaveFunction() : WaveFunction(EllExpr::constant(0.0), EllExpr::constant(1.0), Modulus(0.0)) {}

WaveFunction::WaveFunction(EllExpr numerator, EllExpr denominator, Modulus m, double scale)
    : num_(std::move(numerator)),
      den_(std::move(denominator)),
      dnum_(num_.derivative(m.value())),
      dden_(den_.derivative(m.value())),
      m_(m),
      scale_(scale),
      unit_den_(is_unit(den_)) {}

WaveFunction WaveFunction::from_expr(EllExpr e, Modulus m) {
  return WaveFunction(std::move(e), EllExpr::constant(1.0), m);
}

double WaveFunction::operator()(double x) const {
  const JacobiTriple t = jacobi(x, m_);
  const double n = num_.eval(t);
  return unit_den_ ? scale_ * n : scale_ * n / den_.eval(t);
}

double WaveFunction::derivative(double x) const {
  const JacobiTriple t = jacobi(x, m_);
  if (unit_den_) return scale_ * dnum_.eval(t);
  const double n = num_.eval(t);
  const double d = den_.eval(t);
  return scale_ * (dnum_.eval(t) * d - n * dden_.eval(t)) / (d * d);
}

WaveFunction WaveFunction::rescaled(double factor) const {
  WaveFunction out = *this;
  out.scale_ *= factor;
  return out;
}

}  // namespace ellband
