#pragma once

#include "ellband/elliptic.hpp"
#include "ellband/elliptic_expr.hpp"

namespace ellband {

// Band-edge wavefunction as a ratio of elliptic expressions, scaled by a
// constant.  Both the value and the first derivative are closed forms; no
// finite differencing is involved, so the object can be evaluated at
// arbitrary points for node counting and residual checks.
class WaveFunction {
 public:
  WaveFunction();
  WaveFunction(EllExpr numerator, EllExpr denominator, Modulus m, double scale = 1.0);
  static WaveFunction from_expr(EllExpr e, Modulus m);

  double operator()(double x) const;
  double derivative(double x) const;

  WaveFunction rescaled(double factor) const;

  const EllExpr& numerator() const { return num_; }
  const EllExpr& denominator() const { return den_; }
  Modulus modulus() const { return m_; }
  double scale() const { return scale_; }

 private:
  EllExpr num_, den_, dnum_, dden_;
  Modulus m_;
  double scale_;
  bool unit_den_;
};

}  // namespace ellband
