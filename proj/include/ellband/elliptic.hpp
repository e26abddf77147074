#pragma once

namespace ellband {

// Elliptic modulus parameter m, often written k^2.  Valid range is [0, 1];
// the function kernels require m < 1, m = 1 is accepted only so that
// closed-form energy expressions can be evaluated in the hyperbolic limit.
class Modulus {
 public:
  explicit Modulus(double m);
  double value() const { return m_; }

 private:
  double m_;
};

// Values of the three Jacobi elliptic functions at one point.
struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

enum class QuarterShift { half_k, k, two_k };

// Complete elliptic integral of the first kind K(m), the quarter period of
// sn and cn.  Computed by the arithmetic-geometric mean.
double ellip_k(Modulus m);

// sn(x, m), cn(x, m), dn(x, m) for real x via the descending Landen / AGM
// transformation.  The argument is folded into [0, 4K) first.
JacobiTriple jacobi(double x, Modulus m);

// The triple at x + shift, obtained from the triple at x through the
// closed-form translation identities only -- jacobi() is never evaluated at
// the shifted argument.  This is the exactness reference for the
// self-isospectrality checks.
JacobiTriple jacobi_shift(double x, Modulus m, QuarterShift shift);

}  // namespace ellband
