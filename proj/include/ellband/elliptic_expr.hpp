#pragma once

#include <cstddef>
#include <vector>

#include "ellband/elliptic.hpp"

namespace ellband {

// One monomial  coef * sn^i cn^j dn^g.  i and j are small nonnegative
// integers; g may be any real because the tabulated band-edge wavefunctions
// carry dn to negative and fractional powers.
struct EllTerm {
  double coef;
  int sn_pow;
  int cn_pow;
  double dn_pow;
};

// Finite sum of elliptic monomials.  Closed under d/dx through
// sn' = cn dn, cn' = -sn dn, dn' = -m sn cn, which is what makes analytic
// superpotentials and partner states possible without finite differencing.
class EllExpr {
 public:
  EllExpr() = default;
  explicit EllExpr(std::vector<EllTerm> terms);

  static EllExpr constant(double c);
  static EllExpr monomial(double coef, int sn_pow, int cn_pow, double dn_pow);
  // coeffs[k] multiplies sn^(2k); the whole polynomial is multiplied by the
  // optional sn^i cn^j dn^g prefactor.
  static EllExpr poly_sn2(const std::vector<double>& coeffs, int sn_pow = 0,
                          int cn_pow = 0, double dn_pow = 0.0);

  double eval(const JacobiTriple& t) const;
  double eval(double x, Modulus m) const;

  EllExpr derivative(double m) const;
  EllExpr operator+(const EllExpr& rhs) const;
  EllExpr operator-(const EllExpr& rhs) const;
  EllExpr operator*(const EllExpr& rhs) const;
  EllExpr scaled(double c) const;

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<EllTerm>& terms() const { return terms_; }

 private:
  void merge();
  std::vector<EllTerm> terms_;
};

}  // namespace ellband
