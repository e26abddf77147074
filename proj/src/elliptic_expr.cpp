#include "ellband/elliptic_expr.hpp"

#include <algorithm>
#include <cmath>

namespace ellband {

namespace {

double int_pow(double v, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= v;
  return r;
}

double dn_pow(double dn, double g) {
  if (g == 0.0) return 1.0;
  if (g == 1.0) return dn;
  if (g == 2.0) return dn * dn;
  if (g == -1.0) return 1.0 / dn;
  if (g == -2.0) return 1.0 / (dn * dn);
  return std::pow(dn, g);
}

}  // namespace

EllExpr::EllExpr(std::vector<EllTerm> terms) : terms_(std::move(terms)) { merge(); }

EllExpr EllExpr::constant(double c) { return monomial(c, 0, 0, 0.0); }

EllExpr EllExpr::monomial(double coef, int sn_pow, int cn_pow, double dn_pow) {
  return EllExpr({EllTerm{coef, sn_pow, cn_pow, dn_pow}});
}

EllExpr EllExpr::poly_sn2(const std::vector<double>& coeffs, int sn_pow,
                          int cn_pow, double dn_pow) {
  std::vector<EllTerm> terms;
  terms.reserve(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    terms.push_back(EllTerm{coeffs[k], sn_pow + 2 * static_cast<int>(k), cn_pow, dn_pow});
  }
  return EllExpr(std::move(terms));
}

double EllExpr::eval(const JacobiTriple& t) const {
  double sum = 0.0;
  for (const EllTerm& term : terms_)
    sum += term.coef * int_pow(t.sn, term.sn_pow) * int_pow(t.cn, term.cn_pow) *
           dn_pow(t.dn, term.dn_pow);
  return sum;
}

double EllExpr::eval(double x, Modulus m) const { return eval(jacobi(x, m)); }

EllExpr EllExpr::derivative(double m) const {
  std::vector<EllTerm> out;
  out.reserve(3 * terms_.size());
  for (const EllTerm& t : terms_) {
    if (t.sn_pow > 0)
      out.push_back(EllTerm{t.coef * t.sn_pow, t.sn_pow - 1, t.cn_pow + 1, t.dn_pow + 1});
    if (t.cn_pow > 0)
      out.push_back(EllTerm{-t.coef * t.cn_pow, t.sn_pow + 1, t.cn_pow - 1, t.dn_pow + 1});
    if (t.dn_pow != 0.0)
      out.push_back(EllTerm{-t.coef * t.dn_pow * m, t.sn_pow + 1, t.cn_pow + 1, t.dn_pow - 1});
  }
  return EllExpr(std::move(out));
}

EllExpr EllExpr::operator+(const EllExpr& rhs) const {
  std::vector<EllTerm> out = terms_;
  out.insert(out.end(), rhs.terms_.begin(), rhs.terms_.end());
  return EllExpr(std::move(out));
}

EllExpr EllExpr::operator-(const EllExpr& rhs) const {
  return *this + rhs.scaled(-1.0);
}

EllExpr EllExpr::operator*(const EllExpr& rhs) const {
  std::vector<EllTerm> out;
  out.reserve(terms_.size() * rhs.terms_.size());
  for (const EllTerm& a : terms_)
    for (const EllTerm& b : rhs.terms_)
      out.push_back(EllTerm{a.coef * b.coef, a.sn_pow + b.sn_pow,
                            a.cn_pow + b.cn_pow, a.dn_pow + b.dn_pow});
  return EllExpr(std::move(out));
}

EllExpr EllExpr::scaled(double c) const {
  std::vector<EllTerm> out = terms_;
  for (EllTerm& t : out) t.coef *= c;
  return EllExpr(std::move(out));
}

void EllExpr::merge() {
  std::sort(terms_.begin(), terms_.end(), [](const EllTerm& a, const EllTerm& b) {
    if (a.sn_pow != b.sn_pow) return a.sn_pow < b.sn_pow;
    if (a.cn_pow != b.cn_pow) return a.cn_pow < b.cn_pow;
    return a.dn_pow < b.dn_pow;
  });
  std::vector<EllTerm> merged;
  for (const EllTerm& t : terms_) {
    if (!merged.empty() && merged.back().sn_pow == t.sn_pow &&
        merged.back().cn_pow == t.cn_pow && merged.back().dn_pow == t.dn_pow) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const EllTerm& t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

}  // namespace ellband
