#pragma once

#include <functional>
#include <string>

#include "ellband/elliptic_expr.hpp"
#include "ellband/spectra.hpp"

namespace ellband {

// Superpotential W = -psi0'/psi0 built from a nodeless band-edge ground
// state.  Carried as a ratio of elliptic expressions, so W and W' are closed
// forms.  W is odd and has zero mean over one period (checked at
// construction).
class Superpotential {
 public:
  double operator()(double x) const;
  double derivative(double x) const;
  double period() const { return period_; }
  const std::string& source() const { return source_; }
  Modulus modulus() const { return m_; }
  const EllExpr& numerator() const { return num_; }
  const EllExpr& denominator() const { return den_; }

 private:
  friend Superpotential superpotential_from_ground(const AnalyticState& psi0);
  Superpotential(EllExpr num, EllExpr den, Modulus m, double period, std::string source);

  EllExpr num_, den_, dnum_, dden_;
  Modulus m_;
  double period_;
  std::string source_;
};

// Precondition: psi0 is nodeless.  W is independent of the energy offset;
// the derived pair has its ground state at zero by construction.
Superpotential superpotential_from_ground(const AnalyticState& psi0);

// V-(x) = W^2 - W', V+(x) = W^2 + W'.
struct PartnerPair {
  std::function<double(double)> v_minus;
  std::function<double(double)> v_plus;
  Superpotential w;
  double period;
};

PartnerPair partner_pair(const Superpotential& w, double period);

// Partner eigenstate at the same energy: 1/psi0 for the ground state,
// psi' + W psi otherwise.  Node count and period class are recomputed, and
// the output is normalized to unit maximum over one period.
AnalyticState map_state(const Superpotential& w, const AnalyticState& state,
                        bool is_ground);

enum class SelfIsoVerdict { self_isospectral, distinct, inconclusive };

struct SelfIsoResult {
  double deviation;  // max over a grid of |V+(x) - V-(x - L/2)|
  SelfIsoVerdict verdict;
};

// Below 1e-8 certifies self-isospectrality, above 1e-3 certifies its
// failure.  The band in between triggers grid refinement (x4, twice) before
// an inconclusive verdict is returned.
SelfIsoResult self_isospectral_deviation(const PartnerPair& pair);

}  // namespace ellband
