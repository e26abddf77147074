#pragma once

#include <utility>
#include <vector>

#include "ellband/elliptic.hpp"

namespace ellband {

enum class ExtremumKind { maximum, local_minimum, global_minimum, degenerate };

struct Extremum {
  double x;      // position in [0, 2K)
  double value;  // V at the extremum
  ExtremumKind kind;
};

// Associated Lame potential
//   V(x) = p m sn^2(x) + q m cn^2(x)/dn^2(x) + offset,
// parameterized by (a, b) with p = a(a+1), q = b(b+1).  Units: hbar = 1,
// particle mass 1/2, so energies are plain numbers.
class PotentialSpec {
 public:
  // Keeps the (a, b) order as given; p >= q is NOT enforced here because the
  // tabulated wavefunction families are written for a specific order.
  static PotentialSpec from_ab(double a, double b, Modulus m, double offset = 0.0);

  // Converts strengths to the nonnegative-branch parameters
  // a = (-1 + sqrt(1+4p))/2 and swaps to p >= q, recording the swap; the
  // spectrum is unchanged under (p,q) -> (q,p).
  static PotentialSpec from_pq(double p, double q, Modulus m, double offset = 0.0);

  double a() const { return a_; }
  double b() const { return b_; }
  double p() const { return a_ * (a_ + 1.0); }
  double q() const { return b_ * (b_ + 1.0); }
  Modulus modulus() const { return m_; }
  double offset() const { return offset_; }
  bool swapped() const { return swapped_; }

  double operator()(double x) const;
  double eval_triple(const JacobiTriple& t) const;

  // K(m) when p = q (within 1e-12), 2K(m) otherwise.
  double period() const;

  // All extrema in [0, 2K): the sn = 0 and cn = 0 families always, plus the
  // dn^4 = (1-m) q/p family when q(1-m) <= p <= q/(1-m).
  std::vector<Extremum> extrema() const;

  PotentialSpec with_offset(double offset) const;

 private:
  PotentialSpec(double a, double b, Modulus m, double offset, bool swapped);
  double second_derivative(const JacobiTriple& t) const;

  double a_;
  double b_;
  Modulus m_;
  double offset_;
  bool swapped_;
};

// All (n, a) with n in 1..5 such that p = a(a+1) and q = (a-n+1)(a-n) to
// within 1e-9, using the nonnegative branch a >= 0.  Empty when (p, q) lies
// on none of the solvability parabolas.
std::vector<std::pair<int, double>> on_parabola(double p, double q);

}  // namespace ellband
