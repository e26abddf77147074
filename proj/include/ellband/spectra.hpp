#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellband/elliptic.hpp"
#include "ellband/potential.hpp"
#include "ellband/wavefunction.hpp"

namespace ellband {

// Bloch label of a band-edge state relative to the potential period L:
// periodic means psi(x+L) = psi(x), antiperiodic psi(x+L) = -psi(x).
enum class PeriodClass { periodic, antiperiodic };

// One closed-form band edge.
struct AnalyticState {
  double energy = 0.0;
  WaveFunction psi;
  PeriodClass period_class = PeriodClass::periodic;
  int nodes = 0;                 // sign changes in one interval L
  std::string provenance;        // stable id, e.g. "table3/n=3/minus"
  std::string form;              // structural tag: "F", "sn*cn*F", "dn*F", ...
  double potential_period = 0.0; // L
};

// A potential together with its analytically known band edges, sorted by
// energy (ties broken by node count, then period class).
struct EdgeSet {
  PotentialSpec potential;
  std::vector<AnalyticState> states;
  bool complete = false;  // every edge below the continuum is present
};

// The standard radical shorthands; delta4..delta7 depend on the parameter a.
struct Deltas {
  double delta;   // sqrt(1 - m + m^2)
  double delta1;  // sqrt(1 - m + 4 m^2)
  double delta2;  // sqrt(4 - m + m^2)
  double delta3;  // sqrt(4 - 7m + 4 m^2)
  double delta4;  // sqrt(1 - m + m^2 (a-1)^2)
  double delta5;  // sqrt(4 - 7m + 2ma + m^2 (a-2)^2)
  double delta6;  // sqrt(4 - m - 2ma + m^2 (a-1)^2)
  double delta7;  // sqrt(9 - 9m + m^2 (a-2)^2)
  double delta8;  // sqrt(16 - 16m + m^2)
  double delta9;  // sqrt(4 - 4m + 25 m^2)
  double B;       // 1 + m + delta
  static Deltas at(double a, double m);
};

// ---- Lame potentials a = 1, 2, 3 (strength (a(a+1), 0)), ground at zero ----

// The 2a+1 band edges with wavefunction evaluators; requires m < 1.
EdgeSet lame_states(int a, Modulus m);
// Energy formulas alone, valid on the closed interval m in [0, 1].
std::vector<double> lame_energy_levels(int a, double m);

// ---- General solvability families q = (a-n+1)(a-n), n = 1..5 (bare V) ----

// Exactly n states of the (a(a+1), (a-n+1)(a-n)) potential with offset 0.
// For n = 5 the two tabulated states are completed by the three roots of the
// quartic-ansatz cubic.  Requires q >= 0.
EdgeSet table3_states(double a, int n, Modulus m);
std::vector<double> table3_energy_levels(double a, int n, double m);

// ---- The fully worked special potentials ----

enum class NamedPotential { p6_q2, p2_q2, p6_q6, p63_4_q3_4 };
std::optional<NamedPotential> named_potential_for(double p, double q);
EdgeSet named_states(NamedPotential which, Modulus m);
std::vector<double> named_energy_levels(NamedPotential which, double m);

// Nodeless zero-offset-independent ground state of the (p, q) potential when
// one is known in closed form; the potential in the returned set is shifted
// so the ground energy is zero.
std::optional<EdgeSet> analytic_edge_set(double a, double b, Modulus m);

// ---- QES machinery ----

// Roots of the cubic satisfied by the quartic-ansatz eigenvalues lambda of
// the q = (a-4)(a-5) family (E = lambda + m (a-4)^2), sorted ascending.
std::vector<double> cubic_lambda(double a, Modulus m);
std::vector<double> cubic_lambda(double a, double m);

// The truncated three-term recursion block for a + b + 1 = n.  The basis
// splits into two decoupled chains: even/odd polynomials in cos t, and
// sin t times even/odd polynomials in cos t; the matrix is their direct sum.
struct QesBlock {
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  Modulus m{0.0};
  bool physical = true;  // q = b(b+1) >= 0
  std::vector<std::vector<double>> matrix;  // n x n, block diagonal
  std::vector<double> eigenvalues;          // lambda, sorted ascending
  std::vector<double> energies() const;     // E = lambda + m b^2
};

QesBlock qes_block(double a, double b, Modulus m);

// ---- Node counting and gap formulas ----

// Sign changes of psi over one interval of the given length, anchored at the
// point of largest |psi| so boundary zeros are counted exactly once.
// Candidate crossings are refined locally to exclude tangential zeros.
int count_nodes(const std::function<double(double)>& psi, double interval);
int count_nodes(const AnalyticState& state, double interval);

// Gap Delta2 = |2 sqrt(1 - m + m^2 (a-1)^2) - 2 + m| along the two-state
// solvability parabola.  The radicand is arranged as
// (1 - m/2)^2 + m^2 (a - 3/2)(a - 1/2) so the zero at a = 3/2 is exact in
// floating point.
double gap_delta2(double a, Modulus m);

}  // namespace ellband
