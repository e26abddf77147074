#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ellband/elliptic.hpp"

namespace ellband {

using Potential = std::function<double(double)>;

// Floquet discriminant D(E) = y1(L) + y2'(L) of -y'' + (V - E) y = 0, where
// y1, y2 are the fundamental solutions with unit initial data.  |D| <= 2
// inside allowed bands, |D| >= 2 in gaps; band edges sit at D = +/-2.
struct Discriminant {
  double energy = 0.0;
  double value = 0.0;
  double wronskian_error = 0.0;  // |y1 y2' - y1' y2 - 1| at L
  // Monodromy matrix entries, kept for eigenfunction reconstruction.
  double y1 = 0.0, y1p = 0.0, y2 = 0.0, y2p = 0.0;
};

Discriminant discriminant(const Potential& v, double period, double energy);

enum class EdgeType { periodic, antiperiodic };  // D = +2 / D = -2

struct BandEdge {
  double energy = 0.0;
  EdgeType type = EdgeType::periodic;
  int index = 0;
};

struct BandStructure {
  std::vector<BandEdge> edges;  // nondecreasing in energy
  // Delta_n = E_{2n} - E_{2n-1} with edges indexed from zero.
  std::vector<double> gaps() const;
};

// All roots of D(E) = +/-2 in [min V - 1, e_max].  The energy axis is
// scanned adaptively, roots are refined to 1e-9, and closed gaps (tangencies
// with |dD/dE| < 1e-6) are reported as double edges.  Each edge's Bloch
// eigenfunction is integrated and its node count checked against the
// oscillation-theorem sequence 0, 1, 1, 2, 2, ...; a mismatch throws with
// the offending bracket.
BandStructure band_edges_numeric(const Potential& v, double period, double e_max);

// k in [0, pi/L] with cos kL = D/2 when |D| <= 2, absent inside gaps.
std::optional<double> dispersion(const Potential& v, double period, double energy);

// Maximum absolute difference between corresponding numerically found band
// edges of the two potentials; throws structural_mismatch when the edge
// counts differ.
double spectra_match(const Potential& v1, const Potential& v2, double period,
                     double e_max);

// Bloch eigenfunction at a band edge, sampled on a uniform grid over one
// period, and its node count in that interval.
struct EdgeFunction {
  std::vector<double> x;
  std::vector<double> psi;
  int nodes = 0;
};

EdgeFunction edge_eigenfunction(const Potential& v, double period, const BandEdge& edge);

}  // namespace ellband
