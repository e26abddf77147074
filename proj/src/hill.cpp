#include "ellband/hill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ellband/errors.hpp"
#include "ellband/tolerances.hpp"

namespace ellband {

namespace {

// Dormand-Prince 5(4) pair on the four-component fundamental system
// (y1, y1', y2, y2') of -y'' + (V - E) y = 0.
struct Monodromy {
  double y1, y1p, y2, y2p;
};

Monodromy integrate_monodromy(const Potential& v, double period, double energy) {
  const auto rhs = [&](double x, const double* y, double* dy) {
    const double w = v(x) - energy;
    dy[0] = y[1];
    dy[1] = w * y[0];
    dy[2] = y[3];
    dy[3] = w * y[2];
  };

  double y[4] = {1.0, 0.0, 0.0, 1.0};
  double x = 0.0;
  double h = period / 100.0;
  double k1[4], k2[4], k3[4], k4[4], k5[4], k6[4], k7[4];
  double yt[4], y5[4], err[4];
  rhs(x, y, k1);

  long steps = 0;
  while (x < period) {
    if (++steps > 2000000)
      throw numerical_error("monodromy integration exceeded the step budget at x = " +
                            std::to_string(x));
    bool last = false;
    if (x + h >= period) {
      h = period - x;
      last = true;
    }
    if (h < 1e-15 * period)
      throw numerical_error("monodromy step size underflow at x = " + std::to_string(x));

    for (int i = 0; i < 4; ++i) yt[i] = y[i] + h * (1.0 / 5.0) * k1[i];
    rhs(x + h / 5.0, yt, k2);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i]);
    rhs(x + 3.0 * h / 10.0, yt, k3);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i]);
    rhs(x + 4.0 * h / 5.0, yt, k4);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i] +
                          64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i]);
    rhs(x + 8.0 * h / 9.0, yt, k5);
    for (int i = 0; i < 4; ++i)
      yt[i] = y[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i] +
                          46732.0 / 5247.0 * k3[i] + 49.0 / 176.0 * k4[i] -
                          5103.0 / 18656.0 * k5[i]);
    rhs(x + h, yt, k6);
    for (int i = 0; i < 4; ++i)
      y5[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] +
                          125.0 / 192.0 * k4[i] - 2187.0 / 6784.0 * k5[i] +
                          11.0 / 84.0 * k6[i]);
    rhs(x + h, y5, k7);
    for (int i = 0; i < 4; ++i) {
      const double y4 = y[i] + h * (5179.0 / 57600.0 * k1[i] + 7571.0 / 16695.0 * k3[i] +
                                    393.0 / 640.0 * k4[i] - 92097.0 / 339200.0 * k5[i] +
                                    187.0 / 2100.0 * k6[i] + 1.0 / 40.0 * k7[i]);
      err[i] = y5[i] - y4;
    }

    double norm = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = tol::ode_abs + tol::ode_rel * std::max(std::abs(y[i]), std::abs(y5[i]));
      norm += (err[i] / sc) * (err[i] / sc);
    }
    norm = std::sqrt(norm / 4.0);

    if (norm <= 1.0) {
      x = last ? period : x + h;
      for (int i = 0; i < 4; ++i) {
        y[i] = y5[i];
        k1[i] = k7[i];
      }
    }
    const double factor = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return Monodromy{y[0], y[1], y[2], y[3]};
}

double edge_target(EdgeType type) { return type == EdgeType::periodic ? 2.0 : -2.0; }

}  // namespace

Discriminant discriminant(const Potential& v, double period, double energy) {
  if (!(period > 0.0)) throw std::domain_error("period must be positive");
  if (!std::isfinite(energy)) throw std::domain_error("energy must be finite");
  const Monodromy mm = integrate_monodromy(v, period, energy);
  Discriminant d;
  d.energy = energy;
  d.value = mm.y1 + mm.y2p;
  d.wronskian_error = std::abs(mm.y1 * mm.y2p - mm.y1p * mm.y2 - 1.0);
  d.y1 = mm.y1;
  d.y1p = mm.y1p;
  d.y2 = mm.y2;
  d.y2p = mm.y2p;
  return d;
}

std::vector<double> BandStructure::gaps() const {
  std::vector<double> g;
  for (std::size_t i = 1; i + 1 < edges.size(); i += 2)
    g.push_back(edges[i + 1].energy - edges[i].energy);
  return g;
}

namespace {

struct Sample {
  double e;
  double d;
};

// Illinois variant of regula falsi on g(E) = D(E) - target.  Refines the
// energy to 1e-9 and keeps going (down to machine resolution) until the
// residual |g| at the reported root is below 1e-8, which steep roots need.
double refine_root(const std::function<double(double)>& g, double lo, double hi,
                   double glo, double ghi) {
  double flo = glo, fhi = ghi;
  double best = 0.5 * (lo + hi), best_g = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double eps_floor = 8.0 * 1e-16 * (1.0 + std::abs(lo) + std::abs(hi));
    if (hi - lo <= tol::edge_bisect && best_g <= 1e-8) break;
    if (hi - lo <= eps_floor) break;
    double mid = (std::abs(fhi - flo) > 1e-300)
                     ? hi - fhi * (hi - lo) / (fhi - flo)
                     : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (std::abs(fm) < best_g) {
      best_g = std::abs(fm);
      best = mid;
    }
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
      fhi *= 0.5;
    } else {
      hi = mid;
      fhi = fm;
      flo *= 0.5;
    }
  }
  return best;
}

// Golden-section search for a local extremum of s*D on [lo, hi].
double refine_extremum(const std::function<double(double)>& dfun, double lo, double hi,
                       double sign) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = sign * dfun(x1), f2 = sign * dfun(x2);
  for (int it = 0; it < 90 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = sign * dfun(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = sign * dfun(x1);
    }
  }
  return 0.5 * (a + b);
}

int expected_nodes(int edge_index) { return (edge_index + 1) / 2; }

}  // namespace

EdgeFunction edge_eigenfunction(const Potential& v, double period, const BandEdge& edge) {
  const double mu = edge.type == EdgeType::periodic ? 1.0 : -1.0;
  const Discriminant d = discriminant(v, period, edge.energy);

  // Initial data from the (approximate) monodromy eigenvector for mu; at a
  // closed gap the monodromy is +/- identity and any vector works.
  double c0 = d.y2, c1 = mu - d.y1;
  const double alt0 = mu - d.y2p, alt1 = d.y1p;
  if (std::hypot(alt0, alt1) > std::hypot(c0, c1)) {
    c0 = alt0;
    c1 = alt1;
  }
  if (std::hypot(c0, c1) < 1e-9) {
    c0 = 1.0;
    c1 = 0.0;
  }

  const int n = 8192;
  const double h = period / n;
  EdgeFunction out;
  out.x.resize(n);
  out.psi.resize(n);
  double y = c0, yp = c1;
  const auto f = [&](double x, double yy, double ypp, double* dy, double* dyp) {
    *dy = ypp;
    *dyp = (v(x) - edge.energy) * yy;
  };
  for (int i = 0; i < n; ++i) {
    out.x[i] = i * h;
    out.psi[i] = y;
    double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
    const double x = i * h;
    f(x, y, yp, &k1y, &k1p);
    f(x + 0.5 * h, y + 0.5 * h * k1y, yp + 0.5 * h * k1p, &k2y, &k2p);
    f(x + 0.5 * h, y + 0.5 * h * k2y, yp + 0.5 * h * k2p, &k3y, &k3p);
    f(x + h, y + h * k3y, yp + h * k3p, &k4y, &k4p);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }

  // Count sign changes over one period, anchored at the largest |psi| and
  // wrapped with the Bloch factor mu.
  double peak = 0.0;
  int anchor = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(out.psi[i]) > peak) {
      peak = std::abs(out.psi[i]);
      anchor = i;
    }
  const double floor = 1e-9 * peak;
  int count = 0, prev = 0;
  for (int i = anchor; i < anchor + n; ++i) {
    double val = i < n ? out.psi[i] : mu * out.psi[i - n];
    if (std::abs(val) <= floor) continue;
    const int s = val > 0.0 ? 1 : -1;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  out.nodes = count;
  return out;
}

BandStructure band_edges_numeric(const Potential& v, double period, double e_max) {
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) vmin = std::min(vmin, v(period * i / 2000.0));
  const double e_floor = vmin - 1.0;
  if (!(e_max > e_floor))
    throw std::domain_error("e_max must exceed the spectrum floor");

  const auto dfun = [&](double e) { return discriminant(v, period, e).value; };

  // Scan: uniform seed, refined only where D swings quickly near the band
  // region.  Narrow gaps need no blanket refinement -- they always show up
  // as a local-extremum triple of the coarse samples hugging the +/-2 line,
  // which the secondary pass polishes.
  std::vector<Sample> scan;
  const int seed = 400;
  scan.reserve(1024);
  for (int i = 0; i <= seed; ++i) {
    const double e = e_floor + (e_max - e_floor) * i / seed;
    scan.push_back(Sample{e, dfun(e)});
  }
  const double base_step = (e_max - e_floor) / seed;
  const double min_slope = base_step / 64.0;
  for (int pass = 0; pass < 6 && scan.size() < 8000; ++pass) {
    std::vector<Sample> next;
    next.reserve(scan.size() * 2);
    bool split_any = false;
    for (std::size_t i = 0; i < scan.size(); ++i) {
      next.push_back(scan[i]);
      if (i + 1 == scan.size()) break;
      const Sample& a = scan[i];
      const Sample& b = scan[i + 1];
      const double width = b.e - a.e;
      const bool steep = std::abs(b.d - a.d) > 1.2 &&
                         std::min(std::abs(a.d), std::abs(b.d)) < 2.5;
      if (steep && width > min_slope) {
        const double mid = 0.5 * (a.e + b.e);
        next.push_back(Sample{mid, dfun(mid)});
        split_any = true;
      }
    }
    scan = std::move(next);
    if (!split_any) break;
  }

  std::vector<BandEdge> edges;
  const auto add_root = [&](double lo, double hi, double glo, double ghi, EdgeType type) {
    const double target = edge_target(type);
    const auto g = [&](double e) { return dfun(e) - target; };
    edges.push_back(BandEdge{refine_root(g, lo, hi, glo, ghi), type, 0});
  };

  // Primary pass: sign changes of D -/+ 2 between adjacent samples.
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    const Sample& a = scan[i];
    const Sample& b = scan[i + 1];
    for (EdgeType type : {EdgeType::periodic, EdgeType::antiperiodic}) {
      const double t = edge_target(type);
      const double ga = a.d - t, gb = b.d - t;
      if (ga == 0.0 && i == 0) edges.push_back(BandEdge{a.e, type, 0});
      if ((ga > 0.0 && gb < 0.0) || (ga < 0.0 && gb > 0.0))
        add_root(a.e, b.e, ga, gb, type);
      else if (gb == 0.0)
        edges.push_back(BandEdge{b.e, type, 0});
    }
  }

  // Secondary pass: closed or nearly closed gaps appear as local extrema of
  // D tangent to +/-2 with no sign change nearby.
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    const Sample& l = scan[i - 1];
    const Sample& c = scan[i];
    const Sample& r = scan[i + 1];
    const double sgn = c.d >= 0.0 ? 1.0 : -1.0;
    const bool is_extremum = sgn * c.d >= sgn * l.d && sgn * c.d >= sgn * r.d;
    if (!is_extremum) continue;
    // Only interesting when the apex hugs the band-edge line from inside.
    if (sgn * c.d < 1.9 || sgn * c.d > 2.0 + 1e-6) continue;
    if (sgn * l.d > 2.0 || sgn * r.d > 2.0) continue;
    const EdgeType type = sgn > 0.0 ? EdgeType::periodic : EdgeType::antiperiodic;
    const double target = edge_target(type);
    const double estar = refine_extremum(dfun, l.e, r.e, sgn);
    const double dstar = dfun(estar);
    const double overshoot = sgn * dstar - 2.0;
    if (overshoot > 1e-12) {
      const double gl = l.d - target, gr = r.d - target, gs = dstar - target;
      add_root(l.e, estar, gl, gs, type);
      add_root(estar, r.e, gs, gr, type);
    } else if (overshoot > -5e-8) {
      const double h = 1e-6 * std::abs(estar) + 1e-9;
      const double dprime = (dfun(estar + h) - dfun(estar - h)) / (2.0 * h);
      if (std::abs(dprime) < tol::tangency) {
        edges.push_back(BandEdge{estar, type, 0});
        edges.push_back(BandEdge{estar, type, 0});
      }
    }
  }

  std::sort(edges.begin(), edges.end(),
            [](const BandEdge& a, const BandEdge& b) { return a.energy < b.energy; });
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].index = static_cast<int>(i);

  BandStructure bs{std::move(edges)};

  // Oscillation-theorem audit: node counts of the edge eigenfunctions are
  // exact integers and expose any missed edge.
  for (const BandEdge& e : bs.edges) {
    const EdgeFunction ef = edge_eigenfunction(v, period, e);
    if (ef.nodes != expected_nodes(e.index)) {
      const double lo = e.index > 0 ? bs.edges[e.index - 1].energy : e_floor;
      throw structural_mismatch(
          "suspected missed band edge: state at E = " + std::to_string(e.energy) +
          " has " + std::to_string(ef.nodes) + " nodes, expected " +
          std::to_string(expected_nodes(e.index)) + "; check bracket [" +
          std::to_string(lo) + ", " + std::to_string(e.energy) + "]");
    }
  }
  return bs;
}

std::optional<double> dispersion(const Potential& v, double period, double energy) {
  const double d = discriminant(v, period, energy).value;
  if (std::abs(d) > 2.0 + 1e-12) return std::nullopt;
  return std::acos(std::clamp(d / 2.0, -1.0, 1.0)) / period;
}

double spectra_match(const Potential& v1, const Potential& v2, double period,
                     double e_max) {
  const BandStructure b1 = band_edges_numeric(v1, period, e_max);
  const BandStructure b2 = band_edges_numeric(v2, period, e_max);
  if (b1.edges.size() != b2.edges.size())
    throw structural_mismatch("band edge counts differ: " +
                              std::to_string(b1.edges.size()) + " vs " +
                              std::to_string(b2.edges.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < b1.edges.size(); ++i)
    worst = std::max(worst, std::abs(b1.edges[i].energy - b2.edges[i].energy));
  return worst;
}

}  // namespace ellband
