#include "ellband/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ellband/hill.hpp"
#include "ellband/residual.hpp"
#include "ellband/spectra.hpp"
#include "ellband/susy.hpp"
#include "ellband/tolerances.hpp"

namespace ellband {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  void fail() { passed = false; }
  template <typename T>
  Outcome& operator<<(const T& t) {
    detail << t;
    return *this;
  }
};

Potential as_fn(const PotentialSpec& v) {
  return [v](double x) { return v(x); };
}

BandStructure numeric_edges(const EdgeSet& set, double margin) {
  return band_edges_numeric(as_fn(set.potential), set.potential.period(),
                            set.states.back().energy + margin);
}

double worst_edge_deviation(const EdgeSet& set, const BandStructure& bs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < set.states.size() && i < bs.edges.size(); ++i)
    worst = std::max(worst, std::abs(bs.edges[i].energy - set.states[i].energy));
  return worst;
}

// --- criterion bodies -------------------------------------------------------

void criterion_elliptic_kernel(Outcome& out) {
  std::mt19937 rng(521998);
  std::uniform_real_distribution<double> xd(-25.0, 25.0);
  std::uniform_real_distribution<double> md(0.0, 0.9995);
  double worst_pyth = 0.0, worst_deriv = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = xd(rng), m = md(rng);
    const JacobiTriple t = jacobi(x, Modulus(m));
    worst_pyth = std::max(worst_pyth, std::abs(t.sn * t.sn + t.cn * t.cn - 1.0));
    worst_pyth = std::max(worst_pyth, std::abs(t.dn * t.dn + m * t.sn * t.sn - 1.0));
  }
  for (int i = 0; i < 200; ++i) {
    const double x = xd(rng), m = md(rng) * 0.96;
    const double h = 1e-6;
    const JacobiTriple t = jacobi(x, Modulus(m));
    const JacobiTriple tp = jacobi(x + h, Modulus(m));
    const JacobiTriple tm = jacobi(x - h, Modulus(m));
    worst_deriv = std::max(worst_deriv,
                           std::abs((tp.sn - tm.sn) / (2.0 * h) - t.cn * t.dn));
    worst_deriv = std::max(worst_deriv,
                           std::abs((tp.cn - tm.cn) / (2.0 * h) + t.sn * t.dn));
    worst_deriv = std::max(worst_deriv,
                           std::abs((tp.dn - tm.dn) / (2.0 * h) + m * t.sn * t.cn));
  }
  if (worst_pyth >= tol::kernel) out.fail();
  if (worst_deriv >= 1e-6) out.fail();
  out << "pythagorean " << worst_pyth << ", derivative " << worst_deriv;
}

void criterion_lame2(Outcome& out) {
  for (double m : {0.5, 0.8}) {
    const EdgeSet set = lame_states(2, Modulus(m));
    const BandStructure bs = numeric_edges(set, 0.5);
    if (bs.edges.size() != 5) out.fail();
    const double worst = worst_edge_deviation(set, bs);
    if (worst >= tol::edge_match) out.fail();
    out << "m=" << m << " worst " << worst << "; ";
  }
  const auto e0 = lame_energy_levels(2, 0.0);
  const std::vector<double> want0{0, 1, 1, 4, 4};
  for (int i = 0; i < 5; ++i)
    if (std::abs(e0[i] - want0[i]) > 1e-12) out.fail();
  const auto e1 = lame_energy_levels(2, 1.0);
  const std::vector<double> want1{0, 0, 3, 3, 4};
  for (int i = 0; i < 5; ++i)
    if (std::abs(e1[i] - want1[i]) > 1e-12) out.fail();
  out << "m=0 and m->1 limits exact";
}

void criterion_lame3(Outcome& out) {
  const EdgeSet set = lame_states(3, Modulus(0.5));
  const BandStructure bs = numeric_edges(set, 0.5);
  if (bs.edges.size() != 7) out.fail();
  const double worst = worst_edge_deviation(set, bs);
  if (worst >= tol::edge_match) out.fail();
  const std::vector<int> want_nodes{0, 1, 1, 2, 2, 3, 3};
  const std::vector<EdgeType> want_types{
      EdgeType::periodic,     EdgeType::antiperiodic, EdgeType::antiperiodic,
      EdgeType::periodic,     EdgeType::periodic,     EdgeType::antiperiodic,
      EdgeType::antiperiodic};
  for (std::size_t i = 0; i < bs.edges.size(); ++i) {
    const EdgeFunction ef =
        edge_eigenfunction(as_fn(set.potential), set.potential.period(), bs.edges[i]);
    if (ef.nodes != want_nodes[i]) out.fail();
    if (bs.edges[i].type != want_types[i]) out.fail();
  }
  out << "worst " << worst << ", node sequence 0,1,1,2,2,3,3 confirmed";
}

void criterion_isospectral(Outcome& out) {
  const auto run = [&](const EdgeSet& set, const char* tag) {
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const double diff = spectra_match(pair.v_minus, pair.v_plus,
                                      set.potential.period(),
                                      set.states.back().energy + 0.3);
    if (diff >= tol::edge_match) out.fail();
    out << tag << " " << diff << "; ";
  };
  for (double m : {0.5, 0.9}) {
    run(lame_states(2, Modulus(m)), "a2");
    run(lame_states(3, Modulus(m)), "a3");
    run(named_states(NamedPotential::p6_q6, Modulus(m)), "p6q6");
  }
}

void criterion_self_iso(Outcome& out) {
  const auto deviation = [](const EdgeSet& set) {
    const Superpotential w = superpotential_from_ground(set.states[0]);
    return self_isospectral_deviation(partner_pair(w, set.potential.period()))
        .deviation;
  };

  const double d1 = deviation(lame_states(1, Modulus(0.5)));
  if (d1 >= tol::self_iso_pass) out.fail();
  out << "a1 " << d1 << "; ";

  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> ad(0.6, 3.4);
  for (int i = 0; i < 3; ++i) {
    const double a = ad(rng);
    const EdgeSet fam = table3_states(a, 1, Modulus(0.6));
    const Superpotential w = superpotential_from_ground(fam.states[0]);
    const double d = self_isospectral_deviation(
                         partner_pair(w, 2.0 * ellip_k(Modulus(0.6))))
                         .deviation;
    if (d >= tol::self_iso_pass) out.fail();
    out << "family a=" << a << " " << d << "; ";
  }

  // (2,2): numeric deviation and the closed-form half-shift route.
  {
    const Modulus m(0.5);
    const EdgeSet set = named_states(NamedPotential::p2_q2, m);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const double d = self_isospectral_deviation(pair).deviation;
    if (d >= tol::self_iso_pass) out.fail();
    double shift_route = 0.0;
    const double K = ellip_k(m);
    for (int i = 0; i < 500; ++i) {
      const double x = -K + 2.0 * K * i / 499.0;
      const JacobiTriple shifted = jacobi_shift(x - K, m, QuarterShift::half_k);
      shift_route = std::max(shift_route,
                             std::abs(pair.v_plus(x) - set.potential.eval_triple(shifted)));
    }
    if (shift_route >= tol::self_iso_pass) out.fail();
    out << "p2q2 numeric " << d << " / shift-identity " << shift_route << "; ";
  }

  for (double m : {0.5, 0.998}) {
    for (int a : {2, 3}) {
      const double d = deviation(lame_states(a, Modulus(m)));
      if (d <= tol::self_iso_fail) out.fail();
    }
  }
  const double d66 = deviation(named_states(NamedPotential::p6_q6, Modulus(0.5)));
  if (d66 <= tol::self_iso_fail) out.fail();
  out << "a2/a3/p6q6 all distinct";
}

void criterion_qes(Outcome& out) {
  double worst = 0.0;
  int checked = 0;
  for (double a : {1.0, 1.5, 2.0, 2.5, 3.0, 3.5}) {
    for (int n = 1; n <= 5; ++n) {
      if ((a - n + 1.0) * (a - n) < 0.0) continue;
      for (double m : {0.2, 0.5, 0.9}) {
        const auto energies = qes_block(a, n - 1.0 - a, Modulus(m)).energies();
        const auto closed = table3_energy_levels(a, n, m);
        if (energies.size() != closed.size()) out.fail();
        for (std::size_t i = 0; i < closed.size(); ++i)
          worst = std::max(worst, std::abs(energies[i] - closed[i]));
        ++checked;
      }
    }
  }
  if (worst >= tol::qes_match) out.fail();
  out << checked << " blocks, worst " << worst << "; ";

  double worst_cubic = 0.0;
  for (double m : {0.2, 0.5, 0.9}) {
    const auto roots = cubic_lambda(2.0, m);
    const Deltas d = Deltas::at(2.0, m);
    const std::vector<double> levels{0.0, -4.0 + 2.0 * m + 2.0 * d.delta8,
                                     4.0 * d.delta8};
    for (int i = 1; i < 3; ++i)
      worst_cubic = std::max(worst_cubic, std::abs((roots[i] - roots[0]) -
                                                   (levels[i] - levels[0])));
  }
  if (worst_cubic >= tol::qes_match) out.fail();
  out << "cubic vs p6q6 differences " << worst_cubic;
}

void criterion_qes_incompleteness(Outcome& out) {
  // m -> 0: the two non-tabulated edges approach 4 (doubly).
  {
    const double m = 1e-3;
    const EdgeSet set = named_states(NamedPotential::p6_q2, Modulus(m));
    const BandStructure bs = numeric_edges(set, 0.3);
    if (bs.edges.size() != 7) out.fail();
    const std::vector<int> tab{0, 1, 2, 5, 6};
    for (std::size_t k = 0; k < tab.size(); ++k)
      if (std::abs(bs.edges[tab[k]].energy - set.states[k].energy) >= tol::edge_match)
        out.fail();
    for (int idx : {3, 4})
      if (std::abs(bs.edges[idx].energy - 4.0) >= 5e-3) out.fail();
    out << "m=1e-3: extras at " << bs.edges[3].energy << ", " << bs.edges[4].energy
        << "; ";
  }
  // m -> 1: linear extrapolation in m from 0.998 and 0.999 lands on 3.
  {
    double extra[2];
    const double ms[2] = {0.998, 0.999};
    for (int j = 0; j < 2; ++j) {
      const EdgeSet set = named_states(NamedPotential::p6_q2, Modulus(ms[j]));
      const BandStructure bs = numeric_edges(set, 0.3);
      if (bs.edges.size() != 7) out.fail();
      extra[j] = 0.5 * (bs.edges[3].energy + bs.edges[4].energy);
    }
    const double at_one = extra[1] + (extra[1] - extra[0]) * (1.0 - ms[1]) /
                                         (ms[1] - ms[0]);
    if (std::abs(at_one - 3.0) >= 5e-3) out.fail();
    out << "m->1 extrapolation " << at_one;
  }
}

void criterion_degeneracies(Outcome& out) {
  for (double m : {0.0, 0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.998}) {
    if (gap_delta2(1.5, Modulus(m)) != 0.0) out.fail();
  }
  out << "gap at a=3/2 identically zero; ";
  for (double m : {0.2, 0.5, 0.9}) {
    const EdgeSet set = named_states(NamedPotential::p63_4_q3_4, Modulus(m));
    const Deltas d = Deltas::at(0.0, m);
    const double expected = 14.0 - 7.0 * m + d.delta9;
    if (set.states[3].energy != set.states[4].energy) out.fail();
    if (std::abs(set.states[3].energy - expected) > 1e-12) out.fail();
    if (set.states[3].nodes != 4 || set.states[4].nodes != 4) out.fail();
  }
  out << "double level at 14 - 7m + delta9 with 4 nodes each";
}

void criterion_partner_residuals(Outcome& out) {
  double worst = 0.0;
  int states = 0;
  for (double m : {0.5, 0.9}) {
    const Modulus mod(m);
    std::vector<EdgeSet> sets;
    sets.push_back(lame_states(2, mod));
    sets.push_back(lame_states(3, mod));
    sets.push_back(named_states(NamedPotential::p6_q2, mod));
    sets.push_back(named_states(NamedPotential::p2_q2, mod));
    sets.push_back(named_states(NamedPotential::p6_q6, mod));
    sets.push_back(named_states(NamedPotential::p63_4_q3_4, mod));
    for (const EdgeSet& set : sets) {
      const Superpotential w = superpotential_from_ground(set.states[0]);
      const PartnerPair pair = partner_pair(w, set.potential.period());
      for (std::size_t i = 0; i < set.states.size(); ++i) {
        const AnalyticState mapped = map_state(w, set.states[i], i == 0);
        const auto psi = [&mapped](double x) { return mapped.psi(x); };
        worst = std::max(worst, schrodinger_residual(pair.v_plus, psi, mapped.energy,
                                                     set.potential.period()));
        ++states;
      }
    }
  }
  if (worst >= tol::residual) out.fail();
  out << states << " mapped states, worst V+ residual " << worst;
}

void criterion_fullscale(Outcome& out) {
  // Closed-form edge curves over the m sweep: continuous, never crossing.
  // The upper curves fall steeply toward m = 1, so continuity is checked by
  // bisection: a continuous curve always subdivides below the step bound, a
  // genuine jump survives to the depth limit.
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.998};
  const auto sweep = [&](const std::function<std::vector<double>(double)>& levels,
                         const char* tag) {
    bool ok = true;
    const std::function<void(double, double, const std::vector<double>&,
                             const std::vector<double>&, int)>
        continuous = [&](double m0, double m1, const std::vector<double>& e0,
                         const std::vector<double>& e1, int depth) {
          bool small = true;
          for (std::size_t i = 0; i < e0.size(); ++i)
            if (std::abs(e1[i] - e0[i]) > 0.5) small = false;
          if (small) return;
          if (depth >= 16) {
            ok = false;
            return;
          }
          const double mm = 0.5 * (m0 + m1);
          const auto em = levels(mm);
          continuous(m0, mm, e0, em, depth + 1);
          continuous(mm, m1, em, e1, depth + 1);
        };
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto e = levels(grid[j]);
      for (std::size_t i = 1; i < e.size(); ++i)
        if (e[i] < e[i - 1] - 1e-9) ok = false;  // ordering preserved
      if (j > 0) continuous(grid[j - 1], grid[j], levels(grid[j - 1]), e, 0);
    }
    if (!ok) out.fail();
    out << tag << (ok ? " ok; " : " FAILED; ");
  };
  sweep([](double m) { return lame_energy_levels(3, m); }, "p12q0");
  sweep([](double m) { return named_energy_levels(NamedPotential::p6_q2, m); }, "p6q2");
  sweep([](double m) { return named_energy_levels(NamedPotential::p6_q6, m); }, "p6q6");

  // Partner profiles at m = 0.998: finite, and refining the grid shrinks the
  // largest step jump (a continuity signature, not a pixel comparison).  The
  // partner potentials carry spikes of width ~(1 - 2m + delta), so the base
  // grid must already resolve them before the ratio test is meaningful.
  const Modulus m(0.998);
  std::vector<EdgeSet> sets;
  sets.push_back(lame_states(2, m));
  sets.push_back(lame_states(3, m));
  sets.push_back(named_states(NamedPotential::p6_q6, m));
  for (const EdgeSet& set : sets) {
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const double L = set.potential.period();
    const auto max_jump = [&](int n) {
      double jump = 0.0;
      double prev_m = pair.v_minus(0.0), prev_p = pair.v_plus(0.0);
      for (int i = 1; i <= n; ++i) {
        const double x = L * i / n;
        const double vm = pair.v_minus(x), vp = pair.v_plus(x);
        if (!std::isfinite(vm) || !std::isfinite(vp)) out.fail();
        jump = std::max({jump, std::abs(vm - prev_m), std::abs(vp - prev_p)});
        prev_m = vm;
        prev_p = vp;
      }
      return jump;
    };
    const double coarse = max_jump(16000);
    const double fine = max_jump(64000);
    if (!(fine < 0.75 * coarse)) {
      out.fail();
      out << "profile refinement ratio " << fine / coarse << " too large; ";
    }
  }
  out << "m=0.998 profiles finite and refinement-stable";
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only) {
  struct Entry {
    int id;
    const char* name;
    void (*body)(Outcome&);
  };
  const Entry entries[] = {
      {1, "elliptic kernel identities", criterion_elliptic_kernel},
      {2, "a=2 band edges: numeric vs closed form, m=0 and m->1 limits",
       criterion_lame2},
      {3, "a=3 band edges: energies, node counts, period classes", criterion_lame3},
      {4, "partner isospectrality (a=2, a=3, p=q=6)", criterion_isospectral},
      {5, "self-isospectrality verdicts", criterion_self_iso},
      {6, "QES block vs closed forms, quartic-ansatz cubic", criterion_qes},
      {7, "(6,2) incompleteness: 7 numeric edges, limits of the extra pair",
       criterion_qes_incompleteness},
      {8, "degeneracies: gap zero at a=3/2, double level of (63/4,3/4)",
       criterion_degeneracies},
      {9, "mapped partner states satisfy the V+ equation", criterion_partner_residuals},
      {10, "full-scale m=0.998 data: continuity and ordering only",
       criterion_fullscale},
  };

  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end())
      continue;
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      e.body(out);
      r.passed = out.passed;
      r.detail = out.detail.str();
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    // Explicit runtime budgets.
    if (e.id == 2 && r.seconds >= 30.0) {
      r.passed = false;
      r.detail += " [exceeded 30 s budget]";
    }
    if (e.id == 3 && r.seconds >= 60.0) {
      r.passed = false;
      r.detail += " [exceeded 60 s budget]";
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ellband
