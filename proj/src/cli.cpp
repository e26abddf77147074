#include "ellband/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ellband/errors.hpp"
#include "ellband/hill.hpp"
#include "ellband/result_io.hpp"
#include "ellband/spectra.hpp"
#include "ellband/susy.hpp"
#include "ellband/tolerances.hpp"
#include "ellband/verification.hpp"

namespace ellband::cli {

namespace {

// Accepts plain decimals and exact rationals like "63/4".
double parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  if (slash == std::string::npos) {
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
  }
  const double num = std::stod(s.substr(0, slash), &used);
  if (used != slash) throw std::invalid_argument("malformed rational: " + s);
  const double den = std::stod(s.substr(slash + 1), &used);
  if (used != s.size() - slash - 1 || den == 0.0)
    throw std::invalid_argument("malformed rational: " + s);
  return num / den;
}

struct PotentialArgs {
  std::string a, b, p, q;
  std::string m;

  bool has_ab() const { return !a.empty() || !b.empty(); }
  bool has_pq() const { return !p.empty() || !q.empty(); }

  double modulus() const {
    const double mv = parse_rational(m);
    if (mv < 0.0 || mv > 0.999)
      throw std::invalid_argument("m must lie in [0, 0.999]");
    return mv;
  }

  PotentialSpec resolve() const {
    if (has_ab() == has_pq())
      throw std::invalid_argument("supply exactly one of (--a, --b) or (--p, --q)");
    const Modulus mod{modulus()};
    if (has_ab()) {
      if (a.empty() || b.empty())
        throw std::invalid_argument("both --a and --b are required");
      return PotentialSpec::from_ab(parse_rational(a), parse_rational(b), mod);
    }
    if (p.empty() || q.empty())
      throw std::invalid_argument("both --p and --q are required");
    return PotentialSpec::from_pq(parse_rational(p), parse_rational(q), mod);
  }
};

void add_potential_options(CLI::App* cmd, PotentialArgs& pa) {
  cmd->add_option("--a", pa.a, "strength parameter a (p = a(a+1)); rationals like 63/4 accepted");
  cmd->add_option("--b", pa.b, "strength parameter b (q = b(b+1))");
  cmd->add_option("--p", pa.p, "strength p");
  cmd->add_option("--q", pa.q, "strength q");
  cmd->add_option("--m", pa.m, "elliptic modulus parameter in [0, 0.999]")->required();
}

// The scan cell: Lame-family potentials (q = 0) keep the 2K cell so the
// m -> 0 limit is the rigid rotator of period pi; p = q potentials use K.
double cli_cell(const PotentialSpec& v) {
  return v.q() == 0.0 ? 2.0 * ellip_k(v.modulus()) : v.period();
}

void emit(const ResultDocument& doc, const std::string& format,
          const std::string& output, std::ostream& out) {
  const std::string text = format == "json" ? to_json(doc) : to_csv(doc);
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + output);
    f << text;
  }
}

ResultDocument base_doc(const std::string& verb) {
  ResultDocument doc;
  doc.add_meta("tool", std::string("ellband"));
  doc.add_meta("version", std::string(kVersion));
  doc.add_meta("verb", verb);
  doc.add_meta("tol_kernel", tol::kernel);
  doc.add_meta("tol_residual", tol::residual);
  doc.add_meta("tol_edge_match", tol::edge_match);
  return doc;
}

void echo_potential(ResultDocument& doc, const PotentialSpec& v) {
  doc.add_meta("a", v.a());
  doc.add_meta("b", v.b());
  doc.add_meta("p", v.p());
  doc.add_meta("q", v.q());
  doc.add_meta("m", v.modulus().value());
  doc.add_meta("offset", v.offset());
  doc.add_meta("swapped", std::string(v.swapped() ? "true" : "false"));
}

std::string period_class_name(PeriodClass pc) {
  return pc == PeriodClass::periodic ? "L" : "2L";
}

std::string verdict_name(SelfIsoVerdict v) {
  switch (v) {
    case SelfIsoVerdict::self_isospectral: return "self-isospectral";
    case SelfIsoVerdict::distinct: return "distinct";
    case SelfIsoVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Ground-state resolver for partner construction.
EdgeSet resolve_with_ground(const PotentialSpec& v) {
  auto set = analytic_edge_set(v.a(), v.b(), v.modulus());
  if (!set || set->states.empty() || set->states.front().nodes != 0)
    throw std::invalid_argument(
        "no closed-form nodeless ground state is known for this potential");
  return *set;
}

int run_profile(const PotentialArgs& pa, int grid, bool partner,
                const std::string& format, const std::string& output,
                std::ostream& out) {
  ResultDocument doc = base_doc("profile");
  if (!partner) {
    const PotentialSpec v = pa.resolve();
    echo_potential(doc, v);
    const double L = cli_cell(v);
    doc.add_meta("period", L);
    doc.columns = {"x", "v_minus"};
    for (int i = 0; i <= grid; ++i) {
      const double x = L * i / grid;
      doc.rows.push_back({Cell::of(x), Cell::of(v(x))});
    }
  } else {
    const PotentialSpec request = pa.resolve();
    const EdgeSet set = resolve_with_ground(request);
    echo_potential(doc, set.potential);
    const Superpotential w = superpotential_from_ground(set.states[0]);
    const PartnerPair pair = partner_pair(w, set.potential.period());
    const double L = cli_cell(set.potential);
    doc.add_meta("period", L);
    doc.columns = {"x", "v_minus", "w", "v_plus"};
    for (int i = 0; i <= grid; ++i) {
      const double x = L * i / grid;
      doc.rows.push_back({Cell::of(x), Cell::of(pair.v_minus(x)), Cell::of(w(x)),
                          Cell::of(pair.v_plus(x))});
    }
  }
  emit(doc, format, output, out);
  return 0;
}

int run_edges(const PotentialArgs& pa, const std::string& source, std::string e_max,
              const std::string& format, const std::string& output,
              std::ostream& out) {
  ResultDocument doc = base_doc("edges");
  doc.columns = {"source", "index", "energy", "kind", "nodes", "provenance"};

  const PotentialSpec requested = pa.resolve();
  std::optional<EdgeSet> analytic =
      analytic_edge_set(requested.a(), requested.b(), requested.modulus());
  const PotentialSpec v = analytic ? analytic->potential : requested;
  echo_potential(doc, v);
  const double L = cli_cell(v);
  doc.add_meta("period", L);

  if (source == "analytic" || source == "both") {
    if (!analytic)
      throw std::invalid_argument("no closed-form edges are known for this potential");
    int idx = 0;
    for (const AnalyticState& s : analytic->states)
      doc.rows.push_back({Cell::of(std::string("analytic")), Cell::of(double(idx++)),
                          Cell::of(s.energy),
                          Cell::of(period_class_name(s.period_class)),
                          Cell::of(double(s.nodes)), Cell::of(s.provenance)});
    doc.add_meta("complete", std::string(analytic->complete ? "true" : "false"));
  }
  if (source == "numeric" || source == "both") {
    double top;
    if (!e_max.empty()) {
      top = parse_rational(e_max);
    } else if (analytic) {
      top = analytic->states.back().energy + 0.3;
    } else {
      throw std::invalid_argument("--e-max is required for numeric edges");
    }
    const Potential fn = [v](double x) { return v(x); };
    const BandStructure bs = band_edges_numeric(fn, L, top);
    for (const BandEdge& e : bs.edges)
      doc.rows.push_back({Cell::of(std::string("numeric")), Cell::of(double(e.index)),
                          Cell::of(e.energy),
                          Cell::of(std::string(e.type == EdgeType::periodic ? "L" : "2L")),
                          Cell::none(), Cell::none()});
  }
  emit(doc, format, output, out);
  return 0;
}

int run_partner(const PotentialArgs& pa, int grid, const std::string& format,
                const std::string& output, std::ostream& out) {
  ResultDocument doc = base_doc("partner");
  const EdgeSet set = resolve_with_ground(pa.resolve());
  echo_potential(doc, set.potential);
  const Superpotential w = superpotential_from_ground(set.states[0]);
  const PartnerPair pair = partner_pair(w, set.potential.period());
  const SelfIsoResult iso = self_isospectral_deviation(pair);
  doc.add_meta("period", set.potential.period());
  doc.add_meta("ground_provenance", set.states[0].provenance);
  doc.add_meta("deviation", iso.deviation);
  doc.add_meta("verdict", verdict_name(iso.verdict));
  doc.columns = {"x", "w", "v_minus", "v_plus"};
  const double L = set.potential.period();
  for (int i = 0; i <= grid; ++i) {
    const double x = L * i / grid;
    doc.rows.push_back({Cell::of(x), Cell::of(w(x)), Cell::of(pair.v_minus(x)),
                        Cell::of(pair.v_plus(x))});
  }
  emit(doc, format, output, out);
  return 0;
}

int run_scan(const PotentialArgs& pa, const std::string& quantity, double m_min,
             double m_max, double m_step, const std::string& format,
             const std::string& output, std::ostream& out) {
  ResultDocument doc = base_doc("scan");
  doc.add_meta("quantity", quantity);
  std::vector<double> ms;
  for (double m = m_min; m <= m_max + 1e-12; m += m_step) ms.push_back(m);
  if (m_max >= 0.98 && ms.back() < 0.998) ms.push_back(0.998);

  if (quantity == "gap-delta2") {
    if (pa.a.empty())
      throw std::invalid_argument("--a is required for the gap-delta2 scan");
    const double a = parse_rational(pa.a);
    doc.add_meta("a", a);
    doc.columns = {"m", "delta2"};
    for (double m : ms)
      doc.rows.push_back({Cell::of(m), Cell::of(gap_delta2(a, Modulus(m)))});
  } else if (quantity == "deviation") {
    doc.columns = {"m", "deviation", "verdict"};
    for (double m : ms) {
      PotentialArgs at_m = pa;
      at_m.m = format_number(m);
      const EdgeSet set = resolve_with_ground(at_m.resolve());
      const Superpotential w = superpotential_from_ground(set.states[0]);
      const SelfIsoResult iso =
          self_isospectral_deviation(partner_pair(w, set.potential.period()));
      doc.rows.push_back(
          {Cell::of(m), Cell::of(iso.deviation), Cell::of(verdict_name(iso.verdict))});
    }
  } else if (quantity == "edge-energies") {
    doc.columns = {"m", "index", "energy"};
    for (double m : ms) {
      PotentialArgs at_m = pa;
      at_m.m = format_number(m);
      const PotentialSpec v = at_m.resolve();
      const auto set = analytic_edge_set(v.a(), v.b(), v.modulus());
      if (!set)
        throw std::invalid_argument("no closed-form edges are known for this potential");
      int idx = 0;
      for (const AnalyticState& s : set->states)
        doc.rows.push_back({Cell::of(m), Cell::of(double(idx++)), Cell::of(s.energy)});
    }
  } else {
    throw std::invalid_argument("unknown scan quantity: " + quantity);
  }
  emit(doc, format, output, out);
  return 0;
}

int run_dispersion(const PotentialArgs& pa, const std::string& e_max_str, int grid,
                   const std::string& format, const std::string& output,
                   std::ostream& out) {
  if (e_max_str.empty()) throw std::invalid_argument("--e-max is required");
  const PotentialSpec v = pa.resolve();
  const double e_max = parse_rational(e_max_str);
  ResultDocument doc = base_doc("dispersion");
  echo_potential(doc, v);
  const double L = cli_cell(v);
  doc.add_meta("period", L);
  doc.columns = {"energy", "discriminant", "k"};
  const Potential fn = [v](double x) { return v(x); };
  double floor = v(0.0);
  for (int i = 0; i <= 400; ++i) floor = std::min(floor, v(L * i / 400.0));
  if (e_max <= floor)
    throw std::invalid_argument("--e-max must exceed the potential minimum " +
                                format_number(floor));
  for (int i = 0; i <= grid; ++i) {
    const double e = floor + (e_max - floor) * i / grid;
    const Discriminant d = discriminant(fn, L, e);
    Cell k = Cell::none();
    if (std::abs(d.value) <= 2.0)
      k = Cell::of(std::acos(std::clamp(d.value / 2.0, -1.0, 1.0)) / L);
    doc.rows.push_back({Cell::of(e), Cell::of(d.value), k});
  }
  emit(doc, format, output, out);
  return 0;
}

int run_parabolas(const std::string& p_str, const std::string& q_str, double a_max,
                  int points, const std::string& format, const std::string& output,
                  std::ostream& out) {
  ResultDocument doc = base_doc("parabolas");
  doc.columns = {"n", "a", "p", "q"};
  if (!p_str.empty() || !q_str.empty()) {
    if (p_str.empty() || q_str.empty())
      throw std::invalid_argument("supply both --p and --q for a membership query");
    const double p = parse_rational(p_str), q = parse_rational(q_str);
    doc.add_meta("p", p);
    doc.add_meta("q", q);
    for (const auto& [n, a] : on_parabola(p, q))
      doc.rows.push_back(
          {Cell::of(double(n)), Cell::of(a), Cell::of(p), Cell::of(q)});
  } else {
    for (int n = 1; n <= 5; ++n) {
      for (int i = 0; i <= points; ++i) {
        const double a = a_max * i / points;
        const double q = (a - n + 1.0) * (a - n);
        if (q < 0.0) continue;
        doc.rows.push_back({Cell::of(double(n)), Cell::of(a),
                            Cell::of(a * (a + 1.0)), Cell::of(q)});
      }
    }
  }
  emit(doc, format, output, out);
  return 0;
}

int run_verify(const std::vector<int>& only, std::ostream& out) {
  const auto results = run_acceptance(only);
  bool all_ok = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " [" << r.seconds
        << "s] " << r.name << " -- " << r.detail << "\n";
    all_ok = all_ok && r.passed;
  }
  out << (all_ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << ": "
      << results.size() << " criteria\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"band edges of (associated) Lame potentials, their supersymmetric "
               "partners, and an independent Floquet verifier"};
  app.require_subcommand(1);

  PotentialArgs pa;
  std::string format = "csv";
  std::string output;
  int grid = 512;
  bool partner_flag = false;
  std::string source = "analytic";
  std::string e_max;
  std::string quantity = "edge-energies";
  double m_min = 0.02, m_max = 0.98, m_step = 0.02;
  std::string para_p, para_q;
  double a_max = 4.0;
  int points = 80;
  std::vector<int> only;

  const auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", output, "write to this file instead of stdout");
  };

  CLI::App* profile = app.add_subcommand("profile", "V(x) over one period");
  add_potential_options(profile, pa);
  add_io(profile);
  profile->add_option("--grid", grid, "number of grid intervals");
  profile->add_flag("--partner", partner_flag, "include W and the partner potential");

  CLI::App* edges = app.add_subcommand("edges", "band edge energies");
  add_potential_options(edges, pa);
  add_io(edges);
  edges->add_option("--source", source, "analytic, numeric, or both")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}));
  edges->add_option("--e-max", e_max, "upper energy bound for the numeric search");

  CLI::App* partner = app.add_subcommand("partner", "superpotential and partner pair");
  add_potential_options(partner, pa);
  add_io(partner);
  partner->add_option("--grid", grid, "number of grid intervals");

  CLI::App* scan = app.add_subcommand("scan", "sweep a quantity over m");
  add_potential_options(scan, pa);
  scan->get_option("--m")->required(false);
  add_io(scan);
  scan->add_option("--quantity", quantity, "edge-energies, gap-delta2, or deviation")
      ->check(CLI::IsMember({"edge-energies", "gap-delta2", "deviation"}));
  scan->add_option("--m-min", m_min, "scan start");
  scan->add_option("--m-max", m_max, "scan end");
  scan->add_option("--m-step", m_step, "scan step");

  CLI::App* dispersion_cmd = app.add_subcommand("dispersion", "E(k) table from the discriminant");
  add_potential_options(dispersion_cmd, pa);
  add_io(dispersion_cmd);
  dispersion_cmd->add_option("--e-max", e_max, "upper energy bound")->required();
  dispersion_cmd->add_option("--grid", grid, "number of energy samples");

  CLI::App* parabolas = app.add_subcommand("parabolas", "solvability parabola data");
  add_io(parabolas);
  parabolas->add_option("--p", para_p, "strength p for a membership query");
  parabolas->add_option("--q", para_q, "strength q for a membership query");
  parabolas->add_option("--a-max", a_max, "curve sampling range");
  parabolas->add_option("--points", points, "curve sampling resolution");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--only", only, "criterion ids to run");

  std::vector<const char*> argv;
  argv.push_back("ellband");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (profile->parsed())
      return run_profile(pa, grid, partner_flag, format, output, out);
    if (edges->parsed()) return run_edges(pa, source, e_max, format, output, out);
    if (partner->parsed()) return run_partner(pa, grid, format, output, out);
    if (scan->parsed())
      return run_scan(pa, quantity, m_min, m_max, m_step, format, output, out);
    if (dispersion_cmd->parsed())
      return run_dispersion(pa, e_max, grid, format, output, out);
    if (parabolas->parsed())
      return run_parabolas(para_p, para_q, a_max, points, format, output, out);
    if (verify->parsed()) return run_verify(only, out);
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const structural_mismatch& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  err << "no subcommand selected\n";
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ellband::cli
