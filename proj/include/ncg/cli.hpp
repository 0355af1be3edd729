#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncg/jets_io.hpp"
#include "ncg/report.hpp"
#include "ncg/suite.hpp"

namespace ncg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace cli {

struct Options {
  std::vector<int> dims;
  std::vector<std::string> theorems;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::optional<double> tolerance;
  std::string format = "json";
  std::string jets;
  std::size_t samples = 100000;
  int max_m = 5;
};

inline std::vector<TheoremId> theorem_ids(const std::vector<std::string>& names) {
  std::vector<TheoremId> out;
  for (const auto& s : names) {
    auto id = parse_theorem(s);
    if (!id) throw UsageError("unknown theorem id " + s);
    out.push_back(*id);
  }
  return out;
}

inline JetData load_jets(const std::string& path, std::ostream& err) {
  if (!std::ifstream(path)) throw UsageError("cannot open jets file " + path);
  ParsedJets parsed = load_jets_file(path);
  for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
  return parsed.jets;
}

inline nlohmann::ordered_json complex_json(Complex z) { return detail::complex_json(z); }

inline int verify(const Options& o, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  if (!o.dims.empty()) cfg.dims = o.dims;
  if (!o.theorems.empty()) cfg.theorems = theorem_ids(o.theorems);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.tolerance) cfg.tolerance = *o.tolerance;
  cfg.format = o.format;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  SuiteResult res;
  if (!o.jets.empty()) {
    const JetData jets = load_jets(o.jets, err);
    for (auto id : cfg.theorems) {
      if (jets.perturbation.index() != info(id).perturbation)
        throw UsageError("theorem " + to_string(id) + " does not use perturbation " + perturbation_kind(jets.perturbation));
      if (auto issue = validity_issue(id, jets.n)) {
        res.skipped.push_back({to_string(id), jets.n, 0, *issue});
        continue;
      }
      res.records.push_back(compare(id, jets, cfg.tolerance, 0));
    }
  } else {
    res = run_suite(cfg);
  }
  out << emit_report(res.records, res.skipped, cfg.format);
  return res.all_ok() ? kExitOk : kExitMismatch;
}

inline int density(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format != "json" && o.format != "md") throw UsageError("density output format must be json or md");
  JetData jets;
  if (!o.jets.empty()) {
    jets = load_jets(o.jets, err);
  } else {
    if (o.dims.size() != 1 || o.theorems.size() != 1)
      throw UsageError("density needs --jets, or a single --dim and --theorem for random jets");
    jets = random_jets(theorem_ids(o.theorems)[0], o.dims[0], o.seed.value_or(1));
  }
  jets.validate();
  const double tol = o.tolerance.value_or(1e-9);
  const CliffordRep rep = build_rep(jets.n);

  nlohmann::ordered_json doc;
  doc["n"] = jets.n;
  doc["perturbation"] = perturbation_kind(jets.perturbation);
  bool ok = true;
  for (auto [kind, label] : {std::pair{DensityKind::kPlain, "plain"}, std::pair{DensityKind::kSandwich, "sandwich"}}) {
    nlohmann::ordered_json entry;
    try {
      const auto d = interior_density(rep, jets, kind, tol);
      entry["interior"] = {{"composition", complex_json(d.compose_route)}, {"assembly", complex_json(d.assembly_route)}};
    } catch (const RouteDisagreement& e) {
      ok = false;
      entry["interior"] = {{"composition", complex_json(e.route_a())},
                           {"assembly", complex_json(e.route_b())},
                           {"error", e.what()}};
    }
    const auto b1 = boundary_case1(rep, jets, kind);
    entry["boundary_case_I"] = complex_json(b1.value);
    if (jets.n >= 4)
      entry["boundary_case_II"] = complex_json(boundary_case2(rep, jets, kind).value);
    else
      entry["boundary_case_II"] = "requires n >= 4";
    doc[label] = entry;
  }

  if (o.format == "json") {
    out << doc.dump(2) << "\n";
  } else {
    out << "| operator | quantity | value |\n|---|---|---|\n";
    for (const char* label : {"plain", "sandwich"}) {
      const auto& e = doc[label];
      for (const auto& [k, v] : e.items()) {
        if (k == "interior") {
          for (const char* route : {"composition", "assembly"})
            out << "| " << label << " | interior (" << route << ") | "
                << format_complex(detail::complex_from(v.at(route))) << " |\n";
        } else if (v.is_string()) {
          out << "| " << label << " | " << k << " | " << v.get<std::string>() << " |\n";
        } else {
          out << "| " << label << " | " << k << " | " << format_complex(detail::complex_from(v)) << " |\n";
        }
      }
    }
  }
  return ok ? kExitOk : kExitMismatch;
}

// exact boundary coefficients and derivative identities, pipeline against closed form
inline int table(const Options& o, std::ostream& out, std::ostream&) {
  if (o.format != "json" && o.format != "md") throw UsageError("table output format must be json or md");
  if (o.max_m < 1 || o.max_m > 6) throw UsageError("--max-m must be in 1..6");
  bool ok = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int m = 1; m <= o.max_m; ++m) {
    nlohmann::ordered_json row;
    row["m"] = m;
    const auto d1 = inverse_power_derivative(m), c1 = inverse_power_derivative_closed(m);
    const auto d1i = inverse_power_derivative(m, GaussianRational::i());
    const auto d2 = linear_over_power_derivative(m), c2 = linear_over_power_derivative_closed(m);
    row["inverse_power_derivative"] = {{"symbolic", d1.str()}, {"closed", c1.str()}, {"equal", d1 == c1}};
    row["inverse_power_derivative_i_numerator"] = {
        {"symbolic", d1i.str()}, {"i_times_closed", (GaussianRational::i() * c1).str()}, {"equal", d1i == GaussianRational::i() * c1}};
    row["linear_over_power_derivative"] = {{"symbolic", d2.str()}, {"closed", c2.str()}, {"equal", d2 == c2}};
    ok = ok && d1 == c1 && d1i == GaussianRational::i() * c1 && d2 == c2;
    row["case_I_coefficient"] = case1_coefficient(m).str();
    if (m >= 2) row["case_II_coefficient"] = case2_coefficient(m).str();
    // pipeline values need 2m-dimensional matrices; kept to m <= 4
    if (m <= 4) {
      JetData jets = JetData::zeros(2 * m);
      jets.f1[2 * m - 1] = 1.0;
      const CliffordRep rep = build_rep(2 * m);
      const GaussianRational tr(Rational(static_cast<long long>(1) << m));
      const auto p1 = boundary_case1(rep, jets, DensityKind::kPlain).units / tr;
      row["case_I_pipeline"] = p1.str();
      row["case_I_equal"] = p1 == case1_coefficient(m);
      ok = ok && p1 == case1_coefficient(m);
      if (m >= 2) {
        const auto p2 = boundary_case2(rep, jets, DensityKind::kPlain).units / tr;
        row["case_II_pipeline"] = p2.str();
        row["case_II_equal"] = p2 == case2_coefficient(m);
        ok = ok && p2 == case2_coefficient(m);
      }
    }
    rows.push_back(row);
  }
  if (o.format == "json") {
    out << nlohmann::ordered_json{{"units", "coefficients are in units of pi; boundary values carry d_n f Tr[Id] vol(S^{n-2})"},
                                  {"rows", rows}}
                .dump(2)
        << "\n";
  } else {
    out << "| m | d^m (x+i)^-m at i | closed | d^m x(x+i)^-m at i | closed | case I (pipeline) | case I | case II (pipeline) "
           "| case II |\n|---|---|---|---|---|---|---|---|---|\n";
    auto get = [](const nlohmann::ordered_json& r, const char* k) {
      return r.contains(k) ? r.at(k).get<std::string>() : std::string("-");
    };
    for (const auto& r : rows)
      out << "| " << r["m"] << " | " << r["inverse_power_derivative"]["symbolic"].get<std::string>() << " | "
          << r["inverse_power_derivative"]["closed"].get<std::string>() << " | "
          << r["linear_over_power_derivative"]["symbolic"].get<std::string>() << " | "
          << r["linear_over_power_derivative"]["closed"].get<std::string>() << " | " << get(r, "case_I_pipeline")
          << " | " << get(r, "case_I_coefficient") << " | " << get(r, "case_II_pipeline") << " | "
          << get(r, "case_II_coefficient") << " |\n";
  }
  return ok ? kExitOk : kExitMismatch;
}

// independent numeric oracles against the symbolic values
inline int oracle(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format != "json" && o.format != "md") throw UsageError("oracle output format must be json or md");
  if (o.samples < 10000) throw UsageError("--samples must be at least 10000");
  JetData jets;
  TheoremId id = TheoremId::kThm3_4;
  if (!o.theorems.empty()) id = theorem_ids(o.theorems)[0];
  if (!o.jets.empty()) {
    jets = load_jets(o.jets, err);
  } else {
    if (o.dims.size() > 1) throw UsageError("oracle takes a single --dim");
    jets = random_jets(id, o.dims.empty() ? 4 : o.dims[0], o.seed.value_or(1));
  }
  jets.validate();
  const auto kind = jets.perturbation.index() == 0 && info(id).kind == DensityKind::kPlain ? DensityKind::kPlain
                                                                                             : DensityKind::kSandwich;
  const CliffordRep rep = build_rep(jets.n);
  const int n = jets.n;
  const std::uint64_t seed = o.seed.value_or(1);

  const Symbol p = detail::operator_symbol(rep, jets, kind);
  const SymbolTerm top = compose(p, inverse_power_symbols(rep, jets.perturbation, n), -n).term(-n);
  const Complex exact = integrate_term_over_sphere(top).trace();
  const auto mc = mc_sphere_oracle(n, [&](std::span<const double> xi) { return top.evaluate(xi).trace(); }, o.samples, seed);
  const double mc_err = std::abs(mc.estimate - exact);
  const bool mc_ok = mc_err <= 4.0 * mc.standard_error + 1e-9 * std::max(1.0, std::abs(exact));

  nlohmann::ordered_json doc;
  doc["n"] = n;
  doc["operator"] = kind == DensityKind::kPlain ? "plain" : "sandwich";
  doc["perturbation"] = perturbation_kind(jets.perturbation);
  doc["interior"] = {{"exact", complex_json(exact)},
                     {"monte_carlo", complex_json(mc.estimate)},
                     {"standard_error", mc.standard_error},
                     {"samples", mc.samples},
                     {"seed", seed},
                     {"within_4_sigma", mc_ok}};
  bool ok = mc_ok;
  nlohmann::ordered_json bnd = nlohmann::ordered_json::array();
  for (Region r : {Region::kBoundaryI, Region::kBoundaryII}) {
    if (r == Region::kBoundaryII && n < 4) continue;
    const auto b = boundary_density(rep, jets, kind, r, true);
    const double scale = std::max(1.0, std::abs(b.value));
    const double rel = std::abs(b.value - b.quadrature) / scale;
    bnd.push_back({{"case", r == Region::kBoundaryI ? "I" : "II"},
                   {"contour", complex_json(b.value)},
                   {"quadrature", complex_json(b.quadrature)},
                   {"rel_err", rel},
                   {"within_1e-6", rel < 1e-6}});
    ok = ok && rel < 1e-6;
  }
  doc["boundary"] = bnd;
  if (o.format == "json") {
    out << doc.dump(2) << "\n";
  } else {
    out << "| quantity | symbolic | oracle | error | ok |\n|---|---|---|---|---|\n";
    out << "| interior sphere integral | " << format_complex(exact) << " | " << format_complex(mc.estimate) << " | "
        << mc_err << " (se " << mc.standard_error << ") | " << (mc_ok ? "yes" : "no") << " |\n";
    for (const auto& b : bnd)
      out << "| boundary case " << b["case"].get<std::string>() << " | "
          << format_complex(detail::complex_from(b["contour"])) << " | "
          << format_complex(detail::complex_from(b["quadrature"])) << " | " << b["rel_err"].get<double>() << " | "
          << (b["within_1e-6"].get<bool>() ? "yes" : "no") << " |\n";
  }
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"noncommutative residue verification"};
  app.require_subcommand(1);
  cli::Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dim", o.dims, "even dimension(s)")->delimiter(',');
    sub->add_option("--theorem", o.theorems, "theorem id(s): 3.4 3.5 3.6 4.12 4.13 4.14 4.43 4.16 4.17")->delimiter(',');
    sub->add_option("--seed", o.seed, "single seed");
    sub->add_option("--seeds", o.seeds, "comma separated seeds")->delimiter(',');
    sub->add_option("--tolerance", o.tolerance, "relative tolerance");
    sub->add_option("--format", o.format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
    sub->add_option("--jets", o.jets, "jet data JSON file");
  };
  auto* verify = app.add_subcommand("verify", "compare pipeline densities with closed forms");
  auto* density = app.add_subcommand("density", "print interior and boundary densities for a jet file");
  auto* table = app.add_subcommand("table", "exact boundary coefficients and derivative identities");
  auto* oracle = app.add_subcommand("oracle", "Monte Carlo and quadrature cross-checks");
  for (auto* s : {verify, density, table, oracle}) add_common(s);
  oracle->add_option("--samples", o.samples, "Monte Carlo samples");
  table->add_option("--max-m", o.max_m, "largest m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cli::verify(o, out, err);
    if (density->parsed()) return cli::density(o, out, err);
    if (table->parsed()) return cli::table(o, out, err);
    return cli::oracle(o, out, err);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
}

}  // namespace ncg
