#pragma once

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ncg/suite.hpp"

namespace ncg {

namespace detail {
inline nlohmann::ordered_json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }
inline Complex complex_from(const nlohmann::json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}

inline std::string md_field(std::string s) {
  std::string r;
  for (char c : s) {
    if (c == '|') r += '\\';
    r += c;
  }
  return r;
}
}  // namespace detail

// records sorted by theorem, n, seed; identical input gives identical bytes
inline std::string emit_report(std::vector<VerificationRecord> records, std::vector<SkippedRun> skipped,
                               const std::string& format) {
  sort_by_key(records);
  sort_by_key(skipped);
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records)
      doc["records"].push_back({{"theorem", r.theorem},
                                {"n", r.n},
                                {"seed", r.seed},
                                {"lhs", detail::complex_json(r.lhs)},
                                {"rhs", detail::complex_json(r.rhs)},
                                {"literature_rhs", detail::complex_json(r.literature_rhs)},
                                {"abs_err", r.abs_err},
                                {"rel_err", r.rel_err},
                                {"status", to_string(r.status)},
                                {"notes", r.notes}});
    doc["skipped"] = nlohmann::ordered_json::array();
    for (const auto& s : skipped)
      doc["skipped"].push_back({{"theorem", s.theorem}, {"n", s.n}, {"seed", s.seed}, {"reason", s.reason}});
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  if (format == "csv") {
    os << "theorem,n,seed,lhs_re,lhs_im,rhs_re,rhs_im,literature_rhs_re,literature_rhs_im,abs_err,rel_err,status,notes\n";
    for (const auto& r : records)
      os << r.theorem << ',' << r.n << ',' << r.seed << ',' << detail::num(r.lhs.real()) << ','
         << detail::num(r.lhs.imag()) << ',' << detail::num(r.rhs.real()) << ',' << detail::num(r.rhs.imag()) << ','
         << detail::num(r.literature_rhs.real()) << ',' << detail::num(r.literature_rhs.imag()) << ','
         << detail::num(r.abs_err) << ',' << detail::num(r.rel_err) << ',' << to_string(r.status) << ','
         << detail::csv_field(r.notes) << '\n';
    for (const auto& s : skipped)
      os << s.theorem << ',' << s.n << ',' << s.seed << ",,,,,,,,,skipped," << detail::csv_field(s.reason) << '\n';
    return os.str();
  }
  if (format == "md") {
    os << "| theorem | n | seed | lhs | rhs | stated rhs | abs_err | rel_err | status | notes |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : records)
      os << "| " << r.theorem << " | " << r.n << " | " << r.seed << " | " << format_complex(r.lhs) << " | "
         << format_complex(r.rhs) << " | " << format_complex(r.literature_rhs) << " | " << detail::num(r.abs_err)
         << " | " << detail::num(r.rel_err) << " | " << to_string(r.status) << " | " << detail::md_field(r.notes)
         << " |\n";
    if (!skipped.empty()) {
      os << "\n| skipped theorem | n | seed | reason |\n|---|---|---|---|\n";
      for (const auto& s : skipped)
        os << "| " << s.theorem << " | " << s.n << " | " << s.seed << " | " << detail::md_field(s.reason) << " |\n";
    }
    return os.str();
  }
  throw std::invalid_argument("unknown report format " + format);
}

inline std::string emit_report(const std::vector<VerificationRecord>& records, const std::string& format) {
  return emit_report(records, {}, format);
}

struct ParsedReport {
  std::vector<VerificationRecord> records;
  std::vector<SkippedRun> skipped;
};

inline ParsedReport parse_json_report(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  ParsedReport out;
  for (const auto& j : doc.at("records")) {
    VerificationRecord r;
    r.theorem = j.at("theorem").get<std::string>();
    r.n = j.at("n").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.lhs = detail::complex_from(j.at("lhs"));
    r.rhs = detail::complex_from(j.at("rhs"));
    r.literature_rhs = detail::complex_from(j.at("literature_rhs"));
    r.abs_err = j.at("abs_err").get<double>();
    r.rel_err = j.at("rel_err").get<double>();
    auto st = parse_status(j.at("status").get<std::string>());
    if (!st) throw std::invalid_argument("unknown status in report");
    r.status = *st;
    r.notes = j.at("notes").get<std::string>();
    out.records.push_back(std::move(r));
  }
  if (doc.contains("skipped"))
    for (const auto& j : doc.at("skipped"))
      out.skipped.push_back({j.at("theorem").get<std::string>(), j.at("n").get<int>(),
                             j.at("seed").get<std::uint64_t>(), j.at("reason").get<std::string>()});
  return out;
}

}  // namespace ncg
