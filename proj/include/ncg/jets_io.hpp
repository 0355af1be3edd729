#pragma once

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncg/operators.hpp"

namespace ncg {

// lists every offending field rather than stopping at the first
class SchemaError : public std::invalid_argument {
 public:
  explicit SchemaError(std::vector<std::string> fields)
      : std::invalid_argument("invalid jets document: " + join_fields(fields)), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  static std::string join_fields(const std::vector<std::string>& f) {
    std::string s;
    for (const auto& x : f) s += (s.empty() ? "" : ", ") + x;
    return s;
  }
  std::vector<std::string> fields_;
};

struct ParsedJets {
  JetData jets;
  std::vector<std::string> warnings;
};

namespace detail {

struct JetReader {
  const nlohmann::json& doc;
  int n;
  std::vector<std::string>& errors;
  std::vector<std::string>& warnings;

  bool number(const nlohmann::json& j) const { return j.is_number(); }

  std::vector<double> vector(const nlohmann::json& parent, const std::string& key, const std::string& path) {
    std::vector<double> out(n, 0.0);
    if (!parent.contains(key)) {
      warnings.push_back(path + " missing, using zeros");
      return out;
    }
    const auto& j = parent.at(key);
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
      errors.push_back(path + " (expected array of " + std::to_string(n) + " numbers)");
      return out;
    }
    for (int k = 0; k < n; ++k) {
      if (!number(j[k])) {
        errors.push_back(path + "[" + std::to_string(k) + "] (not a number)");
        continue;
      }
      out[k] = j[k].get<double>();
    }
    return out;
  }

  Eigen::MatrixXd matrix(const std::string& key) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    if (!doc.contains(key)) {
      warnings.push_back(key + " missing, using zeros");
      return m;
    }
    const auto& j = doc.at(key);
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
      errors.push_back(key + " (expected " + std::to_string(n) + "x" + std::to_string(n) + " array)");
      return m;
    }
    for (int a = 0; a < n; ++a) {
      if (!j[a].is_array() || static_cast<int>(j[a].size()) != n) {
        errors.push_back(key + "[" + std::to_string(a) + "] (expected array of " + std::to_string(n) + " numbers)");
        continue;
      }
      for (int b = 0; b < n; ++b) {
        if (!number(j[a][b])) {
          errors.push_back(key + "[" + std::to_string(a) + "][" + std::to_string(b) + "] (not a number)");
          continue;
        }
        m(a, b) = j[a][b].get<double>();
      }
    }
    return m;
  }

  AntisymTensor3 tensor(const nlohmann::json& p) {
    AntisymTensor3 t(n);
    if (!p.contains("T")) {
      warnings.push_back("perturbation.T missing, using zero");
      return t;
    }
    const auto& arr = p.at("T");
    if (!arr.is_array()) {
      errors.push_back("perturbation.T (expected array of {i, j, k, value})");
      return t;
    }
    for (std::size_t e = 0; e < arr.size(); ++e) {
      const std::string path = "perturbation.T[" + std::to_string(e) + "]";
      const auto& c = arr[e];
      bool ok = c.is_object();
      for (const char* idx : {"i", "j", "k"})
        ok = ok && c.contains(idx) && c.at(idx).is_number_integer() && c.at(idx).get<int>() >= 0 &&
             c.at(idx).get<int>() < n;
      ok = ok && c.contains("value") && number(c.at("value"));
      if (!ok) {
        errors.push_back(path + " (expected integer i, j, k in [0, n) and numeric value)");
        continue;
      }
      const int i = c.at("i").get<int>(), j = c.at("j").get<int>(), k = c.at("k").get<int>();
      const double value = c.at("value").get<double>();
      if (i == j || j == k || i == k) {
        if (value != 0.0) errors.push_back(path + " (repeated index with nonzero value)");
        continue;
      }
      if (t(i, j, k) != 0.0) warnings.push_back(path + " overrides an earlier component");
      t.set(i, j, k, value);
    }
    return t;
  }
};

}  // namespace detail

inline ParsedJets parse_jets_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError({std::string("document (") + e.what() + ")"});
  }
  if (!doc.is_object()) throw SchemaError({"document (expected a JSON object)"});
  if (!doc.contains("n") || !doc.at("n").is_number_integer()) throw SchemaError({"n (required even integer)"});
  const int n = doc.at("n").get<int>();
  if (n < 2 || n > kMaxDim || n % 2 != 0)
    throw SchemaError({"n (must be even and between 2 and " + std::to_string(kMaxDim) + ")"});

  ParsedJets out;
  std::vector<std::string> errors;
  detail::JetReader rd{doc, n, errors, out.warnings};
  JetData& j = out.jets;
  j.n = n;
  j.f1 = rd.vector(doc, "f1", "f1");
  j.f2 = rd.matrix("f2");
  j.u = rd.vector(doc, "u", "u");
  j.v = rd.vector(doc, "v", "v");
  j.dv = rd.matrix("dv");
  if (doc.contains("du")) {
    j.du = rd.matrix("du");
  } else {
    j.du = Eigen::MatrixXd::Zero(n, n);
  }
  if ((j.f2 - j.f2.transpose()).cwiseAbs().maxCoeff() > 1e-12) errors.push_back("f2 (not symmetric)");

  static const std::vector<std::string> known{"n", "f1", "f2", "u", "v", "dv", "du", "perturbation"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) out.warnings.push_back("unknown field " + key + " ignored");

  if (!doc.contains("perturbation")) {
    out.warnings.push_back("perturbation missing, using none");
    j.perturbation = NoPerturbation{};
  } else {
    const auto& p = doc.at("perturbation");
    std::string kind;
    if (!p.is_object() || !p.contains("kind") || !p.at("kind").is_string()) {
      errors.push_back("perturbation.kind (required string)");
    } else {
      kind = p.at("kind").get<std::string>();
    }
    if (kind == "none") {
      j.perturbation = NoPerturbation{};
    } else if (kind == "grading") {
      j.perturbation = GradingPerturbation{};
    } else if (kind == "vector_grading") {
      j.perturbation = VectorGrading{rd.vector(p, "X", "perturbation.X")};
    } else if (kind == "torsion_grading") {
      j.perturbation = TorsionGrading{rd.tensor(p)};
    } else if (kind == "torsion_vector") {
      auto t = rd.tensor(p);
      j.perturbation = TorsionVector{t, rd.vector(p, "Y", "perturbation.Y")};
    } else if (!kind.empty()) {
      errors.push_back("perturbation.kind (unknown kind " + kind +
                       "; expected none, grading, vector_grading, torsion_grading or torsion_vector)");
    }
  }
  if (!errors.empty()) throw SchemaError(errors);
  return out;
}

inline ParsedJets load_jets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open jets file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_jets_json(ss.str());
}

inline nlohmann::ordered_json jets_to_json(const JetData& j) {
  auto mat = [&](const Eigen::MatrixXd& m) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      a.push_back(row);
    }
    return a;
  };
  auto tensor = [](const AntisymTensor3& t) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& [key, value] : t.components())
      a.push_back({{"i", key[0]}, {"j", key[1]}, {"k", key[2]}, {"value", value}});
    return a;
  };
  nlohmann::ordered_json doc;
  doc["n"] = j.n;
  doc["f1"] = j.f1;
  doc["f2"] = mat(j.f2);
  doc["u"] = j.u;
  doc["v"] = j.v;
  doc["dv"] = mat(j.dv);
  nlohmann::ordered_json p;
  p["kind"] = perturbation_kind(j.perturbation);
  std::visit(
      [&](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, VectorGrading>) p["X"] = q.X;
        if constexpr (std::is_same_v<T, TorsionGrading>) p["T"] = tensor(q.T);
        if constexpr (std::is_same_v<T, TorsionVector>) {
          p["T"] = tensor(q.T);
          p["Y"] = q.Y;
        }
      },
      j.perturbation);
  doc["perturbation"] = p;
  return doc;
}

}  // namespace ncg
