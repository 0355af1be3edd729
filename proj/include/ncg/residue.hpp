#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncg/boundary.hpp"
#include "ncg/operators.hpp"
#include "ncg/quadrature.hpp"

namespace ncg {

enum class TheoremId { kThm3_4, kThm3_5, kThm3_6, kThm4_12, kThm4_13, kThm4_14, kEq4_43, kThm4_16, kThm4_17 };
enum class Region { kInterior, kBoundaryI, kBoundaryII };
enum class DensityKind { kPlain, kSandwich };

struct TheoremInfo {
  TheoremId id;
  const char* name;
  Region region;
  DensityKind kind;
  std::size_t perturbation;  // index into PerturbationSpec
};

inline const std::array<TheoremInfo, 9>& theorem_table() {
  static const std::array<TheoremInfo, 9> table{{
      {TheoremId::kThm3_4, "3.4", Region::kInterior, DensityKind::kPlain, 0},
      {TheoremId::kThm3_5, "3.5", Region::kBoundaryI, DensityKind::kPlain, 0},
      {TheoremId::kThm3_6, "3.6", Region::kBoundaryII, DensityKind::kPlain, 0},
      {TheoremId::kThm4_12, "4.12", Region::kInterior, DensityKind::kSandwich, 1},
      {TheoremId::kThm4_13, "4.13", Region::kInterior, DensityKind::kSandwich, 2},
      {TheoremId::kThm4_14, "4.14", Region::kInterior, DensityKind::kSandwich, 3},
      {TheoremId::kEq4_43, "4.43", Region::kInterior, DensityKind::kSandwich, 4},
      {TheoremId::kThm4_16, "4.16", Region::kBoundaryI, DensityKind::kSandwich, 4},
      {TheoremId::kThm4_17, "4.17", Region::kBoundaryII, DensityKind::kSandwich, 4},
  }};
  return table;
}

inline const TheoremInfo& info(TheoremId id) { return theorem_table()[static_cast<std::size_t>(id)]; }
inline std::string to_string(TheoremId id) { return info(id).name; }

inline std::optional<TheoremId> parse_theorem(const std::string& s) {
  for (const auto& t : theorem_table())
    if (s == t.name) return t.id;
  return std::nullopt;
}

// reason the stated closed form does not apply at dimension n, if any
inline std::optional<std::string> validity_issue(TheoremId id, int n) {
  const int m = n / 2;
  switch (id) {
    case TheoremId::kThm3_6:
    case TheoremId::kThm4_17:
      if (m < 2) return "closed form contains (m-2)!, needs m >= 2";
      break;
    case TheoremId::kThm4_13:
      if (n != 4) return "closed form is stated as 0 for n != 4";
      break;
    case TheoremId::kThm4_14:
      if (n != 4 && n != 6) return "closed form is stated as 0 for n not in {4, 6}";
      break;
    default:
      break;
  }
  return std::nullopt;
}

// scalar invariants of the jets at x0
struct JetInvariants {
  double hessian_trace = 0.0;  // sum_j d_j^2 f = -Delta f
  double guv = 0.0;
  double g_u_nabla_v = 0.0;  // sum_{j,k} d_j f u_k d_j v_k
  double dn_f = 0.0;
  double tangential = 0.0;  // u_n v_T(f) - v_n u_T(f)

  explicit JetInvariants(const JetData& j) {
    const int n = j.n;
    hessian_trace = j.f2.trace();
    guv = dot(j.u, j.v);
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) g_u_nabla_v += j.f1[a] * j.u[k] * j.dv(a, k);
    dn_f = j.f1[n - 1];
    double vt = 0.0, ut = 0.0;
    for (int a = 0; a + 1 < n; ++a) {
      vt += j.f1[a] * j.v[a];
      ut += j.f1[a] * j.u[a];
    }
    tangential = j.u[n - 1] * vt - j.v[n - 1] * ut;
  }
};

namespace detail {
inline void require_perturbation(TheoremId id, const JetData& j) {
  if (j.perturbation.index() != info(id).perturbation) {
    static const char* names[] = {"none", "grading", "vector_grading", "torsion_grading", "torsion_vector"};
    throw std::invalid_argument("theorem " + to_string(id) + " needs perturbation " + names[info(id).perturbation] +
                                ", jets carry " + perturbation_kind(j.perturbation));
  }
}

inline double tr_id(int n) { return std::ldexp(1.0, n / 2); }

inline Symbol operator_symbol(const CliffordRep& rep, const JetData& jets, DensityKind kind) {
  const Symbol c = commutator_with_function(compose(dirac_symbol(rep, jets.perturbation), dirac_symbol(rep, jets.perturbation), 0),
                                            jets.f_jets(), 0);
  if (kind == DensityKind::kPlain) return c;
  const Symbol cv = compose(c, vector_field_symbol(rep, jets), 0);
  return compose(Symbol::constant(rep.dim, clifford_vector(rep, jets.u)), cv, 0);
}

inline bool close(Complex a, Complex b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace detail

struct InteriorDensity {
  Complex compose_route;
  Complex assembly_route;
};

// Tr of the sphere integral of sigma_{-n}(P D~^{-n}) by generic composition
inline Complex interior_density_compose(const CliffordRep& rep, const JetData& jets, DensityKind kind) {
  const Symbol p = detail::operator_symbol(rep, jets, kind);
  const Symbol q = inverse_power_symbols(rep, jets.perturbation, rep.dim);
  const Symbol s = compose(p, q, -rep.dim);
  return integrate_term_over_sphere(s.term(-rep.dim)).trace();
}

// the same density from the four-term assembly H1 + H2 + H3 + H4
inline Complex interior_density_assembly(const CliffordRep& rep, const JetData& jets, DensityKind kind) {
  const int n = rep.dim;
  const int m = n / 2;
  const int side = rep.side();
  const SquareMatrix phi = perturbation_matrix(rep, jets.perturbation);
  std::vector<SquareMatrix> mj;
  for (int i = 0; i < n; ++i) mj.push_back(rep.generators[i] * phi + phi * rep.generators[i]);
  const bool sw = kind == DensityKind::kSandwich;
  const SquareMatrix cu = sw ? clifford_vector(rep, jets.u) : SquareMatrix::identity(side);
  const SquareMatrix cv = sw ? clifford_vector(rep, jets.v) : SquareMatrix::identity(side);

  SquareMatrix h1(side), h3(side);
  for (int j = 0; j < n; ++j) {
    h1 += jets.f1[j] * (cu * mj[j] * cv);
    if (sw) h3 += (-2.0 * jets.f1[j]) * (cu * clifford_vector(rep, jets.dv_row(j)));
  }
  const SquareMatrix h2 = (-jets.f2.trace()) * (cu * cv);
  XiPolynomial h4(n, side);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      h4.add_term(unit_index(i) + unit_index(j), (-2.0 * m * jets.f1[j]) * (cu * cv * mj[i]));
  const SquareMatrix total = sphere_volume(n) * (h1 + h2 + h3) + integrate_term_over_sphere(SymbolTerm(2, 0, h4));
  return total.trace();
}

inline InteriorDensity interior_density(const CliffordRep& rep, const JetData& jets, DensityKind kind,
                                        double tolerance = 1e-9) {
  jets.validate();
  if (jets.n != rep.dim) throw DimensionError("jets and representation differ in dimension");
  InteriorDensity d{interior_density_compose(rep, jets, kind), interior_density_assembly(rep, jets, kind)};
  if (!detail::close(d.compose_route, d.assembly_route, tolerance))
    throw RouteDisagreement(d.compose_route, d.assembly_route);
  return d;
}

inline Complex interior_closed_form(TheoremId id, const JetData& jets) {
  detail::require_perturbation(id, jets);
  const int n = jets.n;
  const JetInvariants inv(jets);
  const double vol = sphere_volume(n);
  const double tr = detail::tr_id(n);
  const double base = tr * vol * (inv.hessian_trace * inv.guv + 2.0 * inv.g_u_nabla_v);
  switch (id) {
    case TheoremId::kThm3_4:
      return -inv.hessian_trace * tr * vol;
    case TheoremId::kThm4_12:
      return base;
    case TheoremId::kThm4_13: {
      if (n != 4) return 0.0;
      const auto& x = std::get<VectorGrading>(jets.perturbation).X;
      return base + 16.0 * vol * wedge_pairing({jets.u, jets.v, jets.f1, x});
    }
    case TheoremId::kThm4_14: {
      if (n == 4) return base;
      if (n != 6) return 0.0;
      const auto& t = std::get<TorsionGrading>(jets.perturbation).T;
      return base + 32.0 * vol * wedge_with_three_form({jets.u, jets.v, jets.f1}, t);
    }
    case TheoremId::kEq4_43: {
      const auto& t = std::get<TorsionVector>(jets.perturbation).T;
      return base - 4.0 * tr * vol * t.evaluate(jets.u, jets.v, jets.f1);
    }
    default:
      throw std::invalid_argument("theorem " + to_string(id) + " has no interior closed form");
  }
}

// closed forms exactly as stated in the literature (Delta = -sum d_j^2, Tr[Id] = 2^m)
inline Complex literature_closed_form(TheoremId id, const JetData& jets);

struct BoundaryDensity {
  GaussianRational units;  // value / (pi vol(S^{n-2}))
  Complex value;
  Complex quadrature;  // same integrand, xi_n integrated numerically
};

inline double boundary_sphere_volume(int n) { return sphere_volume(n - 1); }

inline PlaneRational boundary_integrand(const CliffordRep& rep, const JetData& jets, DensityKind kind, Region region) {
  const int n = rep.dim;
  const Symbol p = detail::operator_symbol(rep, jets, kind);
  if (region == Region::kBoundaryI) {
    const SymbolTerm s0 = compose(p, inverse_power_symbols(rep, jets.perturbation, 1), 0).term(0);
    const SymbolTerm q = inverse_power_symbols(rep, jets.perturbation, n - 1).term(-n + 1);
    return restrict_to_boundary(s0).pi_plus() * restrict_to_boundary(q).d_xi_n();
  }
  if (n < 4) throw ValidityError("second boundary case needs m >= 2");
  const SymbolTerm s1 = compose(p, inverse_power_symbols(rep, jets.perturbation, 2), -1).term(-1);
  const SymbolTerm q = inverse_power_symbols(rep, jets.perturbation, n - 2).term(-n + 2);
  return restrict_to_boundary(s1).pi_plus() * restrict_to_boundary(q).d_xi_n();
}

inline BoundaryDensity boundary_density(const CliffordRep& rep, const JetData& jets, DensityKind kind, Region region,
                                        bool with_quadrature = false) {
  jets.validate();
  const int n = rep.dim;
  const auto traced = trace(boundary_integrand(rep, jets, kind, region));
  BoundaryDensity out;
  for (const auto& [mono, v] : contour_integral_pi(traced)) out.units += v * GaussianRational(sphere_monomial_ratio(n - 1, mono));
  const double scale = std::numbers::pi * boundary_sphere_volume(n);
  out.value = out.units.to_complex() * scale;
  if (with_quadrature) {
    Complex acc = 0.0;
    for (const auto& [mono, r] : traced) {
      const double w = static_cast<double>(sphere_monomial_ratio(n - 1, mono));
      if (w == 0.0) continue;
      acc += w * real_line_integral([&r = r](double x) { return r.evaluate(x); });
    }
    out.quadrature = acc * boundary_sphere_volume(n);
  }
  return out;
}

inline BoundaryDensity boundary_case1(const CliffordRep& rep, const JetData& jets, DensityKind kind,
                                      bool with_quadrature = false) {
  return boundary_density(rep, jets, kind, Region::kBoundaryI, with_quadrature);
}

inline BoundaryDensity boundary_case2(const CliffordRep& rep, const JetData& jets, DensityKind kind,
                                      bool with_quadrature = false) {
  if (rep.dim < 4) throw ValidityError("second boundary case needs m >= 2");
  return boundary_density(rep, jets, kind, Region::kBoundaryII, with_quadrature);
}

// boundary coefficients in units of pi: case I (2m-1)! 2^{1-2m} i / ((m-1)! m!),
// case II (2m-2)! 2^{2-2m} i / ((m-2)! m!), tangential (2m-2)! 2^{1-2m} i / ((m-1)! m!)
inline GaussianRational case1_coefficient(int m) {
  return {Rational(0), rational_factorial(2 * m - 1) / (rational_factorial(m - 1) * rational_factorial(m)) /
                           pow(GaussianRational(2), 2 * m - 1).re};
}
inline GaussianRational case2_coefficient(int m) {
  if (m < 2) throw ValidityError("case II coefficient needs m >= 2");
  return {Rational(0), rational_factorial(2 * m - 2) / (rational_factorial(m - 2) * rational_factorial(m)) /
                           pow(GaussianRational(2), 2 * m - 2).re};
}
inline GaussianRational tangential_coefficient(int m) {
  return {Rational(0), rational_factorial(2 * m - 2) / (rational_factorial(m - 1) * rational_factorial(m)) /
                           pow(GaussianRational(2), 2 * m - 1).re};
}

// closed form in units of pi vol(S^{n-2})
inline GaussianRational boundary_closed_form_units(TheoremId id, const JetData& jets) {
  detail::require_perturbation(id, jets);
  const int m = jets.n / 2;
  const JetInvariants inv(jets);
  const GaussianRational tr(Rational(static_cast<long long>(1) << m));
  const GaussianRational dn = GaussianRational::from(inv.dn_f);
  switch (id) {
    case TheoremId::kThm3_5:
      return case1_coefficient(m) * dn * tr;
    case TheoremId::kThm3_6:
      return case2_coefficient(m) * dn * tr;
    case TheoremId::kThm4_16:
      return (tangential_coefficient(m) * GaussianRational::from(inv.tangential) -
              case1_coefficient(m) * dn * GaussianRational::from(inv.guv)) *
             tr;
    case TheoremId::kThm4_17:
      return -(case2_coefficient(m) * dn * GaussianRational::from(inv.guv) * tr);
    default:
      throw std::invalid_argument("theorem " + to_string(id) + " has no boundary closed form");
  }
}

inline Complex boundary_closed_form(TheoremId id, const JetData& jets) {
  return boundary_closed_form_units(id, jets).to_complex() * (std::numbers::pi * boundary_sphere_volume(jets.n));
}

inline Complex closed_form(TheoremId id, const JetData& jets) {
  return info(id).region == Region::kInterior ? interior_closed_form(id, jets) : boundary_closed_form(id, jets);
}

inline Complex literature_closed_form(TheoremId id, const JetData& jets) {
  detail::require_perturbation(id, jets);
  const int n = jets.n;
  const int m = n / 2;
  const JetInvariants inv(jets);
  const double vol = sphere_volume(n);
  const double tr = detail::tr_id(n);
  const double g_terms = inv.hessian_trace * inv.guv + 2.0 * inv.g_u_nabla_v;
  switch (id) {
    case TheoremId::kThm4_12:
      return g_terms * tr;
    case TheoremId::kThm4_13: {
      if (n != 4) return 0.0;
      const auto& x = std::get<VectorGrading>(jets.perturbation).X;
      return 8.0 * vol * g_terms + 128.0 * vol * wedge_pairing({jets.u, jets.v, jets.f1, x});
    }
    case TheoremId::kThm4_14: {
      const auto& t = std::get<TorsionGrading>(jets.perturbation).T;
      if (n == 4) {
        auto wt = [&](const std::vector<double>& a) { return wedge_with_three_form({a}, t); };
        const double w = -inv.guv * wt(jets.f1) + dot(jets.u, jets.f1) * wt(jets.v) - dot(jets.v, jets.f1) * wt(jets.u);
        return 8.0 * vol * g_terms + Complex(0.0, 16.0) * w * vol;
      }
      if (n == 6) return 4.0 * vol * g_terms + 32.0 * vol * wedge_with_three_form({jets.u, jets.v, jets.f1}, t);
      return 0.0;
    }
    case TheoremId::kEq4_43: {
      const auto& t = std::get<TorsionVector>(jets.perturbation).T;
      return (g_terms - 4.0 * t.evaluate(jets.u, jets.v, jets.f1)) * tr;
    }
    case TheoremId::kThm4_16: {
      const double s = std::numbers::pi * boundary_sphere_volume(n) * tr;
      return (tangential_coefficient(m).to_complex() * inv.tangential +
              case1_coefficient(m).to_complex() * inv.dn_f * inv.guv) *
             s;
    }
    default:
      return closed_form(id, jets);
  }
}

// the plain interior density is linear in (grad f, Hess f); coefficients come
// from the pipeline evaluated on unit jets
struct LinearDensity {
  std::vector<Complex> gradient;
  Eigen::MatrixXcd hessian;  // upper triangle, coefficient of f2(a, b) for a <= b

  Complex operator()(std::span<const double> f1, const Eigen::MatrixXd& f2) const {
    Complex s = 0.0;
    const int n = static_cast<int>(gradient.size());
    for (int a = 0; a < n; ++a) {
      s += gradient[a] * f1[a];
      for (int b = a; b < n; ++b) s += hessian(a, b) * f2(a, b);
    }
    return s;
  }
};

inline LinearDensity plain_density_functional(const CliffordRep& rep, const PerturbationSpec& pert = NoPerturbation{},
                                              double tolerance = 1e-9) {
  const int n = rep.dim;
  LinearDensity out{std::vector<Complex>(n), Eigen::MatrixXcd::Zero(n, n)};
  auto eval = [&](const JetData& j) { return interior_density(rep, j, DensityKind::kPlain, tolerance).compose_route; };
  for (int a = 0; a < n; ++a) {
    JetData j = JetData::zeros(n);
    j.perturbation = pert;
    j.f1[a] = 1.0;
    out.gradient[a] = eval(j);
    for (int b = a; b < n; ++b) {
      JetData h = JetData::zeros(n);
      h.perturbation = pert;
      h.f2(a, b) = 1.0;
      h.f2(b, a) = 1.0;
      out.hessian(a, b) = eval(h);
    }
  }
  return out;
}

// known differences between the stated closed form and the pipeline
inline std::vector<std::string> literature_deltas(TheoremId id, int n) {
  switch (id) {
    case TheoremId::kThm4_12:
      return {"stated form omits the vol(S^{n-1}) factor"};
    case TheoremId::kThm4_13:
      if (n == 4)
        return {"stated prefactor 2^3 on the g-terms, pipeline Tr[Id] = 2^2",
                "stated wedge coefficient 128 vol(S^3), pipeline 16 vol(S^3)"};
      return {"stated value 0 for n != 4, pipeline keeps the Tr[Id] vol(S^{n-1}) g-terms"};
    case TheoremId::kThm4_14:
      if (n == 4)
        return {"stated prefactor 2^3 on the g-terms, pipeline Tr[Id] = 2^2",
                "stated 2^4 sqrt(-1) (...)^T term cancels between H1 and H4 in the pipeline"};
      if (n == 6) return {"stated prefactor 2^2 on the g-terms, pipeline Tr[Id] = 2^3"};
      return {"stated value 0 for n not in {4, 6}, pipeline keeps the g-terms"};
    case TheoremId::kEq4_43:
      return {"stated form omits the vol(S^{n-1}) factor", "Y-dependence cancels at matrix level"};
    case TheoremId::kThm4_16:
      return {"normal term d_n f g(u,v) has the opposite sign to the stated form",
              "stray free xi_j in the stated tangential term dropped"};
    default:
      return {};
  }
}

enum class Status { kMatch, kSignFlipMatch, kMismatch };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::kMatch:
      return "match";
    case Status::kSignFlipMatch:
      return "sign-flip-match";
    default:
      return "mismatch";
  }
}

inline std::optional<Status> parse_status(const std::string& s) {
  for (auto st : {Status::kMatch, Status::kSignFlipMatch, Status::kMismatch})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

struct VerificationRecord {
  std::string theorem;
  int n = 0;
  std::uint64_t seed = 0;
  Complex lhs;
  Complex rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  Status status = Status::kMismatch;
  std::string notes;
  Complex literature_rhs;

  friend bool operator==(const VerificationRecord&, const VerificationRecord&) = default;
};

inline constexpr double kAbsoluteTolerance = 1e-9;

inline Status classify(Complex lhs, Complex rhs, double tolerance, double* abs_err, double* rel_err) {
  *abs_err = std::abs(lhs - rhs);
  const double scale = std::abs(rhs);
  if (scale == 0.0) {
    *rel_err = *abs_err;
    if (*abs_err < kAbsoluteTolerance) return Status::kMatch;
    return Status::kMismatch;
  }
  *rel_err = *abs_err / scale;
  if (*rel_err < tolerance) return Status::kMatch;
  if (std::abs(lhs + rhs) < tolerance * scale) return Status::kSignFlipMatch;
  return Status::kMismatch;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = "; ") {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += sep;
    s += p;
  }
  return s;
}

inline std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// pipeline value for theorem `id`
inline Complex pipeline_value(TheoremId id, const CliffordRep& rep, const JetData& jets, double tolerance = 1e-9) {
  const auto& t = info(id);
  if (t.region == Region::kInterior) return interior_density(rep, jets, t.kind, tolerance).compose_route;
  return boundary_density(rep, jets, t.kind, t.region).value;
}

inline VerificationRecord compare(TheoremId id, const JetData& jets, double tolerance = 1e-9, std::uint64_t seed = 0) {
  VerificationRecord rec;
  rec.theorem = to_string(id);
  rec.n = jets.n;
  rec.seed = seed;
  try {
    detail::require_perturbation(id, jets);
  } catch (const std::invalid_argument& e) {
    rec.status = Status::kMismatch;
    rec.notes = std::string("usage error: ") + e.what();
    return rec;
  }
  std::vector<std::string> notes;
  try {
    const CliffordRep rep = build_rep(jets.n);
    rec.lhs = pipeline_value(id, rep, jets, tolerance);
    rec.rhs = closed_form(id, jets);
    rec.literature_rhs = literature_closed_form(id, jets);
    rec.status = classify(rec.lhs, rec.rhs, tolerance, &rec.abs_err, &rec.rel_err);
  } catch (const RouteDisagreement& e) {
    rec.status = Status::kMismatch;
    rec.lhs = e.route_a();
    notes.push_back(e.what());
  } catch (const ValidityError& e) {
    rec.status = Status::kMismatch;
    notes.push_back(std::string("validity: ") + e.what());
  }
  if (auto issue = validity_issue(id, jets.n)) notes.push_back("validity: " + *issue);
  for (auto& d : literature_deltas(id, jets.n)) notes.push_back(d);
  if (rec.literature_rhs != rec.rhs) notes.push_back("stated rhs " + format_complex(rec.literature_rhs));
  rec.notes = join(notes);
  return rec;
}

}  // namespace ncg
