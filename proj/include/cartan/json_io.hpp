#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cartan/balgebra.hpp"
#include "cartan/errors.hpp"
#include "cartan/exp_vec.hpp"
#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"
#include "cartan/modules.hpp"
#include "cartan/reps.hpp"
#include "cartan/scalar.hpp"
#include "cartan/verify.hpp"

// JSON encodings. Scalars are strings ("3", "-1/2", "1/2+3i", "-i"); integer JSON
// numbers and {"re","im"} objects are also accepted on input. Indices into
// N-dimensional data (derivation index i, matrix units E_ij) are 1-based in JSON.

namespace cartan::json_io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw ParseError(what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  auto v = j.get<std::int64_t>();
  if (v < -(1 << 30) || v > (1 << 30)) bad(std::string(what) + " out of range");
  return static_cast<int>(v);
}

}  // namespace detail

// ---------------------------------------------------------------- scalars

inline Scalar parse_scalar_text(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) detail::bad("empty scalar");
  if (s.back() != 'i') return Scalar(Rational::parse(s));
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/') {
      split = k;
      break;
    }
  std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  Rational imv = im.empty() || im == "+" ? Rational(1) : im == "-" ? Rational(-1)
                                                                   : Rational::parse(im[0] == '+' ? im.substr(1) : im);
  return Scalar(re.empty() ? Rational(0) : Rational::parse(re), imv);
}

inline json to_json(const Scalar& s) { return s.to_string(); }

inline Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
  if (j.is_string()) return parse_scalar_text(j.get<std::string>());
  if (j.is_object()) {
    Rational re = j.contains("re") ? parse_scalar_text(j["re"].is_string() ? j["re"].get<std::string>()
                                                                           : j["re"].dump()).re()
                                   : Rational(0);
    Rational im = j.contains("im") ? parse_scalar_text(j["im"].is_string() ? j["im"].get<std::string>()
                                                                           : j["im"].dump()).re()
                                   : Rational(0);
    return Scalar(re, im);
  }
  detail::bad("scalar must be a string, integer, or {re, im} object");
}

inline std::vector<Scalar> scalars_from_json(const json& j, const char* what) {
  if (!j.is_array()) detail::bad(std::string(what) + " must be an array");
  std::vector<Scalar> out;
  for (const auto& x : j) out.push_back(scalar_from_json(x));
  return out;
}

inline json to_json(const std::vector<Scalar>& v) {
  json j = json::array();
  for (const auto& x : v) j.push_back(to_json(x));
  return j;
}

inline json to_json(const CoefVec& u) { return to_json(u.entries()); }

inline CoefVec coefvec_from_json(const json& j, int n, const char* what) {
  auto v = scalars_from_json(j, what);
  if (static_cast<int>(v.size()) != n)
    throw LengthMismatch(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(n));
  return CoefVec(std::move(v));
}

inline json to_json(const ExpVec& r) { return r.to_vector(); }

inline ExpVec expvec_from_json(const json& j) {
  if (!j.is_array()) detail::bad("degree must be an integer array");
  if (j.size() > static_cast<std::size_t>(kMaxN)) detail::bad("degree longer than " + std::to_string(kMaxN));
  std::vector<int> v;
  for (const auto& x : j) v.push_back(detail::as_int(x, "degree entry"));
  return ExpVec(v);
}

inline json to_json(const Matrix& m) {
  json j = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    j.push_back(row);
  }
  return j;
}

inline Matrix matrix_from_json(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    detail::bad(std::string(what) + " must have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    auto row = scalars_from_json(j[i], what);
    if (static_cast<int>(row.size()) != cols)
      detail::bad(std::string(what) + " must have " + std::to_string(cols) + " columns");
    for (int k = 0; k < cols; ++k) m(i, k) = row[k];
  }
  return m;
}

// ---------------------------------------------------------------- B

inline json to_json(const BAlgebra& B) {
  json mult = json::array();
  for (const auto& plane : B.table()) {
    json p = json::array();
    for (const auto& v : plane) p.push_back(to_json(v));
    mult.push_back(p);
  }
  return {{"dim", B.dim()},
          {"names", B.names()},
          {"mult", mult},
          {"psi", to_json(B.psi_values())},
          {"phi", to_json(B.phi_values())}};
}

/// Accepts "C", "truncpoly<k>" (ℂ[x]/(x^k)), {"truncatedPoly": M, psi?, phi?}, or
/// the full table form. Invalid algebras are rejected.
inline BAlgebra balgebra_from_json(const json& j) {
  std::optional<BAlgebra> B;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "C") B = BAlgebra::complex();
    else if (s.rfind("truncpoly", 0) == 0 && s.size() > 9) {
      int k = 0;
      try {
        k = std::stoi(s.substr(9));
      } catch (const std::exception&) {
        detail::bad("bad B name '" + s + "'");
      }
      if (k < 1) detail::bad("bad B name '" + s + "'");
      B = BAlgebra::truncated_poly(k - 1);
    } else {
      detail::bad("unknown B '" + s + "' (expected C, truncpolyK, or an object)");
    }
  } else if (j.is_object() && j.contains("truncatedPoly")) {
    int M = detail::as_int(j["truncatedPoly"], "truncatedPoly");
    std::optional<std::vector<Scalar>> psi, phi;
    if (j.contains("psi")) psi = scalars_from_json(j["psi"], "psi");
    if (j.contains("phi")) phi = scalars_from_json(j["phi"], "phi");
    B = BAlgebra::truncated_poly(M, psi, phi);
  } else if (j.is_object()) {
    int dim = detail::as_int(detail::field(j, "dim"), "dim");
    if (dim < 1) detail::bad("dim must be >= 1");
    std::vector<std::string> names;
    if (j.contains("names")) {
      for (const auto& x : j["names"]) {
        if (!x.is_string()) detail::bad("names must be strings");
        names.push_back(x.get<std::string>());
      }
    } else {
      for (int k = 0; k < dim; ++k) names.push_back("b" + std::to_string(k));
    }
    const json& m = detail::field(j, "mult");
    if (!m.is_array() || static_cast<int>(m.size()) != dim) detail::bad("mult must be dim x dim x dim");
    BAlgebra::Table t;
    for (const auto& plane : m) {
      if (!plane.is_array() || static_cast<int>(plane.size()) != dim) detail::bad("mult must be dim x dim x dim");
      std::vector<std::vector<Scalar>> row;
      for (const auto& v : plane) row.push_back(scalars_from_json(v, "mult entry"));
      t.push_back(row);
    }
    B = BAlgebra(names, t, scalars_from_json(detail::field(j, "psi"), "psi"),
                 scalars_from_json(detail::field(j, "phi"), "phi"));
  } else {
    detail::bad("B must be a name or an object");
  }
  require_valid(*B);
  return *B;
}

inline json to_json(const BElem& b) { return to_json(b.coords()); }

// ---------------------------------------------------------------- reps

inline json to_json(const MatrixRep& R) {
  json E = json::array();
  for (int i = 0; i < R.n(); ++i) {
    json row = json::array();
    for (int k = 0; k < R.n(); ++k) row.push_back(to_json(R.E(i, k)));
    E.push_back(row);
  }
  return {{"n", R.n()}, {"d", R.d()}, {"E", E}};
}

/// Accepts "natural", "trivial", "traceless" (traceless natural) with n given,
/// or {n, d, E} where E[i][j] is the d x d action of E_{i+1,j+1}. Commutator
/// relations are not checked here; modules and rep_axioms check them.
inline MatrixRep rep_from_json(const json& j, std::optional<int> n_hint = std::nullopt) {
  if (j.is_string()) {
    if (!n_hint) detail::bad("named rep needs n");
    std::string s = j.get<std::string>();
    if (s == "natural") return natural_rep(*n_hint);
    if (s == "trivial") return trivial_rep(*n_hint);
    if (s == "traceless") return traceless(natural_rep(*n_hint));
    detail::bad("unknown rep '" + s + "' (expected natural, trivial, traceless, or an object)");
  }
  int n = detail::as_int(detail::field(j, "n"), "n");
  int d = detail::as_int(detail::field(j, "d"), "d");
  if (n < 1 || n > kMaxN || d < 1) detail::bad("rep: bad n or d");
  if (n_hint && *n_hint != n) throw ContextMismatch("rep has n=" + std::to_string(n) + ", expected " +
                                                    std::to_string(*n_hint));
  const json& E = detail::field(j, "E");
  if (!E.is_array() || static_cast<int>(E.size()) != n) detail::bad("E must be n x n");
  std::vector<Matrix> mats;
  for (const auto& row : E) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) detail::bad("E must be n x n");
    for (const auto& m : row) mats.push_back(matrix_from_json(m, d, d, "E entry"));
  }
  return MatrixRep(n, d, std::move(mats));
}

inline json to_json(const RepReport& r) {
  return {{"commutatorFailures", r.commutator_failures}, {"traceZero", r.trace_zero}};
}

// ---------------------------------------------------------------- elements

inline json to_json(const LieElem& x) {
  json terms = json::array();
  for (const auto& t : x.terms()) {
    json tj = {{"kind", t.key.is_fun() ? "fun" : "der"}, {"deg", to_json(t.key.deg)}, {"b", t.key.b},
               {"coef", to_json(t.coef)}};
    if (t.key.is_der()) tj["i"] = t.key.der_index() + 1;
    terms.push_back(tj);
  }
  return terms;
}

/// Element with its context, for self-contained files.
inline json to_json_with_context(const LieElem& x) {
  return {{"n", x.context().n()}, {"B", to_json(x.context().B())}, {"terms", to_json(x)}};
}

/// Parses a term list or {n?, B?, terms}. N comes from the object, then from
/// n_hint, then from the first term's degree; B from the object or B_hint (default ℂ).
inline LieElem element_from_json(const json& j, std::optional<int> n_hint = std::nullopt,
                                 std::shared_ptr<const BAlgebra> B_hint = nullptr) {
  const json* terms = &j;
  std::optional<int> n = n_hint;
  std::shared_ptr<const BAlgebra> B = B_hint;
  if (j.is_object()) {
    terms = &detail::field(j, "terms");
    if (j.contains("n")) {
      int jn = detail::as_int(j["n"], "n");
      if (n && *n != jn) throw ContextMismatch("element has n=" + std::to_string(jn) + ", expected " +
                                               std::to_string(*n));
      n = jn;
    }
    if (j.contains("B")) {
      auto jb = std::make_shared<const BAlgebra>(balgebra_from_json(j["B"]));
      if (B && !(*B == *jb)) throw ContextMismatch("element B differs from the context B");
      if (!B) B = jb;
    }
  }
  if (!terms->is_array()) detail::bad("element must be a term list or an object with 'terms'");
  if (!n) {
    if (terms->empty()) detail::bad("empty element needs n");
    n = static_cast<int>(detail::field((*terms)[0], "deg").size());
  }
  if (!B) B = std::make_shared<const BAlgebra>(BAlgebra::complex());
  LieContext ctx(*n, B);
  std::vector<Term> out;
  for (const auto& t : *terms) {
    const json& kind = detail::field(t, "kind");
    if (!kind.is_string()) detail::bad("kind must be 'fun' or 'der'");
    ExpVec deg = expvec_from_json(detail::field(t, "deg"));
    if (deg.size() != *n)
      throw ContextMismatch("term degree has length " + std::to_string(deg.size()) + ", context N=" +
                            std::to_string(*n));
    int b = 0;
    if (t.contains("b")) {
      if (t["b"].is_string()) {
        const auto& names = B->names();
        auto it = std::find(names.begin(), names.end(), t["b"].get<std::string>());
        if (it == names.end()) throw ContextMismatch("unknown B basis name '" + t["b"].get<std::string>() + "'");
        b = static_cast<int>(it - names.begin());
      } else {
        b = detail::as_int(t["b"], "b");
      }
    }
    if (b < 0 || b >= B->dim()) throw ContextMismatch("B index " + std::to_string(b) + " out of range");
    Scalar coef = t.contains("coef") ? scalar_from_json(t["coef"]) : Scalar(1);
    std::string k = kind.get<std::string>();
    if (k == "fun") {
      out.push_back({BasisKey::fun(deg, b), coef});
    } else if (k == "der") {
      int i = detail::as_int(detail::field(t, "i"), "i");
      if (i < 1 || i > *n) throw ContextMismatch("derivation index " + std::to_string(i) + " outside 1.." +
                                                 std::to_string(*n));
      out.push_back({BasisKey::der(i - 1, deg, b), coef});
    } else {
      detail::bad("kind must be 'fun' or 'der'");
    }
  }
  return LieElem(ctx, std::move(out));
}

// ---------------------------------------------------------------- module vectors

inline json to_json(const ModVec& v) {
  json support = json::array();
  for (const auto& [s, vec] : v.support()) support.push_back({{"deg", to_json(s)}, {"v", to_json(vec)}});
  return {{"n", v.n()}, {"d", v.d()}, {"support", support}};
}

inline ModVec modvec_from_json(const json& j) {
  int n = detail::as_int(detail::field(j, "n"), "n");
  int d = detail::as_int(detail::field(j, "d"), "d");
  if (n < 1 || n > kMaxN || d < 1) detail::bad("vector: bad n or d");
  ModVec v(n, d);
  const json& sup = detail::field(j, "support");
  if (!sup.is_array()) detail::bad("support must be an array");
  for (const auto& e : sup) {
    ExpVec s = expvec_from_json(detail::field(e, "deg"));
    if (s.size() != n) throw ContextMismatch("vector degree has wrong length");
    auto vec = scalars_from_json(detail::field(e, "v"), "v");
    if (static_cast<int>(vec.size()) != d) throw ContextMismatch("vector component has wrong length");
    v.add(s, vec);
  }
  return v;
}

// ---------------------------------------------------------------- modules

inline json to_json(const JetModuleS& M) {
  return {{"kind", "S"}, {"n", M.n()}, {"rep", to_json(M.rep())}, {"alpha", to_json(M.alpha())},
          {"beta", to_json(M.beta())}, {"window", M.window().k()}};
}

inline json to_json(const JetModuleH& M) {
  return {{"kind", "H"},  {"n", M.n()},     {"rep", to_json(M.rep())}, {"alpha", to_json(M.alpha())},
          {"beta", to_json(M.beta())}, {"window", M.window().k()}, {"convention", to_string(M.convention())}};
}

inline json to_json(const MapModule& M) {
  json j = std::visit([](const auto& b) { return to_json(b); }, M.base());
  j["kind"] = M.is_hamiltonian() ? "map-H" : "map-S";
  j["B"] = to_json(M.B());
  j["c"] = to_json(M.c());
  j["f"] = to_json(M.f());
  return j;
}

inline json to_json(const AnyModule& M) {
  return std::visit([](const auto& m) { return to_json(m); }, M);
}

/// {kind: S|H|map-S|map-H, n, rep, alpha?, beta?, window, B?, c?, f?, convention?}.
inline AnyModule module_from_json(const json& j) {
  const json& kj = detail::field(j, "kind");
  if (!kj.is_string()) detail::bad("module kind must be a string");
  std::string kind = kj.get<std::string>();
  int n = detail::as_int(detail::field(j, "n"), "n");
  if (n < 1 || n > kMaxN) detail::bad("module n out of range");
  bool ham = kind == "H" || kind == "map-H";
  bool map = kind == "map-S" || kind == "map-H";
  if (!ham && kind != "S" && !map) detail::bad("module kind must be S, H, map-S, or map-H");
  MatrixRep rep = rep_from_json(j.contains("rep") ? j["rep"] : json(ham ? "natural" : "traceless"), n);
  CoefVec alpha = j.contains("alpha") ? coefvec_from_json(j["alpha"], n, "alpha") : CoefVec(n);
  CoefVec beta = j.contains("beta") ? coefvec_from_json(j["beta"], n, "beta") : CoefVec(n);
  Window w(n, detail::as_int(detail::field(j, "window"), "window"));
  PairConvention conv = PairConvention::LessThan;
  if (j.contains("convention")) {
    if (!j["convention"].is_string()) detail::bad("convention must be a string");
    try {
      conv = parse_pair_convention(j["convention"].get<std::string>());
    } catch (const PreconditionError& e) {
      detail::bad(e.what());
    }
  }
  JetModule base = ham ? JetModule(JetModuleH(rep, alpha, beta, w, conv)) : JetModule(JetModuleS(rep, alpha, beta, w));
  if (!map) return std::visit([](auto&& b) -> AnyModule { return b; }, std::move(base));
  auto B = std::make_shared<const BAlgebra>(balgebra_from_json(j.contains("B") ? j["B"] : json("C")));
  Scalar c = j.contains("c") ? scalar_from_json(j["c"]) : Scalar(1);
  Matrix f = j.contains("f") ? matrix_from_json(j["f"], n, B->dim(), "f") : MapModule::default_f(alpha, B->dim());
  return MapModule(std::move(base), B, c, f);
}

// ---------------------------------------------------------------- verify

inline json to_json(const Verdict& v, bool timing = false) {
  json failures = json::array();
  for (const auto& f : v.failures) failures.push_back({{"inputs", f.inputs}, {"expected", f.expected}, {"got", f.got}});
  json j = {{"suite", v.suite},        {"cases", v.cases},       {"passed", v.passed()},
            {"failureCount", v.failure_count}, {"failures", failures}, {"sampled", v.sampled},
            {"findings", v.findings}};
  if (v.skipped) j["skipped"] = *v.skipped;
  if (timing) j["elapsedMs"] = v.elapsed_ms;
  return j;
}

inline json to_json(const InjectivityReport& r) {
  json layers = json::array();
  for (const auto& l : r.layers) layers.push_back({{"s", to_json(l.s)}, {"rank", l.rank}, {"injective", l.injective}});
  return {{"r", to_json(r.r)}, {"verdict", r.verdict()}, {"layers", layers}};
}

inline json to_json(const SuiteConfig& c) {
  json j = {{"n", c.n},
            {"window", c.window_k},
            {"B", to_json(*c.B)},
            {"rep", to_json(c.rep_s())},
            {"repH", to_json(c.rep_hamiltonian())},
            {"alpha", to_json(c.alpha_or_zero())},
            {"beta", to_json(c.beta_or_zero())},
            {"c", to_json(c.c)},
            {"f", to_json(c.f_or_default())},
            {"seed", c.seed},
            {"caseBudget", c.case_budget},
            {"samples", c.param_samples},
            {"convention", to_string(c.convention)}};
  return j;
}

/// Overlays the fields present in j onto base. n is applied first so that
/// named reps resolve at the right size.
inline SuiteConfig config_from_json(const json& j, SuiteConfig base = {}) {
  if (!j.is_object()) detail::bad("config must be an object");
  if (j.contains("n")) {
    int n = detail::as_int(j["n"], "n");
    if (n != base.n) {
      base.n = n;
      base.rep.reset();
      base.rep_h.reset();
      base.alpha.reset();
      base.beta.reset();
      base.f.reset();
    }
  }
  if (j.contains("window")) base.window_k = detail::as_int(j["window"], "window");
  if (j.contains("B")) {
    base.B = std::make_shared<const BAlgebra>(balgebra_from_json(j["B"]));
    if (!j.contains("f")) base.f.reset();
  }
  if (j.contains("rep")) base.rep = rep_from_json(j["rep"], base.n);
  if (j.contains("repH")) base.rep_h = rep_from_json(j["repH"], base.n);
  if (j.contains("alpha")) base.alpha = coefvec_from_json(j["alpha"], base.n, "alpha");
  if (j.contains("beta")) base.beta = coefvec_from_json(j["beta"], base.n, "beta");
  if (j.contains("c")) base.c = scalar_from_json(j["c"]);
  if (j.contains("f")) base.f = matrix_from_json(j["f"], base.n, base.B->dim(), "f");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) detail::bad("seed must be a non-negative integer");
    base.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("caseBudget")) {
    if (!j["caseBudget"].is_number_unsigned()) detail::bad("caseBudget must be a positive integer");
    base.case_budget = j["caseBudget"].get<std::size_t>();
  }
  if (j.contains("samples")) base.param_samples = detail::as_int(j["samples"], "samples");
  if (j.contains("convention")) {
    try {
      base.convention = parse_pair_convention(j["convention"].get<std::string>());
    } catch (const std::exception& e) {
      detail::bad(e.what());
    }
  }
  return base;
}

/// Parses text, mapping nlohmann errors to ParseError.
inline json parse(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
}

}  // namespace cartan::json_io
