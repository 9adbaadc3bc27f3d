#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cartan/balgebra.hpp"
#include "cartan/errors.hpp"
#include "cartan/exp_vec.hpp"
#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"
#include "cartan/modules.hpp"
#include "cartan/reps.hpp"

namespace cartan {

struct SuiteConfig {
  int n = 2;
  int window_k = 2;
  std::shared_ptr<const BAlgebra> B = std::make_shared<const BAlgebra>(BAlgebra::truncated_poly(2));
  std::optional<MatrixRep> rep;    // S_N modules; default traceless(natural_rep(n))
  std::optional<MatrixRep> rep_h;  // H̃_N modules; default natural_rep(n)
  std::optional<CoefVec> alpha;    // default 0
  std::optional<CoefVec> beta;     // default 0
  Scalar c = 1;
  std::optional<Matrix> f;  // default: unit column α, rest 0
  std::uint64_t seed = 0;
  std::size_t case_budget = 60'000'000;
  int param_samples = 5;  // parameter draws per module suite, the configured one included
  PairConvention convention = PairConvention::LessThan;

  MatrixRep rep_s() const { return rep ? *rep : traceless(natural_rep(n)); }
  MatrixRep rep_hamiltonian() const { return rep_h ? *rep_h : natural_rep(n); }
  CoefVec alpha_or_zero() const { return alpha ? *alpha : CoefVec(n); }
  CoefVec beta_or_zero() const { return beta ? *beta : CoefVec(n); }
  Matrix f_or_default() const { return f ? *f : MapModule::default_f(alpha_or_zero(), B->dim()); }
  Window window() const { return Window(n, window_k); }

  /// Throws PreconditionError/ValidationError on inconsistent settings.
  void validate() const {
    if (n < 1 || n > kMaxN) throw PreconditionError("config: n out of range");
    if (window_k < 1) throw PreconditionError("config: window must be >= 1");
    if (case_budget < 1) throw PreconditionError("config: case budget must be >= 1");
    if (param_samples < 1) throw PreconditionError("config: samples must be >= 1");
    if (!B) throw PreconditionError("config: missing B");
    require_valid(*B);
    if (c.is_zero()) throw PreconditionError("config: c must be nonzero");
    if (rep && rep->n() != n) throw PreconditionError("config: rep has wrong n");
    if (rep_h && rep_h->n() != n) throw PreconditionError("config: rep_h has wrong n");
    if (alpha && alpha->size() != n) throw PreconditionError("config: alpha has wrong length");
    if (beta && beta->size() != n) throw PreconditionError("config: beta has wrong length");
    if (f && (f->rows() != n || f->cols() != B->dim())) throw PreconditionError("config: f must be n x dim(B)");
  }
};

struct Failure {
  nlohmann::json inputs;
  std::string expected;
  std::string got;
};

struct Verdict {
  std::string suite;
  std::size_t cases = 0;
  std::size_t failure_count = 0;
  std::vector<Failure> failures;  // first kMaxRecorded only; failure_count has the total
  std::vector<std::string> findings;
  std::optional<std::string> skipped;
  bool sampled = false;
  double elapsed_ms = 0;

  static constexpr std::size_t kMaxRecorded = 20;

  bool passed() const noexcept { return failure_count == 0; }

  void fail(nlohmann::json inputs, std::string expected, std::string got) {
    ++failure_count;
    if (failures.size() < kMaxRecorded) failures.push_back({std::move(inputs), std::move(expected), std::move(got)});
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "jacobi",         "sn_closure",          "hn_closure",      "rep_axioms",
      "module_axiom_S", "module_axiom_H",      "module_axiom_map_S", "module_axiom_map_H",
      "quasi_assoc",    "evaluation_property", "scalar_property", "t_operator_brackets",
      "i_element_brackets", "injectivity"};
  return names;
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

/// Deterministic stream per (seed, suite, tag).
class Rng {
 public:
  Rng(std::uint64_t seed, const std::string& tag) : g_(seed ^ fnv1a(tag)) {}
  std::uint64_t next() { return g_(); }
  /// Uniform in [0, n) for small n (modulo bias is irrelevant at these sizes).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(g_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  /// p/q with p ∈ [−3,3], q ∈ {1,2,3}.
  Scalar small_rational() { return Scalar(Rational(between(-3, 3), between(1, 3))); }
  Scalar nonzero_small_rational() {
    Scalar s;
    while (s.is_zero()) s = small_rational();
    return s;
  }
  CoefVec coef_vec(int n) {
    CoefVec u(n);
    for (int i = 0; i < n; ++i) u[i] = small_rational();
    return u;
  }

 private:
  std::mt19937_64 g_;
};

inline nlohmann::json vec_json(const ExpVec& r) { return r.to_vector(); }

inline nlohmann::json coef_json(const CoefVec& u) {
  auto j = nlohmann::json::array();
  for (int i = 0; i < u.size(); ++i) j.push_back(u[i].to_string());
  return j;
}

inline nlohmann::json belem_json(const BElem& b) {
  auto j = nlohmann::json::array();
  for (int i = 0; i < b.dim(); ++i) j.push_back(b[i].to_string());
  return j;
}

/// Basis of (W_N ⋉ A_N) ⊗ B restricted to degrees in the box.
inline std::vector<LieElem> witt_basis(const LieContext& ctx, int k) {
  std::vector<LieElem> out;
  for (const auto& r : Window::box(ctx.n(), k))
    for (int kind = 0; kind <= ctx.n(); ++kind)
      for (int b = 0; b < ctx.B().dim(); ++b)
        out.push_back(kind == 0 ? LieElem::fun(ctx, r, b) : LieElem::der(ctx, kind - 1, r, b));
  return out;
}

struct Generator {
  LieElem x;
  ExpVec deg;
};

/// Homogeneous spanning set of (S_N ⋉ A_N) ⊗ B on the box: for p ≠ 0,
/// d_ab(p) with a the first index where p_a ≠ 0 and every b ≠ a, plus t^p;
/// for p = 0, every d_i and t^0. Each is tensored with every basis vector of B.
inline std::vector<Generator> generators_S(const LieContext& ctx, int k) {
  std::vector<Generator> out;
  const int n = ctx.n();
  const BAlgebra& B = ctx.B();
  for (const auto& p : Window::box(n, k))
    for (int bi = 0; bi < B.dim(); ++bi) {
      BElem b = B.basis(bi);
      if (p.is_zero()) {
        for (int i = 0; i < n; ++i) out.push_back({make_D(ctx, CoefVec::unit(n, i), p, b), p});
      } else {
        int a = 0;
        while (p[a] == 0) ++a;
        for (int j = 0; j < n; ++j) {
          if (j == a) continue;
          LieElem d = make_dab(ctx, a, j, p);
          std::vector<Term> t;
          for (const auto& term : d.terms()) t.push_back({BasisKey::der(term.key.der_index(), p, bi), term.coef});
          out.push_back({LieElem(ctx, t), p});
        }
      }
      out.push_back({make_fun(ctx, p, b), p});
    }
  return out;
}

/// Homogeneous spanning set of (H̃_N ⋉ A_N) ⊗ B on the box: h_p for p ≠ 0,
/// every d_i at p = 0, and t^p, each tensored with every basis vector of B.
inline std::vector<Generator> generators_H(const LieContext& ctx, int k) {
  std::vector<Generator> out;
  const int n = ctx.n();
  const BAlgebra& B = ctx.B();
  for (const auto& p : Window::box(n, k))
    for (int bi = 0; bi < B.dim(); ++bi) {
      BElem b = B.basis(bi);
      if (p.is_zero()) {
        for (int i = 0; i < n; ++i) out.push_back({make_D(ctx, CoefVec::unit(n, i), p, b), p});
      } else {
        out.push_back({make_D(ctx, CoefVec(bar(p)), p, b), p});
      }
      out.push_back({make_fun(ctx, p, b), p});
    }
  return out;
}

struct PairCase {
  std::size_t i, j;
  std::vector<ExpVec> s;  // degrees where s, s+p, s+q, s+p+q all lie in the window
};

inline std::vector<PairCase> axiom_cases(const std::vector<Generator>& gens, const Window& w) {
  std::vector<PairCase> out;
  const auto degs = w.degrees();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      const ExpVec& p = gens[i].deg;
      const ExpVec& q = gens[j].deg;
      if (!w.contains(p + q)) continue;
      PairCase pc{i, j, {}};
      for (const auto& s : degs)
        if (w.contains(s + p) && w.contains(s + q) && w.contains(s + p + q)) pc.s.push_back(s);
      if (!pc.s.empty()) out.push_back(std::move(pc));
    }
  return out;
}

/// Checks X(s+q)Y(s) − Y(s+p)X(s) = Z(s) for generator pairs, exhaustively or by
/// seeded sampling when the case count exceeds the budget.
template <class Module>
void check_module_axiom(const Module& M, const std::vector<Generator>& gens, const SuiteConfig& cfg,
                        Verdict& v, Rng& rng, const nlohmann::json& params) {
  const Window& w = M.window();
  auto cases = axiom_cases(gens, w);
  std::vector<Operator> ops;
  ops.reserve(gens.size());
  for (const auto& g : gens) ops.push_back(operator_of(M, g.x));

  std::vector<std::size_t> prefix(cases.size() + 1, 0);
  for (std::size_t k = 0; k < cases.size(); ++k) prefix[k + 1] = prefix[k] + cases[k].s.size();
  const std::size_t total = prefix.back();

  auto check = [&](const PairCase& pc, const Operator& Z, const ExpVec& s) {
    const Generator& gx = gens[pc.i];
    const Generator& gy = gens[pc.j];
    const Operator& X = ops[pc.i];
    const Operator& Y = ops[pc.j];
    Matrix lhs = X.block(gx.deg, s + gy.deg) * Y.block(gy.deg, s) - Y.block(gy.deg, s + gx.deg) * X.block(gx.deg, s);
    Matrix rhs = Z.block(gx.deg + gy.deg, s);
    ++v.cases;
    if (lhs != rhs)
      v.fail({{"x", gx.x.to_string()}, {"y", gy.x.to_string()}, {"s", vec_json(s)}, {"params", params}},
             rhs.to_string(), lhs.to_string());
  };

  if (total <= cfg.case_budget) {
    for (const auto& pc : cases) {
      Operator Z = operator_of(M, bracket(gens[pc.i].x, gens[pc.j].x));
      for (const auto& s : pc.s) check(pc, Z, s);
    }
  } else {
    v.sampled = true;
    for (std::size_t k = 0; k < cfg.case_budget; ++k) {
      std::size_t pick = rng.below(total);
      std::size_t ci = static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), pick) - prefix.begin()) - 1;
      const PairCase& pc = cases[ci];
      Operator Z = operator_of(M, bracket(gens[pc.i].x, gens[pc.j].x));
      check(pc, Z, pc.s[pick - prefix[ci]]);
    }
  }
}

inline nlohmann::json params_json(const CoefVec& alpha, const CoefVec& beta) {
  return {{"alpha", coef_json(alpha)}, {"beta", coef_json(beta)}};
}

/// Configured (α, β) followed by seeded draws.
inline std::vector<std::pair<CoefVec, CoefVec>> jet_params(const SuiteConfig& cfg, Rng& rng) {
  std::vector<std::pair<CoefVec, CoefVec>> out{{cfg.alpha_or_zero(), cfg.beta_or_zero()}};
  while (static_cast<int>(out.size()) < cfg.param_samples) {
    CoefVec a = rng.coef_vec(cfg.n);
    CoefVec b = rng.coef_vec(cfg.n);
    out.emplace_back(a, b);
  }
  return out;
}

struct MapParams {
  std::shared_ptr<const BAlgebra> B;
  Matrix f;
  CoefVec alpha;
  CoefVec beta;
};

/// Configured (φ, f, α, β) followed by seeded draws of φ (φ(1)=1) and f (unit column α).
inline std::vector<MapParams> map_params(const SuiteConfig& cfg, Rng& rng) {
  std::vector<MapParams> out{{cfg.B, cfg.f_or_default(), cfg.alpha_or_zero(), cfg.beta_or_zero()}};
  const int K = cfg.B->dim();
  while (static_cast<int>(out.size()) < cfg.param_samples) {
    std::vector<Scalar> phi(K);
    phi[0] = Scalar(1);
    for (int k = 1; k < K; ++k) phi[k] = rng.small_rational();
    CoefVec a = rng.coef_vec(cfg.n);
    CoefVec b = rng.coef_vec(cfg.n);
    Matrix f(cfg.n, K);
    for (int i = 0; i < cfg.n; ++i) {
      f(i, 0) = a[i];
      for (int k = 1; k < K; ++k) f(i, k) = rng.small_rational();
    }
    out.push_back({std::make_shared<const BAlgebra>(cfg.B->with_phi(phi)), f, a, b});
  }
  return out;
}

inline nlohmann::json map_params_json(const MapParams& p, const Scalar& c) {
  auto fj = nlohmann::json::array();
  for (int i = 0; i < p.f.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < p.f.cols(); ++k) row.push_back(p.f(i, k).to_string());
    fj.push_back(row);
  }
  auto phi = nlohmann::json::array();
  for (const auto& x : p.B->phi_values()) phi.push_back(x.to_string());
  return {{"alpha", coef_json(p.alpha)}, {"beta", coef_json(p.beta)}, {"phi", phi}, {"f", fj}, {"c", c.to_string()}};
}

inline MapModule make_map_module(const SuiteConfig& cfg, const MapParams& p, bool hamiltonian,
                                 std::optional<PairConvention> conv = std::nullopt) {
  Window w = cfg.window();
  if (hamiltonian)
    return MapModule(JetModuleH(cfg.rep_hamiltonian(), p.alpha, p.beta, w, conv.value_or(cfg.convention)), p.B,
                     cfg.c, p.f);
  return MapModule(JetModuleS(cfg.rep_s(), p.alpha, p.beta, w), p.B, cfg.c, p.f);
}

// ---------------------------------------------------------------- suites

inline void suite_jacobi(const SuiteConfig& cfg, Verdict& v, Rng& rng) {
  LieContext ctx(cfg.n, cfg.B);
  const Window w = cfg.window();
  auto basis = witt_basis(ctx, cfg.window_k);
  std::vector<ExpVec> deg;
  deg.reserve(basis.size());
  for (const auto& x : basis) deg.push_back(x.terms().front().key.deg);
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    ++v.cases;
    LieElem jd = jacobi_defect(basis[i], basis[j], basis[k]);
    if (!jd.is_zero())
      v.fail({{"x", basis[i].to_string()}, {"y", basis[j].to_string()}, {"z", basis[k].to_string()}}, "0",
             jd.to_string());
  };
  auto ok = [&](std::size_t i, std::size_t j) { return w.contains(deg[i] + deg[j]); };

  // Count unordered triples (multisets) first; the Jacobiator is alternating.
  std::size_t total = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      if (!ok(i, j)) continue;
      for (std::size_t k = j; k < basis.size(); ++k)
        if (ok(i, k) && ok(j, k)) ++total;
    }
  if (total <= cfg.case_budget) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j) {
        if (!ok(i, j)) continue;
        for (std::size_t k = j; k < basis.size(); ++k)
          if (ok(i, k) && ok(j, k)) check(i, j, k);
      }
  } else {
    v.sampled = true;
    std::size_t done = 0;
    while (done < cfg.case_budget) {
      std::size_t i = rng.below(basis.size()), j = rng.below(basis.size()), k = rng.below(basis.size());
      if (!ok(i, j) || !ok(i, k) || !ok(j, k)) continue;
      check(i, j, k);
      ++done;
    }
  }
}

inline void suite_sn_closure(const SuiteConfig& cfg, Verdict& v, Rng&) {
  LieContext ctx(cfg.n, cfg.B);
  const Window w = cfg.window();
  std::vector<Generator> ders;
  for (auto& g : generators_S(ctx, cfg.window_k))
    if (!g.x.has_fun_terms()) ders.push_back(std::move(g));
  for (std::size_t i = 0; i < ders.size(); ++i)
    for (std::size_t j = i; j < ders.size(); ++j) {
      if (!w.contains(ders[i].deg + ders[j].deg)) continue;
      ++v.cases;
      LieElem br = bracket(ders[i].x, ders[j].x);
      LieElem div = divergence(br);
      if (!div.is_zero())
        v.fail({{"x", ders[i].x.to_string()}, {"y", ders[j].x.to_string()}}, "0", div.to_string());
    }
}

inline void suite_hn_closure(const SuiteConfig& cfg, Verdict& v, Rng&) {
  if (cfg.n % 2 != 0) {
    v.skipped = "N=" + std::to_string(cfg.n) + " is odd";
    return;
  }
  LieContext ctx(cfg.n, cfg.B);
  const auto box = Window::box(cfg.n, cfg.window_k);
  for (const auto& r : box) {
    LieElem hr = make_h(ctx, r);
    for (const auto& s : box) {
      ++v.cases;
      LieElem got = bracket(hr, make_h(ctx, s));
      LieElem want = Scalar(pair(bar(r), s)) * make_h(ctx, r + s);
      if (got != want || !in_span_H(got, false))
        v.fail({{"r", vec_json(r)}, {"s", vec_json(s)}}, want.to_string(), got.to_string());
    }
    for (int i = 0; i < cfg.n; ++i) {
      ++v.cases;
      LieElem got = bracket(make_D(ctx, CoefVec::unit(cfg.n, i), ExpVec::zero(cfg.n)), hr);
      LieElem want = Scalar(r[i]) * hr;
      if (got != want) v.fail({{"d", i + 1}, {"r", vec_json(r)}}, want.to_string(), got.to_string());
    }
  }
}

inline void suite_rep_axioms(const SuiteConfig& cfg, Verdict& v, Rng&) {
  auto run = [&](const MatrixRep& R, bool need_trace, const char* which) {
    RepReport rep = validate_rep(R);
    v.cases += static_cast<std::size_t>(R.n()) * R.n() * R.n() * R.n() + 1;
    for (const auto& line : rep.commutator_failures) v.fail({{"rep", which}}, "commutator relation", line);
    if (!rep.trace_zero) {
      if (need_trace)
        v.fail({{"rep", which}}, "Σ_i E_ii = 0", "Σ_i E_ii ≠ 0");
      else
        v.findings.push_back(std::string(which) + ": Σ_i E_ii ≠ 0 (allowed for H̃_N modules)");
    }
  };
  run(cfg.rep_s(), true, "rep");
  run(cfg.rep_hamiltonian(), false, "rep_h");
}

inline void suite_module_axiom_S(const SuiteConfig& cfg, Verdict& v, Rng& rng) {
  LieContext ctx(cfg.n, BAlgebra::complex());
  auto gens = generators_S(ctx, cfg.window_k);
  for (const auto& [a, b] : jet_params(cfg, rng)) {
    JetModuleS M(cfg.rep_s(), a, b, cfg.window());
    check_module_axiom(M, gens, cfg, v, rng, params_json(a, b));
  }
}

inline std::size_t count_axiom_failures_H(const SuiteConfig& cfg, PairConvention conv, const CoefVec& a,
                                          const CoefVec& b, std::size_t* cases) {
  LieContext ctx(cfg.n, BAlgebra::complex());
  Verdict tmp;
  Rng rng(cfg.seed, "module_axiom_H/probe");
  JetModuleH M(cfg.rep_hamiltonian(), a, b, cfg.window(), conv);
  check_module_axiom(M, generators_H(ctx, cfg.window_k), cfg, tmp, rng, nlohmann::json::object());
  if (cases) *cases = tmp.cases;
  return tmp.failure_count;
}

inline void suite_module_axiom_H(const SuiteConfig& cfg, Verdict& v, Rng& rng) {
  if (cfg.n % 2 != 0) {
    v.skipped = "N=" + std::to_string(cfg.n) + " is odd";
    return;
  }
  LieContext ctx(cfg.n, BAlgebra::complex());
  auto gens = generators_H(ctx, cfg.window_k);
  auto params = jet_params(cfg, rng);
  for (const auto& [a, b] : params) {
    JetModuleH M(cfg.rep_hamiltonian(), a, b, cfg.window(), cfg.convention);
    auto pj = params_json(a, b);
    pj["convention"] = to_string(cfg.convention);
    check_module_axiom(M, gens, cfg, v, rng, pj);
  }
  if (!v.passed()) {
    // Report how the other index conventions fare on the configured parameters.
    for (auto conv : {PairConvention::LessThan, PairConvention::LessEqual, PairConvention::Distinct,
                      PairConvention::AllPairs, PairConvention::WittForm}) {
      std::size_t cases = 0;
      std::size_t fails = count_axiom_failures_H(cfg, conv, params[0].first, params[0].second, &cases);
      v.findings.push_back(std::string("convention ") + to_string(conv) + ": " + std::to_string(fails) + " of " +
                           std::to_string(cases) + " axiom checks fail");
    }
  }
}

inline void suite_module_axiom_map(const SuiteConfig& cfg, Verdict& v, Rng& rng, bool hamiltonian) {
  if (hamiltonian && cfg.n % 2 != 0) {
    v.skipped = "N=" + std::to_string(cfg.n) + " is odd";
    return;
  }
  for (const auto& p : map_params(cfg, rng)) {
    MapModule M = make_map_module(cfg, p, hamiltonian);
    LieContext ctx(cfg.n, p.B);
    auto gens = hamiltonian ? generators_H(ctx, cfg.window_k) : generators_S(ctx, cfg.window_k);
    check_module_axiom(M, gens, cfg, v, rng, map_params_json(p, cfg.c));
  }
}

inline void suite_quasi_assoc(const SuiteConfig& cfg, Verdict& v, Rng&) {
  const Window w = cfg.window();
  MapParams p{cfg.B, cfg.f_or_default(), cfg.alpha_or_zero(), cfg.beta_or_zero()};
  MapModule M = make_map_module(cfg, p, false);
  LieContext ctx(cfg.n, cfg.B);
  const BAlgebra& B = *cfg.B;
  const int K = B.dim();
  const Scalar c = cfg.c;
  const auto box = w.degrees();
  std::optional<Scalar> lambda, mu, lambda_m0;
  auto record = [&](std::optional<Scalar>& slot, const Scalar& val, const char* name, const nlohmann::json& in) {
    if (!slot) slot = val;
    else if (*slot != val) v.fail(in, std::string(name) + "=" + slot->to_string(), val.to_string());
  };
  for (const auto& m : box)
    for (const auto& n : box) {
      ExpVec mn = m + n;
      if (!w.contains(mn)) continue;
      Operator ref = operator_of(M, make_fun(ctx, mn));
      for (int bi = 0; bi < K; ++bi)
        for (int bj = 0; bj < K; ++bj) {
          Operator Tm = operator_of(M, make_fun(ctx, m, B.basis(bi)));
          Operator Tn = operator_of(M, make_fun(ctx, n, B.basis(bj)));
          nlohmann::json in = {{"m", vec_json(m)}, {"n", vec_json(n)}, {"b", B.names()[bi]}, {"b'", B.names()[bj]}};
          std::optional<Scalar> kappa;
          bool consistent = true;
          for (const auto& s : box) {
            auto comp = word_block({&Tm, &Tn}, s, w);
            if (!comp) continue;
            Matrix r = ref.block(mn, s);
            Scalar k = (*comp)(0, 0) / r(0, 0);
            if (!kappa) kappa = k;
            if (*comp != *kappa * r || k != *kappa) consistent = false;
          }
          if (!kappa) continue;
          ++v.cases;
          if (!consistent) {
            v.fail(in, "composite proportional to t^{m+n}", "not proportional");
            continue;
          }
          const Scalar pb = B.psi_values()[bi], pb2 = B.psi_values()[bj];
          const Scalar fb = B.phi_values()[bi], fb2 = B.phi_values()[bj];
          Scalar pbb = B.psi(B.mul(B.basis(bi), B.basis(bj)));
          Scalar expected;
          if (!m.is_zero() && !n.is_zero()) expected = pbb * c;  // λ = μ = c
          else if (!m.is_zero()) expected = pb * fb2 * c;
          else if (!n.is_zero()) expected = fb * pb2 * c;
          else expected = fb * fb2 * c;
          if (*kappa != expected) v.fail(in, expected.to_string(), kappa->to_string());
          if (bi == 0 && bj == 0) {
            if (!m.is_zero() && !n.is_zero() && !mn.is_zero()) record(lambda, *kappa, "lambda", in);
            if (!m.is_zero() && mn.is_zero()) record(mu, *kappa, "mu", in);
            if (!m.is_zero() && n.is_zero()) record(lambda_m0, *kappa, "lambda_m0", in);
          }
        }
    }
  if (lambda && mu && lambda_m0) {
    ++v.cases;
    v.findings.push_back("lambda=" + lambda->to_string() + " mu=" + mu->to_string() +
                         " lambda_m0=" + lambda_m0->to_string() + " c=" + c.to_string());
    if (*lambda != c) v.fail({{"constant", "lambda"}}, c.to_string(), lambda->to_string());
    if (*mu != c) v.fail({{"constant", "mu"}}, c.to_string(), mu->to_string());
    if (*lambda_m0 != c) v.fail({{"constant", "lambda_m0"}}, c.to_string(), lambda_m0->to_string());
    if (*lambda * *lambda != *mu * c)
      v.fail({{"constant", "lambda^2 - mu c"}}, "0", (*lambda * *lambda - *mu * c).to_string());
  }
}

inline std::vector<bool> map_variants(const SuiteConfig& cfg) {
  std::vector<bool> out{false};
  if (cfg.n % 2 == 0) out.push_back(true);
  return out;
}

inline void suite_evaluation(const SuiteConfig& cfg, Verdict& v, Rng&) {
  const Window w = cfg.window();
  const BAlgebra& B = *cfg.B;
  LieContext ctx(cfg.n, cfg.B);
  MapParams p{cfg.B, cfg.f_or_default(), cfg.alpha_or_zero(), cfg.beta_or_zero()};
  for (bool ham : map_variants(cfg)) {
    MapModule M = make_map_module(cfg, p, ham);
    auto gens = ham ? generators_H(ctx, cfg.window_k) : generators_S(ctx, cfg.window_k);
    for (const auto& g : gens) {
      if (g.deg.is_zero()) continue;
      int bi = g.x.terms().front().key.b;
      if (bi != 0) continue;
      Operator unit = operator_of(M, g.x);
      for (int k = 0; k < B.dim(); ++k) {
        // Same element with b_0 replaced by b_k.
        std::vector<Term> t;
        for (const auto& term : g.x.terms()) t.push_back({{term.key.kind, term.key.deg, k}, term.coef});
        LieElem xb(ctx, t);
        Operator opb = operator_of(M, xb);
        for (const auto& s : w.degrees()) {
          if (!w.contains(s + g.deg)) continue;
          ++v.cases;
          Matrix got = opb.block(g.deg, s);
          Matrix want = B.psi_values()[k] * unit.block(g.deg, s);
          if (got != want)
            v.fail({{"x", xb.to_string()}, {"s", vec_json(s)}, {"module", ham ? "H" : "S"}}, want.to_string(),
                   got.to_string());
        }
      }
    }
  }
}

inline void suite_scalar(const SuiteConfig& cfg, Verdict& v, Rng&) {
  const Window w = cfg.window();
  const BAlgebra& B = *cfg.B;
  LieContext ctx(cfg.n, cfg.B);
  MapParams p{cfg.B, cfg.f_or_default(), cfg.alpha_or_zero(), cfg.beta_or_zero()};
  const ExpVec zero = ExpVec::zero(cfg.n);
  for (bool ham : map_variants(cfg)) {
    MapModule M = make_map_module(cfg, p, ham);
    for (int i = 0; i < cfg.n; ++i) {
      CoefVec u = CoefVec::unit(cfg.n, i);
      for (int k = 0; k < B.dim(); ++k) {
        LieElem x = make_D(ctx, u, zero, B.basis(k));
        Operator op = operator_of(M, x);
        for (const auto& s : w.degrees()) {
          ++v.cases;
          Matrix got = op.block(zero, s);
          Scalar want = M.f_value(u, B.basis(k)) + pair(u, s) * B.psi_values()[k];
          if (got != Matrix::scalar(M.d(), want))
            v.fail({{"x", x.to_string()}, {"s", vec_json(s)}, {"module", ham ? "H" : "S"}},
                   want.to_string() + "·I", got.to_string());
        }
      }
    }
  }
}

/// Operator words on a map module, evaluated as degree-0 blocks on V_s.
class TCalc {
 public:
  TCalc(const MapModule& M, LieContext ctx) : M_(M), ctx_(std::move(ctx)) {}

  /// T(u,r,b1,b2) = t^{−r}b1 · D(u,r)b2
  std::optional<Matrix> T(const CoefVec& u, const ExpVec& r, const BElem& b1, const BElem& b2,
                          const ExpVec& s) const {
    Operator a = operator_of(M_, make_fun(ctx_, -r, b1));
    Operator d = operator_of(M_, make_D(ctx_, u, r, b2));
    if (d.pieces().empty() || a.pieces().empty()) {
      if (!M_.window().contains(s) || !M_.window().contains(s + r)) return std::nullopt;
      return Matrix(M_.d(), M_.d());
    }
    return word_block({&a, &d}, s, M_.window());
  }

  /// T1(u,r,b1,b2) = T(u,r,b1,b2) − c D(u,0) b1 b2
  std::optional<Matrix> T1(const CoefVec& u, const ExpVec& r, const BElem& b1, const BElem& b2,
                           const ExpVec& s) const {
    auto t = T(u, r, b1, b2, s);
    if (!t) return t;
    const ExpVec zero = ExpVec::zero(ctx_.n());
    Operator d0 = operator_of(M_, make_D(ctx_, u, zero, ctx_.B().mul(b1, b2)));
    return *t - M_.c() * d0.block(zero, s);
  }

 private:
  const MapModule& M_;
  LieContext ctx_;
};

inline ExpVec random_nonzero_deg(Rng& rng, int n, int k) {
  ExpVec r(n);
  while (r.is_zero())
    for (int i = 0; i < n; ++i) r[i] = rng.between(-k, k);
  return r;
}

/// u with (u|r) = 0: a random combination of r_b e_a − r_a e_b.
inline CoefVec random_orthogonal(Rng& rng, const ExpVec& r) {
  const int n = r.size();
  CoefVec u(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Scalar k = rng.small_rational();
      u[a] += k * Scalar(r[b]);
      u[b] -= k * Scalar(r[a]);
    }
  return u;
}

inline BElem random_belem(Rng& rng, const BAlgebra& B) {
  std::vector<Scalar> c(B.dim());
  for (auto& x : c) x = rng.small_rational();
  return BElem(c);
}

inline constexpr int kTTuples = 24;
inline constexpr int kITuples = 120;

inline void suite_t_brackets(const SuiteConfig& cfg, Verdict& v, Rng& rng) {
  const Window w = cfg.window();
  const BAlgebra& B = *cfg.B;
  const int n = cfg.n;
  LieContext ctx(n, cfg.B);
  MapParams p{cfg.B, cfg.f_or_default(), cfg.alpha_or_zero(), cfg.beta_or_zero()};
  const Scalar c = cfg.c;
  auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
  // T degrees stay in [−1,1]^N so intermediate layers fit the window.
  const int rk = 1;

  auto check = [&](const char* name, const nlohmann::json& in, const ExpVec& s, std::optional<Matrix> lhs,
                   std::optional<Matrix> rhs) {
    if (!lhs || !rhs) return;
    ++v.cases;
    if (*lhs != *rhs) {
      nlohmann::json j = in;
      j["identity"] = name;
      j["s"] = vec_json(s);
      v.fail(j, rhs->to_string(), lhs->to_string());
    }
  };
  auto sum = [](std::initializer_list<std::pair<Scalar, std::optional<Matrix>>> terms) -> std::optional<Matrix> {
    std::optional<Matrix> acc;
    for (const auto& [k, m] : terms) {
      if (!m) return std::nullopt;
      Matrix t = k * *m;
      acc = acc ? *acc + t : t;
    }
    return acc;
  };

  {
    MapModule M = make_map_module(cfg, p, false);
    TCalc tc(M, ctx);
    for (int t = 0; t < kTTuples; ++t) {
      ExpVec r = random_nonzero_deg(rng, n, rk), s = random_nonzero_deg(rng, n, rk);
      CoefVec u = random_orthogonal(rng, r), vv = random_orthogonal(rng, s);
      BElem b1 = random_belem(rng, B), b2 = random_belem(rng, B), b3 = random_belem(rng, B), b4 = random_belem(rng, B);
      Scalar us = pair(u, s), vr = pair(vv, r);
      CoefVec wv = us * vv - vr * u;
      BElem b13 = B.mul(b1, b3), b24 = B.mul(b2, b4), b123 = B.mul(B.mul(b1, b2), b3), b234 = B.mul(B.mul(b2, b3), b4),
            b124 = B.mul(B.mul(b1, b2), b4), b134 = B.mul(b13, b4);
      nlohmann::json in = {{"u", coef_json(u)}, {"r", vec_json(r)}, {"v", coef_json(vv)}, {"s_deg", vec_json(s)},
                           {"b1", belem_json(b1)}, {"b2", belem_json(b2)}, {"b3", belem_json(b3)}, {"b4", belem_json(b4)},
                           {"module", "S"}};
      for (const auto& x : w.degrees()) {
        auto A = tc.T(u, r, b1, b2, x), Bm = tc.T(vv, s, b3, b4, x);
        std::optional<Matrix> lhs;
        if (A && Bm) lhs = comm(*A, *Bm);
        check("T", in, x, lhs,
              sum({{Scalar(1), tc.T(wv, r + s, b13, b24, x)},
                   {-us, tc.T(vv, s, b123, b4, x)},
                   {vr, tc.T(u, r, b134, b2, x)}}));
        auto A1 = tc.T1(u, r, b1, b2, x), B1 = tc.T1(vv, s, b3, b4, x);
        std::optional<Matrix> lhs1;
        if (A1 && B1) lhs1 = comm(*A1, *B1);
        check("T1", in, x, lhs1,
              sum({{Scalar(1), (r + s).is_zero() ? std::optional<Matrix>(Matrix(M.d(), M.d()))
                                                 : tc.T1(wv, r + s, b13, b24, x)},
                   {-us, tc.T1(vv, s, b3, b124, x)},
                   {vr, tc.T1(u, r, b1, b234, x)}}));
      }
    }
  }

  if (n % 2 != 0) return;
  MapModule M = make_map_module(cfg, p, true);
  TCalc tc(M, ctx);
  std::size_t literal_fail = 0, literal_cases = 0;
  for (int t = 0; t < kTTuples; ++t) {
    ExpVec r = random_nonzero_deg(rng, n, rk), s = random_nonzero_deg(rng, n, rk);
    CoefVec rb(bar(r)), sb(bar(s)), rsb(bar(r + s));
    BElem b1 = random_belem(rng, B), b2 = random_belem(rng, B), b3 = random_belem(rng, B), b4 = random_belem(rng, B);
    CoefVec u = rng.coef_vec(n);
    Scalar rs = pair(rb, s), sr = pair(sb, r);
    BElem b13 = B.mul(b1, b3), b24 = B.mul(b2, b4), b124 = B.mul(B.mul(b1, b2), b4), b234 = B.mul(B.mul(b2, b3), b4);
    const ExpVec zero = ExpVec::zero(n);
    nlohmann::json in = {{"r", vec_json(r)}, {"s_deg", vec_json(s)}, {"u", coef_json(u)}, {"b1", belem_json(b1)},
                         {"b2", belem_json(b2)}, {"b3", belem_json(b3)}, {"b4", belem_json(b4)}, {"module", "H"}};
    for (const auto& x : w.degrees()) {
      auto A = tc.T(rb, r, b1, b2, x), Bm = tc.T(sb, s, b3, b4, x);
      std::optional<Matrix> lhs;
      if (A && Bm) lhs = comm(*A, *Bm);
      check("T_H", in, x, lhs,
            sum({{rs, tc.T(rsb, r + s, b13, b24, x)},
                 {-rs, tc.T(sb, s, b3, B.mul(B.mul(b1, b2), b4), x)},
                 {sr, tc.T(rb, r, b1, b234, x)}}));
      auto literal = sum({{rs, tc.T(rsb, r + s, b13, b24, x)}});
      if (lhs && literal) {
        ++literal_cases;
        if (*lhs != *literal) ++literal_fail;
      }
      auto A1 = tc.T1(rb, r, b1, b2, x), B1 = tc.T1(sb, s, b3, b4, x);
      std::optional<Matrix> lhs1;
      if (A1 && B1) lhs1 = comm(*A1, *B1);
      check("T1_H", in, x, lhs1,
            sum({{rs, (r + s).is_zero() ? std::optional<Matrix>(Matrix(M.d(), M.d()))
                                        : tc.T1(rsb, r + s, b13, b24, x)},
                 {-rs, tc.T1(sb, s, b3, b124, x)},
                 {sr, tc.T1(rb, r, b1, b234, x)}}));
      // [T(u,0,b1,b2), T(r̄,r,b3,b4)] = (u|r) c φ(b1) (−T(r̄,r,b2b3,b4) + T(r̄,r,b3,b2b4))
      auto T0 = tc.T(u, zero, b1, b2, x);
      auto Tr = tc.T(rb, r, b3, b4, x);
      std::optional<Matrix> lhs0;
      if (T0 && Tr) lhs0 = comm(*T0, *Tr);
      Scalar k = pair(u, r) * c * B.phi(b1);
      check("T0_H", in, x, lhs0,
            sum({{-k, tc.T(rb, r, B.mul(b2, b3), b4, x)}, {k, tc.T(rb, r, b3, B.mul(b2, b4), x)}}));
    }
  }
  if (literal_fail > 0)
    v.findings.push_back("two-term Hamiltonian T bracket [T(r̄,r),T(s̄,s)] = (r̄|s)T(r̄+s̄,r+s) fails on " +
                         std::to_string(literal_fail) + " of " + std::to_string(literal_cases) +
                         " operator checks; the three-term form holds");
}

inline void suite_i_brackets(const SuiteConfig& cfg, Verdict& v, Rng& rng) {
  const int n = cfg.n;
  LieContext ctx(n, cfg.B);
  const BAlgebra& B = *cfg.B;
  const Scalar c = cfg.c;
  const int k = cfg.window_k;
  auto I = [&](const CoefVec& u, const ExpVec& r, const BElem& b1, const BElem& b2) {
    if (r.is_zero()) {
      if (!u.is_zero()) throw PreconditionError("I at r = 0 with u != 0");
      return LieElem(ctx);
    }
    return make_I(ctx, u, r, b1, b2, c);
  };
  auto run = [&](bool ham) {
    for (int t = 0; t < kITuples; ++t) {
      ExpVec r = random_nonzero_deg(rng, n, k), s = random_nonzero_deg(rng, n, k);
      CoefVec u = ham ? CoefVec(bar(r)) : random_orthogonal(rng, r);
      CoefVec vv = ham ? CoefVec(bar(s)) : random_orthogonal(rng, s);
      BElem b1 = random_belem(rng, B), b2 = random_belem(rng, B), b3 = random_belem(rng, B), b4 = random_belem(rng, B);
      Scalar us = pair(u, s), vr = pair(vv, r);
      CoefVec wv = us * vv - vr * u;
      LieElem lhs = bracket(I(u, r, b1, b2), I(vv, s, b3, b4));
      LieElem rhs = I(wv, r + s, B.mul(b1, b3), B.mul(b2, b4)) - us * I(vv, s, b3, B.mul(B.mul(b1, b2), b4)) +
                    vr * I(u, r, b1, B.mul(B.mul(b2, b3), b4));
      ++v.cases;
      if (lhs != rhs)
        v.fail({{"u", coef_json(u)}, {"r", vec_json(r)}, {"v", coef_json(vv)}, {"s", vec_json(s)},
                {"b1", belem_json(b1)}, {"b2", belem_json(b2)}, {"b3", belem_json(b3)}, {"b4", belem_json(b4)},
                {"c", c.to_string()}, {"variant", ham ? "H" : "S"}},
               rhs.to_string(), lhs.to_string());
    }
  };
  run(false);
  if (n % 2 == 0) run(true);
}

inline void suite_injectivity(const SuiteConfig& cfg, Verdict& v, Rng&) {
  const Window w = cfg.window();
  const BAlgebra& B = *cfg.B;
  MapParams p{cfg.B, cfg.f_or_default(), cfg.alpha_or_zero(), cfg.beta_or_zero()};
  MapModule M = make_map_module(cfg, p, false);
  std::size_t injective = 0, nilpotent = 0;
  for (const auto& r : w.degrees()) {
    if (r.is_zero()) continue;
    for (int k = 0; k < B.dim(); ++k) {
      InjectivityReport rep = injectivity_diagnostic(r, B.basis(k), M, w);
      if (rep.layers.empty()) continue;
      ++v.cases;
      bool expect_inj = !B.psi_values()[k].is_zero();
      bool all_zero = true;
      for (const auto& l : rep.layers)
        if (l.rank != 0) all_zero = false;
      nlohmann::json in = {{"r", vec_json(r)}, {"b", B.names()[k]}};
      if (expect_inj && !rep.injective_everywhere)
        v.fail(in, "injective everywhere in window", rep.verdict());
      else if (!expect_inj && !(rep.kernel_found && all_zero))
        v.fail(in, "zero operator at every layer", rep.verdict());
      (expect_inj ? injective : nilpotent) += 1;
    }
  }
  v.findings.push_back(std::to_string(injective) + " (r,b) pairs injective everywhere, " + std::to_string(nilpotent) +
                       " identically zero");
}

}  // namespace detail

/// Runs one named suite. Deterministic for a fixed config and seed.
inline Verdict run_suite(const std::string& name, const SuiteConfig& cfg) {
  using Fn = void (*)(const SuiteConfig&, Verdict&, detail::Rng&);
  static const std::vector<std::pair<std::string, Fn>> table = {
      {"jacobi", detail::suite_jacobi},
      {"sn_closure", detail::suite_sn_closure},
      {"hn_closure", detail::suite_hn_closure},
      {"rep_axioms", detail::suite_rep_axioms},
      {"module_axiom_S", detail::suite_module_axiom_S},
      {"module_axiom_H", detail::suite_module_axiom_H},
      {"module_axiom_map_S", [](const SuiteConfig& c, Verdict& v, detail::Rng& r) {
         detail::suite_module_axiom_map(c, v, r, false);
       }},
      {"module_axiom_map_H", [](const SuiteConfig& c, Verdict& v, detail::Rng& r) {
         detail::suite_module_axiom_map(c, v, r, true);
       }},
      {"quasi_assoc", detail::suite_quasi_assoc},
      {"evaluation_property", detail::suite_evaluation},
      {"scalar_property", detail::suite_scalar},
      {"t_operator_brackets", detail::suite_t_brackets},
      {"i_element_brackets", detail::suite_i_brackets},
      {"injectivity", detail::suite_injectivity},
  };
  auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });
  if (it == table.end()) throw PreconditionError("unknown suite '" + name + "'");
  cfg.validate();
  Verdict v;
  v.suite = name;
  detail::Rng rng(cfg.seed, name);
  auto t0 = std::chrono::steady_clock::now();
  try {
    it->second(cfg, v, rng);
  } catch (const std::exception& e) {
    v.fail({{"error", "exception"}}, "suite completes", e.what());
  }
  v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

/// Every suite in the fixed order of suite_names(); failures never abort the batch.
inline std::vector<Verdict> run_all(const SuiteConfig& cfg) {
  std::vector<Verdict> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name, cfg));
  return out;
}

}  // namespace cartan
