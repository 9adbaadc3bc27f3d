#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cartan/balgebra.hpp"
#include "cartan/errors.hpp"
#include "cartan/exp_vec.hpp"
#include "cartan/matrix.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

/// The pair (N, B) that every element of (W_N ⋉ A_N) ⊗ B carries.
class LieContext {
 public:
  LieContext(int n, BAlgebra B) : LieContext(n, std::make_shared<const BAlgebra>(std::move(B))) {}
  LieContext(int n, std::shared_ptr<const BAlgebra> B) : n_(n), B_(std::move(B)) {
    if (n < 1 || n > kMaxN) throw PreconditionError("N must be in [1," + std::to_string(kMaxN) + "]");
    if (!B_) throw PreconditionError("null B algebra");
  }

  int n() const noexcept { return n_; }
  const BAlgebra& B() const noexcept { return *B_; }
  const std::shared_ptr<const BAlgebra>& B_ptr() const noexcept { return B_; }

  friend bool operator==(const LieContext& a, const LieContext& b) {
    return a.n_ == b.n_ && (a.B_ == b.B_ || *a.B_ == *b.B_);
  }

 private:
  int n_;
  std::shared_ptr<const BAlgebra> B_;
};

/// Basis vector t^r ⊗ b_k (kind Fun) or t^r d_i ⊗ b_k (kind Der, 0-based i).
struct BasisKey {
  static constexpr std::uint8_t kFun = 0;

  std::uint8_t kind = kFun;  // 0 for Fun, i+1 for Der(i)
  ExpVec deg;
  std::int32_t b = 0;

  static BasisKey fun(const ExpVec& r, int b) { return {kFun, r, b}; }
  static BasisKey der(int i, const ExpVec& r, int b) {
    return {static_cast<std::uint8_t>(i + 1), r, b};
  }

  bool is_fun() const noexcept { return kind == kFun; }
  bool is_der() const noexcept { return kind != kFun; }
  int der_index() const noexcept { return kind - 1; }

  friend bool operator==(const BasisKey&, const BasisKey&) = default;

  /// Fun before Der, then degree, then derivation index, then B index.
  friend std::strong_ordering operator<=>(const BasisKey& x, const BasisKey& y) noexcept {
    if (auto c = x.is_der() <=> y.is_der(); c != 0) return c;
    if (auto c = x.deg <=> y.deg; c != 0) return c;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    return x.b <=> y.b;
  }
};

struct Term {
  BasisKey key;
  Scalar coef;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse element of (W_N ⋉ A_N) ⊗ B. Terms are kept sorted by BasisKey with no
/// zero coefficients, so structural equality is mathematical equality.
class LieElem {
 public:
  explicit LieElem(LieContext ctx) : ctx_(std::move(ctx)) {}
  LieElem(LieContext ctx, std::vector<Term> terms) : ctx_(std::move(ctx)), terms_(std::move(terms)) {
    for (const auto& t : terms_) check_key(t.key);
    normalize();
  }

  static LieElem fun(const LieContext& ctx, const ExpVec& r, int b = 0, Scalar coef = 1) {
    return LieElem(ctx, {{BasisKey::fun(r, b), coef}});
  }
  static LieElem der(const LieContext& ctx, int i, const ExpVec& r, int b = 0, Scalar coef = 1) {
    return LieElem(ctx, {{BasisKey::der(i, r, b), coef}});
  }

  const LieContext& context() const noexcept { return ctx_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  bool has_fun_terms() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.key.is_fun(); });
  }
  bool has_der_terms() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.key.is_der(); });
  }

  /// Coefficient of a basis key (0 if absent).
  Scalar coef(const BasisKey& k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, const BasisKey& key) { return t.key < key; });
    return it != terms_.end() && it->key == k ? it->coef : Scalar();
  }

  /// Splits into homogeneous components keyed by degree.
  std::map<ExpVec, LieElem> by_degree() const {
    std::map<ExpVec, LieElem> out;
    for (const auto& t : terms_) {
      auto [it, _] = out.try_emplace(t.key.deg, ctx_);
      it->second.terms_.push_back(t);
    }
    for (auto& [_, e] : out) e.normalize();
    return out;
  }

  friend LieElem operator+(const LieElem& x, const LieElem& y) {
    same_context(x, y);
    std::vector<Term> t;
    t.reserve(x.terms_.size() + y.terms_.size());
    t.insert(t.end(), x.terms_.begin(), x.terms_.end());
    t.insert(t.end(), y.terms_.begin(), y.terms_.end());
    return LieElem(x.ctx_, std::move(t), Trusted{});
  }
  friend LieElem operator-(const LieElem& x, const LieElem& y) { return x + (Scalar(-1) * y); }
  friend LieElem operator*(const Scalar& s, const LieElem& x) {
    LieElem r(x.ctx_);
    if (s.is_zero()) return r;
    r.terms_.reserve(x.terms_.size());
    for (const auto& t : x.terms_) r.terms_.push_back({t.key, s * t.coef});
    return r;
  }
  LieElem operator-() const { return Scalar(-1) * *this; }
  LieElem& operator+=(const LieElem& o) { return *this = *this + o; }
  LieElem& operator-=(const LieElem& o) { return *this = *this - o; }

  friend bool operator==(const LieElem& x, const LieElem& y) {
    return x.ctx_ == y.ctx_ && x.terms_ == y.terms_;
  }

  /// Readable form such as "2·t^(1,0)d1 - t^(0,0)⊗x"; derivation indices are 1-based.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    const auto& names = ctx_.B().names();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& t = terms_[k];
      std::string c = t.coef.to_string();
      bool neg = t.coef.is_real() && t.coef.re() < Rational(0);
      if (k) s += neg ? " - " : " + ";
      else if (neg) s += "-";
      if (neg) c = (-t.coef).to_string();
      if (!t.coef.is_real()) c = "(" + c + ")";
      if (c != "1") s += c + "·";
      s += "t^" + t.key.deg.to_string();
      if (t.key.is_der()) s += "d" + std::to_string(t.key.der_index() + 1);
      if (t.key.b != 0) s += "⊗" + names[t.key.b];
    }
    return s;
  }

  static void same_context(const LieElem& x, const LieElem& y) {
    if (!(x.ctx_ == y.ctx_)) throw ContextMismatch("Lie elements from different (N, B) contexts");
  }

 private:
  struct Trusted {};
  LieElem(LieContext ctx, std::vector<Term> terms, Trusted) : ctx_(std::move(ctx)), terms_(std::move(terms)) {
    normalize();
  }

  friend LieElem bracket(const LieElem& x, const LieElem& y);

  void check_key(const BasisKey& k) const {
    if (k.deg.size() != ctx_.n()) throw LengthMismatch("degree length does not match N");
    if (k.is_der() && k.der_index() >= ctx_.n()) throw PreconditionError("derivation index out of range");
    if (k.b < 0 || k.b >= ctx_.B().dim()) throw PreconditionError("B index out of range");
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
      Term acc = terms_[i];
      std::size_t j = i + 1;
      for (; j < terms_.size() && terms_[j].key == acc.key; ++j) acc.coef += terms_[j].coef;
      if (!acc.coef.is_zero()) terms_[out++] = std::move(acc);
      i = j;
    }
    terms_.resize(out);
  }

  LieContext ctx_;
  std::vector<Term> terms_;
};

/// [x, y] on (W_N ⋉ A_N) ⊗ B:
///   [t^r d_i ⊗ a, t^s d_j ⊗ b] = (s_i t^{r+s} d_j − r_j t^{r+s} d_i) ⊗ ab
///   [t^r d_i ⊗ a, t^s ⊗ b]     = s_i t^{r+s} ⊗ ab
///   [t^r ⊗ a, t^s ⊗ b]         = 0
inline LieElem bracket(const LieElem& x, const LieElem& y) {
  LieElem::same_context(x, y);
  const BAlgebra& B = x.context().B();
  std::vector<Term> out;
  auto emit = [&](BasisKey key, const Scalar& coef, int bx, int by) {
    for (const auto& [k, c] : B.basis_product(bx, by)) {
      key.b = k;
      out.push_back({key, coef * c});
    }
  };
  for (const auto& tx : x.terms()) {
    const BasisKey& kx = tx.key;
    for (const auto& ty : y.terms()) {
      const BasisKey& ky = ty.key;
      if (kx.is_fun() && ky.is_fun()) continue;
      Scalar xy = tx.coef * ty.coef;
      ExpVec sum = kx.deg + ky.deg;
      if (kx.is_der() && ky.is_der()) {
        int i = kx.der_index(), j = ky.der_index();
        int si = ky.deg[i], rj = kx.deg[j];
        if (si != 0) emit(BasisKey::der(j, sum, 0), xy * Scalar(si), kx.b, ky.b);
        if (rj != 0) emit(BasisKey::der(i, sum, 0), xy * Scalar(-rj), kx.b, ky.b);
      } else if (kx.is_der()) {
        int si = ky.deg[kx.der_index()];
        if (si != 0) emit(BasisKey::fun(sum, 0), xy * Scalar(si), kx.b, ky.b);
      } else {
        int ri = kx.deg[ky.der_index()];
        if (ri != 0) emit(BasisKey::fun(sum, 0), xy * Scalar(-ri), kx.b, ky.b);
      }
    }
  }
  return LieElem(x.context(), std::move(out));
}

/// [x,[y,z]] + [y,[z,x]] + [z,[x,y]]
inline LieElem jacobi_defect(const LieElem& x, const LieElem& y, const LieElem& z) {
  return bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
}

/// D(u, r) ⊗ b = Σ_i u_i t^r d_i ⊗ b
inline LieElem make_D(const LieContext& ctx, const CoefVec& u, const ExpVec& r, const BElem& b) {
  if (u.size() != ctx.n() || r.size() != ctx.n()) throw LengthMismatch("make_D: length does not match N");
  if (b.dim() != ctx.B().dim()) throw ContextMismatch("make_D: B element has wrong dimension");
  std::vector<Term> t;
  for (int i = 0; i < ctx.n(); ++i) {
    if (u[i].is_zero()) continue;
    for (int k = 0; k < b.dim(); ++k)
      if (!b[k].is_zero()) t.push_back({BasisKey::der(i, r, k), u[i] * b[k]});
  }
  return LieElem(ctx, std::move(t));
}

inline LieElem make_D(const LieContext& ctx, const CoefVec& u, const ExpVec& r) {
  return make_D(ctx, u, r, ctx.B().unit());
}

/// t^r ⊗ b
inline LieElem make_fun(const LieContext& ctx, const ExpVec& r, const BElem& b) {
  if (r.size() != ctx.n()) throw LengthMismatch("make_fun: length does not match N");
  if (b.dim() != ctx.B().dim()) throw ContextMismatch("make_fun: B element has wrong dimension");
  std::vector<Term> t;
  for (int k = 0; k < b.dim(); ++k)
    if (!b[k].is_zero()) t.push_back({BasisKey::fun(r, k), b[k]});
  return LieElem(ctx, std::move(t));
}

inline LieElem make_fun(const LieContext& ctx, const ExpVec& r) { return make_fun(ctx, r, ctx.B().unit()); }

/// d_ab(r) = r_b t^r d_a − r_a t^r d_b (0-based a, b).
inline LieElem make_dab(const LieContext& ctx, int a, int b, const ExpVec& r) {
  if (a == b) throw PreconditionError("make_dab requires a != b");
  if (a < 0 || b < 0 || a >= ctx.n() || b >= ctx.n()) throw PreconditionError("make_dab: index out of range");
  if (r.size() != ctx.n()) throw LengthMismatch("make_dab: length does not match N");
  std::vector<Term> t;
  if (r[b] != 0) t.push_back({BasisKey::der(a, r, 0), Scalar(r[b])});
  if (r[a] != 0) t.push_back({BasisKey::der(b, r, 0), Scalar(-r[a])});
  return LieElem(ctx, std::move(t));
}

/// h_r = D(r̄, r)
inline LieElem make_h(const LieContext& ctx, const ExpVec& r) {
  return make_D(ctx, CoefVec(bar(r)), r);
}

/// div(D(u,r) ⊗ b) = (u|r) t^r ⊗ b, extended linearly. Input must have no Fun terms.
inline LieElem divergence(const LieElem& x) {
  if (x.has_fun_terms()) throw PreconditionError("divergence: input contains function terms");
  std::vector<Term> t;
  for (const auto& term : x.terms()) {
    int ri = term.key.deg[term.key.der_index()];
    if (ri != 0) t.push_back({BasisKey::fun(term.key.deg, term.key.b), term.coef * Scalar(ri)});
  }
  return LieElem(x.context(), std::move(t));
}

/// Derivation part of x (drops Fun terms).
inline LieElem der_part(const LieElem& x) {
  std::vector<Term> t;
  for (const auto& term : x.terms())
    if (term.key.is_der()) t.push_back(term);
  return LieElem(x.context(), std::move(t));
}

/// x ∈ (S_N ⋉ A_N) ⊗ B, i.e. its derivation part is divergence free.
inline bool in_span_S(const LieElem& x) { return divergence(der_part(x)).is_zero(); }

/// x ∈ span{h_r} + span{d_i} (+ A_N ⊗ B when allow_functions). Decided per
/// (degree, B index) by an exact rank test against r̄.
inline bool in_span_H(const LieElem& x, bool allow_functions = true) {
  if (x.is_zero()) return true;
  const int n = x.context().n();
  if (!allow_functions && x.has_fun_terms()) return false;
  if (n % 2 != 0) return !x.has_der_terms();
  std::map<std::pair<ExpVec, int>, std::vector<Scalar>> comps;
  for (const auto& t : x.terms()) {
    if (t.key.is_fun()) continue;
    auto [it, _] = comps.try_emplace({t.key.deg, t.key.b}, std::vector<Scalar>(n));
    it->second[t.key.der_index()] = t.coef;
  }
  for (const auto& [key, u] : comps) {
    const ExpVec& r = key.first;
    if (r.is_zero()) continue;
    ExpVec rb = bar(r);
    Matrix m(2, n);
    for (int i = 0; i < n; ++i) {
      m(0, i) = Scalar(rb[i]);
      m(1, i) = u[i];
    }
    if (m.rank() > 1) return false;
  }
  return true;
}

/// I(u, r, b1, b2) = ψ(b1) D(u,r) ⊗ b2 − c D(u,0) ⊗ b1 b2, for (u|r) = 0 and r ≠ 0.
/// The Hamiltonian variant is u = r̄.
inline LieElem make_I(const LieContext& ctx, const CoefVec& u, const ExpVec& r, const BElem& b1,
                      const BElem& b2, const Scalar& c) {
  if (r.is_zero()) throw PreconditionError("make_I requires r != 0");
  if (!pair(u, r).is_zero()) throw PreconditionError("make_I requires (u|r) = 0");
  const BAlgebra& B = ctx.B();
  return B.psi(b1) * make_D(ctx, u, r, b2) - c * make_D(ctx, u, ExpVec::zero(ctx.n()), B.mul(b1, b2));
}

}  // namespace cartan
