#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cartan/balgebra.hpp"
#include "cartan/errors.hpp"
#include "cartan/exp_vec.hpp"
#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"
#include "cartan/reps.hpp"

namespace cartan {

/// Degree-graded vector Σ_s v_s ⊗ t^s with v_s ∈ ℂ^d. Zero components are not stored.
class ModVec {
 public:
  using Support = std::map<ExpVec, std::vector<Scalar>>;

  ModVec(int n, int d) : n_(n), d_(d) {}

  static ModVec basis(int n, int d, const ExpVec& s, int k) {
    ModVec v(n, d);
    std::vector<Scalar> e(static_cast<std::size_t>(d));
    e.at(static_cast<std::size_t>(k)) = Scalar(1);
    v.add(s, e);
    return v;
  }

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const Support& support() const noexcept { return s_; }
  bool is_zero() const noexcept { return s_.empty(); }

  /// Component at degree s (zero vector if absent).
  std::vector<Scalar> at(const ExpVec& s) const {
    auto it = s_.find(s);
    return it == s_.end() ? std::vector<Scalar>(static_cast<std::size_t>(d_)) : it->second;
  }

  void add(const ExpVec& s, const std::vector<Scalar>& v) {
    if (s.size() != n_) throw LengthMismatch("ModVec degree has wrong length");
    if (static_cast<int>(v.size()) != d_) throw LengthMismatch("ModVec component has wrong dimension");
    auto [it, fresh] = s_.try_emplace(s, v);
    if (!fresh)
      for (int k = 0; k < d_; ++k) it->second[k] += v[k];
    bool zero = true;
    for (const auto& x : it->second)
      if (!x.is_zero()) zero = false;
    if (zero) s_.erase(it);
  }

  friend ModVec operator+(ModVec a, const ModVec& b) {
    check(a, b);
    for (const auto& [s, v] : b.s_) a.add(s, v);
    return a;
  }
  friend ModVec operator*(const Scalar& k, const ModVec& a) {
    ModVec r(a.n_, a.d_);
    if (k.is_zero()) return r;
    for (const auto& [s, v] : a.s_) {
      std::vector<Scalar> w(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) w[i] = k * v[i];
      r.s_.emplace(s, std::move(w));
    }
    return r;
  }
  friend ModVec operator-(const ModVec& a, const ModVec& b) { return a + Scalar(-1) * b; }

  friend bool operator==(const ModVec&, const ModVec&) = default;

  std::string to_string() const {
    if (s_.empty()) return "0";
    std::string out;
    for (const auto& [s, v] : s_) {
      if (!out.empty()) out += " + ";
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].to_string();
      out += "]⊗t^" + s.to_string();
    }
    return out;
  }

 private:
  static void check(const ModVec& a, const ModVec& b) {
    if (a.n_ != b.n_ || a.d_ != b.d_) throw ContextMismatch("ModVecs from different modules");
  }

  int n_;
  int d_;
  Support s_;
};

/// Homogeneous operator of degree p. On V_s it acts as (c0 + (slope|s))·I + M,
/// landing in V_{s+p}. Every action in this library has this shape.
struct HomOp {
  ExpVec deg;
  Scalar c0;
  CoefVec slope;
  Matrix M;

  HomOp(ExpVec p, int d) : deg(std::move(p)), slope(deg.size()), M(d, d) {}

  Matrix block(const ExpVec& s) const {
    Scalar k = c0 + pair(slope, s);
    Matrix b = Matrix::scalar(M.rows(), k);
    if (!M.is_zero()) b += M;
    return b;
  }

  HomOp& operator+=(const HomOp& o) {
    c0 += o.c0;
    slope = slope + o.slope;
    M += o.M;
    return *this;
  }

  HomOp& scale(const Scalar& k) {
    c0 = k * c0;
    slope = k * slope;
    M = k * M;
    return *this;
  }

  bool is_zero() const { return c0.is_zero() && slope.is_zero() && M.is_zero(); }
};

/// Sum of homogeneous pieces with distinct degrees.
class Operator {
 public:
  Operator(int n, int d) : n_(n), d_(d) {}

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const std::map<ExpVec, HomOp>& pieces() const noexcept { return p_; }

  void add(const HomOp& h) {
    auto [it, fresh] = p_.try_emplace(h.deg, h);
    if (!fresh) it->second += h;
    if (it->second.is_zero()) p_.erase(it);
  }

  /// Block of the degree-p piece on V_s (zero if there is no such piece).
  Matrix block(const ExpVec& p, const ExpVec& s) const {
    auto it = p_.find(p);
    return it == p_.end() ? Matrix(d_, d_) : it->second.block(s);
  }

  /// Applies to v; any output outside the window raises WindowOverflow with `stage`.
  ModVec apply(const ModVec& v, const Window& w, int stage = 0) const {
    if (v.n() != n_ || v.d() != d_) throw ContextMismatch("vector does not belong to this module");
    ModVec out(n_, d_);
    for (const auto& [s, comp] : v.support()) {
      if (!w.contains(s))
        throw WindowOverflow("input support " + s.to_string() + " lies outside the window", stage);
      for (const auto& [p, h] : p_) {
        ExpVec t = s + p;
        if (!w.contains(t))
          throw WindowOverflow((stage ? "stage " + std::to_string(stage) + ": " : std::string()) +
                                   "degree " + s.to_string() + " + " + p.to_string() + " = " +
                                   t.to_string() + " leaves the window [-" + std::to_string(w.k()) +
                                   "," + std::to_string(w.k()) + "]^" + std::to_string(n_),
                               stage);
        out.add(t, h.block(s).apply(comp));
      }
    }
    return out;
  }

 private:
  int n_;
  int d_;
  std::map<ExpVec, HomOp> p_;
};

/// Jet module W ⊗ A_N for S_N ⋉ A_N:
///   D(u,r)·w⊗t^s = ((u|s+β) + Σ_ij u_i r_j E_ji) w⊗t^{s+r}   (r ≠ 0)
///   D(u,0)·w⊗t^s = (u|α+s) w⊗t^s
///   t^r·w⊗t^s    = w⊗t^{s+r}
/// The representation must satisfy the gl_N relations and have Σ E_ii = 0.
class JetModuleS {
 public:
  JetModuleS(MatrixRep rep, CoefVec alpha, CoefVec beta, Window window)
      : rep_(std::move(rep)), alpha_(std::move(alpha)), beta_(std::move(beta)), window_(window) {
    const int n = rep_.n();
    if (alpha_.size() != n || beta_.size() != n || window_.n() != n)
      throw LengthMismatch("JetModuleS: alpha, beta and window must have length N");
    auto report = validate_rep(rep_);
    if (!report.commutators_ok())
      throw ValidationError("JetModuleS: representation fails " + report.commutator_failures.front());
    if (!report.trace_zero)
      throw ValidationError("JetModuleS: representation must have Σ_i E_ii = 0 (use traceless())");
  }

  static constexpr const char* kind() { return "S"; }
  int n() const noexcept { return rep_.n(); }
  int d() const noexcept { return rep_.d(); }
  const MatrixRep& rep() const noexcept { return rep_; }
  const CoefVec& alpha() const noexcept { return alpha_; }
  const CoefVec& beta() const noexcept { return beta_; }
  const Window& window() const noexcept { return window_; }

  void check_member(const CoefVec& u, const ExpVec& r) const {
    if (!pair(u, r).is_zero())
      throw NotInSubalgebra("D(" + u.to_string() + "," + r.to_string() +
                            ") is not divergence free, so it is not in S_N");
  }

  /// Action of D(u, r) for r ≠ 0.
  HomOp der_op(const CoefVec& u, const ExpVec& r) const {
    HomOp h(r, d());
    for (int i = 0; i < n(); ++i) h.c0 += u[i] * beta_[i];
    h.slope = u;
    for (int i = 0; i < n(); ++i) {
      if (u[i].is_zero()) continue;
      for (int j = 0; j < n(); ++j)
        if (r[j] != 0) h.M += (u[i] * Scalar(r[j])) * rep_.E(j, i);
    }
    return h;
  }

 private:
  MatrixRep rep_;
  CoefVec alpha_;
  CoefVec beta_;
  Window window_;
};

/// Index range of the double sum in the Hamiltonian jet action.
enum class PairConvention {
  LessThan,   // i < j
  LessEqual,  // i <= j
  Distinct,   // i != j
  AllPairs,   // every ordered (i, j)
  WittForm,   // not the displayed formula: Σ_ij r̄_i r_j E_ji, the S_N matrix term at u = r̄
};

inline const char* to_string(PairConvention c) {
  switch (c) {
    case PairConvention::LessThan: return "i<j";
    case PairConvention::LessEqual: return "i<=j";
    case PairConvention::Distinct: return "i!=j";
    case PairConvention::AllPairs: return "all";
    case PairConvention::WittForm: return "witt";
  }
  return "?";
}

inline PairConvention parse_pair_convention(const std::string& s) {
  if (s == "i<j" || s == "lt") return PairConvention::LessThan;
  if (s == "i<=j" || s == "le") return PairConvention::LessEqual;
  if (s == "i!=j" || s == "ne") return PairConvention::Distinct;
  if (s == "all") return PairConvention::AllPairs;
  if (s == "witt") return PairConvention::WittForm;
  throw ParseError("unknown pair convention '" + s + "'");
}

/// Jet module V ⊗ A_N for H̃_N ⋉ A_N, N = 2m. h_r acts as
///   (r̄|s) + Σ_i r_{m+i}β_{m+i} + Σ_i r_i β_i + P(r)
/// where P(r) is the single-index sum plus the double sum over the chosen
/// index convention. D(u,0) and t^r act as for S_N.
class JetModuleH {
 public:
  JetModuleH(MatrixRep rep, CoefVec alpha, CoefVec beta, Window window,
             PairConvention conv = PairConvention::LessThan)
      : rep_(std::move(rep)), alpha_(std::move(alpha)), beta_(std::move(beta)), window_(window), conv_(conv) {
    const int n = rep_.n();
    if (n % 2 != 0) throw PreconditionError("JetModuleH requires even N");
    if (alpha_.size() != n || beta_.size() != n || window_.n() != n)
      throw LengthMismatch("JetModuleH: alpha, beta and window must have length N");
    auto report = validate_rep(rep_);
    if (!report.commutators_ok())
      throw ValidationError("JetModuleH: representation fails " + report.commutator_failures.front());
  }

  static constexpr const char* kind() { return "H"; }
  int n() const noexcept { return rep_.n(); }
  int d() const noexcept { return rep_.d(); }
  const MatrixRep& rep() const noexcept { return rep_; }
  const CoefVec& alpha() const noexcept { return alpha_; }
  const CoefVec& beta() const noexcept { return beta_; }
  const Window& window() const noexcept { return window_; }
  PairConvention convention() const noexcept { return conv_; }

  /// Coefficient λ with u = λ r̄, or throws NotInSubalgebra.
  Scalar h_coefficient(const CoefVec& u, const ExpVec& r) const {
    ExpVec rb = bar(r);
    int piv = 0;
    while (rb[piv] == 0) ++piv;
    Scalar lam = u[piv] / Scalar(rb[piv]);
    for (int i = 0; i < n(); ++i)
      if (u[i] != lam * Scalar(rb[i]))
        throw NotInSubalgebra("D(" + u.to_string() + "," + r.to_string() +
                              ") is not a multiple of h_r, so it is not in H̃_N");
    return lam;
  }

  void check_member(const CoefVec& u, const ExpVec& r) const { (void)h_coefficient(u, r); }

  HomOp der_op(const CoefVec& u, const ExpVec& r) const {
    Scalar lam = h_coefficient(u, r);
    HomOp h = h_op(r);
    return h.scale(lam);
  }

  /// Action of h_r, r ≠ 0.
  HomOp h_op(const ExpVec& r) const {
    const int m = n() / 2;
    HomOp h(r, d());
    for (int i = 0; i < m; ++i) h.c0 += Scalar(r[m + i]) * beta_[m + i];
    for (int i = 0; i < m; ++i) h.c0 += Scalar(r[i]) * beta_[i];
    h.slope = CoefVec(bar(r));
    h.M = matrix_term(r);
    return h;
  }

  /// P(r) on the representation space.
  Matrix matrix_term(const ExpVec& r) const {
    const int m = n() / 2;
    const int d = this->d();
    auto E = [&](int i, int j) -> const Matrix& { return rep_.E(i, j); };
    auto R = [&](int i) { return Scalar(r[i]); };
    Matrix P(d, d);
    if (conv_ == PairConvention::WittForm) {
      ExpVec rb = bar(r);
      for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
          if (rb[i] != 0 && r[j] != 0) P += Scalar(std::int64_t(rb[i]) * r[j]) * E(j, i);
      return P;
    }
    for (int i = 0; i < m; ++i) {
      P += (R(m + i) * R(m + i)) * E(m + i, i);
      P += (R(i) * R(m + i)) * (E(i, i) - E(m + i, m + i));
      P -= (R(i) * R(i)) * E(i, m + i);
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        bool take = false;
        switch (conv_) {
          case PairConvention::LessThan: take = i < j; break;
          case PairConvention::LessEqual: take = i <= j; break;
          case PairConvention::Distinct: take = i != j; break;
          case PairConvention::AllPairs: take = true; break;
          case PairConvention::WittForm: break;
        }
        if (!take) continue;
        P += (R(m + i) * R(m + j)) * (E(m + j, i) + E(m + i, j));
        P += (R(i) * R(m + j)) * (E(i, j) - E(m + j, m + i));
        P -= (R(i) * R(j)) * (E(i, m + j) + E(j, m + i));
      }
    return P;
  }

 private:
  MatrixRep rep_;
  CoefVec alpha_;
  CoefVec beta_;
  Window window_;
  PairConvention conv_;
};

using JetModule = std::variant<JetModuleS, JetModuleH>;

/// Realized module for (g ⋉ A_N) ⊗ B over a jet module, g = S_N or H̃_N:
///   t^r ⊗ b       ↦ c ψ(b) shift_r      (r ≠ 0)
///   t^0 ⊗ b       ↦ c φ(b)
///   D(u,r) ⊗ b    ↦ ψ(b) · base action  (r ≠ 0)
///   D(u,0) ⊗ b    ↦ f(u,b) + (u|s) ψ(b) on V_s
/// f is an N × dim(B) matrix whose unit column must equal α (Λ = α).
class MapModule {
 public:
  MapModule(JetModule base, std::shared_ptr<const BAlgebra> B, Scalar c, Matrix f)
      : base_(std::move(base)), B_(std::move(B)), c_(c), f_(std::move(f)) {
    if (!B_) throw PreconditionError("MapModule: null B");
    require_valid(*B_);
    if (c_.is_zero()) throw PreconditionError("MapModule: c must be nonzero");
    const CoefVec& a = alpha();
    if (f_.rows() != n() || f_.cols() != B_->dim())
      throw LengthMismatch("MapModule: f must be N x dim(B)");
    for (int i = 0; i < n(); ++i)
      if (f_(i, 0) != a[i])
        throw ValidationError("MapModule: f(e_" + std::to_string(i + 1) + ",1)=" + f_(i, 0).to_string() +
                              " must equal alpha_" + std::to_string(i + 1) + "=" + a[i].to_string());
  }

  /// f with unit column α and all other columns zero.
  static Matrix default_f(const CoefVec& alpha, int dimB) {
    Matrix f(alpha.size(), dimB);
    for (int i = 0; i < alpha.size(); ++i) f(i, 0) = alpha[i];
    return f;
  }

  const JetModule& base() const noexcept { return base_; }
  const BAlgebra& B() const noexcept { return *B_; }
  const std::shared_ptr<const BAlgebra>& B_ptr() const noexcept { return B_; }
  const Scalar& c() const noexcept { return c_; }
  const Matrix& f() const noexcept { return f_; }
  bool is_hamiltonian() const noexcept { return std::holds_alternative<JetModuleH>(base_); }

  int n() const { return std::visit([](const auto& m) { return m.n(); }, base_); }
  int d() const { return std::visit([](const auto& m) { return m.d(); }, base_); }
  const Window& window() const {
    return std::visit([](const auto& m) -> const Window& { return m.window(); }, base_);
  }
  const CoefVec& alpha() const {
    return std::visit([](const auto& m) -> const CoefVec& { return m.alpha(); }, base_);
  }
  /// Λ, identified with α of the base module.
  const CoefVec& Lambda() const { return alpha(); }

  /// f(u, b)
  Scalar f_value(const CoefVec& u, const BElem& b) const {
    Scalar s;
    for (int i = 0; i < n(); ++i)
      for (int k = 0; k < B_->dim(); ++k)
        if (!u[i].is_zero() && !b[k].is_zero()) s += u[i] * f_(i, k) * b[k];
    return s;
  }

 private:
  JetModule base_;
  std::shared_ptr<const BAlgebra> B_;
  Scalar c_;
  Matrix f_;
};

namespace detail {

template <class Base>
Operator build_operator(const Base& base, const LieElem& x, const BAlgebra& B, const Scalar& c,
                        const Matrix& f) {
  const int n = base.n(), d = base.d();
  if (x.context().n() != n)
    throw ContextMismatch("element has N=" + std::to_string(x.context().n()) + " but module has N=" +
                          std::to_string(n));
  if (&x.context().B() != &B && !(x.context().B() == B)) throw ContextMismatch("element and module use different B algebras");
  const auto& psi = B.psi_values();
  const auto& phi = B.phi_values();
  Operator op(n, d);
  for (const auto& [p, piece] : x.by_degree()) {
    Scalar fun_coef;
    std::map<int, CoefVec> ders;  // B index -> u
    for (const auto& t : piece.terms()) {
      if (t.key.is_fun()) {
        fun_coef += t.coef * (p.is_zero() ? phi[t.key.b] : psi[t.key.b]);
      } else {
        auto [it, _] = ders.try_emplace(t.key.b, CoefVec(n));
        it->second[t.key.der_index()] = t.coef;
      }
    }
    if (!fun_coef.is_zero()) {
      HomOp h(p, d);
      h.c0 = c * fun_coef;
      op.add(h);
    }
    if (ders.empty()) continue;
    if (p.is_zero()) {
      HomOp h(p, d);
      for (const auto& [k, u] : ders) {
        for (int i = 0; i < n; ++i) h.c0 += u[i] * f(i, k);
        h.slope = h.slope + psi[k] * u;
      }
      op.add(h);
    } else {
      CoefVec ueff(n);
      for (const auto& [k, u] : ders) {
        base.check_member(u, p);
        ueff = ueff + psi[k] * u;
      }
      if (!ueff.is_zero()) op.add(base.der_op(ueff, p));
    }
  }
  return op;
}

inline const BAlgebra& complex_algebra() {
  static const BAlgebra C = BAlgebra::complex();
  return C;
}

template <class Base>
Operator base_operator(const Base& base, const LieElem& x) {
  return build_operator(base, x, complex_algebra(), Scalar(1), MapModule::default_f(base.alpha(), 1));
}

}  // namespace detail

inline Operator operator_of(const JetModuleS& M, const LieElem& x) { return detail::base_operator(M, x); }
inline Operator operator_of(const JetModuleH& M, const LieElem& x) { return detail::base_operator(M, x); }
inline Operator operator_of(const MapModule& M, const LieElem& x) {
  return std::visit([&](const auto& base) { return detail::build_operator(base, x, M.B(), M.c(), M.f()); },
                    M.base());
}

inline ModVec act_S(const LieElem& x, const ModVec& v, const JetModuleS& M) {
  return operator_of(M, x).apply(v, M.window());
}
inline ModVec act_H(const LieElem& x, const ModVec& v, const JetModuleH& M) {
  return operator_of(M, x).apply(v, M.window());
}
inline ModVec act_map(const LieElem& x, const ModVec& v, const MapModule& M) {
  return operator_of(M, x).apply(v, M.window());
}

using AnyModule = std::variant<JetModuleS, JetModuleH, MapModule>;

inline Operator operator_of(const AnyModule& M, const LieElem& x) {
  return std::visit([&](const auto& m) { return operator_of(m, x); }, M);
}
inline const Window& window_of(const AnyModule& M) {
  return std::visit([](const auto& m) -> const Window& { return m.window(); }, M);
}
inline int dim_of(const AnyModule& M) {
  return std::visit([](const auto& m) { return m.d(); }, M);
}
inline int n_of(const AnyModule& M) {
  return std::visit([](const auto& m) { return m.n(); }, M);
}

inline ModVec act(const AnyModule& M, const LieElem& x, const ModVec& v) {
  return operator_of(M, x).apply(v, window_of(M));
}

/// Applies ops right to left (the last element acts first). Overflow reports
/// the 1-based stage in application order.
template <class Module>
ModVec apply_word(const std::vector<LieElem>& ops, const ModVec& v, const Module& M) {
  ModVec cur = v;
  int stage = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it, ++stage)
    cur = operator_of(M, *it).apply(cur, M.window(), stage);
  return cur;
}

inline ModVec apply_word(const std::vector<LieElem>& ops, const ModVec& v, const AnyModule& M) {
  return std::visit([&](const auto& m) { return apply_word(ops, v, m); }, M);
}

/// Matrix of a word of homogeneous operators from V_s to V_{s+Σ deg}, or
/// nullopt if an intermediate degree leaves the window.
inline std::optional<Matrix> word_block(const std::vector<const Operator*>& ops, const ExpVec& s,
                                        const Window& w) {
  if (!w.contains(s)) return std::nullopt;
  ExpVec cur = s;
  std::optional<Matrix> acc;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const Operator& op = **it;
    if (op.pieces().size() > 1) throw PreconditionError("word_block needs homogeneous operators");
    if (op.pieces().empty()) return Matrix(op.d(), op.d());
    const auto& [p, h] = *op.pieces().begin();
    Matrix b = h.block(cur);
    acc = acc ? b * *acc : b;
    cur = cur + p;
    if (!w.contains(cur)) return std::nullopt;
  }
  return acc;
}

/// Dimension of each graded piece representable in the window.
template <class Module>
std::map<ExpVec, int> weight_multiplicities(const Module& M, const Window& w) {
  std::map<ExpVec, int> out;
  for (const auto& s : w.degrees()) out.emplace(s, M.d());
  return out;
}

struct InjectivityLayer {
  ExpVec s;
  int rank = 0;
  bool injective = false;
};

struct InjectivityReport {
  ExpVec r;
  std::vector<InjectivityLayer> layers;
  bool injective_everywhere = true;
  bool kernel_found = false;

  std::string verdict() const { return kernel_found ? "kernel found" : "injective everywhere in window"; }
};

/// Rank of t^r ⊗ b : V_{Λ+s} → V_{Λ+s+r} for every s with s, s+r in the window.
inline InjectivityReport injectivity_diagnostic(const ExpVec& r, const BElem& b, const MapModule& M,
                                                const Window& w) {
  if (r.is_zero()) throw PreconditionError("injectivity_diagnostic requires r != 0");
  LieContext ctx(M.n(), M.B_ptr());
  Operator op = operator_of(M, make_fun(ctx, r, b));
  InjectivityReport rep{r, {}, true, false};
  for (const auto& s : w.degrees()) {
    if (!w.contains(s + r)) continue;
    int rank = op.block(r, s).rank();
    bool inj = rank == M.d();
    rep.layers.push_back({s, rank, inj});
    if (!inj) {
      rep.injective_everywhere = false;
      rep.kernel_found = true;
    }
  }
  return rep;
}

}  // namespace cartan
