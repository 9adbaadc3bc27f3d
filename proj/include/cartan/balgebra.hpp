#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

/// Element of B in coordinates over the basis of its algebra.
class BElem {
 public:
  BElem() = default;
  explicit BElem(std::vector<Scalar> coords) : c_(std::move(coords)) {}

  static BElem basis(int dim, int k) {
    std::vector<Scalar> c(static_cast<std::size_t>(dim));
    c.at(static_cast<std::size_t>(k)) = Scalar(1);
    return BElem(std::move(c));
  }

  int dim() const noexcept { return static_cast<int>(c_.size()); }
  const Scalar& operator[](int k) const { return c_[k]; }
  const std::vector<Scalar>& coords() const noexcept { return c_; }

  bool is_zero() const {
    for (const auto& s : c_)
      if (!s.is_zero()) return false;
    return true;
  }

  friend BElem operator+(const BElem& a, const BElem& b) {
    check(a, b);
    std::vector<Scalar> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.c_[k] + b.c_[k];
    return BElem(std::move(c));
  }
  friend BElem operator*(const Scalar& s, const BElem& a) {
    std::vector<Scalar> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * a.c_[k];
    return BElem(std::move(c));
  }

  friend bool operator==(const BElem&, const BElem&) = default;

 private:
  static void check(const BElem& a, const BElem& b) {
    if (a.dim() != b.dim()) throw ContextMismatch("B elements from algebras of different dimension");
  }

  std::vector<Scalar> c_;
};

/// Finite-dimensional commutative associative unital algebra with structure
/// constants, an algebra homomorphism psi: B → ℂ and a linear form phi.
/// Basis index 0 is the unit.
class BAlgebra {
 public:
  using Table = std::vector<std::vector<std::vector<Scalar>>>;  // mult[i][j][k]

  BAlgebra(std::vector<std::string> names, Table mult, std::vector<Scalar> psi,
           std::vector<Scalar> phi)
      : names_(std::move(names)), mult_(std::move(mult)), psi_(std::move(psi)), phi_(std::move(phi)) {
    int k = dim();
    if (k < 1) throw ValidationError("B must have dimension >= 1");
    if (static_cast<int>(mult_.size()) != k) throw ValidationError("mult table has wrong size");
    for (const auto& row : mult_) {
      if (static_cast<int>(row.size()) != k) throw ValidationError("mult table has wrong size");
      for (const auto& v : row)
        if (static_cast<int>(v.size()) != k) throw ValidationError("mult table has wrong size");
    }
    if (static_cast<int>(psi_.size()) != k) throw ValidationError("psi has wrong length");
    if (static_cast<int>(phi_.size()) != k) throw ValidationError("phi has wrong length");
    sparse_.resize(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
          if (!mult_[i][j][l].is_zero()) sparse_[i * k + j].emplace_back(l, mult_[i][j][l]);
  }

  /// ℂ itself: one basis vector, psi = phi = 1.
  static BAlgebra complex() { return truncated_poly(0); }

  /// ℂ[x]/(x^{M+1}) with basis 1, x, …, x^M. psi defaults to evaluation at 0,
  /// phi defaults to psi.
  static BAlgebra truncated_poly(int M, std::optional<std::vector<Scalar>> psi = std::nullopt,
                                 std::optional<std::vector<Scalar>> phi = std::nullopt) {
    if (M < 0) throw PreconditionError("truncated_poly: M must be >= 0");
    int k = M + 1;
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i)
      names.push_back(i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
    Table mult(k, std::vector<std::vector<Scalar>>(k, std::vector<Scalar>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i + j < k) mult[i][j][i + j] = Scalar(1);
    std::vector<Scalar> ev(k);
    ev[0] = Scalar(1);
    std::vector<Scalar> ps = psi.value_or(ev);
    std::vector<Scalar> ph = phi.value_or(ev);
    return BAlgebra(std::move(names), std::move(mult), std::move(ps), std::move(ph));
  }

  BAlgebra with_phi(std::vector<Scalar> phi) const {
    return BAlgebra(names_, mult_, psi_, std::move(phi));
  }
  BAlgebra with_psi(std::vector<Scalar> psi) const {
    return BAlgebra(names_, mult_, std::move(psi), phi_);
  }

  int dim() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const Table& table() const noexcept { return mult_; }
  const std::vector<Scalar>& psi_values() const noexcept { return psi_; }
  const std::vector<Scalar>& phi_values() const noexcept { return phi_; }

  BElem unit() const { return BElem::basis(dim(), 0); }
  BElem basis(int k) const { return BElem::basis(dim(), k); }

  /// Nonzero structure constants of b_i·b_j as (k, c_ij^k).
  const std::vector<std::pair<int, Scalar>>& basis_product(int i, int j) const {
    return sparse_[static_cast<std::size_t>(i) * dim() + j];
  }

  BElem mul(const BElem& x, const BElem& y) const {
    check(x);
    check(y);
    int k = dim();
    std::vector<Scalar> out(k);
    for (int i = 0; i < k; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < k; ++j) {
        if (y[j].is_zero()) continue;
        Scalar xy = x[i] * y[j];
        for (const auto& [l, c] : basis_product(i, j)) out[l] += xy * c;
      }
    }
    return BElem(std::move(out));
  }

  Scalar psi(const BElem& x) const { return linear(psi_, x); }
  Scalar phi(const BElem& x) const { return linear(phi_, x); }

  friend bool operator==(const BAlgebra& a, const BAlgebra& b) {
    return a.names_ == b.names_ && a.mult_ == b.mult_ && a.psi_ == b.psi_ && a.phi_ == b.phi_;
  }

 private:
  void check(const BElem& x) const {
    if (x.dim() != dim())
      throw ContextMismatch("B element of dimension " + std::to_string(x.dim()) +
                            " used in algebra of dimension " + std::to_string(dim()));
  }
  Scalar linear(const std::vector<Scalar>& form, const BElem& x) const {
    check(x);
    Scalar s;
    for (int i = 0; i < dim(); ++i)
      if (!x[i].is_zero()) s += form[i] * x[i];
    return s;
  }

  std::vector<std::string> names_;
  Table mult_;
  std::vector<Scalar> psi_;
  std::vector<Scalar> phi_;
  std::vector<std::vector<std::pair<int, Scalar>>> sparse_;
};

/// Lists every violated axiom; empty means valid.
inline std::vector<std::string> validate(const BAlgebra& B) {
  std::vector<std::string> report;
  const int k = B.dim();
  const auto& n = B.names();
  const auto& m = B.table();
  auto vec_str = [&](const std::vector<Scalar>& v) {
    std::string s;
    for (int l = 0; l < k; ++l) {
      if (v[l].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += v[l].to_string() + "·" + n[l];
    }
    return s.empty() ? std::string("0") : s;
  };

  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (m[i][j] != m[j][i])
        report.push_back("commutativity: " + n[i] + "·" + n[j] + "=" + vec_str(m[i][j]) + " ≠ " +
                         n[j] + "·" + n[i] + "=" + vec_str(m[j][i]));

  for (int i = 0; i < k; ++i) {
    std::vector<Scalar> e(k);
    e[i] = Scalar(1);
    if (m[0][i] != e || m[i][0] != e)
      report.push_back("unit: " + n[0] + " is not a two-sided unit on " + n[i]);
  }

  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        BElem left = B.mul(B.mul(B.basis(i), B.basis(j)), B.basis(l));
        BElem right = B.mul(B.basis(i), B.mul(B.basis(j), B.basis(l)));
        if (left != right)
          report.push_back("associativity: (" + n[i] + "·" + n[j] + ")·" + n[l] + "=" +
                           vec_str(left.coords()) + " ≠ " + n[i] + "·(" + n[j] + "·" + n[l] +
                           ")=" + vec_str(right.coords()));
      }

  const auto& psi = B.psi_values();
  if (!psi[0].is_one()) report.push_back("psi(" + n[0] + ")=" + psi[0].to_string() + " ≠ 1");
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Scalar lhs = B.psi(B.mul(B.basis(i), B.basis(j)));
      Scalar rhs = psi[i] * psi[j];
      if (lhs != rhs) {
        std::string prod = i == j ? "psi(" + n[i] + ")²" : "psi(" + n[i] + ")psi(" + n[j] + ")";
        report.push_back("psi(" + n[i] + "·" + n[j] + ")=" + lhs.to_string() + " ≠ " + prod + "=" +
                         rhs.to_string());
      }
    }

  const auto& phi = B.phi_values();
  if (!phi[0].is_one()) report.push_back("phi(" + n[0] + ")=" + phi[0].to_string() + " ≠ 1");
  return report;
}

/// Throws ValidationError carrying the first violation if B is invalid.
inline void require_valid(const BAlgebra& B) {
  auto report = validate(B);
  if (!report.empty()) {
    std::string msg = "invalid B algebra: " + report.front();
    if (report.size() > 1) msg += " (+" + std::to_string(report.size() - 1) + " more)";
    throw ValidationError(msg);
  }
}

}  // namespace cartan
