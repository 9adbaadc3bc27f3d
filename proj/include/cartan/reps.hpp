#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/matrix.hpp"
#include "cartan/scalar.hpp"

namespace cartan {

/// Action of the gl_N matrix units E_ij (0-based) on a d-dimensional space.
class MatrixRep {
 public:
  MatrixRep(int n, int d, std::vector<Matrix> E) : n_(n), d_(d), E_(std::move(E)) {
    if (n < 1) throw PreconditionError("rep: n must be >= 1");
    if (d < 1) throw PreconditionError("rep: d must be >= 1");
    if (static_cast<int>(E_.size()) != n * n) throw ValidationError("rep: expected n*n matrices");
    for (const auto& m : E_)
      if (m.rows() != d || m.cols() != d) throw ValidationError("rep: matrix has wrong shape");
  }

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const Matrix& E(int i, int j) const { return E_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Matrix>& table() const noexcept { return E_; }

  /// Σ_i E_ii
  Matrix identity_action() const {
    Matrix s(d_, d_);
    for (int i = 0; i < n_; ++i) s += E(i, i);
    return s;
  }

  friend bool operator==(const MatrixRep&, const MatrixRep&) = default;

 private:
  int n_;
  int d_;
  std::vector<Matrix> E_;
};

/// gl_N acting on ℂ^N: E_ij is the elementary matrix unit.
inline MatrixRep natural_rep(int n) {
  std::vector<Matrix> E;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) E.push_back(Matrix::unit(n, i, j));
  return MatrixRep(n, n, std::move(E));
}

/// One-dimensional zero action.
inline MatrixRep trivial_rep(int n) {
  return MatrixRep(n, 1, std::vector<Matrix>(static_cast<std::size_t>(n) * n, Matrix(1, 1)));
}

/// E_ij for i ≠ j, E_ii − (1/N) Σ_k E_kk on the diagonal, so the identity of gl_N acts as 0.
inline MatrixRep traceless(const MatrixRep& R) {
  Matrix shift = Scalar::frac(1, R.n()) * R.identity_action();
  std::vector<Matrix> E = R.table();
  for (int i = 0; i < R.n(); ++i) E[static_cast<std::size_t>(i) * R.n() + i] -= shift;
  return MatrixRep(R.n(), R.d(), std::move(E));
}

struct RepReport {
  std::vector<std::string> commutator_failures;
  bool trace_zero = true;

  bool commutators_ok() const noexcept { return commutator_failures.empty(); }
  bool ok() const noexcept { return commutators_ok() && trace_zero; }

  /// All problems, the trace condition last.
  std::vector<std::string> lines() const {
    auto out = commutator_failures;
    if (!trace_zero) out.push_back("trace: Σ_i E_ii ≠ 0 (identity of gl_N acts nontrivially)");
    return out;
  }
};

/// Checks [E_ij, E_kl] = δ_jk E_il − δ_li E_kj for all quadruples and reports
/// whether Σ_i E_ii vanishes. Indices in messages are 1-based.
inline RepReport validate_rep(const MatrixRep& R) {
  RepReport rep;
  const int n = R.n(), d = R.d();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Matrix lhs = R.E(i, j) * R.E(k, l) - R.E(k, l) * R.E(i, j);
          Matrix rhs(d, d);
          if (j == k) rhs += R.E(i, l);
          if (l == i) rhs -= R.E(k, j);
          if (lhs != rhs)
            rep.commutator_failures.push_back(
                "[E_" + std::to_string(i + 1) + std::to_string(j + 1) + ",E_" + std::to_string(k + 1) +
                std::to_string(l + 1) + "]: got " + lhs.to_string() + ", expected " + rhs.to_string());
        }
  rep.trace_zero = R.identity_action().is_zero();
  return rep;
}

}  // namespace cartan
