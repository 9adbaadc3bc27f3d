#include <gtest/gtest.h>

#include <random>

#include "cartan/modules.hpp"

using namespace cartan;

namespace {

CoefVec e(int n, int i) { return CoefVec::unit(n, i); }
ExpVec zero(int n) { return ExpVec::zero(n); }

std::shared_ptr<const BAlgebra> trunc3(std::vector<Scalar> phi = {1, 3, 0}) {
  return std::make_shared<const BAlgebra>(BAlgebra::truncated_poly(2, std::nullopt, phi));
}

ModVec vec(int n, std::vector<Scalar> v, const ExpVec& s) {
  ModVec m(n, static_cast<int>(v.size()));
  m.add(s, v);
  return m;
}

Scalar rnd(std::mt19937_64& g) {
  return Scalar(Rational(static_cast<int>(g() % 7) - 3, static_cast<int>(g() % 3) + 1));
}

// Output at degree s+r of D(u,r) on w ⊗ t^s, written straight from the jet-module formula.
std::vector<Scalar> oracle_S(const MatrixRep& R, const CoefVec& u, const ExpVec& r, const CoefVec& alpha,
                             const CoefVec& beta, const ExpVec& s, const std::vector<Scalar>& w) {
  const int n = R.n(), d = R.d();
  std::vector<Scalar> out(d);
  if (r.is_zero()) {
    Scalar k;
    for (int i = 0; i < n; ++i) k += u[i] * (alpha[i] + Scalar(s[i]));
    for (int a = 0; a < d; ++a) out[a] = k * w[a];
    return out;
  }
  Scalar k;
  for (int i = 0; i < n; ++i) k += u[i] * (Scalar(s[i]) + beta[i]);
  for (int a = 0; a < d; ++a) out[a] = k * w[a];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto Ew = R.E(j, i).apply(w);
      for (int a = 0; a < d; ++a) out[a] += u[i] * Scalar(r[j]) * Ew[a];
    }
  return out;
}

// h(r) on v ⊗ t^s with 1-based formula indices mapped to 0-based matrix units
// and the double sum taken over i < j.
std::vector<Scalar> oracle_H(const MatrixRep& R, const ExpVec& r, const CoefVec& beta, const ExpVec& s,
                             const std::vector<Scalar>& v) {
  const int N = R.n(), m = N / 2, d = R.d();
  auto E = [&](int a, int b) { return R.E(a - 1, b - 1); };
  auto rr = [&](int a) { return Scalar(r[a - 1]); };
  Scalar k = pair(CoefVec(bar(r)), s);
  for (int i = 1; i <= m; ++i) k += rr(m + i) * beta[m + i - 1] + rr(i) * beta[i - 1];
  Matrix X = Matrix::scalar(d, k);
  for (int i = 1; i <= m; ++i)
    X = X + (rr(m + i) * rr(m + i)) * E(m + i, i) + (rr(i) * rr(m + i)) * (E(i, i) - E(m + i, m + i)) -
        (rr(i) * rr(i)) * E(i, m + i);
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      X = X + (rr(m + i) * rr(m + j)) * (E(m + j, i) + E(m + i, j)) +
          (rr(i) * rr(m + j)) * (E(i, j) - E(m + j, m + i)) - (rr(i) * rr(j)) * (E(i, m + j) + E(j, m + i));
  return X.apply(v);
}

}  // namespace

TEST(ModVec, PrunesZeroComponents) {
  ModVec v = vec(2, {1, 0}, {0, 0});
  v.add({0, 0}, {-1, 0});
  EXPECT_TRUE(v.is_zero());
  EXPECT_THROW(v.add({0, 0, 0}, {1, 0}), LengthMismatch);
}

TEST(JetModuleS, Examples) {
  LieContext ctx(2, BAlgebra::complex());
  JetModuleS M(traceless(natural_rep(2)), CoefVec{Scalar::frac(1, 2), 0}, CoefVec(2), Window(2, 2));
  // d_12((0,1)) = D(e1,(0,1)) sends e1 ⊗ t^0 to e2 ⊗ t^(0,1).
  EXPECT_EQ(act_S(make_dab(ctx, 0, 1, {0, 1}), vec(2, {1, 0}, {0, 0}), M), vec(2, {0, 1}, {0, 1}));
  EXPECT_EQ(act_S(make_D(ctx, e(2, 0), zero(2)), vec(2, {1, 0}, {2, 0}), M),
            vec(2, {Scalar::frac(5, 2), 0}, {2, 0}));
  EXPECT_EQ(act_S(make_fun(ctx, {1, 1}), vec(2, {1, 0}, {0, 0}), M), vec(2, {1, 0}, {1, 1}));
}

TEST(JetModuleS, RejectsBadInput) {
  LieContext ctx(2, BAlgebra::complex());
  EXPECT_THROW(JetModuleS(natural_rep(2), CoefVec(2), CoefVec(2), Window(2, 2)), ValidationError);
  JetModuleS M(trivial_rep(2), CoefVec(2), CoefVec(2), Window(2, 1));
  EXPECT_THROW(act_S(make_D(ctx, e(2, 0), {1, 0}), vec(2, {1}, {0, 0}), M), NotInSubalgebra);
  try {
    act_S(make_fun(ctx, {1, 0}), vec(2, {1}, {1, 0}), M);
    FAIL() << "expected overflow";
  } catch (const WindowOverflow& err) {
    EXPECT_EQ(err.stage(), 0);
  }
}

TEST(JetModuleS, MatchesDirectFormula) {
  std::mt19937_64 g(11);
  for (int n : {2, 3}) {
    for (const MatrixRep& R : {traceless(natural_rep(n)), trivial_rep(n)}) {
      CoefVec alpha(n), beta(n);
      for (int i = 0; i < n; ++i) alpha[i] = rnd(g), beta[i] = rnd(g);
      JetModuleS M(R, alpha, beta, Window(n, 2));
      LieContext ctx(n, BAlgebra::complex());
      for (int t = 0; t < 60; ++t) {
        ExpVec r(n), s(n);
        for (int i = 0; i < n; ++i) r[i] = static_cast<int>(g() % 3) - 1, s[i] = static_cast<int>(g() % 3) - 1;
        CoefVec u(n);
        if (r.is_zero()) {
          for (int i = 0; i < n; ++i) u[i] = rnd(g);
        } else {
          for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
              Scalar k = rnd(g);
              u[a] += k * Scalar(r[b]);
              u[b] -= k * Scalar(r[a]);
            }
        }
        std::vector<Scalar> w(R.d());
        for (auto& x : w) x = rnd(g);
        ModVec want(n, R.d());
        want.add(s + r, oracle_S(R, u, r, alpha, beta, s, w));
        EXPECT_EQ(act_S(make_D(ctx, u, r), vec(n, w, s), M), want);
      }
    }
  }
}

TEST(JetModuleH, Examples) {
  LieContext ctx(2, BAlgebra::complex());
  JetModuleH M(natural_rep(2), CoefVec(2), CoefVec(2), Window(2, 2));
  EXPECT_EQ(act_H(make_h(ctx, {1, 0}), vec(2, {0, 1}, {0, 0}), M), vec(2, {-1, 0}, {1, 0}));
  JetModuleH A(natural_rep(2), CoefVec{Scalar::frac(1, 3), 2}, CoefVec(2), Window(2, 2));
  CoefVec u{1, -1};
  Scalar k = Scalar::frac(1, 3) + 1 - (2 + Scalar(-1));
  EXPECT_EQ(act_H(make_D(ctx, u, zero(2)), vec(2, {1, 1}, {1, -1}), A), vec(2, {k, k}, {1, -1}));
  EXPECT_EQ(act_H(make_fun(ctx, {0, -2}), vec(2, {1, 1}, {1, 1}), A), vec(2, {1, 1}, {1, -1}));
}

TEST(JetModuleH, RejectsNonHamiltonianAndOddN) {
  LieContext ctx(2, BAlgebra::complex());
  JetModuleH M(natural_rep(2), CoefVec(2), CoefVec(2), Window(2, 2));
  EXPECT_THROW(act_H(make_D(ctx, e(2, 0), {1, 0}), vec(2, {1, 0}, {0, 0}), M), NotInSubalgebra);
  EXPECT_THROW(JetModuleH(natural_rep(3), CoefVec(3), CoefVec(3), Window(3, 1)), PreconditionError);
}

TEST(JetModuleH, MatchesDirectFormula) {
  std::mt19937_64 g(12);
  for (int n : {2, 4}) {
    for (const MatrixRep& R : {natural_rep(n), trivial_rep(n)}) {
      CoefVec beta(n);
      for (int i = 0; i < n; ++i) beta[i] = rnd(g);
      JetModuleH M(R, CoefVec(n), beta, Window(n, 2), PairConvention::LessThan);
      LieContext ctx(n, BAlgebra::complex());
      for (int t = 0; t < 60; ++t) {
        ExpVec r(n), s(n);
        for (int i = 0; i < n; ++i) r[i] = static_cast<int>(g() % 3) - 1, s[i] = static_cast<int>(g() % 3) - 1;
        if (r.is_zero()) continue;
        std::vector<Scalar> v(R.d());
        for (auto& x : v) x = rnd(g);
        Scalar lam = rnd(g);
        if (lam.is_zero()) lam = 1;
        ModVec want(n, R.d());
        auto o = oracle_H(R, r, beta, s, v);
        for (auto& x : o) x *= lam;
        want.add(s + r, o);
        EXPECT_EQ(act_H(lam * make_h(ctx, r), vec(n, v, s), M), want);
      }
    }
  }
}

TEST(JetModuleH, WittFormSatisfiesTheAxiomAtN4) {
  // Under the Witt form the matrix part is Σ r̄_i r_j E_ji, so the S-style computation applies.
  LieContext ctx(4, BAlgebra::complex());
  JetModuleH M(natural_rep(4), CoefVec(4), CoefVec(4), Window(4, 1), PairConvention::WittForm);
  auto box = Window::box(4, 1);
  for (const auto& r : box)
    for (const auto& s : box) {
      if (r.is_zero() || s.is_zero() || !M.window().contains(r + s)) continue;
      Operator X = operator_of(M, make_h(ctx, r)), Y = operator_of(M, make_h(ctx, s));
      Operator Z = operator_of(M, bracket(make_h(ctx, r), make_h(ctx, s)));
      ExpVec o = zero(4);
      EXPECT_EQ(X.block(r, s) * Y.block(s, o) - Y.block(s, r) * X.block(r, o), Z.block(r + s, o));
    }
}

TEST(MapModule, Examples) {
  auto B = trunc3();
  LieContext ctx(2, B);
  CoefVec alpha{Scalar::frac(1, 2), 0};
  Matrix f = MapModule::default_f(alpha, 3);
  f(0, 1) = 1;  // f(u,x) = u_1
  MapModule M(JetModuleS(traceless(natural_rep(2)), alpha, CoefVec(2), Window(2, 2)), B, 1, f);
  BElem x = B->basis(1);
  ModVec v = vec(2, {1, 2}, {1, 0});
  EXPECT_TRUE(act_map(make_D(ctx, CoefVec{0, 1}, {1, 0}, x), v, M).is_zero());
  EXPECT_EQ(act_map(make_fun(ctx, zero(2), x), v, M), Scalar(3) * v);
  CoefVec u{Scalar::frac(2, 3), 5};
  for (const auto& s : Window::box(2, 2)) {
    ModVec w = vec(2, {1, 2}, s);
    EXPECT_EQ(act_map(make_D(ctx, u, zero(2), x), w, M), u[0] * w);
  }
  // Unit component with c = 1 reproduces the base module.
  JetModuleS base(traceless(natural_rep(2)), alpha, CoefVec(2), Window(2, 2));
  LieContext ctxC(2, BAlgebra::complex());
  EXPECT_EQ(act_map(make_dab(ctx, 0, 1, {1, 1}), v, M), act_S(make_dab(ctxC, 0, 1, {1, 1}), v, base));
  EXPECT_EQ(act_map(make_D(ctx, u, zero(2)), v, M), act_S(make_D(ctxC, u, zero(2)), v, base));
}

TEST(MapModule, ScalesByC) {
  auto B = trunc3();
  LieContext ctx(2, B);
  MapModule M(JetModuleS(trivial_rep(2), CoefVec(2), CoefVec(2), Window(2, 2)), B, 2, Matrix(2, 3));
  ModVec v = vec(2, {1}, {0, 0});
  EXPECT_EQ(act_map(make_fun(ctx, {1, 0}), v, M), vec(2, {2}, {1, 0}));
  EXPECT_EQ(act_map(make_fun(ctx, zero(2), B->basis(1)), v, M), vec(2, {6}, {0, 0}));
}

TEST(MapModule, RejectsBadParameters) {
  auto B = trunc3();
  CoefVec alpha{1, 0};
  JetModuleS base(trivial_rep(2), alpha, CoefVec(2), Window(2, 1));
  EXPECT_THROW(MapModule(base, B, 0, MapModule::default_f(alpha, 3)), PreconditionError);
  EXPECT_THROW(MapModule(base, B, 1, Matrix(2, 3)), ValidationError);  // unit column must be α
  EXPECT_THROW(MapModule(base, B, 1, Matrix(2, 2)), LengthMismatch);
  auto bad = std::make_shared<const BAlgebra>(BAlgebra::truncated_poly(2, std::vector<Scalar>{1, 1, 0}));
  EXPECT_THROW(MapModule(base, bad, 1, MapModule::default_f(alpha, 3)), ValidationError);
  MapModule M(base, B, 1, MapModule::default_f(alpha, 3));
  LieContext other(2, BAlgebra::truncated_poly(1));
  EXPECT_THROW(act_map(make_fun(other, {1, 0}), vec(2, {1}, {0, 0}), M), ContextMismatch);
}

TEST(ApplyWord, Examples) {
  auto B = trunc3();
  LieContext ctx(2, B);
  MapModule M(JetModuleS(traceless(natural_rep(2)), CoefVec(2), CoefVec(2), Window(2, 2)), B, 1,
              Matrix(2, 3));
  ModVec v = vec(2, {1, -1}, {0, 0});
  ExpVec r{1, -1};
  EXPECT_EQ(apply_word({make_fun(ctx, -r), make_fun(ctx, r)}, v, M), v);
  BElem b({2, 1, 0}), b2({3, 0, 5});
  ExpVec m{1, 0}, n{0, 1};
  EXPECT_EQ(apply_word({make_fun(ctx, m, b), make_fun(ctx, n, b2)}, v, M),
            B->psi(B->mul(b, b2)) * act_map(make_fun(ctx, m + n), v, M));
}

TEST(ApplyWord, TOperatorVanishesOnTrivialData) {
  LieContext ctx(2, BAlgebra::complex());
  JetModuleS M(trivial_rep(2), CoefVec(2), CoefVec(2), Window(2, 2));
  ExpVec r{1, 1};
  CoefVec u{1, -1};  // (u|r) = 0
  EXPECT_TRUE(apply_word({make_fun(ctx, -r), make_D(ctx, u, r)}, vec(2, {1}, {0, 0}), M).is_zero());
}

TEST(ApplyWord, OverflowReportsStage) {
  LieContext ctx(2, BAlgebra::complex());
  JetModuleS M(trivial_rep(2), CoefVec(2), CoefVec(2), Window(2, 2));
  auto t = make_fun(ctx, {1, 0});
  try {
    apply_word({t, t, t}, vec(2, {1}, {0, 0}), M);
    FAIL() << "expected overflow";
  } catch (const WindowOverflow& err) {
    EXPECT_EQ(err.stage(), 3);
  }
}

TEST(Weights, EveryDegreeHasRepDimension) {
  JetModuleS M(traceless(natural_rep(2)), CoefVec(2), CoefVec(2), Window(2, 2));
  auto w = weight_multiplicities(M, M.window());
  EXPECT_EQ(w.size(), 25u);
  for (const auto& [s, d] : w) EXPECT_EQ(d, 2);
  JetModuleS T(trivial_rep(2), CoefVec(2), CoefVec(2), Window(2, 1));
  for (const auto& [s, d] : weight_multiplicities(T, T.window())) EXPECT_EQ(d, 1);
}

TEST(Injectivity, Dichotomy) {
  auto B = trunc3();
  MapModule M(JetModuleS(traceless(natural_rep(2)), CoefVec(2), CoefVec(2), Window(2, 2)), B, 1,
              Matrix(2, 3));
  auto unit = injectivity_diagnostic({1, 0}, B->unit(), M, M.window());
  EXPECT_TRUE(unit.injective_everywhere);
  EXPECT_EQ(unit.layers.size(), 20u);
  auto nil = injectivity_diagnostic({1, 0}, B->basis(1), M, M.window());
  EXPECT_TRUE(nil.kernel_found);
  for (const auto& l : nil.layers) EXPECT_EQ(l.rank, 0);
  auto mixed = injectivity_diagnostic({1, 1}, BElem({2, 1, 0}), M, M.window());
  EXPECT_TRUE(mixed.injective_everywhere);
  EXPECT_THROW(injectivity_diagnostic(zero(2), B->unit(), M, M.window()), PreconditionError);
}

TEST(Operator, ActAgreesWithBlocksOnMixedVectors) {
  // act() on inhomogeneous elements and vectors against the sum of homogeneous blocks.
  auto B = trunc3();
  LieContext ctx(2, B);
  CoefVec alpha{Scalar::frac(1, 2), 0};
  MapModule M(JetModuleS(traceless(natural_rep(2)), alpha, CoefVec{1, Scalar::frac(-1, 3)}, Window(2, 2)), B, 2,
              MapModule::default_f(alpha, 3));
  LieElem x = make_dab(ctx, 0, 1, {1, 0}) + Scalar(3) * make_fun(ctx, {0, -1}, B->basis(1)) +
              make_D(ctx, CoefVec{1, 2}, zero(2), BElem({1, 1, 1}));
  ModVec v = vec(2, {1, 2}, {0, 0}) + vec(2, {Scalar::frac(1, 2), 0}, {-1, 1});
  Operator op = operator_of(M, x);
  ModVec want(2, 2);
  for (const auto& [p, h] : op.pieces())
    for (const auto& [s, comp] : v.support()) want.add(s + p, op.block(p, s).apply(comp));
  EXPECT_EQ(act_map(x, v, M), want);
}
