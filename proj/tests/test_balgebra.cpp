#include <gtest/gtest.h>

#include "cartan/balgebra.hpp"

using namespace cartan;

namespace {

bool mentions(const std::vector<std::string>& report, const std::string& needle) {
  for (const auto& line : report)
    if (line.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(BAlgebra, TruncatedPolyProducts) {
  BAlgebra B = BAlgebra::truncated_poly(2);
  ASSERT_EQ(B.dim(), 3);
  EXPECT_EQ(B.names()[2], "x^2");
  EXPECT_TRUE(B.mul(B.basis(1), B.basis(2)).is_zero());
  EXPECT_EQ(B.mul(B.basis(1), B.basis(1)), B.basis(2));
  BElem b({Scalar(2), Scalar::frac(-1, 3), Scalar::i()});
  EXPECT_EQ(B.mul(B.unit(), b), b);
  EXPECT_EQ(B.mul(b, B.unit()), b);
  EXPECT_TRUE(validate(B).empty());
}

TEST(BAlgebra, ComplexIsOneDimensional) {
  BAlgebra C = BAlgebra::truncated_poly(0);
  EXPECT_EQ(C.dim(), 1);
  EXPECT_EQ(C.psi(C.unit()), Scalar(1));
  EXPECT_EQ(C.phi(C.unit()), Scalar(1));
  EXPECT_TRUE(validate(C).empty());
}

TEST(BAlgebra, NilpotentPsiZeroWithFreePhiIsValid) {
  BAlgebra B = BAlgebra::truncated_poly(1, std::vector<Scalar>{1, 0}, std::vector<Scalar>{1, 3});
  EXPECT_TRUE(validate(B).empty());
  EXPECT_EQ(B.phi(B.basis(1)), Scalar(3));
}

TEST(BAlgebra, PsiOnNilpotentIsReported) {
  BAlgebra B = BAlgebra::truncated_poly(1, std::vector<Scalar>{1, 1});
  auto report = validate(B);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0], "psi(x·x)=0 ≠ psi(x)²=1");
}

TEST(BAlgebra, AsymmetricTableIsReported) {
  BAlgebra B = BAlgebra::truncated_poly(2);
  auto t = B.table();
  t[1][2] = {0, 0, 1};
  BAlgebra bad(B.names(), t, B.psi_values(), B.phi_values());
  auto report = validate(bad);
  EXPECT_TRUE(mentions(report, "commutativity"));
  EXPECT_TRUE(mentions(report, "associativity"));
}

TEST(BAlgebra, UnitAndPhiViolations) {
  BAlgebra B = BAlgebra::truncated_poly(1);
  auto t = B.table();
  t[0][1] = {0, 0};
  t[1][0] = {0, 0};
  BAlgebra bad(B.names(), t, B.psi_values(), std::vector<Scalar>{2, 0});
  auto report = validate(bad);
  EXPECT_TRUE(mentions(report, "unit"));
  EXPECT_TRUE(mentions(report, "phi(1)=2 ≠ 1"));
  EXPECT_THROW(require_valid(bad), ValidationError);
}

TEST(BAlgebra, ShapeErrorsThrow) {
  EXPECT_THROW(BAlgebra({"1"}, {}, {1}, {1}), ValidationError);
  EXPECT_THROW(BAlgebra::truncated_poly(-1), PreconditionError);
  BAlgebra B = BAlgebra::truncated_poly(2);
  EXPECT_THROW(B.mul(B.unit(), BElem({Scalar(1)})), ContextMismatch);
}

TEST(BAlgebra, PsiIsMultiplicativeOnAllElementsOfGrid) {
  BAlgebra B = BAlgebra::truncated_poly(2);
  std::vector<BElem> xs;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) xs.push_back(BElem({Scalar(a + 2), Scalar(b), Scalar::frac(a, 2)}));
  for (const auto& x : xs)
    for (const auto& y : xs) EXPECT_EQ(B.psi(B.mul(x, y)), B.psi(x) * B.psi(y));
}
