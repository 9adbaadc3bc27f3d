#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cartan/balgebra.hpp"
#include "cartan/errors.hpp"
#include "cartan/reps.hpp"
#include "cartan/verify.hpp"

namespace cartan {

struct Preset {
  std::string name;
  std::string description;
  SuiteConfig config;
};

namespace detail {

/// ℂ[x]/(x³) with ψ = evaluation at 0 and φ(x) = 3, φ(x²) = −1/2.
inline std::shared_ptr<const BAlgebra> truncpoly3_phi3() {
  return std::make_shared<const BAlgebra>(
      BAlgebra::truncated_poly(2, std::nullopt, std::vector<Scalar>{1, 3, Scalar::frac(-1, 2)}));
}

/// f(u,1) = (u|α), f(u,x) = u_1, f(u,x²) = 0.
inline Matrix f_u1(const CoefVec& alpha, int dimB) {
  Matrix f = MapModule::default_f(alpha, dimB);
  f(0, 1) = Scalar(1);
  return f;
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> out;
    {
      SuiteConfig c;
      c.n = 2;
      c.window_k = 2;
      c.B = detail::truncpoly3_phi3();
      c.alpha = CoefVec{Scalar::frac(1, 2), 0};
      c.beta = CoefVec{Scalar::frac(1, 3), -1};
      c.f = detail::f_u1(*c.alpha, 3);
      out.push_back({"default", "N=2, K=2, B=C[x]/(x^3), traceless natural S rep, natural H rep, c=1", c});
    }
    {
      SuiteConfig c;
      c.n = 2;
      c.B = std::make_shared<const BAlgebra>(BAlgebra::complex());
      c.rep = traceless(natural_rep(2));
      c.alpha = CoefVec{Scalar::frac(1, 2), 0};
      c.beta = CoefVec{0, 0};
      out.push_back({"thm31-natural-n2", "S_2 jet module on the traceless natural rep, B=C", c});
    }
    {
      SuiteConfig c;
      c.n = 2;
      c.B = std::make_shared<const BAlgebra>(BAlgebra::complex());
      c.rep_h = natural_rep(2);
      c.alpha = CoefVec{Scalar::frac(1, 2), 0};
      c.beta = CoefVec{0, 0};
      out.push_back({"thm41-natural-m1", "H~_2 jet module on the natural rep, pairs i<j, B=C", c});
    }
    {
      SuiteConfig c;
      c.n = 4;
      c.window_k = 1;
      c.B = std::make_shared<const BAlgebra>(BAlgebra::complex());
      c.rep_h = natural_rep(4);
      out.push_back({"thm41-natural-m2", "H~_4 jet module on the natural rep, pairs i<j, B=C, K=1", c});
    }
    {
      SuiteConfig c;
      c.n = 2;
      c.B = detail::truncpoly3_phi3();
      c.c = 1;
      c.alpha = CoefVec{Scalar::frac(1, 2), 0};
      c.f = detail::f_u1(*c.alpha, 3);
      out.push_back({"thm317-truncpoly3", "map module over C[x]/(x^3), psi=ev0, phi(x)=3, f(u,x)=u_1, c=1", c});
    }
    return out;
  }();
  return all;
}

inline const Preset& preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw PreconditionError("unknown preset '" + name + "'");
}

}  // namespace cartan
