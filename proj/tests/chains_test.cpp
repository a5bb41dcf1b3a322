#include <gtest/gtest.h>

#include <random>

#include "lieiso/chains.hpp"
#include "lieiso/polyalg.hpp"
#include "lieiso/realsolve.hpp"
#include "support.hpp"

using namespace lieiso;

namespace {

bool has_equivalent(const Decomposition& d, const RegularChain& c) {
  for (const auto& x : d.chains)
    if (chain_equivalent(x, c)) return true;
  return false;
}

bool in_quasi_component(const RegularChain& c, const std::map<Var, Rational>& at) {
  for (const auto& t : c.polys())
    if (!t.evaluate(at).is_zero() || init_of(t).evaluate(at).is_zero()) return false;
  return true;
}

// Random 3-variable system whose equations are products of two affine forms,
// each vanishing at one of two planted rational points.
struct Planted {
  std::vector<Polynomial> F;
  std::vector<std::map<Var, Rational>> points;
};

Planted planted_system(std::mt19937_64& rng, const VarOrderPtr& o) {
  std::uniform_int_distribution<int> small(-3, 3);
  Planted out;
  for (int k = 0; k < 2; ++k) {
    std::map<Var, Rational> p;
    for (Var v = 0; v < 3; ++v) p[v] = small(rng);
    out.points.push_back(p);
  }
  auto affine = [&](const std::map<Var, Rational>& p) {
    Polynomial f(o);
    for (Var v = 0; v < 3; ++v) f += (Polynomial::variable(o, v) - Polynomial(o, p.at(v))).scaled(small(rng));
    return f;
  };
  for (int k = 0; k < 3; ++k) out.F.push_back(affine(out.points[0]) * affine(out.points[1]));
  return out;
}

}  // namespace

TEST(Chains, SphereEllipseExample) {
  Ring R({"x", "y", "z"});
  auto F = R({"x^2+y^2+z^2-4", "x^2+2*y^2-5", "x*z-1"});
  auto d = triangularize(F);
  ASSERT_EQ(d.chains.size(), 3u);
  EXPECT_TRUE(has_equivalent(d, R.chain({"x*z-1", "2*y^2-3", "x^2-2"})));
  EXPECT_TRUE(has_equivalent(d, R.chain({"z+1", "y^2-2", "x+1"})));
  EXPECT_TRUE(has_equivalent(d, R.chain({"z-1", "y^2-2", "x-1"})));
  for (const auto& c : d.chains)
    for (const auto& f : F) EXPECT_TRUE(sat_membership(f, c));
}

TEST(Chains, SymmetricExample) {
  Ring R({"x", "y", "z"});
  auto F = R({"x^2+y+z-1", "x+y^2+z-1", "x+y+z^2-1"});
  auto d = triangularize(F);
  EXPECT_EQ(d.chains.size(), 4u);
  EXPECT_TRUE(has_equivalent(d, R.chain({"x^2+2*x-1", "y-x", "z-x"})));
  EXPECT_TRUE(has_equivalent(d, R.chain({"x-1", "y", "z"})));
  EXPECT_TRUE(has_equivalent(d, R.chain({"x", "y-1", "z"})));
  EXPECT_TRUE(has_equivalent(d, R.chain({"x", "y", "z-1"})));
}

TEST(Chains, NoRealRootExample) {
  Ring R({"x", "y", "z"});
  auto d = triangularize(R({"x^2+y^2+z^2+2", "3*x^2+4*y^2+4*z^2+5"}));
  ASSERT_EQ(d.chains.size(), 1u);
  EXPECT_TRUE(chain_equivalent(d.chains[0], R.chain({"z^2+y^2-1", "x^2+3"})));
}

TEST(Chains, Inconsistent) {
  Ring R({"x", "y"});
  EXPECT_TRUE(triangularize(R({"1"})).chains.empty());
  EXPECT_TRUE(triangularize(R({"x^2+y", "1"})).chains.empty());
  auto all = triangularize({});
  ASSERT_EQ(all.chains.size(), 1u);
  EXPECT_EQ(all.chains[0].size(), 0u);
}

TEST(Chains, SatMembership) {
  Ring R({"x", "y", "z"});
  auto T = R.chain({"x*z-1", "2*y^2-3", "x^2-2"});
  EXPECT_TRUE(sat_membership(R("x*z-1"), T));
  EXPECT_FALSE(sat_membership(R("1"), T));
  EXPECT_TRUE(sat_membership(R("x^2*z-x"), T));
  EXPECT_FALSE(sat_membership(R("x*z+1"), T));
}

TEST(Chains, IsRegular) {
  Ring R({"x", "y"});
  auto T = R.chain({"y^2-1"});
  EXPECT_EQ(is_regular(R("1"), T).status, Regularity::Regular);
  EXPECT_EQ(is_regular(R("y^2-1"), T).status, Regularity::Zero);
  auto r = is_regular(R("y-1"), T);
  ASSERT_EQ(r.status, Regularity::ZeroDivisor);
  ASSERT_EQ(r.zero_branches.size(), 1u);
  ASSERT_EQ(r.regular_branches.size(), 1u);
  EXPECT_TRUE(chain_equivalent(r.zero_branches[0], R.chain({"y-1"})));
  EXPECT_TRUE(chain_equivalent(r.regular_branches[0], R.chain({"y+1"})));
}

TEST(Chains, MakeSquarefree) {
  Ring R({"x", "y"});
  auto a = make_squarefree(R.chain({"x^2-2"}));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(chain_equivalent(a[0], R.chain({"x^2-2"})));
  auto b = make_squarefree(R.chain({"x^2"}));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(chain_equivalent(b[0], R.chain({"x"})));
  auto c = make_squarefree(R.chain({"(y-x)^2*(y+x)", "x^2-2"}));
  ASSERT_EQ(c.size(), 2u);
  bool m1 = false, m2 = false;
  for (auto& ch : c) {
    m1 |= chain_equivalent(ch, R.chain({"y-x", "x^2-2"}));
    m2 |= chain_equivalent(ch, R.chain({"y+x", "x^2-2"}));
  }
  EXPECT_TRUE(m1 && m2);
}

TEST(Chains, Dimension) {
  Ring R({"x", "y", "z"});
  EXPECT_EQ(chain_dimension(R.chain({"x*z-1", "2*y^2-3", "x^2-2"})), 0u);
  EXPECT_EQ(chain_dimension(R.chain({})), 3u);
}

TEST(ChainsProperty, PlantedSolutions) {
  auto o = make_order({"x", "y", "z"});
  std::mt19937_64 rng(1);
  for (int it = 0; it < 200; ++it) {
    auto sys = planted_system(rng, o);
    auto d = triangularize(sys.F);
    for (const auto& c : d.chains) {
      for (const auto& f : sys.F) EXPECT_TRUE(sat_membership(f, c)) << f << " on " << c.to_string();
      EXPECT_TRUE(is_regular_chain(c.base())) << c.to_string();
      EXPECT_TRUE(is_squarefree_chain(c.base())) << c.to_string();
    }
    for (const auto& p : sys.points) {
      bool covered = false;
      for (const auto& c : d.chains) covered |= in_quasi_component(c, p);
      EXPECT_TRUE(covered);
    }
  }
}

TEST(ChainsProperty, InequationsRespected) {
  auto o = make_order({"x", "y", "z"});
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int it = 0; it < 200; ++it) {
    auto sys = planted_system(rng, o);
    Polynomial h = Polynomial::variable(o, small(rng) & 1 ? 0 : 2) - Polynomial(o, Rational(small(rng)));
    auto systems = decompose(sys.F, {h});
    for (const auto& rs : systems)
      for (const auto& f : sys.F) EXPECT_TRUE(sat_membership(f, rs.chain));
    for (const auto& p : sys.points) {
      bool covered = false;
      for (const auto& rs : systems) {
        if (!in_quasi_component(rs.chain, p)) continue;
        bool ok = true;
        for (const auto& g : rs.inequations) ok &= !g.evaluate(p).is_zero();
        covered |= ok;
      }
      EXPECT_EQ(covered, !h.evaluate(p).is_zero());
    }
  }
}

// Real points of zero-dimensional output chains satisfy the input equations
// to interval-certified zero.
TEST(ChainsProperty, RealPointSoundness) {
  Ring R({"x", "y", "z"});
  std::vector<std::vector<Polynomial>> systems{
      R({"x^2+y^2+z^2-4", "x^2+2*y^2-5", "x*z-1"}),
      R({"x^2+y+z-1", "x+y^2+z-1", "x+y+z^2-1"}),
  };
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) systems.push_back(planted_system(rng, R.order).F);
  for (const auto& F : systems) {
    for (const auto& c : triangularize(F).chains) {
      if (chain_dimension(c) != 0) continue;
      auto pts = real_points_of_chain(c);
      ASSERT_TRUE(pts.complete);
      for (auto box : pts.boxes) {
        box.refine(60);
        for (const auto& f : F) {
          Interval v = eval(f, box.coords);
          EXPECT_TRUE(v.contains_zero());
          EXPECT_LT(v.width(), Rational(1, 1000000));
        }
      }
    }
  }
}
