#include <gtest/gtest.h>

#include <random>

#include "lieiso/projection.hpp"
#include "support.hpp"

using namespace lieiso;

namespace {

std::vector<Rational> pt(std::initializer_list<Rational> l) { return std::vector<Rational>(l); }

// Independent complex oracle: instantiate the parameters and ask for a
// nonempty decomposition.
bool complex_oracle(const Ring& R, const std::vector<Polynomial>& F, const std::vector<Polynomial>& H,
                    const std::vector<Rational>& p) {
  std::map<Var, Rational> b;
  for (Var v = 0; v < p.size(); ++v) b[v] = p[v];
  std::vector<Polynomial> Fi, Hi;
  for (const auto& f : F) Fi.push_back(f.evaluate(b));
  for (const auto& h : H) Hi.push_back(h.evaluate(b));
  DecomposeOptions o;
  o.order = R.order;
  return !decompose(Fi, Hi, {}, o).empty();
}

}  // namespace

TEST(ProjectComplex, CircleMinusLine) {
  Ring R({"x", "y"});
  auto F = R({"x^2+y^2-1"});
  auto H = R({"x+y-1"});
  auto S = project_complex(R.order, F, H, 1);
  for (Rational x : {Rational(-2), Rational(-1), Rational(0), Rational(1, 2), Rational(1), Rational(2)}) {
    EXPECT_EQ(membership(pt({x}), S), x != 1) << x;
    EXPECT_EQ(membership(pt({x}), S), complex_oracle(R, F, H, {x})) << x;
  }
  EXPECT_TRUE(membership(pt({0}), S));
  EXPECT_FALSE(membership(pt({1}), S));
}

TEST(ProjectComplex, SmallCases) {
  Ring R({"u", "x"});
  auto line = project_complex(R.order, R({"x-u"}), {}, 1);
  auto hyper = project_complex(R.order, R({"u*x-1"}), {}, 1);
  auto none = project_complex(R.order, R({"1"}), {}, 1);
  for (int u = -3; u <= 3; ++u) {
    EXPECT_TRUE(membership(pt({u}), line));
    EXPECT_EQ(membership(pt({u}), hyper), u != 0);
    EXPECT_FALSE(membership(pt({u}), none));
  }
  EXPECT_TRUE(none.blocks.empty());
}

TEST(ProjectComplex, ParametersOnly) {
  Ring R({"a", "b"});
  auto S = project_complex(R.order, R({"a^2-b"}), R({"a"}), 2);
  EXPECT_TRUE(membership(pt({2, 4}), S));
  EXPECT_FALSE(membership(pt({2, 3}), S));
  EXPECT_FALSE(membership(pt({0, 0}), S));
}

// At least 50 random parameter points per system, exact agreement with the
// instantiation oracle.
TEST(ProjectComplex, AgreesWithOracleAtSamples) {
  Ring R({"a", "b", "x", "y"});
  std::vector<std::pair<std::vector<Polynomial>, std::vector<Polynomial>>> systems{
      {R({"a*x^2+b*x+1"}), {}},
      {R({"a*x-b", "x*y-1"}), {}},
      {R({"x^2+y^2-a", "x-y-b"}), R({"x"})},
      {R({"a*x+b*y", "b*x-a*y-1"}), {}},
      {R({"x^2-a", "y^2-b", "x*y-1"}), {}},
      {R({"(x-a)*(x-b)"}), R({"x-1"})},
  };
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  for (const auto& [F, H] : systems) {
    auto S = project_complex(R.order, F, H, 2);
    for (int k = 0; k < 60; ++k) {
      std::vector<Rational> p{small(rng), small(rng)};
      EXPECT_EQ(membership(p, S), complex_oracle(R, F, H, p)) << S.to_string() << " at " << p[0] << "," << p[1];
    }
  }
}

TEST(ProjectComplex, Monotonicity) {
  Ring R({"a", "b", "x", "y"});
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> small(-2, 2);
  auto F = R({"x^2+a*y-b", "x*y-a"});
  auto S = project_complex(R.order, F, {}, 2);
  auto F2 = F;
  F2.push_back(R("x-y"));
  auto S2 = project_complex(R.order, F2, {}, 2);
  for (int k = 0; k < 60; ++k) {
    std::vector<Rational> p{small(rng), small(rng)};
    if (membership(p, S2)) EXPECT_TRUE(membership(p, S));
  }
}

TEST(ProjectReal, SquareRoot) {
  Ring R({"u", "x"});
  SAS S{R.order, R({"x^2-u"}), {}, {}, {}};
  auto region = project_real(S, 1);
  EXPECT_TRUE(region.cell_decomposition);
  EXPECT_EQ(membership(pt({-1}), region), CellStatus::Out);
  EXPECT_EQ(membership(pt({0}), region), CellStatus::In);
  EXPECT_EQ(membership(pt({1}), region), CellStatus::In);
  EXPECT_EQ(membership(pt({Rational(7, 3)}), region), CellStatus::In);
  EXPECT_EQ(membership(pt({Rational(-1, 9)}), region), CellStatus::Out);
}

TEST(ProjectReal, NoUnknowns) {
  Ring R({"u"});
  SAS S{R.order, {}, {}, R({"u-1"}), {}};
  auto region = project_real(S, 1);
  EXPECT_EQ(membership(pt({2}), region), CellStatus::In);
  EXPECT_EQ(membership(pt({1}), region), CellStatus::Out);
  EXPECT_EQ(membership(pt({0}), region), CellStatus::Out);
}

TEST(ProjectReal, QuadraticDiscriminant) {
  Ring R({"a", "b", "c", "x"});
  SAS S{R.order, R({"a*x^2+b*x+c"}), {}, {}, R({"a"})};
  RealProjectionOptions opt;
  opt.random_samples = 0;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) opt.samples.push_back({a, b, c});
  auto region = project_real(S, 3, opt);
  EXPECT_FALSE(region.cell_decomposition);
  int unknown = 0;
  for (const auto& p : opt.samples) {
    auto m = membership(p, region);
    if (m == CellStatus::Unknown) ++unknown;
    bool expected = p[1] * p[1] - 4 * p[0] * p[2] >= 0 && p[0] != 0;
    if (m != CellStatus::Unknown) EXPECT_EQ(m == CellStatus::In, expected) << p[0] << " " << p[1] << " " << p[2];
  }
  EXPECT_EQ(unknown, 0);
}

TEST(ProjectReal, TwoParameters) {
  Ring R({"a", "b", "x"});
  // x^2 + a*x + b has a real root iff a^2 >= 4b
  SAS S{R.order, R({"x^2+a*x+b"}), {}, {}, {}};
  auto region = project_real(S, 2);
  EXPECT_TRUE(region.cell_decomposition);
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      auto m = membership(pt({a, b}), region);
      if (m == CellStatus::Unknown) continue;
      EXPECT_EQ(m == CellStatus::In, a * a >= 4 * b) << a << " " << b;
    }
  EXPECT_EQ(membership(pt({0, -1}), region), CellStatus::In);
  EXPECT_EQ(membership(pt({0, 1}), region), CellStatus::Out);
}

// No cell is labeled In (or Out) against the discriminant oracle of random
// quadratics x^2 + b*x + c*u + d.
TEST(ProjectReal, SoundAtSamples) {
  Ring R({"u", "x"});
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int it = 0; it < 50; ++it) {
    int b = coef(rng), c = coef(rng), d = coef(rng);
    if (c == 0) c = 1;
    Polynomial f = R("x^2") + R("x").scaled(b) + R("u").scaled(c) + Polynomial(R.order, Rational(d));
    SAS S{R.order, {f}, {}, {}, {}};
    auto region = project_real(S, 1);
    for (const auto& cell : region.cells) {
      if (cell.sample.empty() || cell.status == CellStatus::Unknown) continue;
      Rational disc = Rational(b * b) - 4 * (c * cell.sample[0] + d);
      EXPECT_EQ(cell.status == CellStatus::In, disc >= 0) << f << " at " << cell.sample[0];
    }
  }
}
