#include <gtest/gtest.h>

#include <random>

#include "lieiso/polyalg.hpp"
#include "lieiso/realsolve.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lieiso;

namespace {

oracle::Dense to_oracle(const DenseInt& c) {
  oracle::Dense d;
  for (const auto& a : c) d.emplace_back(a);
  return d;
}

// Each interval holds exactly one root (Sturm count) and intervals are disjoint.
void expect_isolating(const DenseInt& c, const std::vector<RootInterval>& roots) {
  auto d = to_oracle(c);
  Rational big(Integer(1) << 200);
  EXPECT_EQ(static_cast<std::size_t>(oracle::sturm_count(d, -big, big)), roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& iv = roots[i];
    if (iv.exact()) {
      EXPECT_EQ(oracle::horner(d, iv.lo), 0);
    } else {
      EXPECT_NE(oracle::horner(d, iv.lo), 0);
      EXPECT_NE(oracle::horner(d, iv.hi), 0);
      EXPECT_EQ(oracle::sturm_count(d, iv.lo, iv.hi), 1);
    }
    if (i > 0) EXPECT_LE(roots[i - 1].hi, iv.lo);
  }
}

}  // namespace

TEST(Univariate, IsolateBasics) {
  Ring R({"x"});
  auto r = isolate_real_roots(to_dense(R("x^2-2"), 0));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(r[0].lo >= -8 && r[0].hi <= 0);
  EXPECT_TRUE(r[1].lo >= 0 && r[1].hi <= 8);
  expect_isolating(to_dense(R("x^2-2"), 0), r);
  EXPECT_TRUE(isolate_real_roots(to_dense(R("x^2+3"), 0)).empty());
  auto z = isolate_real_roots(to_dense(R("x"), 0));
  ASSERT_EQ(z.size(), 1u);
  EXPECT_TRUE(z[0].lo <= 0 && z[0].hi >= 0);
}

TEST(Univariate, RootOnBisectionPoint) {
  Ring R({"x"});
  auto c = to_dense(R("(x-1)*(2*x+3)*(x^2-2)*x*(4*x-1)"), 0);
  auto r = isolate_real_roots(c);
  EXPECT_EQ(r.size(), 6u);
  expect_isolating(c, r);
}

TEST(Univariate, RandomAgainstSturm) {
  Ring R({"x"});
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    Polynomial p = oracle::random_poly(rng, R.order, 6, 7, 20);
    if (p.is_constant()) continue;
    auto c = to_dense(p, 0);
    auto roots = isolate_real_roots(c);
    expect_isolating(c, roots);
  }
}

TEST(Univariate, RationalRoots) {
  Ring R({"x"});
  auto roots = rational_roots(R("(3*x-7)*(x+1)^2*(x^2-2)*(100003*x-99991)"), 0);
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[0], -1);
  EXPECT_EQ(roots[1], Rational(99991, 100003));
  EXPECT_EQ(roots[2], Rational(7, 3));
  EXPECT_TRUE(rational_roots(R("x^2+1"), 0).empty());
}

TEST(Univariate, SimplestBetween) {
  EXPECT_EQ(simplest_between(Rational(1, 3), Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(simplest_between(Rational(3, 10), Rational(4, 10)), Rational(1, 3));
  EXPECT_EQ(simplest_between(Rational(-5, 2), Rational(-9, 4)), Rational(-5, 2));
  EXPECT_EQ(simplest_between(Rational(-1), Rational(1)), 0);
  EXPECT_EQ(simplest_between(Rational(7, 5), Rational(7, 5)), Rational(7, 5));
}

TEST(Interval, Arithmetic) {
  Interval a(Rational(-1), Rational(2));
  auto sq = pow(a, 2);
  EXPECT_EQ(sq.lo, 0);
  EXPECT_EQ(sq.hi, 4);
  auto cube = pow(a, 3);
  EXPECT_EQ(cube.lo, -1);
  EXPECT_EQ(cube.hi, 8);
  auto prod = a * Interval(Rational(-3), Rational(-2));
  EXPECT_EQ(prod.lo, -6);
  EXPECT_EQ(prod.hi, 3);
  Ring R({"x", "y"});
  std::vector<Interval> box{Interval(Rational(1), Rational(2)), Interval(Rational(3))};
  auto v = eval(R("x*y-x^2"), box);
  EXPECT_TRUE(v.contains(2));  // exact values lie in [−1, 5]
  EXPECT_EQ(v.lo, -1);
  EXPECT_EQ(v.hi, 5);
}

TEST(RealPoints, SphereEllipseChain) {
  Ring R({"x", "y", "z"});
  auto pts = real_points_of_chain(R.chain({"x^2-2", "2*y^2-3", "x*z-1"}));
  EXPECT_TRUE(pts.complete);
  ASSERT_EQ(pts.boxes.size(), 4u);
  for (const auto& b : pts.boxes) {
    EXPECT_TRUE(certify_box(R.chain({"x^2-2", "2*y^2-3", "x*z-1"}), b));
    // z = 1/x: the enclosures must be compatible
    Interval prod = b.coords[0] * b.coords[2];
    EXPECT_TRUE(prod.contains(1));
  }
}

TEST(RealPoints, RationalAndIrrational) {
  Ring R({"x", "y", "z"});
  auto pts = real_points_of_chain(R.chain({"x+1", "y^2-2", "z+1"}));
  EXPECT_TRUE(pts.complete);
  EXPECT_EQ(pts.boxes.size(), 2u);
  EXPECT_TRUE(real_points_of_chain(R.chain({"x^2+3", "y^2-2", "z-1"})).boxes.empty());
}

TEST(RealPoints, NormPath) {
  // y's fiber polynomial has irrational coefficients; the root y = 1 is rational.
  Ring R({"x", "y"});
  auto T = R.chain({"x^2-2", "y^2-x*y+x-1"});
  auto pts = real_points_of_chain(T);
  EXPECT_TRUE(pts.complete);
  // y^2 - x y + x - 1 = (y - 1)(y - x + 1): y = 1 or y = x - 1, for each of x = ±√2
  EXPECT_EQ(pts.boxes.size(), 4u);
  for (const auto& b : pts.boxes) EXPECT_TRUE(certify_box(T, b));
}

TEST(RealPoints, SkipsVanishingInitials) {
  Ring R({"x", "y"});
  auto pts = real_points_of_chain(R.chain({"x^2-x", "x*y-1"}));
  EXPECT_TRUE(pts.complete);
  ASSERT_EQ(pts.boxes.size(), 1u);
  EXPECT_EQ(pts.boxes[0].coords[0].lo, 1);
}

TEST(Sas, NoRealRootExample) {
  Ring R({"x", "y", "z"});
  SAS S{R.order, R({"x^2+y^2+z^2+2", "3*x^2+4*y^2+4*z^2+5"}), {}, {}, {}};
  auto v = sas_has_real_solution(S);
  EXPECT_EQ(v.status, RealStatus::Empty);
}

TEST(Sas, PositiveSquareRoot) {
  Ring R({"x"});
  SAS S{R.order, R({"x^2-2"}), {}, R({"x"}), {}};
  auto v = sas_has_real_solution(S);
  ASSERT_EQ(v.status, RealStatus::NonEmpty);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_GE(v.witness->coords[0].lo, 1);
  EXPECT_LE(v.witness->coords[0].hi, 2);
  SAS neg{R.order, R({"x^2-2"}), {}, R({"-x-2"}), {}};
  EXPECT_EQ(sas_has_real_solution(neg).status, RealStatus::Empty);
}

TEST(Sas, WholeSpace) {
  Ring R({"x", "y"});
  SAS S{R.order, {}, {}, {}, {}};
  EXPECT_EQ(sas_has_real_solution(S).status, RealStatus::NonEmpty);
}

TEST(Sas, InequationsAndNonStrict) {
  Ring R({"x", "y"});
  // x^2 = y, y >= 0, x != 0 : plenty of points
  SAS S{R.order, R({"x^2-y"}), R({"y"}), {}, R({"x"})};
  EXPECT_EQ(sas_has_real_solution(S).status, RealStatus::NonEmpty);
  // x^2 + y^2 = 0 with x != 0 has no real point; the chain is positive-dimensional
  // over C so this may only be Unknown, never NonEmpty.
  SAS T{R.order, R({"x^2+y^2"}), {}, {}, R({"x"})};
  EXPECT_NE(sas_has_real_solution(T).status, RealStatus::NonEmpty);
  // y = x^2, y < 0 (as -y > 0): impossible, sampling never finds it
  SAS U{R.order, R({"x^2-y"}), {}, R({"-y-1"}), {}};
  EXPECT_NE(sas_has_real_solution(U).status, RealStatus::NonEmpty);
}

TEST(Border, SylvesterOracle) {
  Ring R({"x", "y"});
  auto t = R("x*y^2+x+1");
  auto T = R.chain({"x*y^2+x+1"});
  Polynomial expected = normalize(squarefree_part(oracle::sylvester_resultant(t, t.derivative(1), 1)));
  EXPECT_EQ(border_polynomial(T, {}), expected);
  // res(2xy, x y^2 + x + 1) is x^3 (x + 1) up to a constant
  EXPECT_EQ(border_polynomial(T, {}), R("x^2+x"));
}

TEST(Border, ZeroDimensionalIsOne) {
  Ring R({"x", "y"});
  EXPECT_EQ(border_polynomial(R.chain({"x^2-2", "y^2-3"}), {}), R("1"));
}

TEST(Border, RejectsNonRegular) {
  Ring R({"x", "y"});
  EXPECT_THROW(border_polynomial(R.chain({"x^2-2", "y-x"}), R({"y^2-2"})), std::invalid_argument);
}

// Points of random zero-dimensional chains built from shifted squares
// survive extra refinement, stay certified and pairwise disjoint.
TEST(RealPoints, BoxStabilityProperty) {
  Ring R({"x", "y", "z"});
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-4, 4), k(1, 6);
  int cases = 0;
  while (cases < 200) {
    std::string a = std::to_string(k(rng)), b = std::to_string(c(rng)), d = std::to_string(c(rng));
    std::string e = std::to_string(k(rng));
    auto T = R.chain({("x^2-" + a).c_str(), ("y^2+(" + b + ")*x*y-" + e).c_str(),
                      ("z^2-(" + d + ")*y-x-" + a + "-5").c_str()});
    if (!is_regular_chain(T.base()) || !is_squarefree_chain(T.base())) continue;
    ++cases;
    auto pts = real_points_of_chain(T);
    ASSERT_TRUE(pts.complete) << T.to_string() << " " << pts.reason;
    std::vector<IsolatingBox> refined;
    for (auto box : pts.boxes) {
      box.refine(10);
      EXPECT_TRUE(certify_box(T, box));
      refined.push_back(box);
    }
    for (std::size_t i = 0; i < refined.size(); ++i)
      for (std::size_t j = i + 1; j < refined.size(); ++j) {
        bool separated = false;
        for (Var v = 0; v < 3; ++v) {
          const auto &p = refined[i].coords[v], &q = refined[j].coords[v];
          if (p.hi < q.lo || q.hi < p.lo) separated = true;
        }
        EXPECT_TRUE(separated);
      }
  }
}

// Never Empty when a rational grid point satisfies the system; never a
// witness that fails re-certification.
TEST(Sas, SoundnessAgainstGrid) {
  Ring R({"x", "y"});
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    Polynomial f = oracle::random_poly(rng, R.order, 3, 2, 3);
    Polynomial p = oracle::random_poly(rng, R.order, 2, 1, 3);
    if (f.is_constant() || p.is_constant()) continue;
    SAS S{R.order, {f}, {}, {p}, {}};
    auto v = sas_has_real_solution(S);
    bool grid = false;
    for (int a = -4; a <= 4 && !grid; ++a)
      for (int b = -4; b <= 4 && !grid; ++b) {
        std::map<Var, Rational> pt{{0, Rational(a, 2)}, {1, Rational(b, 2)}};
        if (f.evaluate(pt).is_zero() && p.evaluate(pt).constant_value() > 0) grid = true;
      }
    if (grid) EXPECT_NE(v.status, RealStatus::Empty) << f << " ; " << p;
    if (v.status == RealStatus::NonEmpty) {
      auto box = *v.witness;
      auto sf = certified_sign(f, box, 64);
      auto sp = certified_sign(p, box, 64);
      ASSERT_TRUE(sp.has_value());
      EXPECT_GT(*sp, 0);
      if (sf) EXPECT_EQ(*sf, 0);
    }
  }
}
