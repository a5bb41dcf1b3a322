#include <gtest/gtest.h>

#include <random>

#include "lieiso/polyalg.hpp"
#include "lieiso/polynomial.hpp"
#include "oracles.hpp"

using namespace lieiso;

namespace {

struct Ring {
  VarOrderPtr order;
  explicit Ring(std::vector<std::string> names) : order(make_order(std::move(names))) {}
  Polynomial operator()(const std::string& s) const { return parse_polynomial(s, order); }
  Var var(const std::string& s) const { return order->at(s); }
};

}  // namespace

TEST(Polynomial, Arithmetic) {
  Ring R({"x", "y", "z"});
  EXPECT_EQ(R("x+1") + R("-x+1"), R("2"));
  EXPECT_EQ(R("(x+y)*(x-y)"), R("x^2-y^2"));
  EXPECT_TRUE((R("0") * R("x^3*y+z")).is_zero());
  EXPECT_EQ(R("(x+y)^3"), R("x^3+3*x^2*y+3*x*y^2+y^3"));
  EXPECT_EQ(R("x/2 + 1/3"), R("3*x + 2") * Polynomial(R.order, Rational(1, 6)));
}

TEST(Polynomial, PrintParseRoundTrip) {
  Ring R({"x", "y", "z"});
  Polynomial p = R("2*x^2*y - 3/2*z + 1");
  EXPECT_EQ(p.to_string(), "-3/2*z + 2*x^2*y + 1");
  EXPECT_EQ(R(p.to_string()), p);
  EXPECT_EQ(R("x*z-1").to_string(), "x*z - 1");
  EXPECT_EQ(R("-x").to_string(), "-x");
  EXPECT_EQ(R("0").to_string(), "0");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Polynomial q = oracle::random_poly(rng, R.order, 5, 3);
    EXPECT_EQ(R(q.to_string()), q);
  }
}

TEST(Polynomial, ParseErrors) {
  Ring R({"x", "y"});
  EXPECT_THROW(R("x + w"), ParseError);
  EXPECT_THROW(R("x +"), ParseError);
  EXPECT_THROW(R("x / y"), ParseError);
  EXPECT_THROW(R("x ^ y"), ParseError);
  EXPECT_THROW(R("(x"), ParseError);
  try {
    R("x + w");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(Polynomial, OrderMismatch) {
  Ring A({"x", "y"});
  Ring B({"x", "z"});
  EXPECT_THROW(A("x") + B("x"), OrderMismatch);
}

TEST(Polynomial, RankedView) {
  Ring R({"x", "y", "z"});
  auto v = ranked_view(R("x*z-1"));
  EXPECT_EQ(v.mvar, R.var("z"));
  EXPECT_EQ(v.mdeg, 1u);
  EXPECT_EQ(v.init, R("x"));
  EXPECT_EQ(v.tail, R("-1"));
  auto w = ranked_view(R("2*y^2-3"));
  EXPECT_EQ(w.mvar, R.var("y"));
  EXPECT_EQ(w.mdeg, 2u);
  EXPECT_EQ(w.init, R("2"));
  EXPECT_EQ(w.tail, R("-3"));
  auto u = ranked_view(R("x"));
  EXPECT_EQ(u.mvar, R.var("x"));
  EXPECT_EQ(u.init, R("1"));
  EXPECT_TRUE(u.tail.is_zero());
  EXPECT_THROW(ranked_view(R("5")), std::invalid_argument);
}

TEST(Polynomial, PseudoRemainder) {
  Ring R({"x", "y"});
  auto a = pseudo_remainder(R("x^2"), R("x-1"), R.var("x"));
  EXPECT_EQ(a.r, R("1"));
  EXPECT_EQ(a.q, R("x+1"));
  EXPECT_EQ(a.e, 0u);
  auto b = pseudo_remainder(R("y"), R("x*y-1"), R.var("y"));
  EXPECT_EQ(b.r, R("1"));
  EXPECT_EQ(b.q, R("1"));
  EXPECT_EQ(b.e, 1u);
  auto c = pseudo_remainder(R("x+y"), R("y^2-x"), R.var("y"));
  EXPECT_EQ(c.r, R("x+y"));
  EXPECT_TRUE(c.q.is_zero());
  EXPECT_EQ(c.e, 0u);
}

TEST(Polynomial, Resultant) {
  Ring R({"b", "c", "x"});
  Var x = R.var("x");
  EXPECT_EQ(resultant(R("x^2-2"), R("x-1"), x), R("-1"));
  EXPECT_EQ(resultant(R("x^2+b*x+c"), R("2*x+b"), x), R("4*c-b^2"));
  EXPECT_EQ(resultant(R("x"), R("x^2-2"), x), R("-2"));
  EXPECT_TRUE(resultant(R("x^3+b*x+1"), R("x^3+b*x+1"), x).is_zero());
}

TEST(Polynomial, ResultantMatchesSylvester) {
  Ring R({"a", "b", "x"});
  Var x = R.var("x");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    Polynomial p = oracle::random_poly(rng, R.order, 4, 3, 3);
    Polynomial q = oracle::random_poly(rng, R.order, 4, 3, 3);
    if (p.degree(x) == 0 || q.degree(x) == 0) continue;
    EXPECT_EQ(resultant(p, q, x), oracle::sylvester_resultant(p, q, x)) << p << " | " << q;
  }
}

TEST(Polynomial, SubresultantsMatchDeterminants) {
  Ring R({"a", "x"});
  Var x = R.var("x");
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    Polynomial p = oracle::random_poly(rng, R.order, 5, 4, 3);
    Polynomial q = oracle::random_poly(rng, R.order, 4, 3, 3);
    if (q.degree(x) == 0 || p.degree(x) <= q.degree(x)) continue;
    auto S = subresultant_chain(p, q, x);
    for (unsigned j = 0; j < q.degree(x); ++j) {
      EXPECT_EQ(S[j], oracle::subresultant(p, q, x, j)) << "j=" << j << " p=" << p << " q=" << q;
    }
    ++checked;
  }
  EXPECT_GT(checked, 10);
  // Planted defective sequence: gcd of degree 2.
  Polynomial g = R("x^2 + a*x + 1");
  Polynomial p = g * R("x^3 - a");
  Polynomial q = g * R("2*x + a^2");
  auto S = subresultant_chain(p, q, x);
  for (unsigned j = 0; j < 3; ++j) EXPECT_EQ(S[j], oracle::subresultant(p, q, x, j));
  EXPECT_TRUE(S[0].is_zero());
  EXPECT_TRUE(S[1].is_zero());
  EXPECT_FALSE(S[2].is_zero());
}

TEST(Polynomial, ResChain) {
  Ring R({"x", "y", "z"});
  std::vector<Polynomial> empty;
  EXPECT_EQ(res_chain(R("x*y+z"), empty), R("x*y+z"));
  std::vector<Polynomial> T{R("x^2-2")};
  EXPECT_EQ(res_chain(R("x"), T), R("-2"));
  EXPECT_EQ(res_chain(R("7"), T), R("7"));
}

TEST(Polynomial, Derivative) {
  Ring R({"x", "y", "z"});
  EXPECT_EQ(derivative(R("x^2+3")), R("2*x"));
  EXPECT_EQ(derivative(R("x*z-1")), R("x"));
  EXPECT_EQ(derivative(R("y^2-2")), R("2*y"));
}

TEST(Polynomial, Gcd) {
  Ring R({"x", "y", "z"});
  EXPECT_EQ(gcd(R("x^2-1"), R("x^2+2*x+1")), R("x+1"));
  EXPECT_EQ(gcd(R("(x+y)*(z-1)*(y^2+1)"), R("(x+y)*(z+1)*(y^2+1)*x")), R("(x+y)*(y^2+1)"));
  EXPECT_EQ(gcd(R("6*x*y"), R("4*x^2")), R("x"));
  EXPECT_EQ(gcd(R("x*z+y"), R("x*z-y")), R("1"));
}

TEST(Polynomial, SquarefreePrimitivePart) {
  Ring R({"x", "y"});
  Var x = R.var("x");
  EXPECT_EQ(squarefree_primitive_part(R("(x-1)^2*(x+2)"), x), R("(x-1)*(x+2)"));
  EXPECT_EQ(squarefree_primitive_part(R("y*(x^2+1)"), x), R("x^2+1"));
  EXPECT_EQ(squarefree_primitive_part(R("x^2+x*y+1"), x), R("x^2+x*y+1"));
}

TEST(Polynomial, Evaluate) {
  Ring R({"x", "y"});
  EXPECT_EQ(R("x^2+y").evaluate({{R.var("x"), 2}}), R("y+4"));
  EXPECT_TRUE(R("x^2*y+3*x").evaluate({{R.var("x"), Rational(1, 2)}, {R.var("y"), 4}}).is_constant());
  EXPECT_EQ(R("x^2*y+3*x").evaluate({{R.var("x"), Rational(1, 2)}, {R.var("y"), 4}}), R("5/2"));
}

TEST(Polynomial, ExactDivision) {
  Ring R({"x", "y"});
  EXPECT_EQ(exact_divide(R("x^2*y - y"), R("x-1")), R("x*y+y"));
  EXPECT_FALSE(try_divide(R("x^2+1"), R("x-1")).has_value());
}

// Randomized properties, 200 cases each.

TEST(PolynomialProperty, RingAxioms) {
  Ring R({"x", "y", "z"});
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    auto a = oracle::random_poly(rng, R.order, 4, 3);
    auto b = oracle::random_poly(rng, R.order, 4, 3);
    auto c = oracle::random_poly(rng, R.order, 3, 2);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(parse_polynomial(a.to_string(), R.order), a);
  }
}

TEST(PolynomialProperty, PseudoDivisionIdentity) {
  Ring R({"x", "y", "z"});
  std::mt19937_64 rng(22);
  int cases = 0;
  while (cases < 200) {
    auto p = oracle::random_poly(rng, R.order, 5, 4);
    auto t = oracle::random_poly(rng, R.order, 4, 3);
    if (t.is_constant()) continue;
    ++cases;
    Var v = t.mvar();
    auto d = pseudo_remainder(p, t, v);
    Polynomial lhs = p;
    for (unsigned k = 0; k < d.e; ++k) lhs *= init_of(t);
    EXPECT_TRUE((lhs - d.q * t - d.r).is_zero()) << p << " | " << t;
    EXPECT_TRUE(d.r.is_zero() || d.r.degree(v) < t.degree(v));
    EXPECT_LE(d.e, p.degree(v) >= t.degree(v) ? p.degree(v) - t.degree(v) + 1 : 0u);
  }
}

// Planted common factor => resultant zero; otherwise zero exactly when the
// Sylvester determinant is zero and the gcd has positive degree.
TEST(PolynomialProperty, ResultantVanishesIffCommonFactor) {
  Ring R({"a", "b", "x"});
  Var x = R.var("x");
  std::mt19937_64 rng(23);
  int cases = 0, planted = 0;
  while (cases < 200) {
    bool plant = cases % 2 == 0;
    auto f = oracle::random_poly(rng, R.order, 3, 2, 3);
    auto g = oracle::random_poly(rng, R.order, 3, 2, 3);
    auto h = oracle::random_poly(rng, R.order, 2, 1, 3);
    if (plant && h.degree(x) == 0) continue;
    Polynomial p = plant ? f * h : f, q = plant ? g * h : g;
    if (p.degree(x) == 0 || q.degree(x) == 0) continue;
    ++cases;
    Polynomial r = resultant(p, q, x);
    bool common = gcd(p, q).degree(x) > 0;
    EXPECT_EQ(r.is_zero(), common) << p << " | " << q;
    EXPECT_EQ(r.is_zero(), oracle::sylvester_resultant(p, q, x).is_zero());
    if (plant) {
      EXPECT_TRUE(r.is_zero());
      ++planted;
    }
  }
  EXPECT_EQ(planted, 100);
}

TEST(PolynomialProperty, SquarefreePartIsCoprimeToDerivative) {
  Ring R({"x", "y"});
  Var x = R.var("x");
  std::mt19937_64 rng(24);
  int cases = 0;
  while (cases < 200) {
    auto a = oracle::random_poly(rng, R.order, 3, 2, 3);
    auto b = oracle::random_poly(rng, R.order, 2, 1, 3);
    Polynomial p = a * b * b;
    if (p.degree(x) == 0) continue;
    ++cases;
    Polynomial s = squarefree_primitive_part(p, x);
    EXPECT_EQ(gcd(s, s.derivative(x)).degree(x), 0u) << p;
    EXPECT_TRUE(try_divide(p, s).has_value());
  }
}

TEST(PolynomialProperty, EvaluateIsHomomorphism) {
  Ring R({"x", "y", "z"});
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> n(-7, 7), d(1, 5);
  for (int i = 0; i < 200; ++i) {
    auto p = oracle::random_poly(rng, R.order, 4, 3);
    auto q = oracle::random_poly(rng, R.order, 4, 3);
    std::map<Var, Rational> at{{0, Rational(n(rng), d(rng))}, {1, Rational(n(rng), d(rng))}};
    for (auto& [v, c] : at) c.canonicalize();
    EXPECT_EQ((p * q).evaluate(at), p.evaluate(at) * q.evaluate(at));
    EXPECT_EQ((p + q).evaluate(at), p.evaluate(at) + q.evaluate(at));
  }
}

TEST(PolynomialProperty, ResChainNonzeroMatchesIteratedResultant) {
  Ring R({"a", "b", "x", "y"});
  Var x = R.var("x"), y = R.var("y");
  std::mt19937_64 rng(26);
  int cases = 0, zero = 0;
  while (cases < 200) {
    auto t1 = oracle::random_poly(rng, R.order, 3, 2, 3) + Polynomial::variable(R.order, x, 2);
    auto t2 = oracle::random_poly(rng, R.order, 3, 2, 3) + Polynomial::variable(R.order, y, 2);
    if (t1.mvar() != x || t2.mvar() != y || t1.involves(y)) continue;
    std::vector<Polynomial> T{t1, t2};
    if (res_chain(init_of(t2), std::vector<Polynomial>{t1}).is_zero()) continue;
    auto p = oracle::random_poly(rng, R.order, 3, 2, 3);
    if (cases % 3 == 0) p = p * t1;
    if (cases % 3 == 1) p = p * t2 + t1;
    ++cases;
    bool generic = !res_chain(p, T).is_zero();
    EXPECT_EQ(res_chain_nonzero(p, T), generic) << p << " | " << t1 << " | " << t2;
    zero += !generic;
  }
  EXPECT_GT(zero, 50);
}

TEST(PolynomialProperty, GcdOfPlantedFactor) {
  Ring R({"a", "b", "x"});
  std::mt19937_64 rng(27);
  for (int i = 0; i < 200; ++i) {
    auto f = oracle::random_poly(rng, R.order, 3, 2, 3);
    auto g = oracle::random_poly(rng, R.order, 3, 2, 3);
    auto h = oracle::random_poly(rng, R.order, 2, 1, 3);
    if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
    Polynomial d = gcd(f * h, g * h);
    EXPECT_TRUE(try_divide(d, normalize(h)).has_value() || h.is_constant()) << f << " | " << g << " | " << h;
    EXPECT_EQ(normalize(gcd(f, g) * normalize(h)), d);
  }
}
