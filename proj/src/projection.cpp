#include "lieiso/projection.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "lieiso/polyalg.hpp"

namespace lieiso {

namespace {

std::uint64_t low_mask(std::size_t r) { return r >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1; }

void add_unique(std::vector<Polynomial>& list, const Polynomial& p) {
  if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(p);
}

void sort_polys(std::vector<Polynomial>& v) {
  std::sort(v.begin(), v.end(), PolynomialLess());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string block_key(const ConstructibleBlock& b) {
  std::string k;
  for (const auto& e : b.equations) k += e.to_string() + ";";
  k += "|";
  for (const auto& u : b.inequations) k += u.to_string() + ";";
  return k;
}

// Coefficients of p viewed as a polynomial in the variables of `vars`.
std::vector<Polynomial> coefficients_in(const Polynomial& p, std::uint64_t vars) {
  std::vector<Polynomial> level{p};
  for (Var v = 0; v < p.nvars(); ++v) {
    if (!((vars >> v) & 1U)) continue;
    std::vector<Polynomial> next;
    for (const auto& q : level)
      for (auto& c : q.coefficients(v))
        if (!c.is_zero()) next.push_back(std::move(c));
    level = std::move(next);
  }
  return level;
}

// Sufficient test for A inside B: the equations of B lie in sat(A) and every
// inequation of B reduces modulo A to a product of inequations of A.
bool block_within(const ConstructibleBlock& a, const ConstructibleBlock& b, const VarOrderPtr& order) {
  RegularChain T(TriangularSet(order, a.equations), true);
  for (const auto& e : b.equations)
    if (!sat_membership(e, T)) return false;
  for (const auto& u : b.inequations) {
    Polynomial r = reduce(u, T.polys());
    if (r.is_zero()) return false;
    for (bool progress = true; progress && !r.is_constant();) {
      progress = false;
      for (const auto& h : a.inequations)
        if (auto q = try_divide(r, h)) {
          r = *q;
          progress = true;
        }
    }
    if (!r.is_constant()) return false;
  }
  return true;
}

void drop_covered_blocks(ConstructibleSet& set) {
  std::vector<bool> keep(set.blocks.size(), true);
  for (std::size_t i = 0; i < set.blocks.size(); ++i)
    for (std::size_t j = 0; j < set.blocks.size() && keep[i]; ++j)
      if (j != i && keep[j] && block_within(set.blocks[i], set.blocks[j], set.order)) keep[i] = false;
  std::vector<ConstructibleBlock> kept;
  for (std::size_t i = 0; i < set.blocks.size(); ++i)
    if (keep[i]) kept.push_back(std::move(set.blocks[i]));
  set.blocks = std::move(kept);
}

struct Pending {
  std::vector<Polynomial> F, H;
};

std::string pending_key(const Pending& p) {
  std::string k;
  for (const auto& f : p.F) k += f.to_string() + ";";
  k += "|";
  for (const auto& h : p.H) k += h.to_string() + ";";
  return k;
}

std::map<Var, Rational> bind_params(const std::vector<Rational>& point) {
  std::map<Var, Rational> b;
  for (Var v = 0; v < point.size(); ++v) b[v] = point[v];
  return b;
}

}  // namespace

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::In:
      return "in";
    case CellStatus::Out:
      return "out";
    case CellStatus::Unknown:
      break;
  }
  return "unknown";
}

std::string ConstructibleSet::to_string() const {
  if (blocks.empty()) return "empty";
  std::string out;
  for (const auto& b : blocks) {
    if (!out.empty()) out += " or ";
    std::string part;
    for (const auto& e : b.equations) part += (part.empty() ? "" : " and ") + e.to_string() + " = 0";
    for (const auto& u : b.inequations) part += (part.empty() ? "" : " and ") + u.to_string() + " != 0";
    out += "(" + (part.empty() ? std::string("true") : part) + ")";
  }
  return out;
}

ConstructibleSet project_complex(const VarOrderPtr& order, const std::vector<Polynomial>& F,
                                 const std::vector<Polynomial>& H, std::size_t r, const Budget& budget) {
  if (!order) throw std::invalid_argument("project_complex: missing variable order");
  if (r > order->size()) throw std::invalid_argument("project_complex: more parameters than variables");
  ConstructibleSet out{order, r, {}};
  const std::uint64_t params = low_mask(r);
  DecomposeOptions dopt;
  dopt.order = order;

  std::vector<Pending> work{{F, H}};
  std::set<std::string> visited, emitted;
  while (!work.empty()) {
    Pending job = std::move(work.back());
    work.pop_back();
    if (!visited.insert(pending_key(job)).second) continue;

    for (const auto& rs : decompose(job.F, job.H, budget, dopt)) {
      const RegularChain& T = rs.chain;
      std::uint64_t mains = T.base().main_vars();
      std::uint64_t free_unknowns = low_mask(order->size()) & ~params & ~mains;

      ConstructibleBlock block;
      std::vector<Polynomial> conditions = rs.inequations;
      for (const auto& t : T.polys()) {
        if (t.mvar() < r) {
          block.equations.push_back(t);
          add_unique(block.inequations, normalize(init_of(t)));
        } else {
          add_unique(conditions, init_of(t));
        }
      }

      // Over a parameter point in W(T_param), the fiber meets W(T) minus V(h)
      // iff res(h, T) is not identically zero in the free unknowns there.
      // Requiring one coefficient per h to be nonzero gives the block; the
      // rest is recovered by adding that coefficient as an equation.
      std::vector<Polynomial> splits;
      for (const auto& h : conditions) {
        Polynomial g = res_chain(h, T.polys());
        if (g.is_zero()) throw std::logic_error("project_complex: inequation not regular");
        if (g.is_constant()) continue;
        auto coefs = coefficients_in(g, free_unknowns);
        if (std::any_of(coefs.begin(), coefs.end(), [](const Polynomial& c) { return c.is_constant(); })) continue;
        auto best = std::min_element(coefs.begin(), coefs.end(), [](const Polynomial& a, const Polynomial& b) {
          if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
          return Polynomial::compare(a, b) < 0;
        });
        Polynomial c = normalize(squarefree_part(*best));
        add_unique(block.inequations, c);
        add_unique(splits, c);
      }
      std::erase_if(block.inequations, [](const Polynomial& u) { return u.is_constant(); });
      sort_polys(block.equations);
      sort_polys(block.inequations);

      // prune blocks with no point
      if (!decompose(block.equations, block.inequations, budget, dopt).empty() &&
          emitted.insert(block_key(block)).second)
        out.blocks.push_back(block);

      std::vector<Polynomial> inherited = rs.inequations;
      for (const auto& i : T.base().inits()) add_unique(inherited, i);
      for (const auto& c : splits) {
        Pending next{T.polys(), inherited};
        next.F.push_back(c);
        work.push_back(std::move(next));
      }
    }
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const ConstructibleBlock& a, const ConstructibleBlock& b) { return block_key(a) < block_key(b); });
  drop_covered_blocks(out);
  return out;
}

bool membership(const std::vector<Rational>& point, const ConstructibleBlock& block) {
  auto b = bind_params(point);
  for (const auto& e : block.equations) {
    Polynomial v = e.evaluate(b);
    if (!v.is_constant()) throw std::invalid_argument("membership: block involves non-parameter variables");
    if (!v.is_zero()) return false;
  }
  for (const auto& u : block.inequations) {
    Polynomial v = u.evaluate(b);
    if (!v.is_constant()) throw std::invalid_argument("membership: block involves non-parameter variables");
    if (v.is_zero()) return false;
  }
  return true;
}

bool membership(const std::vector<Rational>& point, const ConstructibleSet& set) {
  if (point.size() != set.params) throw std::invalid_argument("membership: point arity differs from parameter count");
  for (const auto& b : set.blocks)
    if (membership(point, b)) return true;
  return false;
}

bool in_cell(const std::vector<Rational>& point, const RealCell& cell) {
  auto b = bind_params(point);
  auto value = [&](const Polynomial& p) {
    Polynomial v = p.evaluate(b);
    if (!v.is_constant()) throw std::invalid_argument("membership: cell involves non-parameter variables");
    return sgn(v.constant_value());
  };
  for (const auto& e : cell.equations)
    if (value(e) != 0) return false;
  for (const auto& n : cell.nonnegative)
    if (value(n) < 0) return false;
  for (const auto& p : cell.positive)
    if (value(p) <= 0) return false;
  for (const auto& u : cell.inequations)
    if (value(u) == 0) return false;
  return true;
}

CellStatus membership(const std::vector<Rational>& point, const RealRegion& region) {
  if (point.size() != region.params) throw std::invalid_argument("membership: point arity differs from parameter count");
  std::optional<CellStatus> found;
  for (const auto& c : region.cells) {
    if (!in_cell(point, c)) continue;
    if (found && *found != c.status) return CellStatus::Unknown;
    found = c.status;
  }
  return found.value_or(CellStatus::Unknown);
}

SAS instantiate(const SAS& S, const std::vector<Rational>& point) {
  auto b = bind_params(point);
  auto sub = [&](const std::vector<Polynomial>& in) {
    std::vector<Polynomial> out;
    for (const auto& p : in) out.push_back(p.evaluate(b));
    return out;
  };
  return SAS{S.order, sub(S.F), sub(S.N), sub(S.P), sub(S.H)};
}

namespace {

struct Decider {
  const SAS& S;
  std::size_t r;
  const ConstructibleSet& complex;
  const RealProjectionOptions& options;

  void label(RealCell& cell) const {
    if (!membership(cell.sample, complex)) {
      cell.status = CellStatus::Out;
      cell.provenance = "no complex solution at the sample";
      return;
    }
    try {
      RealVerdict v = sas_has_real_solution(instantiate(S, cell.sample), options.real);
      cell.status = v.status == RealStatus::NonEmpty ? CellStatus::In
                    : v.status == RealStatus::Empty  ? CellStatus::Out
                                                     : CellStatus::Unknown;
      cell.provenance = to_string(v.status) + ": " + v.reason;
    } catch (const BudgetExceeded& e) {
      cell.status = CellStatus::Unknown;
      cell.provenance = std::string("budget exceeded: ") + e.what();
    }
  }
};

Polynomial discriminant(const Polynomial& p, Var v) {
  if (p.degree(v) < 2) return Polynomial(p.order(), Rational(1));
  return resultant(p, p.derivative(v), v);
}

// Squarefree, normalized, non-constant parts; constants dropped.
void add_factor(std::vector<Polynomial>& set, const Polynomial& p) {
  if (p.is_zero() || p.is_constant()) return;
  add_unique(set, normalize(squarefree_part(p)));
}

// Polynomials over the parameters whose sign-invariant cells are expected to
// carry a constant verdict: the complex blocks, plus border polynomials of the
// regular systems pushed down to the parameters by leading coefficients and
// discriminants.
std::vector<Polynomial> cell_polynomials(const SAS& S, std::size_t r, const ConstructibleSet& complex,
                                         const Budget& budget, std::size_t cap) {
  const std::uint64_t params = low_mask(r);
  std::vector<Polynomial> out;
  for (const auto& b : complex.blocks) {
    for (const auto& e : b.equations) add_factor(out, e);
    for (const auto& u : b.inequations) add_factor(out, u);
  }
  DecomposeOptions dopt;
  dopt.order = S.order;
  std::vector<Polynomial> signs = S.N;
  signs.insert(signs.end(), S.P.begin(), S.P.end());
  for (const auto& rs : decompose(S.F, S.H, budget, dopt)) {
    std::vector<Polynomial> H = rs.inequations;
    for (const auto& p : signs)
      if (!sat_membership(p, rs.chain) && res_chain_nonzero(p, rs.chain.polys())) H.push_back(p);
    Polynomial bp;
    try {
      bp = border_polynomial(rs.chain, H);
    } catch (const std::invalid_argument&) {
      continue;
    }
    std::vector<Polynomial> todo{bp};
    while (!todo.empty()) {
      Polynomial q = todo.back();
      todo.pop_back();
      if (q.is_constant()) continue;
      if ((q.support() & ~params) == 0) {
        add_factor(out, q);
      } else {
        Var y = q.mvar();
        todo.push_back(q.lcoeff(y));
        todo.push_back(discriminant(q, y));
      }
      if (out.size() > cap) return out;
    }
  }
  return out;
}

// Rational strictly between two root enclosures (or beyond one of them).
Rational sample_between(const RootInterval* left, const RootInterval* right) {
  if (!left && !right) return 0;
  if (!left) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), right->lo.get_num_mpz_t(), right->lo.get_den_mpz_t());
    return Rational(f - 1);
  }
  if (!right) {
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), left->hi.get_num_mpz_t(), left->hi.get_den_mpz_t());
    return Rational(c + 1);
  }
  if (left->hi == right->lo) return left->hi;  // both inexact, touching
  Rational a = left->hi, b = right->lo;
  Rational s = simplest_between(a, b);
  if (s == a || s == b) s = (a + b) / 2;
  return s;
}

struct Stack {
  std::vector<RootInterval> roots;
  DenseInt D;
};

Stack stack_of(const std::vector<Polynomial>& polys, Var v) {
  Stack s;
  Polynomial acc;
  bool any = false;
  for (const auto& p : polys) {
    if (p.is_constant()) continue;
    acc = any ? acc * p : p;
    any = true;
  }
  if (!any) return s;
  s.D = squarefree_dense(to_dense(acc, v));
  s.roots = isolate_real_roots(s.D);
  // rational roots become exact sections with a testable sample
  for (const auto& q : rational_roots(from_dense(s.D, acc.order(), v), v))
    for (auto& iv : s.roots)
      if (iv.lo < q && q < iv.hi) iv = RootInterval{q, q};
  return s;
}

// Does p (univariate in v) vanish at the root of D isolated by iv?
bool vanishes_at(const Polynomial& p, Var v, const DenseInt& D, const RootInterval& iv) {
  if (p.is_zero()) return true;
  if (p.is_constant()) return false;
  if (iv.exact()) return sign_at(to_dense(p, v), iv.lo) == 0;
  Polynomial g = gcd(p, from_dense(D, p.order(), v));
  if (g.is_constant()) return false;
  DenseInt G = to_dense(g, v);
  return sign_at(G, iv.lo) * sign_at(G, iv.hi) < 0;
}

// Complex membership at a point whose last coordinate is an algebraic root.
bool complex_member_algebraic(const ConstructibleSet& complex, const std::vector<Rational>& prefix, Var v,
                              const DenseInt& D, const RootInterval& iv) {
  auto b = bind_params(prefix);
  for (const auto& blk : complex.blocks) {
    bool ok = true;
    for (const auto& e : blk.equations)
      if (!vanishes_at(e.evaluate(b), v, D, iv)) ok = false;
    for (const auto& u : blk.inequations)
      if (vanishes_at(u.evaluate(b), v, D, iv)) ok = false;
    if (ok) return true;
  }
  return false;
}

Polynomial signed_poly(const Polynomial& p, int s) { return s > 0 ? p : -p; }

// Cells of one stack over variable v, with the lower coordinates fixed to
// `prefix` (their conditions are already in `base`). Only the top stack
// (v = r - 1) is labeled; lower stacks just provide bases.
void build_stack(const Decider& d, Var v, const std::vector<Rational>& prefix, const RealCell& base,
                 const std::vector<Polynomial>& polys, std::vector<RealCell>& cells) {
  const bool top = v + 1 == d.r;
  auto b = bind_params(prefix);
  std::vector<Polynomial> fiber, live;
  for (const auto& p : polys) {
    if (!p.involves(v)) continue;
    Polynomial q = p.evaluate(b);
    if (q.is_zero() || q.is_constant()) continue;
    fiber.push_back(q);
    live.push_back(p);
  }
  Stack st = stack_of(fiber, v);
  const VarOrderPtr& order = d.S.order;
  Polynomial var = Polynomial::variable(order, v);

  auto push_unique = [](std::vector<Polynomial>& to, Polynomial p) {
    if (std::find(to.begin(), to.end(), p) == to.end()) to.push_back(std::move(p));
  };
  auto sign_vector = [&](RealCell& cell, const Rational& x) {
    auto at = b;
    at[v] = x;
    for (const auto& p : live) {
      int s = sgn(p.evaluate(at).constant_value());
      if (s == 0) push_unique(cell.equations, p);
      else push_unique(cell.positive, signed_poly(p, s));
    }
  };

  // sectors and sections alternate from left to right
  for (std::size_t i = 0; i <= st.roots.size(); ++i) {
    const RootInterval* left = i > 0 ? &st.roots[i - 1] : nullptr;
    const RootInterval* right = i < st.roots.size() ? &st.roots[i] : nullptr;
    // sector
    RealCell sector = base;
    Rational x = sample_between(left, right);
    sector.sample = prefix;
    sector.sample.push_back(x);
    if (left) sector.positive.push_back(var - Polynomial(order, left->lo));
    if (right) sector.positive.push_back(Polynomial(order, right->hi) - var);
    sign_vector(sector, x);
    if (top) d.label(sector);
    cells.push_back(std::move(sector));
    if (!right) break;
    // section
    RealCell section = base;
    if (right->exact()) {
      section.sample = prefix;
      section.sample.push_back(right->lo);
      section.equations.push_back(var - Polynomial(order, right->lo));
      if (top) d.label(section);
    } else {
      section.positive.push_back(var - Polynomial(order, right->lo));
      section.positive.push_back(Polynomial(order, right->hi) - var);
      for (std::size_t k = 0; k < live.size(); ++k)
        if (vanishes_at(fiber[k], v, st.D, *right)) section.equations.push_back(live[k]);
      if (top && !complex_member_algebraic(d.complex, prefix, v, st.D, *right)) {
        section.status = CellStatus::Out;
        section.provenance = "no complex solution on the section";
      } else {
        section.status = CellStatus::Unknown;
        section.provenance = "irrational section";
      }
    }
    cells.push_back(std::move(section));
  }
}

std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t r) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  std::vector<Rational> p;
  for (std::size_t i = 0; i < r; ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    p.push_back(q);
  }
  return p;
}

}  // namespace

RealRegion project_real(const SAS& S, std::size_t r, const RealProjectionOptions& options) {
  if (!S.order) throw std::invalid_argument("project_real: SAS without variable order");
  RealRegion region{S.order, r, false, {}};
  ConstructibleSet complex = project_complex(S.order, S.F, S.H, r, options.real.budget);
  Decider d{S, r, complex, options};

  if (r == 0) {
    RealCell all;
    d.label(all);
    region.cell_decomposition = true;
    region.cells.push_back(std::move(all));
    return region;
  }

  if (r <= 2) {
    auto polys = cell_polynomials(S, r, complex, options.real.budget, options.max_cell_polys);
    if (polys.size() <= options.max_cell_polys) {
      region.cell_decomposition = true;
      if (r == 1) {
        build_stack(d, 0, {}, RealCell{}, polys, region.cells);
        return region;
      }
      // project the second parameter away
      std::vector<Polynomial> lower;
      for (std::size_t i = 0; i < polys.size(); ++i) {
        const Polynomial& p = polys[i];
        if (!p.involves(1)) {
          add_factor(lower, p);
          continue;
        }
        add_factor(lower, p.lcoeff(1));
        add_factor(lower, discriminant(p, 1));
        for (std::size_t j = i + 1; j < polys.size(); ++j)
          if (polys[j].involves(1)) add_factor(lower, resultant(p, polys[j], 1));
      }
      std::vector<RealCell> base_cells;
      build_stack(d, 0, {}, RealCell{}, lower, base_cells);
      for (auto& c : base_cells) {
        if (c.sample.empty()) {
          // irrational first coordinate: the whole line above it stays as one cell
          if (c.status != CellStatus::Out) c.provenance = "irrational section";
          region.cells.push_back(std::move(c));
          continue;
        }
        RealCell base = c;
        base.sample.clear();
        base.status = CellStatus::Unknown;
        base.provenance.clear();
        build_stack(d, 1, c.sample, base, polys, region.cells);
      }
      return region;
    }
  }

  std::vector<std::vector<Rational>> points = options.samples;
  std::mt19937_64 rng(options.real.seed);
  for (unsigned k = 0; k < options.random_samples; ++k) points.push_back(random_point(rng, r));
  std::set<std::vector<std::string>> seen;
  for (const auto& p : points) {
    if (p.size() != r) throw std::invalid_argument("project_real: sample arity differs from parameter count");
    std::vector<std::string> key;
    for (const auto& x : p) key.push_back(x.get_str());
    if (!seen.insert(key).second) continue;
    RealCell cell;
    cell.sample = p;
    for (Var v = 0; v < r; ++v)
      cell.equations.push_back(Polynomial::variable(S.order, v) - Polynomial(S.order, p[v]));
    d.label(cell);
    region.cells.push_back(std::move(cell));
  }
  return region;
}

}  // namespace lieiso
