#include "lieiso/lie.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "detail/linalg.hpp"
#include "detail/subset_det.hpp"
#include "lieiso/polyalg.hpp"

namespace lieiso {

std::vector<Polynomial> LieAlgebra::bracket(std::size_t i, std::size_t j) const {
  const std::size_t n = dim();
  std::vector<Polynomial> zero(n, Polynomial(order));
  if (i == j) return zero;
  bool flip = i > j;
  auto it = table.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
  if (it == table.end()) return zero;
  if (!flip) return it->second;
  std::vector<Polynomial> out;
  for (const auto& c : it->second) out.push_back(-c);
  return out;
}

void LieAlgebra::set_bracket(std::size_t i, std::size_t j, std::vector<Polynomial> coords) {
  if (i == j) throw std::invalid_argument("set_bracket: [e_i, e_i] is always zero");
  if (i >= dim() || j >= dim() || coords.size() != dim()) throw std::invalid_argument("set_bracket: index out of range");
  if (i > j) {
    std::swap(i, j);
    for (auto& c : coords) c = -c;
  }
  bool zero = std::all_of(coords.begin(), coords.end(), [](const Polynomial& c) { return c.is_zero(); });
  if (zero) table.erase({i, j});
  else table[{i, j}] = std::move(coords);
}

LieAlgebra make_algebra(std::size_t n, std::vector<std::string> params) {
  LieAlgebra L;
  for (std::size_t i = 1; i <= n; ++i) L.basis.push_back("e" + std::to_string(i));
  L.params = params;
  L.order = make_order(std::move(params));
  return L;
}

Validation validate(const LieAlgebra& L) {
  Validation res;
  const std::size_t n = L.dim();
  for (const auto& [key, coords] : L.table) {
    if (key.first >= key.second || key.second >= n || coords.size() != n) {
      res.ok = false;
      res.residuals.push_back("malformed bracket entry");
      return res;
    }
  }
  std::vector<RegularChain> chains;
  bool constrained = !L.F0.empty();
  if (constrained) chains = triangularize(L.F0).chains;
  auto vanishes = [&](const Polynomial& p) {
    if (p.is_zero()) return true;
    if (!constrained) return false;
    return std::all_of(chains.begin(), chains.end(), [&](const RegularChain& T) { return sat_membership(p, T); });
  };
  // [[a,b],c] as coordinates
  auto double_bracket = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::vector<Polynomial> out(n, Polynomial(L.order));
    auto ab = L.bracket(a, b);
    for (std::size_t m = 0; m < n; ++m) {
      if (ab[m].is_zero()) continue;
      auto mc = L.bracket(m, c);
      for (std::size_t s = 0; s < n; ++s) out[s] += ab[m] * mc[s];
    }
    return out;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        auto x = double_bracket(i, j, k), y = double_bracket(j, k, i), z = double_bracket(k, i, j);
        for (std::size_t s = 0; s < n; ++s) {
          Polynomial r = x[s] + y[s] + z[s];
          if (vanishes(r)) continue;
          res.ok = false;
          res.residuals.push_back(L.basis[i] + "," + L.basis[j] + "," + L.basis[k] + ": component " + L.basis[s] +
                                  " = " + r.to_string());
        }
      }
  return res;
}

namespace {

// p over `from` re-expressed over `to`, variable v of `from` becoming map[v].
Polynomial map_vars(const Polynomial& p, const VarOrderPtr& to, const std::vector<Var>& map) {
  Polynomial out(to);
  std::vector<unsigned> ex(to->size());
  for (std::size_t t = 0; t < p.size(); ++t) {
    std::fill(ex.begin(), ex.end(), 0);
    for (Var v = 0; v < map.size(); ++v) ex[map[v]] = p.exponent(t, v);
    out += Polynomial::monomial(to, ex, p.coeff(t));
  }
  return out;
}

std::string entry_name(std::size_t n, std::size_t i, std::size_t s) {
  if (n <= 9) return "z" + std::to_string(i + 1) + std::to_string(s + 1);
  return "z" + std::to_string(i + 1) + "_" + std::to_string(s + 1);
}

}  // namespace

Var IsoSystem::z(std::size_t i, std::size_t s) const { return param_count + (n * n - 1 - (i * n + s)); }

IsoSystem iso_system(const LieAlgebra& L, const LieAlgebra& Lp) {
  if (L.dim() != Lp.dim()) throw std::invalid_argument("iso_system: dimensions differ");
  const std::size_t n = L.dim();
  IsoSystem sys;
  sys.n = n;

  std::set<std::string> unknown_names{"z"};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < n; ++s) unknown_names.insert(entry_name(n, i, s));
  std::set<std::string> left(L.params.begin(), L.params.end());
  bool clash = false;
  for (const auto& p : Lp.params) clash |= left.count(p) > 0;
  for (const auto& p : L.params) clash |= unknown_names.count(p) > 0;
  for (const auto& p : Lp.params) clash |= unknown_names.count(p) > 0;
  for (const auto& p : L.params) sys.left_params.push_back(clash ? p + "_1" : p);
  for (const auto& p : Lp.params) sys.right_params.push_back(clash ? p + "_2" : p);

  std::vector<std::string> names = sys.left_params;
  names.insert(names.end(), sys.right_params.begin(), sys.right_params.end());
  sys.param_count = names.size();
  for (std::size_t k = n * n; k-- > 0;) names.push_back(entry_name(n, k / n, k % n));
  names.push_back("z");
  sys.order = make_order(names);
  sys.z_var = sys.order->size() - 1;

  std::vector<Var> lmap, rmap;
  for (Var v = 0; v < L.params.size(); ++v) lmap.push_back(v);
  for (Var v = 0; v < Lp.params.size(); ++v) rmap.push_back(L.params.size() + v);
  auto lift_l = [&](const Polynomial& p) { return map_vars(p, sys.order, lmap); };
  auto lift_r = [&](const Polynomial& p) { return map_vars(p, sys.order, rmap); };
  auto zv = [&](std::size_t i, std::size_t s) { return Polynomial::variable(sys.order, sys.z(i, s)); };

  std::vector<std::vector<std::vector<Polynomial>>> b(n, std::vector<std::vector<Polynomial>>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (const auto& c : Lp.bracket(k, l)) b[k][l].push_back(lift_r(c));

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Polynomial> a;
      for (const auto& c : L.bracket(i, j)) a.push_back(lift_l(c));
      for (std::size_t s = 0; s < n; ++s) {
        Polynomial f(sys.order);
        for (std::size_t k = 0; k < n; ++k)
          if (!a[k].is_zero()) f += zv(k, s) * a[k];
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l)
            if (!b[k][l][s].is_zero()) f -= zv(i, k) * zv(j, l) * b[k][l][s];
        if (!f.is_zero()) sys.equations.push_back(f);
      }
    }
  sys.bracket_equations = sys.equations.size();

  std::vector<std::vector<Polynomial>> M(n, std::vector<Polynomial>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < n; ++i) M[s][i] = zv(i, s);
  Polynomial det = detail::subset_det<Polynomial>(
      M, Polynomial(sys.order, Rational(1)), [](const Polynomial& x, const Polynomial& y) { return x * y; },
      [](const Polynomial& x, const Polynomial& y) { return x + y; }, [](const Polynomial& x) { return -x; });
  sys.equations.push_back(Polynomial(sys.order, Rational(1)) - Polynomial::variable(sys.order, sys.z_var) * det);

  for (const auto& f : L.F0) sys.equations.push_back(lift_l(f));
  for (const auto& f : Lp.F0) sys.equations.push_back(lift_r(f));
  for (const auto& p : L.N0) sys.N.push_back(lift_l(p));
  for (const auto& p : Lp.N0) sys.N.push_back(lift_r(p));
  for (const auto& p : L.P0) sys.P.push_back(lift_l(p));
  for (const auto& p : Lp.P0) sys.P.push_back(lift_r(p));
  for (const auto& p : L.H0) sys.H.push_back(lift_l(p));
  for (const auto& p : Lp.H0) sys.H.push_back(lift_r(p));
  return sys;
}

std::vector<Polynomial> eliminate_linear(const std::vector<Polynomial>& F, std::size_t param_count) {
  std::vector<Polynomial> eqs;
  for (const auto& f : F)
    if (!f.is_zero()) eqs.push_back(f);
  if (eqs.empty()) return eqs;
  const VarOrderPtr order = eqs.front().order();
  const std::uint64_t params = param_count >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << param_count) - 1;
  auto is_linear = [&](const Polynomial& p) { return p.total_degree() <= 1 && (p.support() & params) == 0; };

  for (;;) {
    std::vector<Polynomial> linear, other;
    for (auto& f : eqs) (is_linear(f) ? linear : other).push_back(f);
    // reduced row echelon form, pivoting on the highest variable of each row
    std::vector<Polynomial> rows;
    for (auto f : linear) {
      for (const auto& r : rows) {
        Var p = r.mvar();
        Rational c = f.coeff_in(p, 1).constant_value();
        if (c != 0) f -= r.scaled(c);
      }
      if (f.is_zero()) continue;
      if (f.is_constant()) return {Polynomial(order, Rational(1))};
      Var p = f.mvar();
      f = f.scaled(1 / f.coeff_in(p, 1).constant_value());
      for (auto& r : rows) {
        Rational c = r.coeff_in(p, 1).constant_value();
        if (c != 0) r -= f.scaled(c);
      }
      rows.push_back(f);
    }
    bool changed = false;
    std::vector<Polynomial> rest;
    for (auto f : other) {
      Polynomial g = f;
      for (const auto& r : rows) {
        Var p = r.mvar();
        if (g.involves(p)) g = g.substitute(p, Polynomial::variable(order, p) - r);
      }
      if (g.is_zero()) {
        changed = true;
        continue;
      }
      if (g.is_constant()) return {Polynomial(order, Rational(1))};
      if (g != f) changed = true;
      rest.push_back(g);
    }
    eqs.clear();
    for (const auto& r : rows) eqs.push_back(normalize(r));
    for (const auto& g : rest) eqs.push_back(normalize(g));
    if (!changed || !std::any_of(rest.begin(), rest.end(), is_linear)) break;
  }
  return eqs;
}

namespace {

using namespace detail;

std::string dims(const std::vector<std::size_t>& d) {
  std::string s;
  for (auto x : d) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "(" + s + ")";
}

}  // namespace

Invariants invariants(const LieAlgebra& L) {
  const std::size_t n = L.dim();
  auto c = constant_table(L);
  std::vector<Vec> whole;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1;
    whole.push_back(e);
  }
  Invariants inv;
  std::vector<Vec> D = whole;
  inv.derived.push_back(D.size());
  for (;;) {
    auto next = bracket_spaces(c, D, D);
    if (next.size() == D.size()) break;
    D = next;
    inv.derived.push_back(D.size());
  }
  std::vector<Vec> C = whole;
  inv.lower_central.push_back(C.size());
  for (;;) {
    auto next = bracket_spaces(c, whole, C);
    if (next.size() == C.size()) break;
    C = next;
    inv.lower_central.push_back(C.size());
  }
  // center = kernel of x -> ([x, e_1], ..., [x, e_n]); rank of the n x n^2 map
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Vec r;
    for (std::size_t j = 0; j < n; ++j) r.insert(r.end(), c[i][j].begin(), c[i][j].end());
    rows.push_back(r);
  }
  inv.center = n - span_basis(rows).size();
  return inv;
}

InvariantReport invariant_prefilter(const LieAlgebra& L, const LieAlgebra& Lp) {
  InvariantReport rep;
  if (L.dim() != Lp.dim()) {
    rep.distinguished = true;
    rep.reason = "dimensions differ";
    return rep;
  }
  Invariants a = invariants(L), b = invariants(Lp);
  if (a.derived != b.derived) {
    rep.distinguished = true;
    rep.reason = "derived series dimensions " + dims(a.derived) + " vs " + dims(b.derived);
  } else if (a.lower_central != b.lower_central) {
    rep.distinguished = true;
    rep.reason = "lower central series dimensions " + dims(a.lower_central) + " vs " + dims(b.lower_central);
  } else if (a.center != b.center) {
    rep.distinguished = true;
    rep.reason = "center dimensions " + std::to_string(a.center) + " vs " + std::to_string(b.center);
  }
  return rep;
}

LieAlgebra change_basis(const LieAlgebra& L, const std::vector<std::vector<Rational>>& P) {
  const std::size_t n = L.dim();
  if (P.size() != n) throw std::invalid_argument("change_basis: matrix size differs from dimension");
  // inverse by Gauss-Jordan
  std::vector<Vec> aug(n, Vec(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = P[i][j];
    aug[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && aug[piv][col] == 0) ++piv;
    if (piv == n) throw std::invalid_argument("change_basis: singular matrix");
    std::swap(aug[piv], aug[col]);
    Rational inv = 1 / aug[col][col];
    for (auto& x : aug[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      Rational f = aug[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k) aug[r][k] -= f * aug[col][k];
    }
  }
  LieAlgebra out = L;
  out.table.clear();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Polynomial> w(n, Polynomial(L.order));
      for (std::size_t k = 0; k < n; ++k) {
        if (P[k][i] == 0) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (P[l][j] == 0) continue;
          auto b = L.bracket(k, l);
          for (std::size_t s = 0; s < n; ++s)
            if (!b[s].is_zero()) w[s] += b[s].scaled(P[k][i] * P[l][j]);
        }
      }
      std::vector<Polynomial> coords(n, Polynomial(L.order));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          if (aug[r][n + s] != 0 && !w[s].is_zero()) coords[r] += w[s].scaled(aug[r][n + s]);
      out.set_bracket(i, j, coords);
    }
  return out;
}

// .lie text format

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Index of a basis label e<k>, 0-based; nullopt if the text is not one.
std::optional<std::size_t> basis_index(const std::string& s) {
  if (s.size() < 2 || s[0] != 'e') return std::nullopt;
  if (!std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  std::size_t k = std::stoul(s.substr(1));
  if (k == 0) return std::nullopt;
  return k - 1;
}

std::string coefficient_text(const Polynomial& c) {
  if (c.is_constant()) return to_string(c.constant_value());
  return "(" + c.to_string() + ")";
}

}  // namespace

LieAlgebra parse_lie(std::string_view text) {
  LieAlgebra L;
  bool have_dim = false;
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    lines.push_back(cur);
  }
  struct PendingConstraint {
    std::string kind, poly;
    std::size_t line, column;
  };
  std::vector<PendingConstraint> constraints;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string raw = lines[ln];
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t lineno = ln + 1;
    const std::size_t indent = raw.find_first_not_of(" \t") + 1;
    std::istringstream in(line);
    std::string keyword;
    in >> keyword;
    auto fail = [&](const std::string& msg, std::size_t col) -> LieParseError {
      return LieParseError(msg, lineno, col);
    };

    if (keyword == "dim") {
      if (have_dim) throw fail("duplicate dim line", indent);
      std::string n_text, extra;
      in >> n_text;
      if (n_text.empty() || !std::all_of(n_text.begin(), n_text.end(), ::isdigit) || (in >> extra))
        throw fail("expected 'dim <n>'", indent + 4);
      std::size_t n = std::stoul(n_text);
      if (n == 0) throw fail("dimension must be positive", indent + 4);
      auto params = L.params;
      LieAlgebra fresh = make_algebra(n, params);
      L.basis = fresh.basis;
      L.order = fresh.order;
      have_dim = true;
    } else if (keyword == "params") {
      if (!L.table.empty() || !constraints.empty() || !L.params.empty())
        throw fail("params must precede brackets and constraints", indent);
      std::string name;
      while (in >> name) {
        if (!is_identifier(name) || basis_index(name))
          throw fail("invalid parameter name '" + name + "'", indent + line.find(name));
        if (std::find(L.params.begin(), L.params.end(), name) != L.params.end())
          throw fail("duplicate parameter '" + name + "'", indent + line.find(name));
        L.params.push_back(name);
      }
      L.order = make_order(L.params);
    } else if (keyword == "constraint") {
      std::string kind;
      in >> kind;
      if (kind != "eq" && kind != "nonzero" && kind != "ge" && kind != "gt")
        throw fail("constraint kind must be eq, nonzero, ge or gt", indent + 11);
      std::size_t at = line.find(kind, 10) + kind.size();
      constraints.push_back({kind, line.substr(at), lineno, indent + at});
    } else if (keyword == "bracket") {
      if (!have_dim) throw fail("bracket before dim", indent);
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw fail("expected '='", indent + line.size());
      std::istringstream lhs(line.substr(7, eq - 7));
      std::string a, b, extra;
      lhs >> a >> b;
      if (lhs >> extra) throw fail("expected two basis elements before '='", indent + 8);
      auto ia = basis_index(a), ib = basis_index(b);
      if (!ia || *ia >= L.dim()) throw fail("undeclared basis element '" + a + "'", indent + line.find(a, 7));
      if (!ib || *ib >= L.dim()) throw fail("undeclared basis element '" + b + "'", indent + line.find(b, 7 + a.size()));
      if (*ia >= *ib) throw fail("bracket indices must satisfy i < j", indent + line.find(a, 7));
      if (L.table.count({*ia, *ib})) throw fail("duplicate bracket", indent);

      // split the right side into top-level terms
      std::string rhs = line.substr(eq + 1);
      std::size_t base_col = indent + eq + 1;
      std::vector<std::pair<std::string, std::size_t>> terms;
      int depth = 0;
      std::size_t start = 0;
      for (std::size_t k = 0; k < rhs.size(); ++k) {
        char ch = rhs[k];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == '+' || ch == '-') && k > 0) {
          std::string before = trim(rhs.substr(start, k - start));
          char prev = before.empty() ? '\0' : before.back();
          // a sign right after an operator is unary
          if (!before.empty() && prev != '*' && prev != '/' && prev != '^' && prev != '+' && prev != '-') {
            terms.push_back({rhs.substr(start, k - start), start});
            start = k;
          }
        }
      }
      terms.push_back({rhs.substr(start), start});
      std::vector<Polynomial> coords(L.dim(), Polynomial(L.order));
      for (const auto& [term_raw, offset] : terms) {
        std::string term = trim(term_raw);
        std::size_t col = base_col + offset + term_raw.find_first_not_of(" \t");
        if (term.empty()) throw fail("empty term", col);
        std::size_t k = term.size();
        while (k > 0 && std::isdigit(static_cast<unsigned char>(term[k - 1]))) --k;
        if (k == 0 || term[k - 1] != 'e' || k == term.size())
          throw fail("term must end with a basis element", col);
        auto idx = basis_index(term.substr(k - 1));
        if (!idx || *idx >= L.dim()) throw fail("undeclared basis element '" + term.substr(k - 1) + "'", col + k - 1);
        if (k >= 2 && (std::isalnum(static_cast<unsigned char>(term[k - 2])) || term[k - 2] == '_'))
          throw fail("term must end with a basis element", col);
        std::string coef = trim(term.substr(0, k - 1));
        if (!coef.empty() && coef.front() == '+') coef = trim(coef.substr(1));
        Polynomial c(L.order);
        if (coef.empty()) {
          c = Polynomial(L.order, Rational(1));
        } else if (coef == "-") {
          c = Polynomial(L.order, Rational(-1));
        } else {
          if (coef.back() != '*') throw fail("expected '*' before the basis element", col + k - 1);
          coef.pop_back();
          try {
            c = parse_polynomial(coef, L.order);
          } catch (const ParseError& e) {
            throw fail(std::string("coefficient: ") + e.what(), col);
          } catch (const std::exception& e) {
            throw fail(std::string("coefficient: ") + e.what(), col);
          }
        }
        coords[*idx] += c;
      }
      L.set_bracket(*ia, *ib, coords);
    } else {
      throw fail("unknown keyword '" + keyword + "'", indent);
    }
  }
  if (!have_dim) throw LieParseError("missing dim line", lines.size(), 1);
  for (const auto& c : constraints) {
    Polynomial p;
    try {
      p = parse_polynomial(c.poly, L.order);
    } catch (const std::exception& e) {
      throw LieParseError(std::string("constraint: ") + e.what(), c.line, c.column);
    }
    if (c.kind == "eq") L.F0.push_back(p);
    else if (c.kind == "nonzero") L.H0.push_back(p);
    else if (c.kind == "ge") L.N0.push_back(p);
    else L.P0.push_back(p);
  }
  return L;
}

std::string print_lie(const LieAlgebra& L) {
  std::ostringstream out;
  out << "dim " << L.dim() << "\n";
  if (!L.params.empty()) {
    out << "params";
    for (const auto& p : L.params) out << " " << p;
    out << "\n";
  }
  for (const auto& f : L.F0) out << "constraint eq " << f << "\n";
  for (const auto& f : L.N0) out << "constraint ge " << f << "\n";
  for (const auto& f : L.P0) out << "constraint gt " << f << "\n";
  for (const auto& f : L.H0) out << "constraint nonzero " << f << "\n";
  for (const auto& [key, coords] : L.table) {
    out << "bracket e" << key.first + 1 << " e" << key.second + 1 << " =";
    bool first = true;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      if (coords[k].is_zero()) continue;
      const Polynomial& c = coords[k];
      bool negative = c.is_constant() && c.constant_value() < 0;
      if (first) out << (negative ? " -" : " ");
      else out << (negative ? " - " : " + ");
      out << coefficient_text(negative ? c.scaled(Rational(-1)) : c) << "*e" << k + 1;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace lieiso
