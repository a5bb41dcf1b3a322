#include "lieiso/chains.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lieiso/polyalg.hpp"

namespace lieiso {

// ------------------------------------------------------------ TriangularSet

TriangularSet::TriangularSet(VarOrderPtr order, std::vector<Polynomial> polys)
    : order_(std::move(order)), polys_(std::move(polys)) {
  for (const auto& p : polys_)
    if (p.is_constant()) throw std::invalid_argument("triangular set element is constant");
  std::sort(polys_.begin(), polys_.end(), [](const Polynomial& a, const Polynomial& b) { return a.mvar() < b.mvar(); });
  for (std::size_t i = 1; i < polys_.size(); ++i)
    if (polys_[i].mvar() == polys_[i - 1].mvar())
      throw std::invalid_argument("triangular set elements share a main variable");
}

const Polynomial* TriangularSet::with_mvar(Var v) const {
  for (const auto& p : polys_)
    if (p.mvar() == v) return &p;
  return nullptr;
}

std::uint64_t TriangularSet::main_vars() const {
  std::uint64_t m = 0;
  for (const auto& p : polys_) m |= std::uint64_t{1} << p.mvar();
  return m;
}

std::vector<Polynomial> TriangularSet::inits() const {
  std::vector<Polynomial> out;
  for (const auto& p : polys_) out.push_back(init_of(p));
  return out;
}

Polynomial TriangularSet::init_product() const {
  Polynomial h(order_, 1);
  for (const auto& p : polys_) h *= init_of(p);
  return h;
}

std::string TriangularSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < polys_.size(); ++i) {
    if (i) os << ", ";
    os << polys_[i];
  }
  os << '}';
  return os.str();
}

std::size_t coefficient_bits(const Polynomial& p) {
  std::size_t bits = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const Rational& c = p.coeff(t);
    bits = std::max(bits, mpz_sizeinbase(c.get_num_mpz_t(), 2));
    bits = std::max(bits, mpz_sizeinbase(c.get_den_mpz_t(), 2));
  }
  return bits;
}

namespace {

using Chain = std::vector<Polynomial>;  // ascending main variables
using Ineqs = std::vector<Polynomial>;

struct Task {
  std::vector<Polynomial> pending;
  Chain chain;
  Ineqs ineqs;
};

struct Branch {
  Chain chain;
  Ineqs ineqs;
  bool zero;
};

std::uint64_t mvar_mask(const Chain& c) {
  std::uint64_t m = 0;
  for (const auto& p : c) m |= std::uint64_t{1} << p.mvar();
  return m;
}

const Polynomial* level(const Chain& c, Var v) {
  for (const auto& p : c)
    if (p.mvar() == v) return &p;
  return nullptr;
}

void insert_sorted(Chain& c, Polynomial p) {
  Var v = p.mvar();
  auto it = std::find_if(c.begin(), c.end(), [&](const Polynomial& q) { return q.mvar() >= v; });
  if (it != c.end() && it->mvar() == v) *it = std::move(p);
  else c.insert(it, std::move(p));
}

bool add_ineq(Ineqs& H, const Polynomial& h) {
  if (h.is_constant()) return false;
  Polynomial n = normalize(h);
  for (const auto& x : H)
    if (x == n) return false;
  H.push_back(std::move(n));
  return true;
}

// Removes factors known to be nonzero on the zero set of the task.
Polynomial strip_known(Polynomial p, const Ineqs& H) {
  if (p.is_constant()) return p;
  bool changed = true;
  while (changed && !p.is_constant()) {
    changed = false;
    for (const auto& h : H) {
      if (h.size() > p.size() && h.total_degree() > p.total_degree()) continue;
      if (auto q = try_divide(p, h)) {
        p = std::move(*q);
        changed = true;
        if (p.is_constant()) break;
      }
    }
  }
  return p;
}

bool rank_less(const Polynomial& a, const Polynomial& b) {
  Var va = a.mvar(), vb = b.mvar();
  if (va != vb) return va < vb;
  unsigned da = a.degree(va), db = b.degree(vb);
  if (da != db) return da < db;
  if (a.size() != b.size()) return a.size() < b.size();
  return Polynomial::compare(a, b) < 0;
}

std::string system_key(const Chain& c, const Ineqs& h) {
  std::string s;
  for (const auto& p : c) s += p.to_string() + ";";
  s += "|";
  std::vector<std::string> hs;
  for (const auto& p : h) hs.push_back(p.to_string());
  std::sort(hs.begin(), hs.end());
  for (const auto& x : hs) s += x + ";";
  return s;
}

// Reduce each element by the lower part, strip content, positive sign.
Chain canonical(const Chain& c) {
  Chain out;
  for (const auto& t : c) {
    Var v = t.mvar();
    Polynomial r = reduce(t, out);
    if (r.degree(v) != t.degree(v) || r.is_constant()) r = t;  // keep the original shape
    out.push_back(primitive_part(r, v));
  }
  return out;
}

// Z(a) is contained in Z(b).
bool covered(const RegularSystem& a, const RegularSystem& b) {
  const auto& ca = a.chain.polys();
  const auto& cb = b.chain.polys();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (ca[i].mvar() != cb[i].mvar()) return false;
  for (const auto& t : cb)
    if (!reduce(t, ca).is_zero()) return false;
  Ineqs known = a.inequations;
  for (const auto& t : ca) add_ineq(known, init_of(t));
  auto nonzero = [&](const Polynomial& h) {
    Polynomial r = reduce(h, ca);
    if (r.is_zero()) return false;
    return strip_known(r, known).is_constant();
  };
  for (const auto& t : cb)
    if (!nonzero(init_of(t))) return false;
  for (const auto& h : b.inequations)
    if (!nonzero(h)) return false;
  return true;
}

class Engine {
 public:
  Engine(const Budget& budget, VarOrderPtr order, std::vector<Polynomial> classify)
      : budget_(budget), order_(std::move(order)), classify_(std::move(classify)) {}

  std::vector<ClassifiedSystem> run(std::vector<Polynomial> F, std::vector<Polynomial> H, bool detect_aux) {
    Ineqs ineqs;
    for (const auto& h : H) {
      if (h.is_zero()) return {};
      add_ineq(ineqs, h);
    }
    std::vector<Polynomial> eqs;
    for (auto& f : F) {
      if (f.is_zero()) continue;
      if (f.is_constant()) return {};
      eqs.push_back(f);
    }
    if (detect_aux) extract_auxiliary(eqs, ineqs);
    work_.push_back(Task{eqs, {}, ineqs});
    drain();
    return collect();
  }

  std::vector<ClassifiedSystem> run_chain(const Chain& T, const Ineqs& H) {
    Ineqs ineqs = H;
    for (const auto& t : T) add_ineq(ineqs, init_of(t));
    work_.push_back(Task{{}, T, ineqs});
    drain();
    return collect();
  }

  // Regularity of p against a regular chain; restarts are dropped.
  std::vector<Branch> regularity(const Polynomial& p, const Chain& C) {
    Ineqs H;
    for (const auto& t : C) add_ineq(H, init_of(t));
    collect_restarts_ = false;
    return regularize(p, C, H);
  }

 private:
  struct Aux {
    Var w;
    Polynomial eq;
  };

  void tick() {
    if (++steps_ > budget_.max_steps) throw BudgetExceeded("step budget exceeded");
    if (work_.size() + out_.size() > budget_.max_chains) throw BudgetExceeded("chain budget exceeded");
  }

  void check_bits(const Polynomial& p) const {
    if (coefficient_bits(p) > budget_.max_bits) throw BudgetExceeded("coefficient size budget exceeded");
  }

  // w*h - c (c a nonzero constant, w nowhere else, h below w) becomes h != 0.
  void extract_auxiliary(std::vector<Polynomial>& eqs, Ineqs& ineqs) {
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      const Polynomial& f = eqs[i];
      if (f.is_constant()) continue;
      Var w = f.mvar();
      if (f.degree(w) != 1) continue;
      Polynomial c0 = f.coeff_in(w, 0);
      if (!c0.is_constant() || c0.is_zero()) continue;
      bool elsewhere = false;
      for (std::size_t j = 0; j < eqs.size() && !elsewhere; ++j)
        if (j != i && eqs[j].involves(w)) elsewhere = true;
      for (const auto& h : ineqs)
        if (h.involves(w)) elsewhere = true;
      for (const auto& h : classify_)
        if (h.involves(w)) elsewhere = true;
      if (elsewhere) continue;
      Polynomial h = f.coeff_in(w, 1);
      if (h.is_constant()) continue;
      aux_.push_back({w, normalize(f)});
      add_ineq(ineqs, h);
      eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(i));
      --i;
    }
  }

  void drain() {
    while (!work_.empty()) {
      Task t = std::move(work_.back());
      work_.pop_back();
      process(std::move(t));
    }
  }

  std::vector<ClassifiedSystem> collect() {
    std::vector<ClassifiedSystem> result;
    std::set<std::string> seen;
    for (auto& [chain, ineqs, flags] : out_) {
      Chain c = chain;
      for (const auto& a : aux_) insert_sorted(c, a.eq);
      c = canonical(c);
      Ineqs h;
      for (const auto& x : ineqs) {
        // Inequations on the auxiliary variables are implied by the chain.
        bool aux_var = false;
        for (const auto& a : aux_)
          if (x.involves(a.w)) aux_var = true;
        if (!aux_var) add_ineq(h, x);
      }
      std::sort(h.begin(), h.end(), [](const Polynomial& a, const Polynomial& b) { return a.to_string() < b.to_string(); });
      std::string key = system_key(c, h);
      for (bool f : flags) key += f ? "1" : "0";
      if (!seen.insert(key).second) continue;
      result.push_back({RegularSystem{RegularChain(TriangularSet(order_, c), true), h}, flags});
    }
    // Drop systems whose zero set is contained in another kept one.
    std::vector<bool> dropped(result.size(), false);
    for (std::size_t i = 0; i < result.size(); ++i) {
      for (std::size_t j = 0; j < result.size() && !dropped[i]; ++j) {
        if (i == j || dropped[j] || result[i].vanishes != result[j].vanishes) continue;
        if (covered(result[i].system, result[j].system)) dropped[i] = true;
      }
    }
    std::vector<ClassifiedSystem> kept;
    for (std::size_t i = 0; i < result.size(); ++i)
      if (!dropped[i]) kept.push_back(std::move(result[i]));
    result = std::move(kept);
    std::sort(result.begin(), result.end(), [](const ClassifiedSystem& a, const ClassifiedSystem& b) {
      return a.system.chain.to_string() < b.system.chain.to_string() ||
             (a.system.chain.to_string() == b.system.chain.to_string() &&
              system_key({}, a.system.inequations) < system_key({}, b.system.inequations));
    });
    return result;
  }

  // --------------------------------------------------------- splitting phase

  // Returns true when the task was replaced by sub-tasks (or found empty).
  bool split_polynomial(Task& task, std::size_t i) {
    Polynomial& r = task.pending[i];
    auto others = [&]() {
      std::vector<Polynomial> rest;
      for (std::size_t k = 0; k < task.pending.size(); ++k)
        if (k != i) rest.push_back(task.pending[k]);
      return rest;
    };
    // Monomial factors.
    if (r.size() == 1) {
      // c*x1^a1*...: split on the first variable, keep the rest
      auto mono = monomial_content(r);
      Var x = 0;
      while (mono[x] == 0) ++x;
      Polynomial xv = Polynomial::variable(order_, x);
      Polynomial rest = exact_divide(r, xv.pow(mono[x]));
      if (rest.is_constant()) {
        r = xv;
        return false;
      }
    }
    auto mono = monomial_content(r);
    for (Var x = 0; x < mono.size(); ++x) {
      if (mono[x] == 0) continue;
      Polynomial xv = Polynomial::variable(order_, x);
      if (exact_divide(r, xv.pow(mono[x])).is_constant()) {
        r = xv;
        return false;
      }
      Task zero{others(), task.chain, task.ineqs};
      zero.pending.push_back(xv);
      work_.push_back(std::move(zero));
      r = exact_divide(r, xv.pow(mono[x]));
      add_ineq(task.ineqs, xv);
      if (r.is_constant()) return true;
    }
    Var v = r.mvar();
    // Content with respect to the main variable.
    Polynomial c = content(r, v);
    if (!c.is_constant()) {
      Task zero{others(), task.chain, task.ineqs};
      zero.pending.push_back(c);
      work_.push_back(std::move(zero));
      r = normalize(exact_divide(r, c));
      add_ineq(task.ineqs, c);
    }
    if (r.degree(v) >= 2) {
      r = squarefree_primitive_part(r, v);
      // Rational linear factors of univariate polynomials.
      if (r.support() == (std::uint64_t{1} << v) && r.degree(v) >= 2) {
        auto roots = rational_roots(r, v);
        if (!roots.empty()) {
          Polynomial rest = r;
          for (const auto& root : roots) {
            Polynomial lin = Polynomial::variable(order_, v).scaled(root.get_den()) -
                             Polynomial(order_, Rational(root.get_num()));
            rest = exact_divide(rest, lin);
            Task t{others(), task.chain, task.ineqs};
            t.pending.push_back(lin);
            work_.push_back(std::move(t));
          }
          if (!rest.is_constant()) {
            Task t{others(), task.chain, task.ineqs};
            t.pending.push_back(normalize(rest));
            work_.push_back(std::move(t));
          }
          return true;
        }
      }
    }
    return false;
  }

  bool known_nonzero(const Polynomial& p, const Chain& chain, const Ineqs& H, bool& vanishes) {
    vanishes = false;
    if (p.is_constant()) return !p.is_zero();
    Polynomial r = reduce(p, chain);
    if (r.is_zero()) {
      vanishes = true;
      return false;
    }
    r = strip_known(r, H);
    return r.is_constant();
  }

  void process(Task task) {
    for (;;) {
      tick();
      // Reduce and simplify the pending equations.
      std::vector<Polynomial> reduced;
      for (const auto& p : task.pending) {
        Polynomial r = reduce(p, task.chain);
        if (r.is_zero()) continue;
        r = strip_known(normalize(r), task.ineqs);
        if (r.is_constant()) return;  // no zeros
        r = normalize(r);
        if (std::find(reduced.begin(), reduced.end(), r) == reduced.end()) reduced.push_back(std::move(r));
      }
      task.pending = std::move(reduced);
      if (task.pending.empty()) {
        finalize(std::move(task.chain), std::move(task.ineqs));
        return;
      }
      bool replaced = false;
      for (std::size_t i = 0; i < task.pending.size() && !replaced; ++i) replaced = split_polynomial(task, i);
      if (replaced) return;

      // Lowest-ranked pending polynomial enters the triangular set.
      auto it = std::min_element(task.pending.begin(), task.pending.end(), rank_less);
      Polynomial r = *it;
      task.pending.erase(it);
      check_bits(r);
      RankedView rv = ranked_view(r);
      bool vanishes = false;
      if (!known_nonzero(rv.init, task.chain, task.ineqs, vanishes)) {
        Task degenerate{task.pending, task.chain, task.ineqs};
        degenerate.pending.push_back(rv.init);
        if (!rv.tail.is_zero()) degenerate.pending.push_back(rv.tail);
        if (vanishes) {
          task = std::move(degenerate);
          continue;
        }
        work_.push_back(std::move(degenerate));
        add_ineq(task.ineqs, rv.init);
      }
      // Elements at or above the new level go back to the pending set.
      Chain kept;
      for (auto& t : task.chain) {
        if (t.mvar() < rv.mvar) kept.push_back(std::move(t));
        else task.pending.push_back(std::move(t));
      }
      kept.push_back(r);
      task.chain = std::move(kept);
      for (const auto& h : task.ineqs)
        if (reduce(h, task.chain).is_zero()) return;
    }
  }

  // ------------------------------------------------------------ regularity

  void restart(Chain chain, const Polynomial& s, const Ineqs& H) {
    if (!collect_restarts_) return;
    Task t;
    t.chain = std::move(chain);
    t.pending.push_back(s);
    t.ineqs = H;
    work_.push_back(std::move(t));
  }

  std::vector<Branch> regularize(const Polynomial& p, const Chain& C, const Ineqs& H) {
    tick();
    Polynomial r = reduce(p, C);
    if (r.is_zero()) return {{C, H, true}};
    if (r.is_constant()) return {{C, H, false}};
    Var v = r.mvar();
    Chain low, high;
    for (const auto& t : C) (t.mvar() <= v ? low : high).push_back(t);
    auto out = regularize_low(r, low, high, H);
    return out;
  }

  static Chain concat(Chain a, const Chain& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  std::vector<Branch> regularize_low(const Polynomial& r, const Chain& low, const Chain& high, const Ineqs& H) {
    if ((r.support() & mvar_mask(low)) == 0) return {{concat(low, high), H, false}};
    if (res_chain_nonzero(r, low)) return {{concat(low, high), H, false}};
    Var v = r.mvar();
    RankedView rv = ranked_view(r);
    std::vector<Branch> out;
    for (auto& br : regularize(rv.init, low, H)) {
      if (br.zero) {
        for (auto& b : regularize(rv.tail, concat(br.chain, high), br.ineqs)) out.push_back(std::move(b));
      } else if (!level(br.chain, v)) {
        out.push_back({concat(br.chain, high), br.ineqs, false});
      } else {
        for (auto& b : regularize_gcd(r, br.chain, high, br.ineqs, v)) out.push_back(std::move(b));
      }
    }
    return out;
  }

  // C has its top element at v; init(r) is regular modulo the part below v.
  std::vector<Branch> regularize_gcd(const Polynomial& r, const Chain& C, const Chain& high, const Ineqs& H, Var v) {
    const Polynomial t = C.back();
    if (r.degree(v) >= t.degree(v)) return regularize(r, concat(C, high), H);
    Chain below(C.begin(), C.end() - 1);
    auto S = subresultant_chain(t, r, v);
    const unsigned q = r.degree(v);
    std::vector<Branch> out;
    struct Item {
      Chain d;
      Ineqs h;
      unsigned j;
    };
    std::vector<Item> stack{{below, H, 0}};
    while (!stack.empty()) {
      Item item = std::move(stack.back());
      stack.pop_back();
      if (item.j > q) throw std::logic_error("regular gcd: all principal coefficients vanish");
      const unsigned j = item.j;
      Polynomial s = S[j].coeff_in(v, j);
      for (auto& br : regularize(s, item.d, item.h)) {
        if (br.zero) {
          stack.push_back({std::move(br.chain), std::move(br.ineqs), j + 1});
          continue;
        }
        Chain full = br.chain;
        full.push_back(t);
        if (j == 0) {
          out.push_back({concat(full, high), br.ineqs, false});
          continue;
        }
        restart(concat(full, high), s, br.ineqs);
        Ineqs h2 = br.ineqs;
        add_ineq(h2, s);
        Polynomial g = primitive_part(reduce(S[j], br.chain), v);
        check_bits(g);
        Chain zc = br.chain;
        zc.push_back(g);
        out.push_back({concat(zc, high), h2, true});
        Polynomial quo = primitive_part(reduce(pquo(t, g, v), br.chain), v);
        check_bits(quo);
        if (quo.degree(v) >= 1) {
          Chain rc = br.chain;
          rc.push_back(quo);
          Ineqs h3 = h2;
          add_ineq(h3, init_of(quo));
          for (auto& b : regularize(r, concat(rc, high), h3)) out.push_back(std::move(b));
        }
      }
    }
    return out;
  }

  // ------------------------------------------------------------- finalize

  struct Sys {
    Chain chain;
    Ineqs ineqs;
  };

  std::vector<Sys> squarefree_at(Sys sys, std::size_t k) {
    std::vector<Sys> done;
    std::vector<Sys> todo{std::move(sys)};
    while (!todo.empty()) {
      tick();
      Sys cur = std::move(todo.back());
      todo.pop_back();
      const Polynomial& t = cur.chain[k];
      Var v = t.mvar();
      if (t.degree(v) == 1) {
        done.push_back(std::move(cur));
        continue;
      }
      Chain low(cur.chain.begin(), cur.chain.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      Chain high(cur.chain.begin() + static_cast<std::ptrdiff_t>(k) + 1, cur.chain.end());
      for (auto& br : regularize(t.derivative(v), low, cur.ineqs)) {
        // regularize keeps everything above v in place
        Chain c = concat(br.chain, high);
        if (!br.zero) {
          done.push_back({std::move(c), std::move(br.ineqs)});
        } else {
          if (c[k] == t) throw std::logic_error("squarefree step made no progress");
          todo.push_back({std::move(c), std::move(br.ineqs)});
        }
      }
    }
    return done;
  }

  void finalize(Chain T, Ineqs H) {
    // Regular chain, bottom-up.
    std::vector<Sys> cur{{{}, H}};
    for (const auto& t : T) {
      std::vector<Sys> next;
      for (auto& s : cur) {
        for (auto& br : regularize(init_of(t), s.chain, s.ineqs)) {
          if (br.zero) continue;
          br.chain.push_back(t);
          next.push_back({std::move(br.chain), std::move(br.ineqs)});
        }
      }
      cur = std::move(next);
    }
    // Squarefree.
    for (std::size_t k = 0; k < T.size(); ++k) {
      std::vector<Sys> next;
      for (auto& s : cur)
        for (auto& x : squarefree_at(std::move(s), k)) next.push_back(std::move(x));
      cur = std::move(next);
    }
    // Inequations regular.
    std::vector<Sys> good;
    for (auto& s : cur) {
      std::vector<Sys> todo{std::move(s)};
      std::size_t hi = 0;
      while (true) {
        std::vector<Sys> next;
        bool any = false;
        for (auto& x : todo) {
          if (hi >= x.ineqs.size()) {
            good.push_back(std::move(x));
            continue;
          }
          any = true;
          Polynomial h = x.ineqs[hi];
          for (auto& br : regularize(h, x.chain, x.ineqs)) {
            if (br.zero) continue;
            next.push_back({std::move(br.chain), std::move(br.ineqs)});
          }
        }
        if (!any) break;
        todo = std::move(next);
        ++hi;
      }
    }
    // Classification.
    for (auto& s : good) {
      std::vector<std::pair<Sys, std::vector<bool>>> items{{std::move(s), {}}};
      for (const auto& p : classify_) {
        std::vector<std::pair<Sys, std::vector<bool>>> next;
        for (auto& [sys, flags] : items) {
          for (auto& br : regularize(p, sys.chain, sys.ineqs)) {
            auto f = flags;
            f.push_back(br.zero);
            next.push_back({Sys{std::move(br.chain), std::move(br.ineqs)}, std::move(f)});
          }
        }
        items = std::move(next);
      }
      for (auto& [sys, flags] : items) {
        out_.push_back({std::move(sys.chain), std::move(sys.ineqs), std::move(flags)});
        tick();
      }
    }
  }

  struct Out {
    Chain chain;
    Ineqs ineqs;
    std::vector<bool> flags;
  };

  Budget budget_;
  VarOrderPtr order_;
  std::vector<Polynomial> classify_;
  std::vector<Aux> aux_;
  std::vector<Task> work_;
  std::vector<Out> out_;
  std::size_t steps_ = 0;
  bool collect_restarts_ = true;
};

VarOrderPtr order_of(const std::vector<Polynomial>& F, const std::vector<Polynomial>& H) {
  for (const auto& f : F)
    if (f.order()) return f.order();
  for (const auto& h : H)
    if (h.order()) return h.order();
  return make_order({});
}

}  // namespace

std::vector<ClassifiedSystem> decompose_classified(const std::vector<Polynomial>& F,
                                                   const std::vector<Polynomial>& H, const Budget& budget,
                                                   const DecomposeOptions& options) {
  VarOrderPtr order = options.order ? options.order : order_of(F, H);
  Engine e(budget, order, options.classify);
  return e.run(F, H, options.detect_auxiliary);
}

std::vector<RegularSystem> decompose(const std::vector<Polynomial>& F, const std::vector<Polynomial>& H,
                                     const Budget& budget, const DecomposeOptions& options) {
  std::vector<RegularSystem> out;
  for (auto& c : decompose_classified(F, H, budget, options)) out.push_back(std::move(c.system));
  return out;
}

Decomposition triangularize(const std::vector<Polynomial>& F, const Budget& budget) {
  Decomposition d;
  std::set<std::string> seen;
  for (auto& s : decompose(F, {}, budget)) {
    if (seen.insert(s.chain.to_string()).second) d.chains.push_back(std::move(s.chain));
  }
  return d;
}

bool sat_membership(const Polynomial& p, const RegularChain& T) { return reduce(p, T.polys()).is_zero(); }

RegularityResult is_regular(const Polynomial& p, const RegularChain& T, const Budget& budget) {
  Engine e(budget, T.order() ? T.order() : p.order(), {});
  auto branches = e.regularity(p, T.polys());
  RegularityResult res{Regularity::Regular, {}, {}};
  std::set<std::string> zs, rs;
  for (auto& b : branches) {
    Chain c = canonical(b.chain);
    RegularChain rc(TriangularSet(T.order(), c), T.squarefree());
    if (b.zero) {
      if (zs.insert(rc.to_string()).second) res.zero_branches.push_back(std::move(rc));
    } else if (rs.insert(rc.to_string()).second) {
      res.regular_branches.push_back(std::move(rc));
    }
  }
  if (res.zero_branches.empty()) res.status = Regularity::Regular;
  else if (res.regular_branches.empty()) res.status = Regularity::Zero;
  else res.status = Regularity::ZeroDivisor;
  return res;
}

std::vector<RegularChain> make_squarefree(const RegularChain& T, const Budget& budget) {
  Engine e(budget, T.order(), {});
  std::vector<RegularChain> out;
  std::set<std::string> seen;
  for (auto& s : e.run_chain(T.polys(), {})) {
    if (seen.insert(s.system.chain.to_string()).second) out.push_back(std::move(s.system.chain));
  }
  return out;
}

std::size_t chain_dimension(const RegularChain& T) {
  std::size_t n = T.order() ? T.order()->size() : 0;
  return n - T.size();
}

bool is_regular_chain(const TriangularSet& T) {
  const auto& p = T.polys();
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::span<const Polynomial> lower(p.data(), i);
    if (!res_chain_nonzero(init_of(p[i]), lower)) return false;
  }
  return true;
}

bool is_squarefree_chain(const TriangularSet& T) {
  const auto& p = T.polys();
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::span<const Polynomial> upto(p.data(), i + 1);
    if (!res_chain_nonzero(derivative(p[i]), upto)) return false;
  }
  return true;
}

bool chain_equivalent(const RegularChain& a, const RegularChain& b) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a.polys())
    if (!sat_membership(p, b)) return false;
  for (const auto& p : b.polys())
    if (!sat_membership(p, a)) return false;
  return true;
}

}  // namespace lieiso
