#include "lieiso/realsolve.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "lieiso/polyalg.hpp"

namespace lieiso {

bool IsolatingBox::all_exact() const {
  return std::all_of(coords.begin(), coords.end(), [](const Interval& c) { return c.is_point(); });
}

void IsolatingBox::refine(unsigned rounds) {
  for (Var v = 0; v < coords.size(); ++v) {
    if (coords[v].is_point() || defining[v].empty()) continue;
    RootInterval iv{coords[v].lo, coords[v].hi};
    for (unsigned r = 0; r < rounds && !iv.exact(); ++r) refine_root(defining[v], iv, (iv.hi - iv.lo) / 2);
    coords[v] = Interval(iv.lo, iv.hi);
  }
}

std::optional<std::map<Var, Rational>> IsolatingBox::point() const {
  if (!all_exact()) return std::nullopt;
  std::map<Var, Rational> out;
  for (Var v = 0; v < coords.size(); ++v) out[v] = coords[v].lo;
  return out;
}

std::string to_string(RealStatus s) {
  switch (s) {
    case RealStatus::NonEmpty:
      return "nonempty";
    case RealStatus::Empty:
      return "empty";
    case RealStatus::Unknown:
      break;
  }
  return "unknown";
}

namespace {

std::map<Var, Rational> exact_bindings(const IsolatingBox& box, std::uint64_t vars) {
  std::map<Var, Rational> b;
  for (Var v = 0; v < box.coords.size(); ++v)
    if (((vars >> v) & 1U) && box.coords[v].is_point()) b[v] = box.coords[v].lo;
  return b;
}

Interval eval_at(const Polynomial& p, const IsolatingBox& box, Var v, const Interval& value) {
  std::vector<Interval> c = box.coords;
  c[v] = value;
  return eval(p, c);
}

// Eliminates every variable other than v from q using the defining
// polynomials of the inexact coordinates.
Polynomial eliminate_inexact(Polynomial q, const IsolatingBox& box, Var v) {
  for (Var j = box.coords.size(); j-- > 0;) {
    if (j == v || !q.involves(j)) continue;
    if (box.defining[j].empty()) throw std::logic_error("eliminate_inexact: unbound variable");
    q = resultant(q, from_dense(box.defining[j], q.order(), j), j);
    if (q.is_zero()) return q;
  }
  return q;
}

// Turns an exact root b of D into an open interval around it that isolates b
// and whose midpoints never hit b.
RootInterval widen_exact(const DenseInt& D, const Rational& b, const std::vector<RootInterval>& others) {
  Rational d = 1;
  for (;;) {
    Rational lo = b - d, hi = b + d / 2;
    bool ok = sign_at(D, lo) != 0 && sign_at(D, hi) != 0;
    for (const auto& o : others) {
      if (!(o.hi < lo || o.lo > hi)) ok = false;
    }
    if (ok) return {lo, hi};
    d /= 2;
  }
}

struct LevelOutcome {
  std::vector<IsolatingBox> children;
  bool complete = true;
  std::string reason;
};

LevelOutcome extend(IsolatingBox alpha, const Polynomial& t, const RealOptions& opt) {
  LevelOutcome out;
  Var v = t.mvar();
  std::uint64_t lower = t.support() & ~(std::uint64_t{1} << v);
  auto bind = exact_bindings(alpha, lower);
  Polynomial q = t.evaluate(bind);
  Polynomial ini = init_of(t).evaluate(bind);

  if (ini.is_constant()) {
    if (ini.is_zero()) return out;  // outside the quasi-component
  } else {
    auto s = certified_sign(ini, alpha, opt.refine_rounds);
    if (!s) {
      out.complete = false;
      out.reason = "initial sign undecided";
      return out;
    }
    if (*s == 0) return out;
  }

  bool univariate = (q.support() & ~(std::uint64_t{1} << v)) == 0;
  if (univariate) {
    DenseInt D = squarefree_dense(to_dense(q, v));
    for (const auto& iv : isolate_real_roots(D)) {
      IsolatingBox child = alpha;
      child.coords[v] = Interval(iv.lo, iv.hi);
      if (!iv.exact()) child.defining[v] = D;
      out.children.push_back(std::move(child));
    }
    return out;
  }

  Polynomial N = eliminate_inexact(q, alpha, v);
  if (N.is_zero() || N.is_constant()) {
    if (N.is_zero()) {
      out.complete = false;
      out.reason = "degenerate norm";
    }
    return out;
  }
  DenseInt D = squarefree_dense(to_dense(N, v));
  auto roots = isolate_real_roots(D);
  Polynomial dq = q.derivative(v);
  for (std::size_t idx = 0; idx < roots.size(); ++idx) {
    RootInterval J = roots[idx];
    std::vector<RootInterval> others = roots;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(idx));
    bool decided = false;
    for (unsigned r = 0; r <= opt.refine_rounds; ++r) {
      if (J.exact()) {
        // refinement can land on a rational root of N exactly
        Interval at = eval_at(q, alpha, v, Interval(J.lo));
        if (at.is_point()) {
          if (at.lo == 0) {
            IsolatingBox child = alpha;
            child.coords[v] = Interval(J.lo);
            out.children.push_back(std::move(child));
          }
          decided = true;
          break;
        }
        J = widen_exact(D, J.lo, others);
      }
      Interval whole = eval_at(q, alpha, v, Interval(J.lo, J.hi));
      if (!whole.contains_zero()) {
        decided = true;
        break;
      }
      auto sl = eval_at(q, alpha, v, Interval(J.lo)).sign();
      auto sh = eval_at(q, alpha, v, Interval(J.hi)).sign();
      auto sd = eval_at(dq, alpha, v, Interval(J.lo, J.hi)).sign();
      if (sl && sh && *sl * *sh < 0 && sd && *sd != 0) {
        IsolatingBox child = alpha;
        child.coords[v] = Interval(J.lo, J.hi);
        child.defining[v] = D;
        out.children.push_back(std::move(child));
        decided = true;
        break;
      }
      // J shrinks slower than alpha so that q at the ends of J eventually
      // dominates the uncertainty coming from alpha
      alpha.refine(1);
      if (r % 3 == 2) refine_root(D, J, (J.hi - J.lo) / 2);
    }
    if (!decided) {
      out.complete = false;
      out.reason = "root membership undecided";
    }
  }
  return out;
}

}  // namespace

std::optional<int> certified_sign(const Polynomial& p, IsolatingBox& box, unsigned rounds) {
  for (unsigned r = 0; r <= rounds; ++r) {
    Interval iv = eval(p, box.coords);
    auto s = iv.sign();
    if (s && (*s != 0 || iv.is_point())) return s;
    bool inexact = false;
    std::uint64_t sup = p.support();
    for (Var v = 0; v < box.coords.size(); ++v)
      if (((sup >> v) & 1U) && !box.coords[v].is_point()) inexact = true;
    if (!inexact) return iv.sign();
    box.refine(1);
  }
  return std::nullopt;
}

RealPoints real_points_of_chain(const RegularChain& T, const std::map<Var, Rational>& free_values,
                                const std::vector<Polynomial>& H, const RealOptions& options) {
  RealPoints res;
  const VarOrderPtr& order = T.order();
  if (!order) throw std::invalid_argument("real_points_of_chain: chain without variable order");
  std::size_t n = order->size();
  std::uint64_t algebraic = T.base().main_vars();

  IsolatingBox start;
  start.order = order;
  start.coords.assign(n, Interval(Rational(0)));
  start.defining.assign(n, {});
  for (const auto& [v, value] : free_values) {
    if (v >= n) throw std::invalid_argument("real_points_of_chain: variable out of range");
    if ((algebraic >> v) & 1U) throw std::invalid_argument("real_points_of_chain: value given for a main variable");
    start.coords[v] = Interval(value);
  }
  std::uint64_t used = 0;
  for (const auto& t : T.polys()) used |= t.support();
  for (const auto& h : H) used |= h.support();
  for (Var v = 0; v < n; ++v)
    if (((used >> v) & 1U) && !((algebraic >> v) & 1U) && !free_values.count(v))
      throw std::invalid_argument("real_points_of_chain: free variable " + order->name(v) + " has no value");

  std::vector<IsolatingBox> current{start};
  for (const auto& t : T.polys()) {
    std::vector<IsolatingBox> next;
    for (auto& alpha : current) {
      auto o = extend(alpha, t, options);
      if (!o.complete) {
        res.complete = false;
        res.reason = o.reason;
      }
      for (auto& c : o.children) next.push_back(std::move(c));
    }
    current = std::move(next);
  }
  for (auto& box : current) {
    bool keep = true;
    for (const auto& h : H) {
      auto s = certified_sign(h, box, options.refine_rounds);
      if (!s) {
        res.complete = false;
        res.reason = "inequation sign undecided";
        keep = false;
        break;
      }
      if (*s == 0) {
        keep = false;
        break;
      }
    }
    if (keep) res.boxes.push_back(std::move(box));
  }
  return res;
}

RealPoints real_points_of_chain(const RegularChain& T, const std::vector<Polynomial>& H, const RealOptions& options) {
  if (chain_dimension(T) != 0) throw std::invalid_argument("real_points_of_chain: chain is not zero-dimensional");
  return real_points_of_chain(T, std::map<Var, Rational>{}, H, options);
}

bool certify_box(const RegularChain& T, const IsolatingBox& input, unsigned rounds) {
  IsolatingBox box = input;
  for (const auto& t : T.polys()) {
    Var v = t.mvar();
    auto s = certified_sign(init_of(t), box, rounds);
    if (!s || *s == 0) return false;
    bool lower_exact = true;
    std::uint64_t sup = t.support();
    for (Var j = 0; j < v; ++j)
      if (((sup >> j) & 1U) && !box.coords[j].is_point()) lower_exact = false;
    if (box.coords[v].is_point()) {
      if (!lower_exact) return false;
      auto b = exact_bindings(box, sup);
      if (!t.evaluate(b).is_zero()) return false;
      continue;
    }
    Polynomial dt = t.derivative(v);
    bool ok = false;
    for (unsigned r = 0; r <= rounds && !ok; ++r) {
      auto sl = eval_at(t, box, v, Interval(box.coords[v].lo)).sign();
      auto sh = eval_at(t, box, v, Interval(box.coords[v].hi)).sign();
      auto sd = eval(dt, box.coords).sign();
      if (sl && sh && *sl * *sh < 0 && sd && *sd != 0) {
        ok = true;
        break;
      }
      // only the lower coordinates may shrink; v's enclosure is what is being certified
      Interval keep = box.coords[v];
      DenseInt def = std::move(box.defining[v]);
      box.defining[v].clear();
      box.coords[v] = Interval(Rational(0));
      box.refine(1);
      box.coords[v] = keep;
      box.defining[v] = std::move(def);
    }
    if (!ok) return false;
  }
  return true;
}

namespace {

std::vector<Rational> small_sequence(std::size_t count) {
  std::vector<Rational> seq{0};
  for (long k = 1; seq.size() < count; ++k) {
    seq.emplace_back(k);
    seq.emplace_back(-k);
  }
  seq.resize(count);
  return seq;
}

struct SignCheck {
  bool satisfied = false;
  bool decided = true;
};

SignCheck check_signs(IsolatingBox& box, const std::vector<Polynomial>& N, const std::vector<Polynomial>& P,
                      unsigned rounds) {
  SignCheck out;
  for (const auto& p : P) {
    auto s = certified_sign(p, box, rounds);
    if (!s) {
      out.decided = false;
      return out;
    }
    if (*s <= 0) return out;
  }
  for (const auto& p : N) {
    auto s = certified_sign(p, box, rounds);
    if (!s) {
      out.decided = false;
      return out;
    }
    if (*s < 0) return out;
  }
  out.satisfied = true;
  return out;
}

}  // namespace

namespace {

// Variables forced to zero at every real zero of t, when t or -t is a
// positive combination of even-power monomials: all its monomials then
// vanish, in particular the pure powers. nullopt: t is not of that shape.
// A positive constant term means t has no real zero at all (all bits set).
std::optional<std::uint64_t> definite_zero_vars(const Polynomial& t) {
  if (t.is_zero()) return std::nullopt;
  const int s = sign(t.coeff(0));
  std::uint64_t forced = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (sign(t.coeff(k)) != s) return std::nullopt;
    unsigned vars = 0;
    Var last = 0;
    for (Var v = 0; v < t.nvars(); ++v) {
      unsigned e = t.exponent(k, v);
      if (e % 2) return std::nullopt;
      if (e) {
        ++vars;
        last = v;
      }
    }
    if (vars == 0) return ~std::uint64_t{0};
    if (vars == 1) forced |= std::uint64_t{1} << last;
  }
  return forced;
}

RealVerdict decide_sas(const SAS& S, const RealOptions& options, unsigned depth);

}  // namespace

RealVerdict sas_has_real_solution(const SAS& S, const RealOptions& options) { return decide_sas(S, options, 0); }

namespace {

RealVerdict decide_sas(const SAS& S, const RealOptions& options, unsigned depth) {
  RealVerdict verdict;
  VarOrderPtr order = S.order;
  if (!order) throw std::invalid_argument("sas_has_real_solution: SAS without variable order");
  std::size_t n = order->size();

  DecomposeOptions dopt;
  dopt.order = order;
  dopt.classify = S.N;
  dopt.classify.insert(dopt.classify.end(), S.P.begin(), S.P.end());
  std::vector<ClassifiedSystem> systems;
  try {
    systems = decompose_classified(S.F, S.H, options.budget, dopt);
  } catch (const BudgetExceeded& e) {
    verdict.reason = std::string("budget exceeded: ") + e.what();
    return verdict;
  }
  if (systems.empty()) {
    verdict.status = RealStatus::Empty;
    verdict.reason = "no complex solutions";
    return verdict;
  }

  std::vector<std::string> unknown_reasons;
  std::vector<std::string> empty_reasons;
  std::mt19937_64 rng(options.seed);
  for (const auto& cs : systems) {
    const RegularSystem& sys = cs.system;
    const RegularChain& T = sys.chain;
    std::vector<Polynomial> N, P;
    bool violated = false;
    for (std::size_t i = 0; i < S.N.size(); ++i)
      if (!cs.vanishes[i]) N.push_back(S.N[i]);
    for (std::size_t i = 0; i < S.P.size(); ++i) {
      if (cs.vanishes[S.N.size() + i]) violated = true;
      P.push_back(S.P[i]);
    }
    if (violated) {
      empty_reasons.push_back("a strict inequality vanishes on " + T.to_string());
      continue;
    }

    // truly univariate chain member without real roots
    bool pruned = false;
    for (const auto& t : T.polys()) {
      if (t.support() != (std::uint64_t{1} << t.mvar())) continue;
      if (isolate_real_roots(to_dense(t, t.mvar())).empty()) {
        empty_reasons.push_back(t.to_string() + " has no real root");
        pruned = true;
        break;
      }
    }
    if (pruned) continue;

    std::optional<std::uint64_t> forced;
    const Polynomial* definite = nullptr;
    for (const auto& t : T.polys()) {
      auto f = definite_zero_vars(t);
      if (f && *f) {
        forced = f;
        definite = &t;
        break;
      }
    }
    if (forced && *forced == ~std::uint64_t{0}) {
      empty_reasons.push_back(definite->to_string() + " is positive definite");
      continue;
    }
    if (forced && depth < 8) {
      // over R the system lives in the coordinate subspace where the forced variables vanish
      SAS sub{order, T.polys(), N, P, sys.inequations};
      for (const auto& h : T.base().inits()) sub.H.push_back(h);
      std::string zeros;
      for (Var v = 0; v < n; ++v)
        if ((*forced >> v) & 1U) {
          sub.F.push_back(Polynomial::variable(order, v));
          zeros += (zeros.empty() ? "" : ", ") + order->name(v) + " = 0";
        }
      RealVerdict rv = decide_sas(sub, options, depth + 1);
      if (rv.status == RealStatus::NonEmpty) return rv;
      std::string why = "real zeros of " + definite->to_string() + " need " + zeros + ", then " + rv.reason;
      (rv.status == RealStatus::Empty ? empty_reasons : unknown_reasons).push_back(why);
      continue;
    }

    std::uint64_t algebraic = T.base().main_vars();
    std::uint64_t used = 0;
    for (const auto& t : T.polys()) used |= t.support();
    for (const auto& h : sys.inequations) used |= h.support();
    for (const auto& p : N) used |= p.support();
    for (const auto& p : P) used |= p.support();
    std::vector<Var> free;
    for (Var v = 0; v < n; ++v)
      if (!((algebraic >> v) & 1U)) free.push_back(v);
    std::vector<Var> active;
    for (Var v : free)
      if ((used >> v) & 1U) active.push_back(v);

    bool zero_dim = active.empty();
    unsigned attempts = zero_dim ? 1 : std::max(1u, options.samples);
    auto seq = small_sequence(attempts + active.size() + 1);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    bool found = false, all_decided = true;
    std::string last_reason;
    for (unsigned k = 0; k < attempts && !found; ++k) {
      std::map<Var, Rational> values;
      for (Var v : free) values[v] = 0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (k < attempts / 2) {
          values[active[i]] = seq[(k + i) % (k + 1)];
        } else {
          Rational q(num(rng), den(rng));
          q.canonicalize();
          values[active[i]] = q;
        }
      }
      RealPoints pts;
      try {
        pts = real_points_of_chain(T, values, sys.inequations, options);
      } catch (const std::exception& e) {
        all_decided = false;
        last_reason = e.what();
        continue;
      }
      if (!pts.complete) {
        all_decided = false;
        last_reason = pts.reason;
      }
      for (auto& box : pts.boxes) {
        auto c = check_signs(box, N, P, options.refine_rounds);
        if (!c.decided) {
          all_decided = false;
          last_reason = "sign condition undecided";
        }
        if (c.satisfied) {
          verdict.status = RealStatus::NonEmpty;
          verdict.witness = box;
          verdict.reason = "witness on " + T.to_string();
          return verdict;
        }
      }
    }
    if (zero_dim && all_decided) {
      empty_reasons.push_back("no admissible real point of " + T.to_string());
    } else {
      unknown_reasons.push_back(zero_dim ? last_reason : "no real sample found on " + T.to_string());
    }
  }
  if (unknown_reasons.empty()) {
    verdict.status = RealStatus::Empty;
    verdict.reason = empty_reasons.empty() ? "empty" : empty_reasons.front();
    for (std::size_t i = 1; i < empty_reasons.size(); ++i) verdict.reason += "; " + empty_reasons[i];
  } else {
    verdict.status = RealStatus::Unknown;
    verdict.reason = unknown_reasons.front();
  }
  return verdict;
}

}  // namespace

Polynomial border_polynomial(const RegularChain& T, const std::vector<Polynomial>& H) {
  std::vector<Polynomial> factors;
  const auto& polys = T.polys();
  for (const auto& t : polys) factors.push_back(res_chain(derivative(t), polys));
  for (const auto& h : H) factors.push_back(res_chain(h, polys));
  Polynomial bp(T.order(), Rational(1));
  for (auto f : factors) {
    if (f.is_zero()) throw std::invalid_argument("border_polynomial: not a regular system");
    if (f.is_constant()) continue;
    f = squarefree_part(f);
    Polynomial g = gcd(bp, f);
    bp *= exact_divide(f, g);
  }
  return normalize(bp);
}

}  // namespace lieiso
