#include "lieiso/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace lieiso {

// ---------------------------------------------------------------- VarOrder

VarOrder::VarOrder(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxVars)
    throw std::invalid_argument("at most " + std::to_string(kMaxVars) + " variables supported");
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable '" + names_[i] + "'");
}

std::optional<Var> VarOrder::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

Var VarOrder::at(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw std::out_of_range("unknown variable '" + std::string(name) + "'");
}

VarOrderPtr make_order(std::vector<std::string> names) {
  return std::make_shared<const VarOrder>(std::move(names));
}

// ------------------------------------------------------------- PolyBuilder

/// Accumulates terms in arbitrary order and produces the canonical form.
class PolyBuilder {
 public:
  explicit PolyBuilder(VarOrderPtr order) : order_(std::move(order)), n_(order_ ? order_->size() : 0) {}

  void reserve(std::size_t terms) {
    exps_.reserve(terms * n_);
    coefs_.reserve(terms);
  }
  Exponent* push(Rational c) {
    coefs_.push_back(std::move(c));
    exps_.resize(exps_.size() + n_);
    return exps_.data() + exps_.size() - n_;
  }

  Polynomial finish() {
    Polynomial out(order_);
    const std::size_t m = coefs_.size();
    std::vector<std::uint32_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    const Exponent* base = exps_.data();
    const std::size_t n = n_;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::lexicographical_compare(base + b * n, base + b * n + n, base + a * n, base + a * n + n);
    });
    out.exps_.reserve(m * n);
    out.coefs_.reserve(m);
    std::size_t i = 0;
    while (i < m) {
      std::size_t j = i + 1;
      Rational acc = coefs_[idx[i]];
      while (j < m && std::equal(base + idx[i] * n, base + idx[i] * n + n, base + idx[j] * n)) {
        acc += coefs_[idx[j]];
        ++j;
      }
      if (acc != 0) {
        out.exps_.insert(out.exps_.end(), base + idx[i] * n, base + idx[i] * n + n);
        out.coefs_.push_back(std::move(acc));
      }
      i = j;
    }
    return out;
  }

 private:
  VarOrderPtr order_;
  std::size_t n_;
  std::vector<Exponent> exps_;
  std::vector<Rational> coefs_;
};

namespace {

Exponent checked_add(unsigned a, unsigned b) {
  unsigned s = a + b;
  if (s > 0xFFFFu) throw std::overflow_error("exponent overflow");
  return static_cast<Exponent>(s);
}

}  // namespace

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(VarOrderPtr order, const Rational& c) : order_(std::move(order)) {
  if (c != 0) {
    exps_.assign(nvars(), 0);
    coefs_.push_back(c);
  }
}

Polynomial Polynomial::variable(VarOrderPtr order, Var v, unsigned degree) {
  if (v >= order->size()) throw std::out_of_range("variable rank out of range");
  Polynomial p(order);
  p.exps_.assign(order->size(), 0);
  p.exps_[order->size() - 1 - v] = checked_add(degree, 0);
  p.coefs_.emplace_back(1);
  return p;
}

Polynomial Polynomial::monomial(VarOrderPtr order, std::span<const unsigned> exps, const Rational& c) {
  if (exps.size() != order->size()) throw std::invalid_argument("exponent vector arity mismatch");
  Polynomial p(order);
  if (c == 0) return p;
  p.exps_.resize(order->size());
  for (std::size_t v = 0; v < exps.size(); ++v) p.exps_[order->size() - 1 - v] = checked_add(exps[v], 0);
  p.coefs_.push_back(c);
  return p;
}

bool Polynomial::is_constant() const {
  if (coefs_.empty()) return true;
  if (coefs_.size() > 1) return false;
  return std::all_of(exps_.begin(), exps_.end(), [](Exponent e) { return e == 0; });
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw std::logic_error("constant_value of non-constant polynomial");
  return coefs_.empty() ? Rational(0) : coefs_[0];
}

Rational Polynomial::constant_term() const {
  if (coefs_.empty()) return 0;
  auto last = row(size() - 1);
  if (std::all_of(last.begin(), last.end(), [](Exponent e) { return e == 0; })) return coefs_.back();
  return 0;
}

Var Polynomial::mvar() const {
  if (coefs_.empty()) throw std::logic_error("mvar of constant polynomial");
  auto r = row(0);
  for (std::size_t s = 0; s < r.size(); ++s)
    if (r[s] != 0) return nvars() - 1 - s;
  throw std::logic_error("mvar of constant polynomial");
}

unsigned Polynomial::degree(Var v) const {
  if (coefs_.empty()) return 0;
  const std::size_t n = nvars();
  const std::size_t s = n - 1 - v;
  unsigned d = 0;
  for (std::size_t t = 0; t < size(); ++t) d = std::max<unsigned>(d, exps_[t * n + s]);
  return d;
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (std::size_t t = 0; t < size(); ++t) {
    unsigned s = 0;
    for (Exponent e : row(t)) s += e;
    d = std::max(d, s);
  }
  return d;
}

std::uint64_t Polynomial::support() const {
  std::uint64_t mask = 0;
  const std::size_t n = nvars();
  for (std::size_t t = 0; t < size(); ++t)
    for (std::size_t s = 0; s < n; ++s)
      if (exps_[t * n + s]) mask |= std::uint64_t{1} << (n - 1 - s);
  return mask;
}

Polynomial Polynomial::coeff_in(Var v, unsigned k) const {
  Polynomial out(order_);
  const std::size_t n = nvars();
  const std::size_t s = n - 1 - v;
  for (std::size_t t = 0; t < size(); ++t) {
    if (exps_[t * n + s] != k) continue;
    out.exps_.insert(out.exps_.end(), exps_.begin() + t * n, exps_.begin() + (t + 1) * n);
    out.exps_[out.exps_.size() - n + s] = 0;
    out.coefs_.push_back(coefs_[t]);
  }
  return out;
}

std::vector<Polynomial> Polynomial::coefficients(Var v) const {
  std::vector<Polynomial> out(degree(v) + 1, Polynomial(order_));
  const std::size_t n = nvars();
  const std::size_t s = n - 1 - v;
  for (std::size_t t = 0; t < size(); ++t) {
    Polynomial& c = out[exps_[t * n + s]];
    c.exps_.insert(c.exps_.end(), exps_.begin() + t * n, exps_.begin() + (t + 1) * n);
    c.exps_[c.exps_.size() - n + s] = 0;
    c.coefs_.push_back(coefs_[t]);
  }
  return out;
}

Polynomial Polynomial::lcoeff(Var v) const { return coeff_in(v, degree(v)); }

const Rational& Polynomial::leading_numeric() const {
  if (coefs_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
  return coefs_[0];
}

void Polynomial::check_same(const Polynomial& q) const {
  if (order_ && q.order_ && order_ != q.order_ && order_->names() != q.order_->names()) throw OrderMismatch();
}

void Polynomial::adopt(const Polynomial& q) {
  if (!order_) {
    order_ = q.order_;
    if (!coefs_.empty()) {
      // A constant created without an order.
      exps_.assign(coefs_.size() * nvars(), 0);
    }
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& c : out.coefs_) c = -c;
  return out;
}

namespace {

template <bool Subtract>
void merge_into(const VarOrderPtr& order, std::vector<Exponent>& ex, std::vector<Rational>& co,
                const std::vector<Exponent>& qe, const std::vector<Rational>& qc) {
  const std::size_t n = order ? order->size() : 0;
  std::vector<Exponent> oe;
  std::vector<Rational> oc;
  oe.reserve(ex.size() + qe.size());
  oc.reserve(co.size() + qc.size());
  std::size_t i = 0, j = 0;
  const std::size_t a = co.size(), b = qc.size();
  while (i < a || j < b) {
    int cmp;
    if (i == a) cmp = 1;
    else if (j == b) cmp = -1;
    else {
      const Exponent* pi = ex.data() + i * n;
      const Exponent* qj = qe.data() + j * n;
      cmp = 0;
      for (std::size_t s = 0; s < n; ++s) {
        if (pi[s] != qj[s]) {
          cmp = pi[s] > qj[s] ? -1 : 1;
          break;
        }
      }
    }
    if (cmp < 0) {
      oe.insert(oe.end(), ex.begin() + i * n, ex.begin() + (i + 1) * n);
      oc.push_back(std::move(co[i]));
      ++i;
    } else if (cmp > 0) {
      oe.insert(oe.end(), qe.begin() + j * n, qe.begin() + (j + 1) * n);
      oc.push_back(Subtract ? Rational(-qc[j]) : qc[j]);
      ++j;
    } else {
      Rational c = Subtract ? Rational(co[i] - qc[j]) : Rational(co[i] + qc[j]);
      if (c != 0) {
        oe.insert(oe.end(), ex.begin() + i * n, ex.begin() + (i + 1) * n);
        oc.push_back(std::move(c));
      }
      ++i;
      ++j;
    }
  }
  ex.swap(oe);
  co.swap(oc);
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  check_same(q);
  adopt(q);
  if (q.coefs_.empty()) return *this;
  merge_into<false>(order_, exps_, coefs_, q.exps_.empty() && !q.coefs_.empty() && nvars() ? std::vector<Exponent>(nvars(), 0) : q.exps_, q.coefs_);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  check_same(q);
  adopt(q);
  if (q.coefs_.empty()) return *this;
  merge_into<true>(order_, exps_, coefs_, q.exps_.empty() && !q.coefs_.empty() && nvars() ? std::vector<Exponent>(nvars(), 0) : q.exps_, q.coefs_);
  return *this;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  p.check_same(q);
  VarOrderPtr order = p.order_ ? p.order_ : q.order_;
  Polynomial out(order);
  if (p.is_zero() || q.is_zero()) return out;
  const std::size_t n = order ? order->size() : 0;
  const Polynomial& small = p.size() <= q.size() ? p : q;
  const Polynomial& big = p.size() <= q.size() ? q : p;
  if (small.size() == 1) {
    // Monomial multiplication preserves the term order.
    out.exps_.resize(big.size() * n);
    out.coefs_.reserve(big.size());
    const Exponent* m = small.exps_.empty() ? nullptr : small.exps_.data();
    for (std::size_t t = 0; t < big.size(); ++t) {
      for (std::size_t s = 0; s < n; ++s)
        out.exps_[t * n + s] = checked_add(big.exps_[t * n + s], m ? m[s] : 0);
      out.coefs_.push_back(big.coefs_[t] * small.coefs_[0]);
    }
    return out;
  }
  PolyBuilder b(order);
  b.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      Exponent* e = b.push(p.coefs_[i] * q.coefs_[j]);
      for (std::size_t s = 0; s < n; ++s) e[s] = checked_add(p.exps_[i * n + s], q.exps_[j * n + s]);
    }
  }
  return b.finish();
}

Polynomial& Polynomial::operator*=(const Polynomial& q) { return *this = *this * q; }

bool operator==(const Polynomial& p, const Polynomial& q) {
  if (p.coefs_.size() != q.coefs_.size()) return false;
  if (p.coefs_.empty()) return true;
  p.check_same(q);
  return p.coefs_ == q.coefs_ && p.exps_ == q.exps_;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial(order_);
  Polynomial out = *this;
  for (auto& x : out.coefs_) x *= c;
  return out;
}

Polynomial Polynomial::shifted(Var v, unsigned k) const {
  if (k == 0) return *this;
  Polynomial out = *this;
  const std::size_t n = nvars();
  const std::size_t s = n - 1 - v;
  for (std::size_t t = 0; t < size(); ++t) out.exps_[t * n + s] = checked_add(out.exps_[t * n + s], k);
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(order_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e) base *= base;
  }
  return result;
}

Polynomial Polynomial::evaluate(const std::map<Var, Rational>& bindings) const {
  if (bindings.empty() || is_zero()) return *this;
  const std::size_t n = nvars();
  PolyBuilder b(order_);
  b.reserve(size());
  // Cache powers per bound variable.
  std::map<std::pair<Var, unsigned>, Rational> powers;
  auto power = [&](Var v, const Rational& x, unsigned e) -> const Rational& {
    auto key = std::make_pair(v, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= x;
    return powers.emplace(key, r).first->second;
  };
  for (std::size_t t = 0; t < size(); ++t) {
    Rational c = coefs_[t];
    for (const auto& [v, x] : bindings) {
      Exponent e = exps_[t * n + (n - 1 - v)];
      if (e) c *= power(v, x, e);
    }
    if (c == 0) continue;
    Exponent* row = b.push(std::move(c));
    std::copy(exps_.begin() + t * n, exps_.begin() + (t + 1) * n, row);
    for (const auto& kv : bindings) row[n - 1 - kv.first] = 0;
  }
  return b.finish();
}

Polynomial Polynomial::substitute(Var v, const Polynomial& q) const {
  check_same(q);
  auto cs = coefficients(v);
  Polynomial out(order_);
  for (std::size_t k = cs.size(); k-- > 0;) {
    out = out * q + cs[k];
  }
  return out;
}

Polynomial Polynomial::derivative(Var v) const {
  const std::size_t n = nvars();
  const std::size_t s = n - 1 - v;
  Polynomial out(order_);
  for (std::size_t t = 0; t < size(); ++t) {
    Exponent e = exps_[t * n + s];
    if (e == 0) continue;
    out.exps_.insert(out.exps_.end(), exps_.begin() + t * n, exps_.begin() + (t + 1) * n);
    out.exps_[out.exps_.size() - n + s] = static_cast<Exponent>(e - 1);
    out.coefs_.push_back(coefs_[t] * e);
  }
  return out;  // still sorted: decrementing one slot of rows that all contain it keeps order
}

Polynomial Polynomial::rebase(const VarOrderPtr& target) const {
  if (order_ == target) return *this;
  PolyBuilder b(target);
  const std::size_t n = nvars(), m = target->size();
  std::vector<std::size_t> map(n);
  for (Var v = 0; v < n; ++v) map[v] = target->at(order_->name(v));
  for (std::size_t t = 0; t < size(); ++t) {
    Exponent* row = b.push(coefs_[t]);
    std::fill(row, row + m, 0);
    for (Var v = 0; v < n; ++v) {
      Exponent e = exps_[t * n + (n - 1 - v)];
      if (e) row[m - 1 - map[v]] = e;
    }
  }
  return b.finish();
}

int Polynomial::compare(const Polynomial& a, const Polynomial& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  const std::size_t n = a.nvars();
  if (n != b.nvars()) return n < b.nvars() ? -1 : 1;
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t s = 0; s < n; ++s) {
      Exponent x = a.exps_[t * n + s], y = b.exps_[t * n + s];
      if (x != y) return x < y ? -1 : 1;
    }
    int c = cmp(a.coefs_[t], b.coefs_[t]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

std::size_t Polynomial::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (Exponent e : exps_) h = (h ^ e) * 1099511628211ULL;
  for (const auto& c : coefs_) {
    h = (h ^ std::hash<std::string>{}(c.get_str())) * 1099511628211ULL;
  }
  return h;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  const std::size_t n = nvars();
  for (std::size_t t = 0; t < size(); ++t) {
    Rational c = coefs_[t];
    bool neg = c < 0;
    if (neg) c = -c;
    if (t == 0) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    bool first = true;
    bool unit_monomial = true;
    for (std::size_t s = 0; s < n; ++s)
      if (exps_[t * n + s]) unit_monomial = false;
    if (c != 1 || unit_monomial) {
      os << c.get_str();
      first = false;
    }
    // Variables in ascending rank.
    for (std::size_t s = n; s-- > 0;) {
      Exponent e = exps_[t * n + s];
      if (!e) continue;
      if (!first) os << '*';
      os << order_->name(n - 1 - s);
      if (e > 1) os << '^' << e;
      first = false;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

Polynomial normalize(const Polynomial& p) {
  if (p.is_zero()) return p;
  Integer l = 1, g = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const Rational& c = p.coeff(t);
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational scale(l, g);
  scale.canonicalize();
  if (p.leading_numeric() < 0) scale = -scale;
  if (scale == 1) return p;
  return p.scaled(scale);
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarOrderPtr& order) : text_(text), order_(order) {}

  Polynomial parse() {
    skip();
    if (pos_ >= text_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+')) p += term();
      else if (eat('-')) p -= term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      if (eat('*')) {
        p *= unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          fail("division only by a nonzero constant");
        }
        p = p.scaled(1 / d.constant_value());
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected non-negative integer exponent");
      unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 0xFFFF) fail("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Polynomial(order_, Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      auto v = order_->find(name);
      if (!v) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return Polynomial::variable(order_, *v);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const VarOrderPtr& order_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const VarOrderPtr& order) {
  return Parser(text, order).parse();
}

std::vector<std::string> identifiers_in(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      std::string name(text.substr(start, i - start));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace lieiso
