#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lieiso/chains.hpp"
#include "lieiso/lie.hpp"
#include "lieiso/projection.hpp"
#include "lieiso/realsolve.hpp"

using namespace lieiso;
using Json = nlohmann::ordered_json;

namespace {

enum Exit : int {
  kIsomorphic = 0,
  kNotIsomorphic = 1,
  kUnknown = 2,
  kUsage = 3,
  kValidation = 64,
  kParse = 65,
  kInput = 66,
  kInternal = 70,
};

struct Failure {
  int code;
  std::string message;
};

struct Config {
  std::string field = "C";
  bool json = false;
  std::uint64_t seed = 1;
  std::size_t max_chains = 0, max_bits = 0, max_steps = 0;
  unsigned refine_rounds = 0, samples = 0;
  unsigned jobs = 1;

  Budget budget;
  RealOptions real;
  Field decision_field() const { return field == "R" ? Field::Real : Field::Complex; }
};

// Defaults per LIEISO_BUDGET_PRESET; explicit flags win.
void apply_preset(Config& c) {
  const char* env = std::getenv("LIEISO_BUDGET_PRESET");
  std::string preset = env ? env : "desk";
  if (preset == "desk") {
    c.budget = Budget{};
    c.real.refine_rounds = 256;
    c.real.samples = 64;
  } else if (preset == "ci") {
    c.budget = Budget{5000, 1u << 14, 1'000'000};
    c.real.refine_rounds = 128;
    c.real.samples = 32;
  } else if (preset == "long") {
    c.budget = Budget{200000, 1u << 20, 100'000'000};
    c.real.refine_rounds = 1024;
    c.real.samples = 256;
  } else {
    throw Failure{kUsage, "LIEISO_BUDGET_PRESET must be desk, ci or long (got '" + preset + "')"};
  }
  if (c.max_chains) c.budget.max_chains = c.max_chains;
  if (c.max_bits) c.budget.max_bits = c.max_bits;
  if (c.max_steps) c.budget.max_steps = c.max_steps;
  if (c.refine_rounds) c.real.refine_rounds = c.refine_rounds;
  if (c.samples) c.real.samples = c.samples;
  c.real.seed = c.seed;
  c.real.budget = c.budget;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kInput, "cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

LieAlgebra load_algebra(const std::string& path) {
  std::string text = read_file(path);
  LieAlgebra L;
  try {
    L = parse_lie(text);
  } catch (const LieParseError& e) {
    throw Failure{kParse, path + ": " + e.what()};
  }
  Validation v = validate(L);
  if (!v.ok) {
    std::string msg = path + ": not a Lie algebra";
    for (const auto& r : v.residuals) msg += "\n  " + r;
    throw Failure{kValidation, msg};
  }
  return L;
}

IsoOptions iso_options(const Config& c) {
  IsoOptions o;
  o.budget = c.budget;
  o.real = c.real;
  return o;
}

std::string status_name(IsoStatus s) { return to_string(s); }

int exit_of(IsoStatus s) {
  switch (s) {
    case IsoStatus::Isomorphic: return kIsomorphic;
    case IsoStatus::NotIsomorphic: return kNotIsomorphic;
    default: return kUnknown;
  }
}

std::string poly_text(const DenseInt& c, const std::string& var) {
  return from_dense(c, make_order({var}), 0).to_string();
}

Json strings(const std::vector<Polynomial>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

// ---------------------------------------------------------------- iso

Json matrix_json(const AlgebraicMatrix& M) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < M.n; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < M.n; ++c) row.push_back(M.entry_string(r, c, "t"));
    rows.push_back(row);
  }
  return rows;
}

Json algebraic_json(const AlgebraicMatrix& M) {
  if (M.rational()) return nullptr;
  Json a;
  a["generator"] = "t";
  a["modulus"] = poly_text(M.modulus, "t");
  if (M.real_root)
    a["interval"] = Json{{"lo", to_string(M.real_root->lo)}, {"hi", to_string(M.real_root->hi)}};
  else
    a["interval"] = nullptr;
  return a;
}

Json verdict_json(const IsoVerdict& v) {
  Json j;
  j["status"] = status_name(v.status);
  j["field"] = v.field == Field::Real ? "R" : "C";
  j["matrix"] = v.matrix ? matrix_json(*v.matrix) : Json(nullptr);
  j["algebraic"] = v.matrix ? algebraic_json(*v.matrix) : Json(nullptr);
  j["parameter_conditions"] = nullptr;
  j["evidence"] = Json{{"summary", v.evidence}};
  return j;
}

void print_verdict(std::ostream& out, const IsoVerdict& v) {
  out << status_name(v.status) << " over " << (v.field == Field::Real ? "R" : "C") << "\n";
  if (v.matrix) {
    out << "matrix (column i holds the image of e_i):\n";
    for (std::size_t r = 0; r < v.matrix->n; ++r) {
      out << "  [";
      for (std::size_t c = 0; c < v.matrix->n; ++c) out << (c ? ", " : "") << v.matrix->entry_string(r, c, "t");
      out << "]\n";
    }
    if (!v.matrix->rational()) {
      out << "where t is a root of " << poly_text(v.matrix->modulus, "t");
      if (v.matrix->real_root)
        out << " in (" << to_string(v.matrix->real_root->lo) << ", " << to_string(v.matrix->real_root->hi) << ")";
      out << "\n";
    }
  }
  out << "evidence: " << v.evidence << "\n";
}

IsoVerdict decide(const LieAlgebra& L, const LieAlgebra& Lp, const Config& c) {
  if (!L.params.empty() || !Lp.params.empty()) throw Failure{kUsage, "parametric algebra: use iso-param"};
  if (L.dim() != Lp.dim()) {
    IsoVerdict v;
    v.status = IsoStatus::NotIsomorphic;
    v.field = c.decision_field();
    v.evidence = "dimensions differ";
    return v;
  }
  return c.decision_field() == Field::Real ? is_isomorphic_real(L, Lp, iso_options(c))
                                           : is_isomorphic_complex(L, Lp, iso_options(c));
}

int cmd_iso(const std::string& a, const std::string& b, const Config& c) {
  LieAlgebra L = load_algebra(a), Lp = load_algebra(b);
  IsoVerdict v = decide(L, Lp, c);
  if (c.json)
    std::cout << verdict_json(v).dump(2) << "\n";
  else
    print_verdict(std::cout, v);
  return exit_of(v.status);
}

// ---------------------------------------------------------- iso-param

std::vector<std::string> parameter_names(const VarOrderPtr& order, std::size_t r) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < r; ++i) names.push_back(order->name(static_cast<Var>(i)));
  return names;
}

Json rationals(const std::vector<Rational>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_string(x));
  return a;
}

int cmd_iso_param(const std::string& a, const std::string& b, const Config& c) {
  LieAlgebra L = load_algebra(a), Lp = load_algebra(b);
  if (L.dim() != Lp.dim()) throw Failure{kUsage, "dimensions differ"};
  IsoOptions opt = iso_options(c);
  Json j;
  j["field"] = c.field;
  j["matrix"] = nullptr;
  j["algebraic"] = nullptr;
  Json cond;
  Json blocks = Json::array();
  IsoStatus status;
  std::ostringstream human;
  if (c.decision_field() == Field::Complex) {
    ConstructibleSet S = param_iso_complex(L, Lp, opt);
    cond["parameters"] = parameter_names(S.order, S.params);
    for (const auto& blk : S.blocks) {
      Json e;
      e["equations"] = strings(blk.equations);
      e["inequations"] = strings(blk.inequations);
      e["sign_conditions"] = Json{{"ge", Json::array()}, {"gt", Json::array()}};
      e["status"] = "in";
      blocks.push_back(e);
    }
    status = S.blocks.empty() ? IsoStatus::NotIsomorphic : IsoStatus::Isomorphic;
    human << S.to_string() << "\n";
  } else {
    RealProjectionOptions popt;
    popt.real = c.real;
    RealRegion R = param_iso_real(L, Lp, popt, opt);
    cond["parameters"] = parameter_names(R.order, R.params);
    cond["cell_decomposition"] = R.cell_decomposition;
    bool any_in = false, all_out = true;
    for (const auto& cell : R.cells) {
      Json e;
      e["equations"] = strings(cell.equations);
      e["inequations"] = strings(cell.inequations);
      e["sign_conditions"] = Json{{"ge", strings(cell.nonnegative)}, {"gt", strings(cell.positive)}};
      e["status"] = to_string(cell.status);
      e["sample"] = rationals(cell.sample);
      e["provenance"] = cell.provenance;
      blocks.push_back(e);
      any_in |= cell.status == CellStatus::In;
      all_out &= cell.status == CellStatus::Out;
      human << to_string(cell.status) << ":";
      for (const auto& p : cell.equations) human << " " << p << " = 0";
      for (const auto& p : cell.nonnegative) human << " " << p << " >= 0";
      for (const auto& p : cell.positive) human << " " << p << " > 0";
      for (const auto& p : cell.inequations) human << " " << p << " != 0";
      if (!cell.sample.empty()) {
        human << "  sample (";
        for (std::size_t i = 0; i < cell.sample.size(); ++i) human << (i ? ", " : "") << to_string(cell.sample[i]);
        human << ")";
      }
      human << "\n";
    }
    status = any_in ? IsoStatus::Isomorphic : all_out ? IsoStatus::NotIsomorphic : IsoStatus::Unknown;
  }
  cond["blocks"] = blocks;
  j = Json{{"status", status_name(status)}, {"field", c.field}, {"matrix", nullptr}, {"algebraic", nullptr},
           {"parameter_conditions", cond},
           {"evidence", Json{{"summary", "isomorphic exactly for the parameter values in parameter_conditions"}}}};
  if (c.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << status_name(status) << " over " << c.field << " for the parameter values below\n";
    if (cond["parameters"].empty()) {
      std::cout << "no parameters\n";
    } else {
      std::cout << "parameters:";
      for (const auto& n : cond["parameters"]) std::cout << " " << n.get<std::string>();
      std::cout << "\n";
    }
    std::cout << human.str();
  }
  return exit_of(status);
}

// -------------------------------------------------------------- solve

struct SystemFile {
  VarOrderPtr order;
  std::vector<Polynomial> F, N, P, H;
};

// Lines "lhs op rhs" with op one of = >= > <= < !=, an optional
// "vars a b c" line (lowest first) and # comments. Without a vars line the
// variables are ranked alphabetically.
SystemFile parse_system(const std::string& path) {
  std::string text = read_file(path);
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      lines.push_back(line);
    }
  }
  std::vector<std::string> names;
  std::set<std::string> seen;
  bool explicit_vars = false;
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    std::string word;
    if (!(in >> word)) continue;
    if (word == "vars") {
      if (explicit_vars) throw Failure{kParse, path + ":" + std::to_string(i + 1) + ":1: duplicate vars line"};
      explicit_vars = true;
      names.clear();
      while (in >> word) names.push_back(word);
    }
  }
  if (!explicit_vars) {
    for (const auto& line : lines) {
      std::istringstream in(line);
      std::string first;
      if (!(in >> first) || first == "vars") continue;
      for (std::sregex_iterator it(line.begin(), line.end(), ident), end; it != end; ++it) seen.insert(it->str());
    }
    names.assign(seen.begin(), seen.end());
  }
  SystemFile S;
  S.order = make_order(names);
  static const char* ops[] = {">=", "<=", "!=", ">", "<", "="};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    std::istringstream in(line);
    std::string first;
    if (!(in >> first) || first == "vars") continue;
    std::size_t at = std::string::npos;
    std::string op;
    for (const char* o : ops) {
      auto k = line.find(o);
      if (k != std::string::npos && k < at) {
        at = k;
        op = o;
      } else if (k != std::string::npos && k == at && std::string(o).size() > op.size()) {
        op = o;
      }
    }
    if (at == std::string::npos)
      throw Failure{kParse, path + ":" + std::to_string(i + 1) + ":1: expected one of = >= > <= < !="};
    Polynomial lhs, rhs;
    try {
      lhs = parse_polynomial(line.substr(0, at), S.order);
      rhs = parse_polynomial(line.substr(at + op.size()), S.order);
    } catch (const std::exception& e) {
      throw Failure{kParse, path + ":" + std::to_string(i + 1) + ": " + e.what()};
    }
    Polynomial d = lhs - rhs;
    if (op == "=") S.F.push_back(d);
    else if (op == ">=") S.N.push_back(d);
    else if (op == "<=") S.N.push_back(-d);
    else if (op == ">") S.P.push_back(d);
    else if (op == "<") S.P.push_back(-d);
    else S.H.push_back(d);
  }
  return S;
}

int cmd_solve(const std::string& path, bool real, const Config& c) {
  SystemFile S = parse_system(path);
  if (real) {
    RealVerdict v = sas_has_real_solution(SAS{S.order, S.F, S.N, S.P, S.H}, c.real);
    // narrow enough for the printed decimals to be exact
    if (v.witness && !v.witness->all_exact()) v.witness->refine(48);
    Json j;
    j["status"] = to_string(v.status);
    j["reason"] = v.reason;
    j["witness"] = nullptr;
    if (v.witness) {
      Json w;
      for (std::size_t k = 0; k < S.order->size(); ++k) {
        const auto& iv = v.witness->coords[k];
        w[S.order->name(static_cast<Var>(k))] = Json{{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}};
      }
      j["witness"] = w;
    }
    if (c.json) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << to_string(v.status) << "\n";
      if (!v.reason.empty()) std::cout << "reason: " << v.reason << "\n";
      if (v.witness) {
        std::cout << "witness:\n";
        for (std::size_t k = 0; k < S.order->size(); ++k) {
          const auto& iv = v.witness->coords[k];
          std::cout << "  " << S.order->name(static_cast<Var>(k)) << " ~ " << to_decimal(midpoint(iv.lo, iv.hi)) << " in ["
                    << to_string(iv.lo) << ", " << to_string(iv.hi) << "]\n";
        }
      }
    }
    return v.status == RealStatus::NonEmpty ? 0 : v.status == RealStatus::Empty ? 1 : 2;
  }
  if (!S.N.empty() || !S.P.empty()) throw Failure{kUsage, "inequalities need --real"};
  std::vector<RegularSystem> systems;
  if (S.H.empty()) {
    for (auto& T : triangularize(S.F, c.budget).chains) systems.push_back({std::move(T), {}});
  } else {
    systems = decompose(S.F, S.H, c.budget);
  }
  Json chains = Json::array();
  for (const auto& rs : systems) {
    Polynomial h = rs.chain.base().init_product();
    for (const auto& q : rs.inequations) h = h * q;
    Json e;
    e["polys"] = strings(rs.chain.polys());
    e["inequation"] = h.to_string();
    e["inequations"] = strings(rs.inequations);
    chains.push_back(e);
  }
  Json j;
  j["variables"] = S.order->names();
  j["chains"] = chains;
  if (c.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << systems.size() << (systems.size() == 1 ? " chain" : " chains") << "\n";
    for (std::size_t k = 0; k < systems.size(); ++k) {
      std::cout << "chain " << k + 1 << ": " << systems[k].chain.to_string();
      if (!systems[k].inequations.empty()) {
        std::cout << " with";
        for (const auto& q : systems[k].inequations) std::cout << " " << q << " != 0";
      }
      std::cout << "\n";
    }
  }
  return systems.empty() ? 1 : 0;
}

// -------------------------------------------------------------- check

int cmd_check(const std::string& path, const Config& c) {
  LieAlgebra L = load_algebra(path);
  Json j;
  j["dim"] = L.dim();
  j["params"] = L.params;
  j["valid"] = true;
  if (L.params.empty()) {
    Invariants inv = invariants(L);
    j["derived_series"] = inv.derived;
    j["lower_central_series"] = inv.lower_central;
    j["center"] = inv.center;
  }
  if (c.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "valid Lie algebra of dimension " << L.dim() << "\n";
    if (L.params.empty()) {
      Invariants inv = invariants(L);
      std::cout << "derived series:";
      for (auto d : inv.derived) std::cout << " " << d;
      std::cout << "\nlower central series:";
      for (auto d : inv.lower_central) std::cout << " " << d;
      std::cout << "\ncenter: " << inv.center << "\n";
    }
  }
  return 0;
}

// -------------------------------------------------------------- batch

struct BatchResult {
  std::string a, b;
  int code = kInternal;
  Json verdict;
  std::string error;
};

int cmd_batch(const std::string& list, const Config& c) {
  std::string text = read_file(list);
  const auto base = std::filesystem::path(list).parent_path();
  std::vector<BatchResult> results;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    BatchResult r;
    if (!(words >> r.a)) continue;
    if (!(words >> r.b)) throw Failure{kParse, list + ": each line needs two .lie paths"};
    for (auto* p : {&r.a, &r.b})
      if (std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
    results.push_back(std::move(r));
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k; (k = next++) < results.size();) {
      BatchResult& r = results[k];
      try {
        IsoVerdict v = decide(load_algebra(r.a), load_algebra(r.b), c);
        r.verdict = verdict_json(v);
        r.code = exit_of(v.status);
      } catch (const Failure& f) {
        r.code = f.code;
        r.error = f.message;
      } catch (const std::exception& e) {
        r.code = kInternal;
        r.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, c.jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int worst = 0;
  Json all = Json::array();
  for (const auto& r : results) {
    if (r.code > kUnknown) worst = std::max(worst, r.code);
    else if (r.code == kUnknown && worst < kUnknown) worst = kUnknown;
    if (c.json) {
      Json e{{"a", r.a}, {"b", r.b}};
      if (r.error.empty()) e["verdict"] = r.verdict;
      else e["error"] = r.error;
      all.push_back(e);
    } else {
      std::cout << r.a << " " << r.b << ": "
                << (r.error.empty() ? r.verdict["status"].get<std::string>() : "error: " + r.error) << "\n";
    }
  }
  if (c.json) std::cout << all.dump(2) << "\n";
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact isomorphism tests for finite-dimensional Lie algebras, plus the polynomial system solvers behind them.\n"
               "Exit codes: 0 isomorphic / nonempty, 1 not isomorphic / empty, 2 unknown, 3 usage error,\n"
               "64 invalid Lie algebra, 65 parse error, 66 unreadable input, 70 internal error.\n"
               "Budget defaults come from LIEISO_BUDGET_PRESET (desk, ci or long; default desk)."};
  app.require_subcommand(1);
  Config cfg;
  auto common = [&](CLI::App* sub, bool field) {
    if (field) sub->add_option("--field", cfg.field, "C or R")->check(CLI::IsMember({"C", "R"}));
    sub->add_flag("--json", cfg.json, "machine-readable output");
    sub->add_option("--seed", cfg.seed, "seed for real sampling");
    sub->add_option("--max-chains", cfg.max_chains, "chain budget (desk 20000)");
    sub->add_option("--max-bits", cfg.max_bits, "coefficient size budget in bits (desk 65536)");
    sub->add_option("--max-steps", cfg.max_steps, "elementary step budget (desk 5000000)");
    sub->add_option("--refine-rounds", cfg.refine_rounds, "bisections per certification (desk 256)");
    sub->add_option("--samples", cfg.samples, "free-variable samples per chain (desk 64)");
  };
  std::string a, b, file;
  bool real = false;

  auto* iso = app.add_subcommand("iso", "decide whether two parameter-free algebras are isomorphic");
  iso->add_option("a", a, "first .lie file")->required();
  iso->add_option("b", b, "second .lie file")->required();
  common(iso, true);

  auto* param = app.add_subcommand("iso-param", "parameter values for which two algebras are isomorphic");
  param->add_option("a", a, "first .lie file")->required();
  param->add_option("b", b, "second .lie file")->required();
  common(param, true);

  auto* solve = app.add_subcommand("solve", "triangular decomposition or real solvability of a system file");
  solve->add_option("file", file, "system file")->required();
  solve->add_flag("--real", real, "decide real solvability instead");
  common(solve, false);

  auto* check = app.add_subcommand("check", "parse and validate one .lie file");
  check->add_option("file", file, ".lie file")->required();
  common(check, false);

  auto* batch = app.add_subcommand(
      "batch", "run iso on every pair listed in a file (two paths per line); exits 2 if any pair is unknown");
  batch->add_option("list", file, "pair list")->required();
  batch->add_option("--jobs", cfg.jobs, "pairs decided concurrently")->check(CLI::PositiveNumber);
  common(batch, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    apply_preset(cfg);
    if (*iso) return cmd_iso(a, b, cfg);
    if (*param) return cmd_iso_param(a, b, cfg);
    if (*solve) return cmd_solve(file, real, cfg);
    if (*check) return cmd_check(file, cfg);
    if (*batch) return cmd_batch(file, cfg);
  } catch (const Failure& f) {
    std::cerr << "lieiso: " << f.message << "\n";
    return f.code;
  } catch (const BudgetExceeded& e) {
    std::cerr << "lieiso: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "lieiso: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
