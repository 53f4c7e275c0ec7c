// core/src/report.cpp
//
// Config parsing, task validation/execution, and report persistence.
// Validation is strictly front-loaded: run() resolves every expression,
// symbol reference, and per-task parameter before the first task executes,
// so configuration errors can never leave partial work or partial files
// behind. Emitted file bodies contain only (config, seed)-deterministic
// content; wall-clock time never enters them.

#include "hardylab/report.hpp"

#include "hardylab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace hardylab {

namespace {

std::string strprintf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

std::string fmt17(double v) { return strprintf("%.17g", v); }

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void cfg_fail(int line, const std::string& msg) {
  if (line > 0) throw ConfigError(strprintf("config line %d: ", line) + msg);
  throw ConfigError(msg);
}

}  // namespace

// ------------------------------------------------------------- config parse

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  enum class Sect { top, symbols, task };
  Sect sect = Sect::top;
  std::set<std::string> task_ids, symbol_names;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') cfg_fail(lineno, "unterminated section header");
      const std::string head = trim(line.substr(1, line.size() - 2));
      if (head == "symbols") {
        sect = Sect::symbols;
      } else if (head.rfind("task", 0) == 0 &&
                 (head.size() == 4 || std::isspace(static_cast<unsigned char>(head[4])))) {
        const std::string id = trim(head.substr(4));
        if (id.empty()) cfg_fail(lineno, "task section needs an id: [task <id>]");
        if (!task_ids.insert(id).second) cfg_fail(lineno, "duplicate task id '" + id + "'");
        cfg.tasks.push_back(TaskConfig{id, "", {}});
        sect = Sect::task;
      } else {
        cfg_fail(lineno, "unknown section [" + head + "] (expected [symbols] or [task <id>])");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) cfg_fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) cfg_fail(lineno, "empty key");

    switch (sect) {
      case Sect::top: {
        if (key == "output_dir") cfg.output_dir = val;
        else if (key == "preset") cfg.preset = val;
        else if (key == "seed") {
          char* end = nullptr;
          cfg.seed = std::strtoull(val.c_str(), &end, 10);
          if (end == val.c_str() || *end != '\0') cfg_fail(lineno, "seed must be an integer");
        } else {
          cfg_fail(lineno, "unknown top-level key '" + key +
                               "' (known: output_dir, seed, preset)");
        }
        break;
      }
      case Sect::symbols: {
        if (!symbol_names.insert(key).second)
          cfg_fail(lineno, "symbol '" + key + "' defined twice");
        if (val.empty()) cfg_fail(lineno, "symbol '" + key + "' has an empty expression");
        cfg.symbols.emplace_back(key, val);
        break;
      }
      case Sect::task: {
        TaskConfig& t = cfg.tasks.back();
        if (key == "type") {
          t.type = val;
        } else {
          if (t.kv.count(key))
            cfg_fail(lineno, "task '" + t.id + "': key '" + key + "' given twice");
          t.kv[key] = val;
        }
        break;
      }
    }
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_text(body.str());
}

// ---------------------------------------------------------------- preset

RunConfig paper_suite_config() {
  RunConfig cfg;
  cfg.preset = "paper-suite";
  return cfg;
}

namespace {

// The curated reproduction run: identity suite, the compact/noncompact
// window-spectrum families, the disjoint-vs-jump discrimination pairs, the
// cancellation pair in both flavors, and the two dilation-residual curves.
void expand_paper_suite(RunConfig& cfg, std::map<std::string, Symbol>& table,
                        std::vector<std::pair<std::string, std::string>>& echo) {
  auto sym = [&](const char* n, const char* e) {
    cfg.symbols.emplace_back(n, e);
  };
  sym("ps_arcA", "arc(-0.5, 0.5)");
  sym("ps_arcB", "arc(pi - 0.5, pi + 0.5)");
  sym("ps_prodAB", "arc(-0.5, 0.5) * arc(pi - 0.5, pi + 0.5)");
  sym("ps_one", "1");
  sym("ps_arc01", "arc(0, 1)");
  sym("ps_arc01_neg", "-arc(0, 1)");
  sym("ps_arc01_x2", "2 * arc(0, 1)");
  sym("ps_arcPi", "arc(0, pi)");
  sym("ps_poly_f", "trigpoly(-3: 0.5, -1: 1, 2: 0.25)");
  sym("ps_poly_g", "trigpoly(-2: 0.3, 0: 1, 1: 0.5)");
  // not expressible in the grammar; built through the library
  table["ps_smooth2"] = Symbol::smooth_decay(2.0);
  echo.emplace_back("ps_smooth2", "<library> smooth_decay(2)");

  auto task = [&](const char* id, const char* type,
                  std::initializer_list<std::pair<const char*, const char*>> kvs) {
    TaskConfig t;
    t.id = id;
    t.type = type;
    for (const auto& [k, v] : kvs) t.kv[k] = v;
    cfg.tasks.push_back(std::move(t));
  };
  task("identities", "identities",
       {{"trials", "100"}, {"size", "64"}, {"degree", "8"}, {"tolerance", "1e-12"}});
  task("hartman_poly", "hartman",
       {{"symbol", "ps_poly_f"}, {"sizes", "256 512 1024"}, {"expect", "compact"}});
  task("hartman_smooth", "hartman",
       {{"symbol", "ps_smooth2"}, {"sizes", "256 512 1024"}, {"expect", "compact"}});
  task("hartman_arc", "hartman",
       {{"symbol", "ps_arcPi"}, {"sizes", "256 512 1024"}, {"expect", "noncompact"}});
  task("zheng_disjoint", "zheng",
       {{"f", "ps_arcA"}, {"g", "ps_arcB"}, {"expect", "compact"}});
  task("zheng_overlap", "zheng",
       {{"f", "ps_arc01"}, {"g", "ps_arc01"}, {"expect", "noncompact"}});
  task("product_disjoint", "product",
       {{"f", "ps_arcA"}, {"g", "ps_arcB"}, {"fg", "ps_prodAB"}, {"expect", "compact"}});
  task("product_jump", "product",
       {{"f", "ps_arcA"}, {"g", "ps_one"}, {"expect", "noncompact"}});
  task("cancel_exact", "sum_product",
       {{"f1", "ps_arc01"}, {"g1", "ps_one"}, {"f2", "ps_arc01_neg"},
        {"g2", "ps_one"}, {"expect", "compact"}});
  task("cancel_double", "sum_product",
       {{"f1", "ps_arc01"}, {"g1", "ps_one"}, {"f2", "ps_arc01_x2"},
        {"g2", "ps_one"}, {"expect", "noncompact"}});
  task("dilation_poly", "dilation",
       {{"f", "ps_poly_f"}, {"g", "ps_poly_g"}, {"theta", "0"}, {"size", "256"},
        {"jmin", "4"}, {"jmax", "10"}, {"expect", "decreasing"}});
  task("dilation_jump", "dilation",
       {{"f", "ps_arcA"}, {"g", "ps_one"}, {"theta", "0"}, {"size", "256"},
        {"jmin", "4"}, {"jmax", "10"}, {"expect", "bounded"}, {"floor", "1e-4"}});
}

// ------------------------------------------------------- task preparation

struct PreparedTask {
  TaskConfig tcfg;
  enum class Kind { identities, hartman, zheng, product, sum_product, dilation } kind;
  std::vector<Symbol> syms;         // positional, per kind
  std::optional<Symbol> prodA, prodB;
  std::vector<long> sizes;          // hartman window sizes
  RadialNet net;                    // sweep kinds
  DilationSpec dspec;
  double theta = 0.0;
  long dil_N = 256;
  std::vector<double> dil_radii;
  long trials = 100, size = 64, degree = 8;
  double tol = 1e-12;
  std::string expect;
  double noise = 1.5;
  double floor_val = 0.0;
};

const Symbol& need_symbol(const std::map<std::string, Symbol>& table,
                          const TaskConfig& t, const std::string& key) {
  auto kit = t.kv.find(key);
  if (kit == t.kv.end())
    throw ConfigError("task '" + t.id + "' (" + t.type + ") requires key '" + key + "'");
  auto sit = table.find(kit->second);
  if (sit == table.end())
    throw ConfigError("task '" + t.id + "' references undefined symbol '" +
                      kit->second + "'");
  return sit->second;
}

std::optional<Symbol> optional_symbol(const std::map<std::string, Symbol>& table,
                                      const TaskConfig& t, const std::string& key) {
  auto kit = t.kv.find(key);
  if (kit == t.kv.end()) return std::nullopt;
  auto sit = table.find(kit->second);
  if (sit == table.end())
    throw ConfigError("task '" + t.id + "' references undefined symbol '" +
                      kit->second + "'");
  return sit->second;
}

double kv_double(const TaskConfig& t, const std::string& key, double def) {
  auto it = t.kv.find(key);
  if (it == t.kv.end()) return def;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0')
    throw ConfigError("task '" + t.id + "': key '" + key + "' must be a number, got '" +
                      it->second + "'");
  return v;
}

long kv_long(const TaskConfig& t, const std::string& key, long def) {
  auto it = t.kv.find(key);
  if (it == t.kv.end()) return def;
  char* end = nullptr;
  const long v = std::strtol(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw ConfigError("task '" + t.id + "': key '" + key + "' must be an integer, got '" +
                      it->second + "'");
  return v;
}

std::vector<long> kv_longs(const TaskConfig& t, const std::string& key,
                           std::vector<long> def) {
  auto it = t.kv.find(key);
  if (it == t.kv.end()) return def;
  std::istringstream in(it->second);
  std::vector<long> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("task '" + t.id + "': key '" + key +
                        "' must be a list of integers, got '" + it->second + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw ConfigError("task '" + t.id + "': key '" + key + "' is empty");
  return out;
}

void check_keys(const TaskConfig& t, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : t.kv) {
    (void)v;
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok)
      throw ConfigError("task '" + t.id + "' (" + t.type + "): unknown key '" + k + "'");
  }
}

void check_expect(const TaskConfig& t, const std::string& expect,
                  std::initializer_list<const char*> allowed) {
  if (expect.empty()) return;
  for (const char* a : allowed)
    if (expect == a) return;
  std::string opts;
  for (const char* a : allowed) {
    if (!opts.empty()) opts += ", ";
    opts += a;
  }
  throw ConfigError("task '" + t.id + "': expect must be one of {" + opts + "}, got '" +
                    expect + "'");
}

void require_certifiable_or_cfg(const Symbol& s, const TaskConfig& t,
                                const std::string& role) {
  if (s.is_analytic()) return;
  try {
    require_window_certifiable(s, t.id.c_str());
  } catch (const uncertifiable_error& e) {
    throw ConfigError("task '" + t.id + "': symbol for '" + role +
                      "' has no certifiable window: " + e.what());
  }
}

Symbol product_or_cfg(const Symbol& a, const Symbol& b, const TaskConfig& t,
                      const std::string& what) {
  try {
    return multiply(a, b);
  } catch (const uncertifiable_error& e) {
    throw ConfigError("task '" + t.id + "': the product " + what +
                      " cannot be certified (" + e.what() +
                      "); provide it explicitly via the '" + what + "' key");
  }
}

RadialNet make_net(const TaskConfig& t, const std::vector<Symbol>& syms) {
  const long angles = kv_long(t, "angles", 64);
  const long jmin = kv_long(t, "jmin", 1);
  const long jmax = kv_long(t, "jmax", 12);
  const double eps = kv_double(t, "eps", 1e-6);
  if (angles < 1 || jmin < 1 || jmax < jmin)
    throw ConfigError("task '" + t.id + "': bad net parameters");
  return RadialNet::standard(collect_jump_angles(syms), static_cast<int>(angles),
                             static_cast<int>(jmin), static_cast<int>(jmax), eps);
}

PreparedTask prepare(const TaskConfig& t, const std::map<std::string, Symbol>& table) {
  PreparedTask pt;
  pt.tcfg = t;
  pt.expect = t.kv.count("expect") ? t.kv.at("expect") : "";

  if (t.type == "identities") {
    pt.kind = PreparedTask::Kind::identities;
    check_keys(t, {"trials", "size", "degree", "tolerance"});
    pt.trials = kv_long(t, "trials", 100);
    pt.size = kv_long(t, "size", 64);
    pt.degree = kv_long(t, "degree", 8);
    pt.tol = kv_double(t, "tolerance", 1e-12);
    if (pt.trials < 1 || pt.size < 16 || pt.degree < 1 || pt.degree > pt.size / 4)
      throw ConfigError("task '" + t.id + "': bad identity-suite parameters");
  } else if (t.type == "hartman") {
    pt.kind = PreparedTask::Kind::hartman;
    check_keys(t, {"symbol", "sizes", "expect"});
    check_expect(t, pt.expect, {"compact", "noncompact", "inconclusive"});
    pt.syms = {need_symbol(table, t, "symbol")};
    pt.sizes = kv_longs(t, "sizes", {256, 512, 1024});
    require_certifiable_or_cfg(pt.syms[0], t, "symbol");
  } else if (t.type == "zheng") {
    pt.kind = PreparedTask::Kind::zheng;
    check_keys(t, {"f", "g", "angles", "jmin", "jmax", "eps", "expect"});
    check_expect(t, pt.expect, {"compact", "noncompact", "inconclusive"});
    pt.syms = {need_symbol(table, t, "f"), need_symbol(table, t, "g")};
    require_certifiable_or_cfg(pt.syms[0].conj(), t, "f");
    require_certifiable_or_cfg(pt.syms[1], t, "g");
    pt.net = make_net(t, pt.syms);
  } else if (t.type == "product") {
    pt.kind = PreparedTask::Kind::product;
    check_keys(t, {"f", "g", "fg", "angles", "jmin", "jmax", "eps", "expect"});
    check_expect(t, pt.expect, {"compact", "noncompact", "inconclusive"});
    pt.syms = {need_symbol(table, t, "f"), need_symbol(table, t, "g")};
    pt.prodA = optional_symbol(table, t, "fg");
    if (!pt.prodA && !pt.syms[0].is_analytic() && !pt.syms[1].is_zero())
      pt.prodA = product_or_cfg(pt.syms[0], pt.syms[1], t, "fg");
    for (const Symbol& s : pt.syms) require_certifiable_or_cfg(s, t, "f/g");
    if (pt.prodA) require_certifiable_or_cfg(*pt.prodA, t, "fg");
    pt.net = make_net(t, pt.syms);
  } else if (t.type == "sum_product") {
    pt.kind = PreparedTask::Kind::sum_product;
    check_keys(t, {"f1", "g1", "f2", "g2", "f1g1", "f2g2", "angles", "jmin", "jmax",
                   "eps", "expect"});
    check_expect(t, pt.expect, {"compact", "noncompact", "inconclusive"});
    pt.syms = {need_symbol(table, t, "f1"), need_symbol(table, t, "g1"),
               need_symbol(table, t, "f2"), need_symbol(table, t, "g2")};
    pt.prodA = optional_symbol(table, t, "f1g1");
    pt.prodB = optional_symbol(table, t, "f2g2");
    const bool trivial = (pt.syms[0].is_analytic() || pt.syms[1].is_zero()) &&
                         (pt.syms[2].is_analytic() || pt.syms[3].is_zero());
    if (!trivial) {
      if (!pt.prodA) pt.prodA = product_or_cfg(pt.syms[0], pt.syms[1], t, "f1g1");
      if (!pt.prodB) pt.prodB = product_or_cfg(pt.syms[2], pt.syms[3], t, "f2g2");
      for (const Symbol& s : pt.syms) require_certifiable_or_cfg(s, t, "f/g");
      require_certifiable_or_cfg(*pt.prodA, t, "f1g1");
      require_certifiable_or_cfg(*pt.prodB, t, "f2g2");
    }
    pt.net = make_net(t, pt.syms);
  } else if (t.type == "dilation") {
    pt.kind = PreparedTask::Kind::dilation;
    check_keys(t, {"f", "g", "f1", "g1", "f2", "g2", "theta", "size", "jmin", "jmax",
                   "expect", "noise", "floor"});
    check_expect(t, pt.expect, {"decreasing", "bounded"});
    if (t.kv.count("f1")) {
      pt.dspec.terms.emplace_back(need_symbol(table, t, "f1"),
                                  need_symbol(table, t, "g1"));
      pt.dspec.terms.emplace_back(need_symbol(table, t, "f2"),
                                  need_symbol(table, t, "g2"));
    } else {
      pt.dspec.terms.emplace_back(need_symbol(table, t, "f"),
                                  need_symbol(table, t, "g"));
    }
    for (const auto& [f, g] : pt.dspec.terms) {
      require_certifiable_or_cfg(f, t, "hankel factor");
      require_certifiable_or_cfg(g, t, "toeplitz factor");
    }
    pt.theta = kv_double(t, "theta", 0.0);
    pt.dil_N = kv_long(t, "size", 256);
    const long jmin = kv_long(t, "jmin", 4);
    const long jmax = kv_long(t, "jmax", 10);
    if (pt.dil_N < 16 || pt.dil_N > 4096 || jmin < 1 || jmax < jmin)
      throw ConfigError("task '" + t.id + "': bad dilation parameters");
    for (long j = jmin; j <= jmax; ++j)
      pt.dil_radii.push_back(1.0 - std::ldexp(1.0, -static_cast<int>(j)));
    pt.noise = kv_double(t, "noise", 1.5);
    pt.floor_val = kv_double(t, "floor", 0.0);
    if (pt.expect == "bounded" && !t.kv.count("floor"))
      throw ConfigError("task '" + t.id + "': expect = bounded requires a 'floor' key");
  } else if (t.type.empty()) {
    throw ConfigError("task '" + t.id + "' has no 'type' key");
  } else {
    throw ConfigError("task '" + t.id + "': unknown type '" + t.type +
                      "' (known: identities, hartman, zheng, product, sum_product, "
                      "dilation)");
  }
  return pt;
}

// ---------------------------------------------------------- task execution

void finish_verdict_task(TaskResult& r, Verdict v, const PreparedTask& pt) {
  r.verdict = std::move(v);
  r.curves = std::move(r.verdict->evidence);
  r.verdict->evidence.clear();
  if (!pt.expect.empty()) {
    const bool met = pt.expect == outcome_name(r.verdict->outcome);
    r.ok = met;
    r.detail = r.verdict->summary +
               (met ? " [expected]" : " [EXPECTED " + pt.expect + "]");
  } else {
    r.detail = r.verdict->summary;
  }
}

TaskResult execute(const PreparedTask& pt, std::uint64_t seed) {
  TaskResult r;
  r.id = pt.tcfg.id;
  r.type = pt.tcfg.type;
  r.expect = pt.expect;

  switch (pt.kind) {
    case PreparedTask::Kind::identities: {
      const SuiteReport sr = identity_suite(seed, pt.trials, pt.size, pt.degree, pt.tol);
      r.suite = sr;
      r.ok = sr.all_pass;
      r.detail = strprintf(
          "identity suite: %ld trials at N=%ld, %s (loser floors %.3g / %.3g)",
          sr.trials, sr.N, sr.all_pass ? "all certified" : "FAILED",
          sr.commute_loser_min, sr.dilation_loser_min);
      break;
    }
    case PreparedTask::Kind::hartman:
      finish_verdict_task(r, hartman_verdict(pt.syms[0], pt.sizes), pt);
      break;
    case PreparedTask::Kind::zheng:
      finish_verdict_task(r, zheng_pair_verdict(pt.syms[0], pt.syms[1], pt.net), pt);
      break;
    case PreparedTask::Kind::product:
      finish_verdict_task(r, product_verdict(pt.syms[0], pt.syms[1], pt.net, pt.prodA),
                          pt);
      break;
    case PreparedTask::Kind::sum_product:
      finish_verdict_task(
          r,
          sum_product_verdict(pt.syms[0], pt.syms[1], pt.syms[2], pt.syms[3], pt.net,
                              pt.prodA, pt.prodB),
          pt);
      break;
    case PreparedTask::Kind::dilation: {
      for (double rad : pt.dil_radii) {
        const double res =
            dilation_residual(pt.dspec, DiskPoint(rad, pt.theta), pt.dil_N);
        r.dilation_curve.emplace_back(rad, res);
      }
      double mn = std::numeric_limits<double>::infinity();
      for (const auto& [rad, res] : r.dilation_curve) mn = std::min(mn, res);
      r.numbers["residual_min"] = mn;
      r.numbers["residual_first"] = r.dilation_curve.front().second;
      r.numbers["residual_last"] = r.dilation_curve.back().second;
      if (pt.expect == "decreasing") {
        bool ok = r.dilation_curve.back().second < r.dilation_curve.front().second;
        for (std::size_t i = 0; i + 1 < r.dilation_curve.size(); ++i)
          if (r.dilation_curve[i + 1].second > pt.noise * r.dilation_curve[i].second)
            ok = false;
        r.ok = ok;
        r.detail = strprintf(
            "dilation residual %.4g -> %.4g over %zu radii: %s (noise factor %.2g)",
            r.dilation_curve.front().second, r.dilation_curve.back().second,
            r.dilation_curve.size(), ok ? "decreasing" : "NOT decreasing", pt.noise);
      } else if (pt.expect == "bounded") {
        r.ok = mn >= pt.floor_val;
        r.detail = strprintf("dilation residual min %.4g vs floor %.3g: %s", mn,
                             pt.floor_val, r.ok ? "bounded below" : "NOT bounded");
      } else {
        r.detail = strprintf("dilation residual %.4g -> %.4g over %zu radii",
                             r.dilation_curve.front().second,
                             r.dilation_curve.back().second, r.dilation_curve.size());
      }
      break;
    }
  }
  return r;
}

}  // namespace

// ----------------------------------------------------------------- run()

Report run(const RunConfig& raw) {
  RunConfig cfg = raw;
  std::map<std::string, Symbol> table;
  std::vector<std::pair<std::string, std::string>> echo;

  if (cfg.preset == "paper-suite") {
    expand_paper_suite(cfg, table, echo);
  } else if (!cfg.preset.empty()) {
    throw ConfigError("unknown preset '" + cfg.preset + "' (known: paper-suite)");
  }

  for (const auto& [name, expr] : cfg.symbols) {
    if (table.count(name)) throw ConfigError("symbol '" + name + "' defined twice");
    try {
      table[name] = lower_text(expr);
    } catch (const ParseError& e) {
      throw ConfigError("symbol '" + name + "': " + e.what());
    } catch (const uncertifiable_error& e) {
      throw ConfigError("symbol '" + name + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("symbol '" + name + "': " + e.what());
    }
    echo.emplace_back(name, expr);
  }

  // validate every task before executing any
  std::vector<PreparedTask> prepared;
  prepared.reserve(cfg.tasks.size());
  for (const TaskConfig& t : cfg.tasks) prepared.push_back(prepare(t, table));

  Report rep;
  rep.config = cfg;
  rep.symbol_echo = std::move(echo);
  rep.tool_version = kToolVersion;
  const auto t0 = std::chrono::steady_clock::now();
  for (const PreparedTask& pt : prepared) {
    try {
      rep.tasks.push_back(execute(pt, cfg.seed));
    } catch (const std::exception& e) {
      TaskResult r;
      r.id = pt.tcfg.id;
      r.type = pt.tcfg.type;
      r.ok = false;
      r.detail = std::string("task error: ") + e.what();
      rep.tasks.push_back(std::move(r));
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ----------------------------------------------------------------- emit

namespace {

std::string utc_stamp() {
  const std::time_t t = std::time(nullptr);
  std::tm g{};
  gmtime_r(&t, &g);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &g);
  return buf;
}

void append_curve_rows(std::string& body, const std::string& task,
                       const SweepCurve& c) {
  const std::string a = fmt17(c.angle);
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const std::string r = fmt17(c.radii[i]);
    const std::string bar = fmt17(c.error_bars[i]);
    if (!c.cvalues.empty()) {
      body += task + "," + a + "," + r + "," + c.tag + "_re," +
              fmt17(c.cvalues[i].real()) + "," + bar + "\n";
      body += task + "," + a + "," + r + "," + c.tag + "_im," +
              fmt17(c.cvalues[i].imag()) + "," + bar + "\n";
    } else {
      body += task + "," + a + "," + r + "," + c.tag + "," + fmt17(c.values[i]) + "," +
              bar + "\n";
    }
  }
}

std::string render_text(const Report& rep) {
  std::string out;
  out += strprintf("schema_version = %d\n", kReportSchemaVersion);
  out += std::string("tool = ") + rep.tool_version + "\n";
  out += strprintf("seed = %llu\n", static_cast<unsigned long long>(rep.config.seed));
  out += "preset = " + (rep.config.preset.empty() ? std::string("none")
                                                  : rep.config.preset) + "\n";
  out += "output_dir = " + rep.config.output_dir + "\n";
  out += strprintf("task_count = %zu\n", rep.tasks.size());
  for (const auto& [name, expr] : rep.symbol_echo)
    out += "symbol " + name + " = " + expr + "\n";

  for (const TaskResult& t : rep.tasks) {
    out += "\n[task " + t.id + "]\n";
    out += "type = " + t.type + "\n";
    out += std::string("status = ") + (t.ok ? "ok" : "fail") + "\n";
    if (!t.expect.empty()) out += "expect = " + t.expect + "\n";
    out += "detail = " + t.detail + "\n";

    if (t.suite) {
      const SuiteReport& s = *t.suite;
      out += strprintf("trials = %ld\n", s.trials);
      out += strprintf("window = %ld\n", s.N);
      out += "tolerance = " + fmt17(s.tol) + "\n";
      out += strprintf("all_pass = %d\n", s.all_pass ? 1 : 0);
      for (const auto& [name, worst] : s.worst)
        out += "residual " + name + " = " + fmt17(worst) + "\n";
      out += "commute_loser_min = " + fmt17(s.commute_loser_min) + "\n";
      out += "dilation_loser_min = " + fmt17(s.dilation_loser_min) + "\n";
    }

    if (t.verdict) {
      const Verdict& v = *t.verdict;
      out += std::string("outcome = ") + outcome_name(v.outcome) + "\n";
      out += strprintf("trivial = %d\n", v.trivial ? 1 : 0);
      long pass = 0, fail = 0, open = 0;
      for (const AngleCase& c : v.per_angle) {
        if (c.passed) ++pass;
        else if (c.decisive_fail) ++fail;
        else ++open;
      }
      if (!v.per_angle.empty()) {
        out += strprintf("angles_pass = %ld\n", pass);
        out += strprintf("angles_fail = %ld\n", fail);
        out += strprintf("angles_open = %ld\n", open);
        for (const AngleCase& c : v.per_angle) {
          if (!c.decisive_fail && !(c.has_t && c.passed)) continue;
          out += "angle " + fmt17(c.angle) +
                 strprintf(" = %s case=%d", c.passed ? "pass" : "fail", c.case_id);
          if (c.has_t)
            out += " t=" + fmt17(c.t.real()) + " " + fmt17(c.t.imag()) + " c=" +
                   fmt17(c.c.real()) + " " + fmt17(c.c.imag()) +
                   strprintf(" stable=%d capped=%d", c.t_stable ? 1 : 0,
                             c.t_capped ? 1 : 0);
          out += "\n";
        }
      }
      for (const auto& [k, val] : v.thresholds)
        out += "threshold " + k + " = " + fmt17(val) + "\n";
      if (v.hartman) {
        const HartmanEvidence& ev = *v.hartman;
        for (std::size_t i = 0; i < ev.sizes.size(); ++i)
          out += strprintf("window %ld = ", ev.sizes[i]) + fmt17(ev.sigma1[i]) + " " +
                 fmt17(ev.sigma10[i]) + " " + fmt17(ev.sigma25[i]) + " " +
                 fmt17(ev.sigma50[i]) + strprintf(" %ld", ev.count_above_tau_c[i]) +
                 "\n";
      }
    }

    for (const auto& [rad, res] : t.dilation_curve)
      out += "residual r=" + fmt17(rad) + " = " + fmt17(res) + "\n";
    for (const auto& [k, val] : t.numbers) out += k + " = " + fmt17(val) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw std::runtime_error("cannot open report file for writing: " + path);
  o << body;
  o.flush();
  if (!o.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::vector<std::string> report_emit(const Report& rep, const std::string& output_dir,
                                     std::string stamp) {
  namespace fs = std::filesystem;
  if (stamp.empty()) stamp = utc_stamp();
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" + output_dir +
                             "': " + ec.message());

  std::vector<std::string> written;
  for (const TaskResult& t : rep.tasks) {
    if (t.curves.empty()) continue;
    std::string body = "task,angle,radius,tag,value,error_bar\n";
    for (const SweepCurve& c : t.curves) append_curve_rows(body, t.id, c);
    const std::string path = output_dir + "/" + t.id + "_curves_" + stamp + ".csv";
    write_file(path, body);
    written.push_back(path);
  }
  const std::string path = output_dir + "/run_" + stamp + ".txt";
  write_file(path, render_text(rep));
  written.push_back(path);
  return written;
}

// ------------------------------------------------------------ summaries

std::string report_summary(const Report& rep) {
  std::string out;
  for (const TaskResult& t : rep.tasks) {
    out += "task " + t.id + ": " + t.type + " status=" + (t.ok ? "ok" : "fail");
    if (t.verdict) out += std::string(" outcome=") + outcome_name(t.verdict->outcome);
    out += "\n";
  }
  return out;
}

ReadBackReport read_report_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read report file: " + path);
  ReadBackReport rb;
  std::map<std::string, std::string>* cur = &rb.header;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.rfind("[task ", 0) != 0)
        throw std::runtime_error("malformed report section in " + path + ": " + line);
      const std::string id = trim(line.substr(6, line.size() - 7));
      rb.tasks.emplace_back(id, std::map<std::string, std::string>{});
      cur = &rb.tasks.back().second;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;  // tolerated: free-text continuation
    (*cur)[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return rb;
}

std::string report_summary(const ReadBackReport& rb) {
  std::string out;
  for (const auto& [id, kv] : rb.tasks) {
    const auto type = kv.find("type");
    const auto status = kv.find("status");
    out += "task " + id + ": " + (type != kv.end() ? type->second : "?") +
           " status=" + (status != kv.end() ? status->second : "?");
    const auto outcome = kv.find("outcome");
    if (outcome != kv.end()) out += " outcome=" + outcome->second;
    out += "\n";
  }
  return out;
}

}  // namespace hardylab
