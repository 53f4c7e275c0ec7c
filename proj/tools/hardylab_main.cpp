// tools/hardylab_main.cpp
//
// Command-line front end. Every subcommand funnels into the same pipeline:
// build a RunConfig, validate + execute it, emit report files, print a
// summary. Exit code 0 = everything within thresholds, 1 = some task failed
// its threshold/expectation, 2 = configuration or input error (nothing is
// written in that case).

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "hardylab/report.hpp"

namespace {

using hardylab::RunConfig;
using hardylab::TaskConfig;

struct CommonFlags {
  std::string output_dir;
  bool output_dir_set = false;
  std::uint64_t seed = 1;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& cf) {
  cmd->add_option("--output-dir", cf.output_dir,
                  "directory for report files (overrides HARDYLAB_OUT and config)")
      ->each([&cf](const std::string&) { cf.output_dir_set = true; });
  cmd->add_option("--seed", cf.seed, "RNG seed echoed into the report")
      ->each([&cf](const std::string&) { cf.seed_set = true; });
}

// precedence: explicit flag > HARDYLAB_OUT > config file value > default
void apply_common(RunConfig& cfg, const CommonFlags& cf) {
  if (cf.seed_set) cfg.seed = cf.seed;
  if (cf.output_dir_set) {
    cfg.output_dir = cf.output_dir;
  } else if (const char* env = std::getenv("HARDYLAB_OUT")) {
    if (*env) cfg.output_dir = env;
  }
}

struct NetFlags {
  long angles = 64;
  long jmin = 1;
  long jmax = 12;
  double eps = 1e-6;
};

void add_net(CLI::App* cmd, NetFlags& nf) {
  cmd->add_option("--angles", nf.angles, "uniform angles in the net (default 64)");
  cmd->add_option("--jmin", nf.jmin, "first radius index: r = 1 - 2^-j (default 1)");
  cmd->add_option("--jmax", nf.jmax, "last radius index (default 12)");
  cmd->add_option("--eps", nf.eps, "kernel truncation accuracy (default 1e-6)");
}

void apply_net(TaskConfig& t, const NetFlags& nf) {
  t.kv["angles"] = std::to_string(nf.angles);
  t.kv["jmin"] = std::to_string(nf.jmin);
  t.kv["jmax"] = std::to_string(nf.jmax);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", nf.eps);
  t.kv["eps"] = buf;
}

int run_pipeline(RunConfig cfg, const CommonFlags& cf, bool detailed) {
  apply_common(cfg, cf);
  const hardylab::Report rep = hardylab::run(cfg);  // throws ConfigError -> exit 2
  const std::vector<std::string> files = hardylab::report_emit(rep, cfg.output_dir);

  std::cout << hardylab::report_summary(rep);
  for (const hardylab::TaskResult& t : rep.tasks) {
    if (detailed && t.verdict)
      std::cout << "\n" << hardylab::format_verdict(*t.verdict);
    if (detailed && t.suite)
      std::cout << "\n" << hardylab::format_suite_report(*t.suite);
    if (!t.ok) std::cout << "  [" << t.id << "] " << t.detail << "\n";
  }
  for (const std::string& f : files) std::cout << "wrote " << f << "\n";
  std::printf("wall %.1f s\n", rep.wall_seconds);
  return rep.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardylab: certified Hankel/Toeplitz compactness diagnostics"};
  app.require_subcommand(1);

  // ---- run <config>
  std::string config_path;
  CommonFlags run_cf;
  CLI::App* cmd_run = app.add_subcommand("run", "execute a task-list config file");
  cmd_run->add_option("config", config_path, "flat text config file")->required();
  add_common(cmd_run, run_cf);

  // ---- check-identities
  CommonFlags id_cf;
  long id_trials = 100, id_size = 64, id_degree = 8;
  double id_tol = 1e-12;
  CLI::App* cmd_id = app.add_subcommand(
      "check-identities", "randomized certification of the operator identities");
  cmd_id->add_option("--trials", id_trials, "random symbol pairs (default 100)");
  cmd_id->add_option("--size", id_size, "window size N (default 64)");
  cmd_id->add_option("--degree", id_degree, "symbol degree bound (default 8)");
  cmd_id->add_option("--tolerance", id_tol, "pass tolerance (default 1e-12)");
  add_common(cmd_id, id_cf);

  // ---- compactness <symbol-expr>
  CommonFlags ht_cf;
  std::string ht_expr, ht_expect;
  std::vector<long> ht_sizes = {256, 512, 1024};
  CLI::App* cmd_ht = app.add_subcommand(
      "compactness", "window-spectrum compactness verdict for one symbol");
  cmd_ht->add_option("expr", ht_expr, "symbol expression, e.g. 'arc(0, pi)'")
      ->required();
  cmd_ht->add_option("--sizes", ht_sizes, "window sizes (default 256 512 1024)")
      ->expected(-1);
  cmd_ht->add_option("--expect", ht_expect, "compact|noncompact|inconclusive");
  add_common(cmd_ht, ht_cf);

  // ---- product <f> <g>
  CommonFlags pr_cf;
  NetFlags pr_net;
  std::string pr_f, pr_g, pr_fg, pr_expect;
  CLI::App* cmd_pr = app.add_subcommand(
      "product", "radial sweep verdict for the mixed product H_f T_g of a pair (f, g)");
  cmd_pr->add_option("f", pr_f, "left symbol expression")->required();
  cmd_pr->add_option("g", pr_g, "right symbol expression")->required();
  cmd_pr->add_option("--fg", pr_fg,
                     "expression for the pointwise product f*g (needed when the "
                     "coefficient product is not certifiable)");
  cmd_pr->add_option("--expect", pr_expect, "compact|noncompact|inconclusive");
  add_net(cmd_pr, pr_net);
  add_common(cmd_pr, pr_cf);

  // ---- sum-product <f1> <g1> <f2> <g2>
  CommonFlags sp_cf;
  NetFlags sp_net;
  std::string sp_f1, sp_g1, sp_f2, sp_g2, sp_f1g1, sp_f2g2, sp_expect;
  CLI::App* cmd_sp = app.add_subcommand(
      "sum-product", "radial sweep verdict for the sum H_f1 T_g1 + H_f2 T_g2");
  cmd_sp->add_option("f1", sp_f1)->required();
  cmd_sp->add_option("g1", sp_g1)->required();
  cmd_sp->add_option("f2", sp_f2)->required();
  cmd_sp->add_option("g2", sp_g2)->required();
  cmd_sp->add_option("--f1g1", sp_f1g1, "expression for f1*g1");
  cmd_sp->add_option("--f2g2", sp_f2g2, "expression for f2*g2");
  cmd_sp->add_option("--expect", sp_expect, "compact|noncompact|inconclusive");
  add_net(cmd_sp, sp_net);
  add_common(cmd_sp, sp_cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad invocation is an input error
  }

  try {
    if (cmd_run->parsed()) {
      RunConfig cfg = RunConfig::parse_file(config_path);
      return run_pipeline(std::move(cfg), run_cf, /*detailed=*/false);
    }
    if (cmd_id->parsed()) {
      RunConfig cfg;
      TaskConfig t;
      t.id = "identities";
      t.type = "identities";
      t.kv["trials"] = std::to_string(id_trials);
      t.kv["size"] = std::to_string(id_size);
      t.kv["degree"] = std::to_string(id_degree);
      std::ostringstream tol;
      tol.precision(17);
      tol << id_tol;
      t.kv["tolerance"] = tol.str();
      cfg.tasks.push_back(std::move(t));
      return run_pipeline(std::move(cfg), id_cf, /*detailed=*/true);
    }
    if (cmd_ht->parsed()) {
      RunConfig cfg;
      cfg.symbols.emplace_back("f", ht_expr);
      TaskConfig t;
      t.id = "compactness";
      t.type = "hartman";
      t.kv["symbol"] = "f";
      std::string sizes;
      for (long s : ht_sizes) {
        if (!sizes.empty()) sizes += " ";
        sizes += std::to_string(s);
      }
      t.kv["sizes"] = sizes;
      if (!ht_expect.empty()) t.kv["expect"] = ht_expect;
      cfg.tasks.push_back(std::move(t));
      return run_pipeline(std::move(cfg), ht_cf, /*detailed=*/true);
    }
    if (cmd_pr->parsed()) {
      RunConfig cfg;
      cfg.symbols.emplace_back("f", pr_f);
      cfg.symbols.emplace_back("g", pr_g);
      TaskConfig t;
      t.id = "product";
      t.type = "product";
      t.kv["f"] = "f";
      t.kv["g"] = "g";
      if (!pr_fg.empty()) {
        cfg.symbols.emplace_back("fg", pr_fg);
        t.kv["fg"] = "fg";
      }
      if (!pr_expect.empty()) t.kv["expect"] = pr_expect;
      apply_net(t, pr_net);
      cfg.tasks.push_back(std::move(t));
      return run_pipeline(std::move(cfg), pr_cf, /*detailed=*/true);
    }
    if (cmd_sp->parsed()) {
      RunConfig cfg;
      cfg.symbols.emplace_back("f1", sp_f1);
      cfg.symbols.emplace_back("g1", sp_g1);
      cfg.symbols.emplace_back("f2", sp_f2);
      cfg.symbols.emplace_back("g2", sp_g2);
      TaskConfig t;
      t.id = "sum_product";
      t.type = "sum_product";
      t.kv["f1"] = "f1";
      t.kv["g1"] = "g1";
      t.kv["f2"] = "f2";
      t.kv["g2"] = "g2";
      if (!sp_f1g1.empty()) {
        cfg.symbols.emplace_back("f1g1", sp_f1g1);
        t.kv["f1g1"] = "f1g1";
      }
      if (!sp_f2g2.empty()) {
        cfg.symbols.emplace_back("f2g2", sp_f2g2);
        t.kv["f2g2"] = "f2g2";
      }
      if (!sp_expect.empty()) t.kv["expect"] = sp_expect;
      apply_net(t, sp_net);
      cfg.tasks.push_back(std::move(t));
      return run_pipeline(std::move(cfg), sp_cf, /*detailed=*/true);
    }
  } catch (const hardylab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
