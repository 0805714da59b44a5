#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heq/bench.hpp"
#include "heq/config.hpp"
#include "heq/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string method;
  std::string variant;
  std::optional<double> lambda;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override bench.seed");
  cmd->add_option("--out", o.out, "output directory (default: stdout)");
  cmd->add_option("--method", o.method, "remb | remd | both")->check(CLI::IsMember({"remb", "remd", "both"}));
  cmd->add_option("--variant", o.variant, "characterization | paper-literal")
      ->check(CLI::IsMember({"characterization", "paper-literal"}));
  cmd->add_option("--lambda", o.lambda, "use a single step size instead of the grid");
  cmd->add_option("--threads", o.threads, "worker threads for bench");
}

heq::BenchConfig resolve(const Options& o) {
  heq::BenchConfig cfg = o.config.empty() ? heq::BenchConfig{} : heq::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.method == "both") {
    cfg.methods = {heq::Method::Remb, heq::Method::Remd};
  } else if (!o.method.empty()) {
    cfg.methods = {heq::parse_method(o.method)};
  }
  if (!o.variant.empty()) cfg.variant = heq::parse_variant(o.variant);
  if (o.lambda) cfg.lambda_grid = {*o.lambda};
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  if (cfg.variant == heq::ResolventVariant::PaperLiteralEx51) {
    std::cerr << "note: paper-literal uses the literal example51 resolvent formula, which does not satisfy "
                 "the resolvent inequality; iterates do not converge to the nearest solution\n";
  }
  return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw heq::Error(heq::ErrorCode::Io, "cannot write " + (dir / name).string());
  return os;
}

std::string lambda_tag(double l) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", l);
  return buf;
}

int cmd_run(const Options& o) {
  const auto cfg = resolve(o);
  const double lambda = cfg.lambda_grid.front();
  for (heq::Method m : cfg.methods) {
    const auto r = heq::run_single(cfg, m, lambda, 0, false);
    if (o.out.empty()) {
      heq::write_trace_csv(std::cout, r.trace);
    } else {
      auto os = open_out(o.out, "trace_" + std::string(heq::to_string(m)) + ".csv");
      heq::write_trace_csv(os, r.trace);
    }
  }
  return 0;
}

int cmd_bench(const Options& o) {
  const auto cfg = resolve(o);
  const auto res = heq::run_bench(cfg);
  if (o.out.empty()) {
    heq::write_summary_csv(std::cout, res.summary);
  } else {
    auto s = open_out(o.out, "summary.csv");
    heq::write_summary_csv(s, res.summary);
    auto t = open_out(o.out, "trials.csv");
    heq::write_trials_csv(t, res.trials);
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const auto cfg = resolve(o);
  const auto report = heq::run_verify(cfg);
  heq::write_verify_report(std::cout, report);
  if (!o.out.empty()) {
    auto os = open_out(o.out, "verify.csv");
    heq::write_verify_report(os, report);
  }
  return report.passed() ? 0 : 1;
}

int cmd_trace_export(const Options& o) {
  const auto cfg = resolve(o);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  for (heq::Method m : cfg.methods) {
    for (double lambda : cfg.lambda_grid) {
      const auto r = heq::run_single(cfg, m, lambda, 0, false);
      auto os = open_out(dir, "trace_" + std::string(heq::to_string(m)) + "_" + lambda_tag(lambda) + ".csv");
      heq::write_trace_csv(os, r.trace);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extragradient-type solvers for equilibrium problems on the log-metric positive orthant"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "solve once (trial 0, first lambda) and print the trace CSV");
  auto* bench = app.add_subcommand("bench", "run all (method, lambda, trial) combinations and summarize");
  auto* verify = app.add_subcommand("verify", "run the property suites; exit 1 on a hard failure");
  auto* trace = app.add_subcommand("trace-export", "write one trace CSV per (method, lambda)");
  for (auto* cmd : {run, bench, verify, trace}) add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(o);
    if (*bench) return cmd_bench(o);
    if (*verify) return cmd_verify(o);
    if (*trace) return cmd_trace_export(o);
  } catch (const heq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
