// Command line front end: estimate | verify | oracle | compare.
//
// Exit codes: 0 success / inequality pass, 1 verdict failure (inequality
// fail, |z| > 4 comparison flag, theorem violation), 2 config parse or
// validation error, 3 unexpected runtime error. No report file is written
// on a config error. Wall-clock timing is reported on stderr only, so
// report files stay byte-identical across reruns.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "anscombe/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  uint64_t seed = 0;
  bool seed_set = false;
  int64_t samples = 0;
  bool samples_set = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the scenario config (JSON)")
      ->required();
  cmd->add_option("--out", args.out_path, "Write the report to this path");
  cmd->add_option("--format", args.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", args.seed, "Override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--samples", args.samples, "Override the sample count")
      ->each([&args](const std::string&) { args.samples_set = true; });
  cmd->add_option("--threads", args.threads, "Worker threads (outputs do not depend on this)")
      ->check(CLI::Range(1, 256));
}

int emit(const anscombe::RunReport& report, const CommonArgs& args, double wall_seconds) {
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write report to " << args.out_path << "\n";
      return 3;
    }
    out << (args.format == "csv" ? report.to_csv() : report.to_json());
  }
  std::cout << report.summary << "\n";
  std::cerr << "wall_time_s=" << wall_seconds << "\n";
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence-index estimators, exact oracles and the randomized-index "
               "inequality verifier"};
  app.require_subcommand(1);

  CommonArgs est_args, ver_args, ora_args, cmp_args;
  CLI::App* est = app.add_subcommand("estimate", "Monte Carlo estimates of the indices");
  add_common(est, est_args);
  CLI::App* ver = app.add_subcommand("verify", "Check the randomized-index inequality");
  add_common(ver, ver_args);
  CLI::App* ora = app.add_subcommand("oracle", "Exact values on an enumerable scenario");
  add_common(ora, ora_args);
  CLI::App* cmp = app.add_subcommand("compare", "Estimators against the exact oracle");
  add_common(cmp, cmp_args);

  CLI11_PARSE(app, argc, argv);

  const CommonArgs& args = est->parsed()   ? est_args
                           : ver->parsed() ? ver_args
                           : ora->parsed() ? ora_args
                                           : cmp_args;

  try {
    const anscombe::ScenarioConfig config = anscombe::load_config_file(args.config_path);
    anscombe::RunnerOptions opt;
    if (args.seed_set) opt.seed_override = args.seed;
    if (args.samples_set) opt.samples_override = args.samples;
    opt.threads = args.threads;

    const auto t0 = std::chrono::steady_clock::now();
    anscombe::RunReport report;
    if (est->parsed())
      report = anscombe::run_estimate(config, opt);
    else if (ver->parsed())
      report = anscombe::run_verify(config, opt);
    else if (ora->parsed())
      report = anscombe::run_oracle(config, opt);
    else
      report = anscombe::run_compare(config, opt);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(report, args, wall);
  } catch (const anscombe::ConfigError& e) {
    std::cerr << "config error (" << anscombe::errc_name(e.code()) << "):\n";
    for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
    return 2;
  } catch (const anscombe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == anscombe::Errc::TheoremViolation ? 1 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
