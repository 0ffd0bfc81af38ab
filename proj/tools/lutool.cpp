#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "univalent/harness.hpp"

using namespace univalent;

namespace {

int fail(const std::string& kind, const Error& e, const std::string& out_dir) {
  std::cerr << reason_line(e) << "\n";
  if (!out_dir.empty()) {
    RunRecord record;
    record.report = failure_report(kind, e);
    try {
      write_outputs(record, out_dir);
    } catch (const Error&) {
    }
  }
  return exit_code(e.family());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally univalent approximation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool verbose = false;

  app.add_subcommand("list", "print the experiment catalog");
  for (const auto& info : experiment_catalog()) {
    auto* sub = app.add_subcommand(std::string(info.name), std::string(info.description));
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--out", out_dir, "output directory for report.json and CSV grids");
    sub->add_option("--seed", seed, "random seed")->default_val(0);
    sub->add_flag("--verbose", verbose, "print the report to stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error kind=InvalidArgument family=validation reason=" << e.what() << "\n";
    return 2;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  if (kind == "list") {
    for (const auto& info : experiment_catalog()) {
      std::printf("%-16s %s [%s]\n", std::string(info.name).c_str(), std::string(info.description).c_str(),
                  std::string(info.anchor).c_str());
    }
    return 0;
  }

  try {
    Config config = config_path.empty() ? Config() : Config::load(config_path);
    RunRecord record = run_experiment(kind, config, seed);
    if (!out_dir.empty()) write_outputs(record, out_dir);
    if (verbose) std::cout << record.report.dump(2) << "\n";
    std::printf("%s status=%s fingerprint=%s\n", kind.c_str(), record.report["status"].get<std::string>().c_str(),
                record.report["fingerprint"].get<std::string>().c_str());
    if (!record.passed) {
      std::cerr << "error kind=CheckFailed family=numerical reason=" << record.failure_reason << "\n";
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    return fail(kind, e, out_dir);
  } catch (const std::exception& e) {
    return fail(kind, Error(ErrorKind::NonFiniteValue, e.what()), out_dir);
  }
}
