#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace urnlab::cli;
  CLI::App app{"Monte Carlo and exact analysis of Polya urns with innovation"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 config error, 2 validation or test failure, 3 runtime integrity,\n"
      "4 config/output hash mismatch, 5 oracle infeasible. URNLAB_THREADS sets the default\n"
      "worker count.");

  CommandOptions opt;
  std::uint64_t seed = 0;
  std::uint32_t replicas = 0;
  std::string out;
  for (const char* name : {"validate", "simulate", "analyze", "oracle"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "YAML configuration")->required();
    sub->add_option("--seed", seed, "override base_seed");
    sub->add_option("--replicas", replicas, "override replicas");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--replicas")) opt.replicas = replicas;
  if (sub->count("--out")) opt.out = out;
  return run_command(sub->get_name(), opt, std::cout, std::cerr);
}
