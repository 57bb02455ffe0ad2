// aecp — batch front-end for adiabatic elimination and CP diagnostics
//
//   aecp <eliminate|cp-check|region-map|validate|selftest> [--config f.json]
//        [--out dir] [--seed n] [--threads n]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aecp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic elimination of a fast subsystem and complete-positivity diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool transpose = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for random sampling");
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);

  auto* elim = app.add_subcommand("eliminate", "eliminate to the configured order; JSON result and coefficient CSV");
  auto* cp = app.add_subcommand("cp-check", "Lindblad form, Choi test, WPG gap curve and positivity certificate");
  cp->add_flag("--transpose-selftest", transpose, "also report the transpose map (never CP)");
  auto* region = app.add_subcommand("region-map", "sign map of the fourth-order dephasing rate");
  auto* val = app.add_subcommand("validate", "compare reduced dynamics against the full composite simulation");
  auto* self = app.add_subcommand("selftest", "internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aecp::kExitInvalid;
  }

  aecp::RunConfig cfg;
  const int loaded = aecp::run_guarded([&] {
    if (!config_path.empty()) cfg = aecp::load_config_file(config_path, cfg);
    cfg = aecp::apply_env_overrides(cfg);
    if (out_dir) cfg.out_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (transpose) cfg.transpose_selftest = true;
    aecp::validate(cfg);
  });
  if (loaded != aecp::kExitOk) return loaded;

  if (elim->parsed()) return aecp::cmd_eliminate(cfg);
  if (cp->parsed()) return aecp::cmd_cp_check(cfg);
  if (region->parsed()) return aecp::cmd_region_map(cfg);
  if (val->parsed()) return aecp::cmd_validate(cfg);
  if (self->parsed()) return aecp::cmd_selftest(cfg);
  return aecp::kExitInvalid;
}
