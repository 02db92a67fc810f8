// Command-line front end over the C interface.
//
//   opvol verify   <config.json> [--seed N] [--threads N] [--out-dir DIR]
//   opvol converge <config.json> ...
//   opvol price    <config.json> ...
//
// Exit status: 0 all checks pass, 2 a bound check failed (or a convergence
// column is not monotone), 1 on any error.

#include "opvol/opvol.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

struct CommonArgs {
  std::string config;
  std::string seed;
  int threads = 0;
  std::string out_dir = ".";
};

int report_error(opvol_status status) {
  const char* detail = opvol_last_error();
  std::cerr << "error: " << (detail && *detail ? detail : opvol_status_string(status)) << '\n';
  return kExitError;
}

std::optional<std::uint64_t> parse_seed_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text.find_first_not_of("0123456789") != std::string::npos) throw CLI::ValidationError("--seed", "must be a nonnegative integer");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--seed", "out of range for a 64-bit seed");
  }
}

std::string out_path(const CommonArgs& args, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  return (std::filesystem::path(args.out_dir) / name).string();
}

// Loads the scenario and applies --seed. Returns nullptr after printing an error.
opvol_scenario* open_scenario(const CommonArgs& args, int& exit_code) {
  opvol_scenario* scenario = nullptr;
  opvol_status st = opvol_scenario_from_file(args.config.c_str(), &scenario);
  if (st != OPVOL_OK) {
    exit_code = report_error(st);
    return nullptr;
  }
  if (auto seed = parse_seed_flag(args.seed)) opvol_scenario_set_seed(scenario, *seed);
  return scenario;
}

int cmd_verify(const CommonArgs& args) {
  int code = kExitError;
  opvol_scenario* scenario = open_scenario(args, code);
  if (!scenario) return code;
  opvol_bound_set* set = nullptr;
  opvol_status st = opvol_verify(scenario, args.threads, &set);
  opvol_scenario_free(scenario);
  if (st != OPVOL_OK) return report_error(st);

  const std::string path = out_path(args, "bounds.csv");
  st = opvol_bound_set_write_csv(set, path.c_str());
  if (st != OPVOL_OK) {
    opvol_bound_set_free(set);
    return report_error(st);
  }
  std::size_t failed = 0;
  for (std::size_t i = 0; i < opvol_bound_set_size(set); ++i) {
    opvol_bound_row row;
    opvol_bound_set_get(set, i, &row);
    if (!row.pass) {
      ++failed;
      std::printf("FAIL %s level=%d lhs=%.6g rhs=%.6g margin=%.3g\n", row.id, row.level, row.lhs, row.rhs,
                  row.margin);
    }
  }
  std::printf("%zu checks, %zu failed; wrote %s\n", opvol_bound_set_size(set), failed, path.c_str());
  const int result = opvol_bound_set_all_pass(set) ? kExitPass : kExitFail;
  opvol_bound_set_free(set);
  return result;
}

int cmd_converge(const CommonArgs& args) {
  int code = kExitError;
  opvol_scenario* scenario = open_scenario(args, code);
  if (!scenario) return code;
  opvol_convergence* table = nullptr;
  opvol_status st = opvol_converge(scenario, args.threads, &table);
  opvol_scenario_free(scenario);
  if (st != OPVOL_OK) return report_error(st);

  const std::string path = out_path(args, "convergence.csv");
  st = opvol_convergence_write_csv(table, path.c_str());
  if (st != OPVOL_OK) {
    opvol_convergence_free(table);
    return report_error(st);
  }
  const bool monotone = opvol_convergence_monotone(table) != 0;
  std::printf("%zu rows, %s; wrote %s\n", opvol_convergence_size(table),
              monotone ? "all columns weakly decreasing" : "some column is not decreasing", path.c_str());
  opvol_convergence_free(table);
  return monotone ? kExitPass : kExitFail;
}

int cmd_price(const CommonArgs& args) {
  int code = kExitError;
  opvol_scenario* scenario = open_scenario(args, code);
  if (!scenario) return code;
  opvol_pricing* table = nullptr;
  opvol_status st = opvol_price(scenario, args.threads, &table);
  opvol_scenario_free(scenario);
  if (st != OPVOL_OK) return report_error(st);

  const std::string path = out_path(args, "pricing.csv");
  st = opvol_pricing_write_csv(table, path.c_str());
  if (st != OPVOL_OK) {
    opvol_pricing_free(table);
    return report_error(st);
  }
  for (std::size_t i = 0; i < opvol_pricing_size(table); ++i) {
    opvol_pricing_row row;
    opvol_pricing_get(table, i, &row);
    if (row.level < 0)
      std::printf("base     P=%.6g (se %.2g)\n", row.price, row.se);
    else
      std::printf("level %-3d P=%.6g (se %.2g) |P-P^n|=%.3g bound=%.3g cap=%.3g %s\n", row.level, row.price, row.se,
                  row.price_diff, row.lipschitz_bound, row.theorem_cap, row.pass ? "ok" : "FAIL");
  }
  const bool pass = opvol_pricing_all_pass(table) != 0;
  opvol_pricing_free(table);
  return pass ? kExitPass : kExitFail;
}

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("config", args.config, "Scenario JSON file")->required();
  sub->add_option("--seed", args.seed, "Master seed (overrides the config file and OPVOL_SEED)");
  sub->add_option("--threads", args.threads, "Worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out-dir", args.out_dir, "Directory for CSV output")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-valued stochastic volatility: robustness bound checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", opvol_version());

  CommonArgs args;
  CLI::App* verify = app.add_subcommand("verify", "Run every bound check and write bounds.csv");
  CLI::App* converge = app.add_subcommand("converge", "Tabulate errors across levels into convergence.csv");
  CLI::App* price = app.add_subcommand("price", "Price options and check robustness into pricing.csv");
  add_common(verify, args);
  add_common(converge, args);
  add_common(price, args);

  try {
    app.parse(argc, argv);
    parse_seed_flag(args.seed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (verify->parsed()) return cmd_verify(args);
  if (converge->parsed()) return cmd_converge(args);
  return cmd_price(args);
}
