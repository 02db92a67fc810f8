#include "opvol/opvol.h"

#include "opvol/config.hpp"
#include "opvol/errors.hpp"
#include "opvol/experiments.hpp"
#include "opvol/operator_core.hpp"
#include "opvol/report_io.hpp"

#include <cstdlib>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct opvol_scenario {
  opvol::CoupledScenario scenario;
};

struct opvol_bound_set {
  std::vector<opvol::BoundReport> reports;
};

struct opvol_convergence {
  opvol::ConvergenceTable table;
};

struct opvol_pricing {
  std::vector<opvol::PricingRow> rows;
};

namespace {

thread_local std::string last_error;

opvol_status set_error(opvol_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps the in-flight exception to a status code.
opvol_status translate() {
  try {
    throw;
  } catch (const opvol::NotPositiveSemidefinite& e) {
    return set_error(OPVOL_ERR_NOT_PSD, e.what());
  } catch (const opvol::NotNormal& e) {
    return set_error(OPVOL_ERR_NOT_NORMAL, e.what());
  } catch (const opvol::InvalidMoments& e) {
    return set_error(OPVOL_ERR_INVALID_MOMENTS, e.what());
  } catch (const opvol::ConfigError& e) {
    return set_error(OPVOL_ERR_CONFIG, e.what());
  } catch (const opvol::IoError& e) {
    return set_error(OPVOL_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(OPVOL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(OPVOL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(OPVOL_ERR_INTERNAL, "unknown error");
  }
}

template <class F>
opvol_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return OPVOL_OK;
  } catch (...) {
    return translate();
  }
}

opvol_status null_arg(const char* what) { return set_error(OPVOL_ERR_NULL, std::string(what) + " is null"); }

opvol_status load(const opvol::LoadedConfig& cfg, opvol_scenario** out) {
  auto* s = new opvol_scenario{cfg.scenario};
  s->scenario.seed = opvol::resolve_seed(std::nullopt, cfg.seed, std::getenv("OPVOL_SEED"));
  *out = s;
  return OPVOL_OK;
}

opvol::Matrix read_matrix(int d, const double* in) {
  if (d < 1) throw opvol::ConfigError("dimension must be >= 1");
  return Eigen::Map<const opvol::Matrix>(in, d, d);
}

void write_matrix(const opvol::Matrix& m, double* out) { Eigen::Map<opvol::Matrix>(out, m.rows(), m.cols()) = m; }

template <class T>
std::string to_csv(const T& value, void (*writer)(std::ostream&, const T&)) {
  std::ostringstream os;
  writer(os, value);
  return os.str();
}

}  // namespace

extern "C" {

const char* opvol_version(void) { return "0.1.0"; }

const char* opvol_last_error(void) { return last_error.c_str(); }

const char* opvol_status_string(opvol_status status) {
  switch (status) {
    case OPVOL_OK:
      return "ok";
    case OPVOL_ERR_CONFIG:
      return "configuration error";
    case OPVOL_ERR_NOT_PSD:
      return "operator not positive semidefinite";
    case OPVOL_ERR_NOT_NORMAL:
      return "generator operator not normal";
    case OPVOL_ERR_INVALID_MOMENTS:
      return "invalid moments";
    case OPVOL_ERR_INTERNAL:
      return "internal error";
    case OPVOL_ERR_IO:
      return "I/O error";
    case OPVOL_ERR_NULL:
      return "null argument";
  }
  return "unknown status";
}

opvol_status opvol_scenario_from_file(const char* path, opvol_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { load(opvol::load_config_file(path), out); });
}

opvol_status opvol_scenario_from_json(const char* text, opvol_scenario** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { load(opvol::parse_config(text), out); });
}

void opvol_scenario_free(opvol_scenario* scenario) { delete scenario; }

opvol_status opvol_scenario_set_seed(opvol_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_arg("scenario");
  scenario->scenario.seed = seed;
  return OPVOL_OK;
}

opvol_status opvol_scenario_get_seed(const opvol_scenario* scenario, uint64_t* seed) {
  if (!scenario) return null_arg("scenario");
  if (!seed) return null_arg("seed");
  *seed = scenario->scenario.seed;
  return OPVOL_OK;
}

opvol_status opvol_scenario_set_replications(opvol_scenario* scenario, int64_t replications) {
  if (!scenario) return null_arg("scenario");
  if (replications < 2) return set_error(OPVOL_ERR_CONFIG, "replications: must be >= 2");
  scenario->scenario.replications = replications;
  return OPVOL_OK;
}

// --- verify

opvol_status opvol_verify(const opvol_scenario* scenario, int threads, opvol_bound_set** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    opvol::RunOptions opts;
    opts.threads = threads;
    *out = new opvol_bound_set{opvol::run_experiment(scenario->scenario, opts)};
  });
}

size_t opvol_bound_set_size(const opvol_bound_set* set) { return set ? set->reports.size() : 0; }

opvol_status opvol_bound_set_get(const opvol_bound_set* set, size_t index, opvol_bound_row* row) {
  if (!set) return null_arg("set");
  if (!row) return null_arg("row");
  if (index >= set->reports.size()) return set_error(OPVOL_ERR_CONFIG, "row index out of range");
  const auto& r = set->reports[index];
  *row = opvol_bound_row{r.id.c_str(), r.level, r.lhs, r.lhs_stderr, r.rhs, r.rhs_stderr,
                         r.margin, r.pass ? 1 : 0, r.note.c_str()};
  return OPVOL_OK;
}

int opvol_bound_set_all_pass(const opvol_bound_set* set) {
  if (!set) return 0;
  for (const auto& r : set->reports)
    if (!r.pass) return 0;
  return 1;
}

opvol_status opvol_bound_set_write_csv(const opvol_bound_set* set, const char* path) {
  if (!set) return null_arg("set");
  if (!path) return null_arg("path");
  return guarded([&] { opvol::write_text_file(path, to_csv(set->reports, &opvol::write_bounds_csv)); });
}

void opvol_bound_set_free(opvol_bound_set* set) { delete set; }

// --- converge

opvol_status opvol_converge(const opvol_scenario* scenario, int threads, opvol_convergence** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    opvol::RunOptions opts;
    opts.threads = threads;
    *out = new opvol_convergence{opvol::convergence_study(scenario->scenario, opts)};
  });
}

size_t opvol_convergence_size(const opvol_convergence* table) { return table ? table->table.rows.size() : 0; }

opvol_status opvol_convergence_get(const opvol_convergence* table, size_t index, opvol_convergence_row* row) {
  if (!table) return null_arg("table");
  if (!row) return null_arg("row");
  if (index >= table->table.rows.size()) return set_error(OPVOL_ERR_CONFIG, "row index out of range");
  const auto& r = table->table.rows[index];
  *row = opvol_convergence_row{r.level, r.id.c_str(), r.estimate, r.se};
  return OPVOL_OK;
}

int opvol_convergence_monotone(const opvol_convergence* table) { return table && table->table.monotone ? 1 : 0; }

opvol_status opvol_convergence_write_csv(const opvol_convergence* table, const char* path) {
  if (!table) return null_arg("table");
  if (!path) return null_arg("path");
  return guarded([&] { opvol::write_text_file(path, to_csv(table->table, &opvol::write_convergence_csv)); });
}

void opvol_convergence_free(opvol_convergence* table) { delete table; }

// --- price

opvol_status opvol_price(const opvol_scenario* scenario, int threads, opvol_pricing** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    opvol::RunOptions opts;
    opts.threads = threads;
    *out = new opvol_pricing{opvol::run_pricing(scenario->scenario, opts)};
  });
}

size_t opvol_pricing_size(const opvol_pricing* table) { return table ? table->rows.size() : 0; }

opvol_status opvol_pricing_get(const opvol_pricing* table, size_t index, opvol_pricing_row* row) {
  if (!table) return null_arg("table");
  if (!row) return null_arg("row");
  if (index >= table->rows.size()) return set_error(OPVOL_ERR_CONFIG, "row index out of range");
  const auto& r = table->rows[index];
  *row = opvol_pricing_row{r.level, r.price, r.se, r.price_diff, r.lipschitz_bound, r.theorem_cap, r.pass ? 1 : 0};
  return OPVOL_OK;
}

int opvol_pricing_all_pass(const opvol_pricing* table) {
  if (!table) return 0;
  for (const auto& r : table->rows)
    if (!r.pass) return 0;
  return 1;
}

opvol_status opvol_pricing_write_csv(const opvol_pricing* table, const char* path) {
  if (!table) return null_arg("table");
  if (!path) return null_arg("path");
  return guarded([&] { opvol::write_text_file(path, to_csv(table->rows, &opvol::write_pricing_csv)); });
}

void opvol_pricing_free(opvol_pricing* table) { delete table; }

// --- dense helpers

opvol_status opvol_psd_sqrt(int d, const double* in, double* out) {
  if (!in) return null_arg("in");
  if (!out) return null_arg("out");
  return guarded([&] { write_matrix(opvol::psd_sqrt(opvol::HSOperator(read_matrix(d, in))).matrix(), out); });
}

opvol_status opvol_norm(int d, const double* in, opvol_norm_mode mode, double* out) {
  if (!in) return null_arg("in");
  if (!out) return null_arg("out");
  return guarded([&] {
    opvol::NormMode m;
    switch (mode) {
      case OPVOL_NORM_HS:
        m = opvol::NormMode::hs;
        break;
      case OPVOL_NORM_OP:
        m = opvol::NormMode::op;
        break;
      case OPVOL_NORM_TRACE:
        m = opvol::NormMode::trace;
        break;
      default:
        throw opvol::ConfigError("unknown norm mode");
    }
    *out = opvol::norm(opvol::HSOperator(read_matrix(d, in)), m);
  });
}

opvol_status opvol_matrix_exp(int d, const double* in, double t, double* out) {
  if (!in) return null_arg("in");
  if (!out) return null_arg("out");
  return guarded([&] { write_matrix(opvol::expm(read_matrix(d, in), t), out); });
}

}  // extern "C"
