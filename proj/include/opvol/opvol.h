/*
 * opvol: C interface to the operator-valued volatility laboratory.
 *
 * All objects are opaque handles created and released by the library.
 * Functions return an opvol_status; on failure opvol_last_error() gives a
 * message for the calling thread. Matrices are d x d, column-major.
 */
#ifndef OPVOL_H
#define OPVOL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OPVOL_BUILDING_LIBRARY)
#    define OPVOL_API __declspec(dllexport)
#  else
#    define OPVOL_API __declspec(dllimport)
#  endif
#else
#  define OPVOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum opvol_status {
  OPVOL_OK = 0,
  OPVOL_ERR_CONFIG = 1,
  OPVOL_ERR_NOT_PSD = 2,
  OPVOL_ERR_NOT_NORMAL = 3,
  OPVOL_ERR_INVALID_MOMENTS = 4,
  OPVOL_ERR_INTERNAL = 5,
  OPVOL_ERR_IO = 6,
  OPVOL_ERR_NULL = 7
} opvol_status;

typedef enum opvol_norm_mode {
  OPVOL_NORM_HS = 0,
  OPVOL_NORM_OP = 1,
  OPVOL_NORM_TRACE = 2
} opvol_norm_mode;

typedef struct opvol_scenario opvol_scenario;
typedef struct opvol_bound_set opvol_bound_set;
typedef struct opvol_convergence opvol_convergence;
typedef struct opvol_pricing opvol_pricing;

/* Strings in rows stay valid until the owning handle is freed. */
typedef struct opvol_bound_row {
  const char* id;
  int level; /* -1 when not tied to a level */
  double lhs;
  double lhs_stderr;
  double rhs;
  double rhs_stderr;
  double margin;
  int pass;
  const char* note;
} opvol_bound_row;

typedef struct opvol_convergence_row {
  int level;
  const char* id;
  double estimate;
  double se;
} opvol_convergence_row;

typedef struct opvol_pricing_row {
  int level; /* -1 for the untruncated model */
  double price;
  double se;
  double price_diff;
  double lipschitz_bound;
  double theorem_cap;
  int pass;
} opvol_pricing_row;

OPVOL_API const char* opvol_version(void);
OPVOL_API const char* opvol_last_error(void);
OPVOL_API const char* opvol_status_string(opvol_status status);

/* Scenario loading. The seed comes from the document, else from the
 * OPVOL_SEED environment variable, else a built-in default. */
OPVOL_API opvol_status opvol_scenario_from_file(const char* path, opvol_scenario** out);
OPVOL_API opvol_status opvol_scenario_from_json(const char* text, opvol_scenario** out);
OPVOL_API void opvol_scenario_free(opvol_scenario* scenario);
OPVOL_API opvol_status opvol_scenario_set_seed(opvol_scenario* scenario, uint64_t seed);
OPVOL_API opvol_status opvol_scenario_get_seed(const opvol_scenario* scenario, uint64_t* seed);
OPVOL_API opvol_status opvol_scenario_set_replications(opvol_scenario* scenario, int64_t replications);

/* threads <= 0 uses the available hardware parallelism. Results do not
 * depend on the thread count. */
OPVOL_API opvol_status opvol_verify(const opvol_scenario* scenario, int threads, opvol_bound_set** out);
OPVOL_API size_t opvol_bound_set_size(const opvol_bound_set* set);
OPVOL_API opvol_status opvol_bound_set_get(const opvol_bound_set* set, size_t index, opvol_bound_row* row);
OPVOL_API int opvol_bound_set_all_pass(const opvol_bound_set* set);
OPVOL_API opvol_status opvol_bound_set_write_csv(const opvol_bound_set* set, const char* path);
OPVOL_API void opvol_bound_set_free(opvol_bound_set* set);

OPVOL_API opvol_status opvol_converge(const opvol_scenario* scenario, int threads, opvol_convergence** out);
OPVOL_API size_t opvol_convergence_size(const opvol_convergence* table);
OPVOL_API opvol_status opvol_convergence_get(const opvol_convergence* table, size_t index,
                                             opvol_convergence_row* row);
OPVOL_API int opvol_convergence_monotone(const opvol_convergence* table);
OPVOL_API opvol_status opvol_convergence_write_csv(const opvol_convergence* table, const char* path);
OPVOL_API void opvol_convergence_free(opvol_convergence* table);

OPVOL_API opvol_status opvol_price(const opvol_scenario* scenario, int threads, opvol_pricing** out);
OPVOL_API size_t opvol_pricing_size(const opvol_pricing* table);
OPVOL_API opvol_status opvol_pricing_get(const opvol_pricing* table, size_t index, opvol_pricing_row* row);
OPVOL_API int opvol_pricing_all_pass(const opvol_pricing* table);
OPVOL_API opvol_status opvol_pricing_write_csv(const opvol_pricing* table, const char* path);
OPVOL_API void opvol_pricing_free(opvol_pricing* table);

/* Dense helpers on d x d column-major arrays. */
OPVOL_API opvol_status opvol_psd_sqrt(int d, const double* in, double* out);
OPVOL_API opvol_status opvol_norm(int d, const double* in, opvol_norm_mode mode, double* out);
OPVOL_API opvol_status opvol_matrix_exp(int d, const double* in, double t, double* out);

#ifdef __cplusplus
}
#endif

#endif /* OPVOL_H */
