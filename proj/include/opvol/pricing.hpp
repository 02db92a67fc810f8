#pragma once

// European options on the forward, P = E[p(D X(tau))], and on the
// volatility, E[p(D V^{1/2}(tau))], at zero interest rate.

#include "opvol/forward.hpp"
#include "opvol/operator_core.hpp"
#include "opvol/report.hpp"
#include "opvol/variance.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace opvol {

enum class PayoffKind { call, put, identity, constant, custom };

class PayoffSpec {
 public:
  static PayoffSpec call(double strike);
  static PayoffSpec put(double strike);
  static PayoffSpec identity();
  static PayoffSpec constant(double value);
  /// `lipschitz` must be a certified Lipschitz constant of `fn`.
  static PayoffSpec custom(std::function<double(double)> fn, double lipschitz);

  PayoffKind kind() const noexcept { return kind_; }
  double lipschitz() const noexcept { return lipschitz_; }
  double parameter() const noexcept { return parameter_; }
  double operator()(double x) const;

 private:
  PayoffKind kind_ = PayoffKind::identity;
  double parameter_ = 0.0;
  double lipschitz_ = 1.0;
  std::function<double(double)> fn_;
};

/// A continuous linear functional through its Riesz representative.
class FunctionalSpec {
 public:
  /// D X = (riesz, X)_H.
  static FunctionalSpec forward(HilbertVector riesz);
  /// D T = <riesz, T>_HS.
  static FunctionalSpec volatility(HSOperator riesz);
  /// D T = Tr(T) on L_HS(H) of dimension d.
  static FunctionalSpec trace(int d);

  bool on_operators() const noexcept { return op_riesz_.has_value(); }
  double op_norm() const noexcept { return op_norm_; }
  int dim() const noexcept;

  double operator()(const HilbertVector& x) const;
  double operator()(const HSOperator& t) const;

 private:
  std::optional<HilbertVector> vec_riesz_;
  std::optional<HSOperator> op_riesz_;
  double op_norm_ = 0.0;
};

/// Index of tau among `times`, within 1e-12 max(1, T). Throws ConfigError when absent.
std::size_t locate_time(const std::vector<double>& times, double tau);

/// Price from X (level unset) or X^n over an ensemble.
Estimate price_option(const std::vector<ForwardPath>& paths, std::optional<int> level, const FunctionalSpec& d,
                      const PayoffSpec& p, double tau);

/// Price of p(D sqrt(V(tau))) over an ensemble of variance paths.
Estimate price_vol_option(const std::vector<VariancePath>& paths, const FunctionalSpec& d, const PayoffSpec& p,
                          double tau);

struct PriceRobustness {
  int level = 0;
  Estimate price;
  Estimate price_base;
  /// |P - P^n| from paired differences.
  Estimate price_diff;
  /// K ||D|| E|X(tau) - X^n(tau)|.
  Estimate lipschitz_bound;
  /// K ||D|| sqrt(C(T) E sup||V - V^n||_HS), when supplied.
  std::optional<Estimate> theorem_cap;
  BoundReport lipschitz_link;
  std::optional<BoundReport> cap_link;

  bool pass() const noexcept { return lipschitz_link.pass && (!cap_link || cap_link->pass); }
};

/// Chain |P - P^n| <= K||D|| E|dX(tau)| <= cap, from ensembles that share
/// Wiener increments replication by replication. Throws ConfigError otherwise.
PriceRobustness price_robustness_report(const std::vector<ForwardPath>& base,
                                        const std::vector<ForwardPath>& approx, int level,
                                        const FunctionalSpec& d, const PayoffSpec& p, double tau,
                                        std::optional<Estimate> theorem_cap = std::nullopt);

/// Per-replication pieces of the chain, for callers that stream replications.
struct PriceSample {
  double payoff_base = 0.0;
  double payoff_level = 0.0;
  double abs_error = 0.0;
};

PriceRobustness price_robustness_from_samples(const std::vector<PriceSample>& samples, int level,
                                              const FunctionalSpec& d, const PayoffSpec& p,
                                              std::optional<Estimate> theorem_cap);

}  // namespace opvol
