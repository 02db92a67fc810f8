#include "opvol/pricing.hpp"

#include "opvol/errors.hpp"

#include <algorithm>
#include <cmath>

namespace opvol {

PayoffSpec PayoffSpec::call(double strike) {
  if (!std::isfinite(strike)) throw ConfigError("payoff: strike must be finite");
  PayoffSpec p;
  p.kind_ = PayoffKind::call;
  p.parameter_ = strike;
  return p;
}

PayoffSpec PayoffSpec::put(double strike) {
  PayoffSpec p = call(strike);
  p.kind_ = PayoffKind::put;
  return p;
}

PayoffSpec PayoffSpec::identity() { return PayoffSpec(); }

PayoffSpec PayoffSpec::constant(double value) {
  if (!std::isfinite(value)) throw ConfigError("payoff: constant must be finite");
  PayoffSpec p;
  p.kind_ = PayoffKind::constant;
  p.parameter_ = value;
  p.lipschitz_ = 0.0;
  return p;
}

PayoffSpec PayoffSpec::custom(std::function<double(double)> fn, double lipschitz) {
  if (!fn) throw ConfigError("payoff: empty custom function");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
    throw ConfigError("payoff: Lipschitz constant must be finite and >= 0");
  PayoffSpec p;
  p.kind_ = PayoffKind::custom;
  p.lipschitz_ = lipschitz;
  p.fn_ = std::move(fn);
  return p;
}

double PayoffSpec::operator()(double x) const {
  switch (kind_) {
    case PayoffKind::call:
      return std::max(x - parameter_, 0.0);
    case PayoffKind::put:
      return std::max(parameter_ - x, 0.0);
    case PayoffKind::identity:
      return x;
    case PayoffKind::constant:
      return parameter_;
    case PayoffKind::custom:
      return fn_(x);
  }
  throw InternalError("payoff: unknown kind");
}

FunctionalSpec FunctionalSpec::forward(HilbertVector riesz) {
  FunctionalSpec f;
  f.op_norm_ = riesz.norm();
  f.vec_riesz_ = std::move(riesz);
  return f;
}

FunctionalSpec FunctionalSpec::volatility(HSOperator riesz) {
  FunctionalSpec f;
  f.op_norm_ = norm(riesz, NormMode::hs);
  f.op_riesz_ = std::move(riesz);
  return f;
}

FunctionalSpec FunctionalSpec::trace(int d) { return volatility(HSOperator::identity(d)); }

int FunctionalSpec::dim() const noexcept { return op_riesz_ ? op_riesz_->dim() : vec_riesz_->dim(); }

double FunctionalSpec::operator()(const HilbertVector& x) const {
  if (!vec_riesz_) throw ConfigError("functional: acts on operators, not vectors");
  return vec_riesz_->dot(x);
}

double FunctionalSpec::operator()(const HSOperator& t) const {
  if (!op_riesz_) throw ConfigError("functional: acts on vectors, not operators");
  return op_riesz_->inner(t);
}

std::size_t locate_time(const std::vector<double>& times, double tau) {
  if (times.empty()) throw ConfigError("exercise time: empty grid");
  const double tol = 1e-12 * std::max(1.0, std::abs(times.back()));
  auto it = std::lower_bound(times.begin(), times.end(), tau - tol);
  if (it == times.end() || std::abs(*it - tau) > tol)
    throw ConfigError("exercise time is not a grid point (no interpolation)");
  return static_cast<std::size_t>(it - times.begin());
}

Estimate price_option(const std::vector<ForwardPath>& paths, std::optional<int> level, const FunctionalSpec& d,
                      const PayoffSpec& p, double tau) {
  if (paths.empty()) throw ConfigError("price_option: empty ensemble");
  std::vector<double> samples;
  samples.reserve(paths.size());
  for (const auto& path : paths) {
    const std::size_t m = locate_time(path.times, tau);
    const auto& xs = level ? path.x_levels[static_cast<std::size_t>(path.level_index(*level))] : path.x;
    samples.push_back(p(d(xs[m])));
  }
  return estimate(samples);
}

Estimate price_vol_option(const std::vector<VariancePath>& paths, const FunctionalSpec& d, const PayoffSpec& p,
                          double tau) {
  if (paths.empty()) throw ConfigError("price_vol_option: empty ensemble");
  std::vector<double> samples;
  samples.reserve(paths.size());
  for (const auto& path : paths) {
    std::vector<double> times;
    const auto idx = path.right_indices();
    for (std::size_t i : idx) times.push_back(path.grid[i].t);
    const std::size_t m = idx[locate_time(times, tau)];
    samples.push_back(p(d(psd_sqrt(path.values[m]))));
  }
  return estimate(samples);
}

PriceRobustness price_robustness_from_samples(const std::vector<PriceSample>& samples, int level,
                                              const FunctionalSpec& d, const PayoffSpec& p,
                                              std::optional<Estimate> theorem_cap) {
  if (samples.empty()) throw ConfigError("price_robustness_report: empty ensemble");
  std::vector<double> base, approx, diff, err;
  for (const auto& s : samples) {
    base.push_back(s.payoff_base);
    approx.push_back(s.payoff_level);
    diff.push_back(s.payoff_base - s.payoff_level);
    err.push_back(s.abs_error);
  }
  const double kd = p.lipschitz() * d.op_norm();
  PriceRobustness r;
  r.level = level;
  r.price = estimate(approx);
  r.price_base = estimate(base);
  const Estimate de = estimate(diff);
  r.price_diff = Estimate{std::abs(de.mean), de.se};
  const Estimate ee = estimate(err);
  r.lipschitz_bound = Estimate{kd * ee.mean, kd * ee.se};
  r.lipschitz_link = make_bound_report("price_lipschitz", level, r.price_diff, r.lipschitz_bound,
                                       "|P - P^n| <= K ||D|| E|X(tau) - X^n(tau)|");
  if (theorem_cap) {
    r.theorem_cap = theorem_cap;
    r.cap_link = make_bound_report("price_cap", level, r.lipschitz_bound, *theorem_cap,
                                   "K ||D|| E|dX(tau)| <= K ||D|| sqrt(C(T) E sup ||V - V^n||_HS)");
  }
  return r;
}

PriceRobustness price_robustness_report(const std::vector<ForwardPath>& base,
                                        const std::vector<ForwardPath>& approx, int level,
                                        const FunctionalSpec& d, const PayoffSpec& p, double tau,
                                        std::optional<Estimate> theorem_cap) {
  if (base.size() != approx.size() || base.empty())
    throw ConfigError("price_robustness_report: ensembles must be non-empty and of equal size");
  std::vector<PriceSample> samples;
  samples.reserve(base.size());
  for (std::size_t r = 0; r < base.size(); ++r) {
    const ForwardPath& b = base[r];
    const ForwardPath& a = approx[r];
    if (b.times != a.times || b.increments != a.increments)
      throw ConfigError("price_robustness_report: ensembles are not coupled (different Wiener increments)");
    const std::size_t m = locate_time(b.times, tau);
    const HilbertVector& xb = b.x[m];
    const HilbertVector& xa = a.x_levels[static_cast<std::size_t>(a.level_index(level))][m];
    samples.push_back(PriceSample{p(d(xb)), p(d(xa)), (xb - xa).norm()});
  }
  return price_robustness_from_samples(samples, level, d, p, theorem_cap);
}

}  // namespace opvol
