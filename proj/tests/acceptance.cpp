// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
//
//   opvol_acceptance --scenarios DIR [--cli PATH] [--work-dir DIR] [--only N]

#include "opvol/bounds.hpp"
#include "opvol/config.hpp"
#include "opvol/experiments.hpp"
#include "opvol/forward.hpp"
#include "opvol/operator_core.hpp"
#include "opvol/processes.hpp"
#include "opvol/report.hpp"
#include "opvol/report_io.hpp"
#include "opvol/rng.hpp"
#include "opvol/variance.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace opvol;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::filesystem::path scenarios;
  std::filesystem::path work_dir;
  std::string cli;
  // Shared runs, computed on first use.
  std::optional<Ensemble> default_run;
  double default_seconds = 0.0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Stream stream_for(std::uint64_t salt) { return derive_stream(0xACCE97ULL, salt, Purpose::test); }

Matrix gaussian_matrix(int rows, int cols, Stream& s) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = n(s);
  return m;
}

// Random PSD matrix of random rank and scale, normalised to unit-ish size.
HSOperator random_psd(int d, Stream& s) {
  std::uniform_int_distribution<int> rank(1, d);
  const Matrix g = gaussian_matrix(d, rank(s), s) / std::sqrt(static_cast<double>(d));
  return HSOperator(Matrix(g * g.transpose()));
}

// A PSD pair, sometimes independent and sometimes a small perturbation of each other.
std::pair<HSOperator, HSOperator> random_psd_pair(int d, Stream& s, int i) {
  const HSOperator a = random_psd(d, s);
  if (i % 2 == 0) return {a, random_psd(d, s)};
  const double eps = std::pow(10.0, -1.0 - (i % 7));
  const Matrix g = gaussian_matrix(d, 1 + i % d, s);
  return {a, HSOperator(Matrix(a.matrix() + eps * g * g.transpose()))};
}

const BoundReport* find_report(const std::vector<BoundReport>& reports, const std::string& id, int level) {
  for (const auto& r : reports)
    if (r.id == id && r.level == level) return &r;
  return nullptr;
}

CoupledScenario load_scenario(const Context& ctx, const char* name) {
  return load_config_file((ctx.scenarios / name).string()).scenario;
}

const Ensemble& default_ensemble(Context& ctx) {
  if (!ctx.default_run) {
    const auto t0 = std::chrono::steady_clock::now();
    ctx.default_run = simulate_ensemble(load_scenario(ctx, "default.json"));
    ctx.default_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return *ctx.default_run;
}

// 1. Trace-norm tensor identity and square-root round trip.
Outcome operator_identities(Context&) {
  Stream s = stream_for(1);
  const int d = 8;
  double worst_tensor = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const HilbertVector f(gaussian_matrix(d, 1, s).col(0));
    const HilbertVector g(gaussian_matrix(d, 1, s).col(0));
    worst_tensor = std::max(worst_tensor, std::abs(norm(tensor_product(f, g), NormMode::trace) - f.norm() * g.norm()));
  }
  double worst_sqrt = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const HSOperator a = random_psd(d, s);
    const HSOperator r = psd_sqrt(a);
    worst_sqrt = std::max(worst_sqrt, (r.matrix() * r.matrix() - a.matrix()).norm() / a.matrix().norm());
  }
  return {worst_tensor <= 1e-12 && worst_sqrt <= 1e-10,
          "max | ||f(x)g||_1 - |f||g| | = " + fmt("%.2e", worst_tensor) +
              ", max relative ||sqrt(A)^2 - A|| = " + fmt("%.2e", worst_sqrt)};
}

// 2. Square-root inequalities and the power-difference lemma.
Outcome inequality_suite(Context&) {
  Stream s = stream_for(2);
  const int d = 8;
  const double tol = 1e-12;
  double worst_op = -INFINITY, worst_hs = -INFINITY, worst_hs_modulus = -INFINITY, worst_pow = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = random_psd_pair(d, s, i);
    const HSOperator diff = psd_sqrt(a) - psd_sqrt(b);
    const double op = norm(diff, NormMode::op);
    worst_op = std::max(worst_op, op * op - norm(a - b, NormMode::op));
  }
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = random_psd_pair(d, s, i);
    const double hs = norm(psd_sqrt(a) - psd_sqrt(b), NormMode::hs);
    worst_hs = std::max(worst_hs, hs * hs - norm(a - b, NormMode::trace));
    // Same inequality through the modulus form || |A - B|^{1/2} ||_HS.
    const double m = norm(psd_sqrt(operator_modulus(a - b)), NormMode::hs);
    worst_hs_modulus = std::max(worst_hs_modulus, hs - m);
  }
  for (int i = 0; i < 1000; ++i) {
    const Matrix a = gaussian_matrix(d, d, s) / std::sqrt(static_cast<double>(d));
    const Matrix b = (i % 2 == 0) ? Matrix(gaussian_matrix(d, d, s) / std::sqrt(static_cast<double>(d)))
                                  : Matrix(a + 1e-3 * gaussian_matrix(d, d, s));
    const double na = norm(HSOperator(a), NormMode::op), nb = norm(HSOperator(b), NormMode::op);
    const double dab = norm(HSOperator(Matrix(a - b)), NormMode::op);
    Matrix ak = a, bk = b;
    for (int k = 1; k <= 6; ++k) {
      if (k > 1) {
        ak = ak * a;
        bk = bk * b;
      }
      const double lhs = norm(HSOperator(Matrix(ak - bk)), NormMode::op);
      const double rhs = k * std::pow(std::max(na, nb), k - 1) * dab;
      worst_pow = std::max(worst_pow, (lhs - rhs) / (1.0 + rhs));
    }
  }
  const bool pass = worst_op <= tol && worst_hs <= tol && worst_hs_modulus <= tol && worst_pow <= tol;
  return {pass, "max excess: op-norm root " + fmt("%.2e", worst_op) + ", HS root vs trace " + fmt("%.2e", worst_hs) +
                    ", HS root vs modulus " + fmt("%.2e", worst_hs_modulus) + ", power k<=6 " + fmt("%.2e", worst_pow)};
}

// 3. Generator eigenvalues and the diagonal projection tail.
Outcome eigensystem_fidelity(Context&) {
  const int d = 8;
  const Vector l = karhunen_loeve_spectrum(d);
  double worst = 0.0;
  for (GeneratorKind kind : {GeneratorKind::sandwich, GeneratorKind::sylvester}) {
    const GeneratorSpec g = kind == GeneratorKind::sandwich ? GeneratorSpec::sandwich(HSOperator::diagonal(l))
                                                            : GeneratorSpec::sylvester(HSOperator::diagonal(l));
    const GeneratorEigensystem e = generator_eigensystem(g);
    // Match eigenvalues of C back to the input spectrum through the basis.
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Eigen::Index pj = 0, pk = 0;
        e.basis.col(j).cwiseAbs().maxCoeff(&pj);
        e.basis.col(k).cwiseAbs().maxCoeff(&pk);
        const double expected = kind == GeneratorKind::sandwich ? l[pj] * l[pk] : l[pj] + l[pk];
        worst = std::max(worst, std::abs(e.Lambda(j, k) - expected));
      }
  }
  // ||T - Pi_n T||^2 = sum_{k > n/2} lambda_k^2 for T = diag(lambda).
  double worst_tail = 0.0;
  Stream s = stream_for(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector lam(d);
    for (int j = 0; j < d; ++j) lam[j] = trial == 0 ? l[j] : u(s);
    const HSOperator t = HSOperator::diagonal(lam);
    for (int n = 2; n <= 2 * d; ++n) {
      double tail = 0.0;
      for (int k = 1; k <= d; ++k)
        if (2 * k > n) tail += lam[k - 1] * lam[k - 1];
      const double err = norm(t - project_operator(t, ProjectionSpec::level(d, n)), NormMode::hs);
      worst_tail = std::max(worst_tail, std::abs(err * err - tail));
    }
  }
  return {worst <= 1e-10 && worst_tail <= 1e-12,
          "max eigenvalue error " + fmt("%.2e", worst) + ", max tail identity error " + fmt("%.2e", worst_tail)};
}

// 4. E||L(t)||^2 against lambda t m2 + (lambda t)^2 |m1|^2 with independently estimated moments.
Outcome compound_poisson_moment(Context&) {
  const int d = 8;
  const double intensity = 2.0, t = 1.0;
  const int R = 20000;
  Vector gamma(d);
  for (int j = 0; j < d; ++j) gamma[j] = std::ldexp(1.0, -(j + 1));
  const JumpLaw law = JumpLaw::gaussian(gamma);

  std::vector<double> l2(R);
  for (int r = 0; r < R; ++r) {
    Stream cs = derive_stream(4, r, Purpose::clock);
    Stream js = derive_stream(4, r, Purpose::jumps);
    const PoissonClock clock = sample_clock(intensity, t, cs);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < clock.count(); ++i) sum += sample_tensor_jump(law, {}, js).jump.matrix();
    l2[r] = sum.squaredNorm();
  }
  const Estimate lhs = estimate(l2);

  // Jump moments from a separate sample.
  std::vector<double> x2(R);
  std::vector<Matrix> xs(R);
  Matrix mean = Matrix::Zero(d, d);
  for (int r = 0; r < R; ++r) {
    Stream ps = derive_stream(4, r, Purpose::probe);
    xs[r] = sample_tensor_jump(law, {}, ps).jump.matrix();
    x2[r] = xs[r].squaredNorm();
    mean += xs[r];
  }
  mean /= R;
  const Estimate m2 = estimate(x2);
  // Delta method for |mean|^2: influence 2 <mean, X_r>.
  std::vector<double> infl(R);
  for (int r = 0; r < R; ++r) infl[r] = 2.0 * (mean.array() * xs[r].array()).sum();
  const double m1sq = mean.squaredNorm();
  const double m1sq_se = estimate(infl).se;
  const SecondMoment sm = cp_second_moment(intensity, t, m2.mean, m1sq);
  const double lt = intensity * t;
  const double rhs_se = std::hypot(lt * m2.se, lt * lt * m1sq_se);
  const double z = (lhs.mean - sm.exact) / std::hypot(lhs.se, rhs_se);
  return {std::abs(z) <= 3.0, "MC " + fmt("%.5g", lhs.mean) + " (se " + fmt("%.2g", lhs.se) + ") vs formula " +
                                   fmt("%.5g", sm.exact) + " (se " + fmt("%.2g", rhs_se) + "), z = " + fmt("%.2f", z)};
}

// 5. Pathwise bound on every replication.
Outcome pathwise_bound(Context& ctx) {
  const Ensemble& e = default_ensemble(ctx);
  const auto reports = bound_reports(e);
  double violations = 0.0;
  int rows = 0;
  for (const auto& r : reports)
    if (r.id == "pathwise_hs" || r.id == "pathwise_trace") {
      violations += r.lhs;
      ++rows;
    }
  const bool sylvester = e.scenario.generator.kind == GeneratorKind::sylvester;
  return {rows == 2 * static_cast<int>(e.levels.size()) && violations == 0.0 && sylvester,
          std::to_string(static_cast<long long>(violations)) + " violations over " +
              std::to_string(e.samples.size()) + " replications x " + std::to_string(e.levels.size()) +
              " levels (HS and trace norms)"};
}

// 6. Jump-truncation variance bound and monotone estimates.
Outcome variance_jump_bound(Context& ctx) {
  const Ensemble& e = default_ensemble(ctx);
  const auto reports = bound_reports(e);
  const ConvergenceTable table = convergence_table(e);
  bool pass = true;
  std::ostringstream os;
  std::optional<std::pair<double, double>> prev;
  for (int n : {2, 4, 6}) {
    const BoundReport* r = find_report(reports, "variance_jumps", n);
    const BoundReport* r1 = find_report(reports, "variance_jumps_single_exp", n);
    if (!r || !r1) return {false, "missing variance_jumps report at level " + std::to_string(n)};
    pass = pass && r->pass && r1->pass;
    os << "n=" << n << " margin " << fmt("%.1f", r->margin) << " (single-exp " << fmt("%.1f", r1->margin) << "); ";
    if (prev && r->lhs > prev->first + 3.0 * std::hypot(r->lhs_stderr, prev->second)) pass = false;
    prev = {r->lhs, r->lhs_stderr};
  }
  const bool monotone = std::find(table.non_monotone.begin(), table.non_monotone.end(), "variance_sup_hs2") ==
                        table.non_monotone.end();
  os << (monotone ? "estimates decreasing" : "estimates NOT decreasing");
  return {pass && monotone, os.str()};
}

// 7. Generator-truncation scenario and the deterministic tail bound.
Outcome generator_truncation(Context& ctx) {
  const auto reports = run_experiment(load_scenario(ctx, "generator.json"));
  int failed = 0;
  double worst_margin = INFINITY;
  for (const auto& r : reports) {
    if (!r.pass) ++failed;
    worst_margin = std::min(worst_margin, r.margin);
  }
  // ||G - G^n||_op <= sqrt(2 sup tail Lambda^2) over every level, both generator kinds.
  const int d = 8;
  const Vector l = karhunen_loeve_spectrum(d);
  double worst_ratio = 0.0;
  for (GeneratorKind kind : {GeneratorKind::sandwich, GeneratorKind::sylvester}) {
    const GeneratorSpec g = kind == GeneratorKind::sandwich ? GeneratorSpec::sandwich(HSOperator::diagonal(l))
                                                            : GeneratorSpec::sylvester(HSOperator::diagonal(-l));
    const Matrix lambda = generator_eigensystem(g).Lambda;
    for (int n = 2; n < 2 * d; ++n) {
      const ProjectionSpec p = ProjectionSpec::level(d, n);
      const double dist = generator_distance_op(g, truncate_generator(g, p));
      const double cap = std::sqrt(2.0 * eigen_tail_sup_squared(lambda, p));
      if (dist > cap * (1.0 + 1e-12)) ++failed;
      worst_ratio = std::max(worst_ratio, dist / cap);
    }
  }
  return {failed == 0, std::to_string(reports.size()) + " reports, worst margin " + fmt("%.1f", worst_margin) +
                           "; max ||G - G^n|| / sqrt(2 tail) = " + fmt("%.4f", worst_ratio)};
}

// 8. Forward robustness against E sup ||V - V^n||_HS.
Outcome forward_bound(Context& ctx) {
  const Ensemble& e = default_ensemble(ctx);
  const auto reports = bound_reports(e);
  bool pass = e.scenario.d == 8 && e.scenario.steps == 200 && e.samples.size() == 2000;
  std::ostringstream os;
  for (int n : e.scenario.levels) {
    const BoundReport* r = find_report(reports, "forward_sup", n);
    if (!r) return {false, "missing forward_sup report"};
    pass = pass && r->pass;
    os << "n=" << n << " lhs " << fmt("%.3g", r->lhs) << " rhs " << fmt("%.3g", r->rhs) << " margin "
       << fmt("%.1f", r->margin) << "; ";
  }
  pass = pass && ctx.default_seconds < 600.0;
  os << "ensemble time " << fmt("%.1f", ctx.default_seconds) << " s";
  return {pass, os.str()};
}

// 9. Ito isometry with constant volatility, and first-order bias of the scheme.
Outcome ito_isometry(Context&) {
  CoupledScenario s;
  s.d = 8;
  s.levels = {8};
  s.steps = 50;
  s.replications = 8000;
  s.jump_gamma = Vector::Zero(8);
  s.initial_spectrum = Vector::Ones(8);
  s.generator.scale = 0.0;
  s.seed = 9;
  std::ostringstream os;
  bool pass = true;

  // A = 0: the scheme is exact, E|X(T)|^2 = T Tr Q.
  s.forward.rates = Vector::Zero(8);
  {
    const Ensemble e = simulate_ensemble(s);
    std::vector<double> x2;
    for (const auto& r : e.samples) x2.push_back(r.x_tau_norm2);
    const Estimate m = estimate(x2);
    const double target = s.horizon * e.trace_q;
    pass = pass && std::abs(m.mean - target) <= 3.0 * m.se;
    os << "A=0: " << fmt("%.4f", m.mean) << " vs T Tr Q = " << fmt("%.4f", target) << " (se " << fmt("%.2g", m.se)
       << "); ";
  }

  // Diagonal A != 0: continuous value sum_j q_j (e^{2 a_j T} - 1) / (2 a_j); allowance is the scheme bias.
  CoupledScenario sd = s;
  sd.forward.rates = Vector();
  sd = sd.with_defaults();
  const Vector rates = sd.forward.rates;
  const Vector q = sd.q;
  double continuous = 0.0;
  for (int j = 0; j < 8; ++j) continuous += q[j] * std::expm1(2.0 * rates[j] * s.horizon) / (2.0 * rates[j]);
  auto scheme_value = [&](int steps) {
    std::vector<double> times(steps + 1);
    for (int m = 0; m <= steps; ++m) times[m] = s.horizon * m / steps;
    const ForwardStepper st(ForwardSemigroupSpec::diagonal(rates), s.horizon / steps);
    const std::vector<HSOperator> sq(times.size(), HSOperator::identity(8));
    return scheme_second_moment(sq, times, st, QWienerSpec(q));
  };
  {
    const Ensemble e = simulate_ensemble(sd);
    std::vector<double> x2;
    for (const auto& r : e.samples) x2.push_back(r.x_tau_norm2);
    const Estimate m = estimate(x2);
    const double allowance = std::abs(scheme_value(s.steps) - continuous);
    pass = pass && std::abs(m.mean - continuous) <= 3.0 * m.se + allowance;
    os << "A diag: " << fmt("%.4f", m.mean) << " vs " << fmt("%.4f", continuous) << " (allowance "
       << fmt("%.1e", allowance) << "); ";
  }
  const double b200 = scheme_value(200) - continuous;
  const double b400 = scheme_value(400) - continuous;
  const double ratio = b200 / b400;
  pass = pass && std::abs(ratio / 2.0 - 1.0) <= 0.2;
  os << "bias(T/200)/bias(T/400) = " << fmt("%.4f", ratio);
  return {pass, os.str()};
}

// 10. Pricing chain on the default scenario and the half-normal price.
Outcome pricing_chain(Context& ctx) {
  const Ensemble& e = default_ensemble(ctx);
  bool pass = true;
  std::ostringstream os;
  for (const auto& pr : pricing_reports(e)) {
    pass = pass && pr.lipschitz_link.pass && pr.cap_link && pr.cap_link->pass;
    os << "n=" << pr.level << " |dP| " << fmt("%.2g", pr.price_diff.mean) << " <= " << fmt("%.2g", pr.lipschitz_bound.mean)
       << " <= " << fmt("%.2g", pr.theorem_cap ? pr.theorem_cap->mean : NAN) << "; ";
  }
  const CoupledScenario g = load_scenario(ctx, "gaussian_pricing.json").with_defaults();
  const auto rows = run_pricing(g);
  // D X(tau) ~ N(0, tau (Q D, D)) when V = I and A = 0.
  const Vector dq = g.q.cwiseProduct(g.functional);
  const double sigma = std::sqrt(g.exercise_time.value_or(g.horizon) * g.functional.dot(dq));
  const double expected = sigma / std::sqrt(2.0 * std::numbers::pi);
  const double z = (rows.front().price - expected) / rows.front().se;
  pass = pass && std::abs(z) <= 3.0;
  os << "Gaussian P " << fmt("%.4f", rows.front().price) << " vs sigma/sqrt(2 pi) " << fmt("%.4f", expected)
     << " (z " << fmt("%.2f", z) << ")";
  return {pass, os.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 11. Byte-identical CSV across thread counts.
Outcome determinism(Context& ctx) {
  const std::filesystem::path config = ctx.scenarios / "default.json";
  std::string a, b;
  std::string how;
  if (!ctx.cli.empty()) {
    for (int threads : {1, 8}) {
      const std::filesystem::path dir = ctx.work_dir / ("threads_" + std::to_string(threads));
      std::filesystem::remove_all(dir);
      const std::string cmd = "\"" + ctx.cli + "\" verify \"" + config.string() + "\" --seed 7 --threads " +
                              std::to_string(threads) + " --out-dir \"" + dir.string() + "\" > /dev/null";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) return {false, "CLI exited with status " + std::to_string(rc)};
      (threads == 1 ? a : b) = read_file(dir / "bounds.csv");
    }
    how = "opvol verify --seed 7, --threads 1 vs 8";
  } else {
    CoupledScenario s = load_scenario(ctx, "default.json");
    s.seed = 7;
    for (int threads : {1, 8}) {
      std::ostringstream os;
      write_bounds_csv(os, run_experiment(s, {threads, {}}));
      (threads == 1 ? a : b) = os.str();
    }
    how = "in-process run, threads 1 vs 8";
  }
  return {!a.empty() && a == b, how + ": " + std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  Context ctx;
  std::string scenarios, work_dir = "acceptance_work";
  int only = 0;
  app.add_option("--scenarios", scenarios, "Directory with the shipped scenario files")->required();
  app.add_option("--cli", ctx.cli, "Path to the opvol executable (for the determinism check)");
  app.add_option("--work-dir", work_dir, "Scratch directory");
  app.add_option("--only", only, "Run a single criterion");
  CLI11_PARSE(app, argc, argv);
  ctx.scenarios = scenarios;
  ctx.work_dir = work_dir;
  std::filesystem::create_directories(ctx.work_dir);

  const std::vector<std::pair<const char*, std::function<Outcome(Context&)>>> criteria{
      {"operator identities", operator_identities},
      {"square-root and power inequalities", inequality_suite},
      {"generator eigensystem and projection tail", eigensystem_fidelity},
      {"compound Poisson second moment", compound_poisson_moment},
      {"pathwise variance bound", pathwise_bound},
      {"jump-truncation variance bound", variance_jump_bound},
      {"generator-truncation bounds", generator_truncation},
      {"forward robustness bound", forward_bound},
      {"Ito isometry smoke test", ito_isometry},
      {"pricing chain", pricing_chain},
      {"determinism across thread counts", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Criteria 1 and 4 carry their own time limits.
    if (i == 0 && secs >= 10.0) o = {false, o.detail + "; too slow"};
    if (i == 3 && secs >= 60.0) o = {false, o.detail + "; too slow"};
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s  %-44s %7.2f s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
