// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/nnhm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <span>

#include "metamix/normal.hpp"

namespace metamix {

namespace {

std::atomic<std::uint64_t> g_fit_calls{0};

constexpr double kTailQuantile = 0.99995;
constexpr std::size_t kMinIntervals = 256;
constexpr std::size_t kMaxIntervals = 8192;
constexpr double kLogMarginalTol = 1e-6;

double interpolate_density(const TabulatedPrior& prior, double tau) {
  const auto& x = prior.support;
  const auto& f = prior.density;
  if (tau < x.front() || tau > x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), tau);
  if (it == x.begin()) return f.front();
  if (it == x.end()) return f.back();
  const std::size_t hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double t = (tau - x[lo]) / (x[hi] - x[lo]);
  return f[lo] + t * (f[hi] - f[lo]);
}

void check_dataset(const Dataset& data) {
  if (data.empty()) throw InputError("nnhm: dataset must be non-empty");
  for (const auto& e : data.estimates) {
    if (!(e.se > 0.0) || !std::isfinite(e.se) || !std::isfinite(e.y)) {
      throw InputError("nnhm: study '" + e.study_label + "' has invalid y/se");
    }
  }
}

void check_effect_prior(const EffectPrior& p) {
  if (!(p.sd > 0.0) || !std::isfinite(p.sd) || !std::isfinite(p.mean)) {
    throw InputError("nnhm: effect prior needs finite mean and positive sd");
  }
}

// Simpson mass over a uniform grid with an odd number of points.
std::vector<double> simpson_weights(std::size_t n_points, double h) {
  std::vector<double> w(n_points, h / 3.0);
  for (std::size_t i = 1; i + 1 < n_points; ++i) {
    w[i] *= (i % 2 == 1) ? 4.0 : 2.0;
  }
  return w;
}

NNHMFit fit_on_grid_impl(const Dataset& data, std::span<const EffectPrior> priors,
                         const TauGrid& grid) {
  g_fit_calls.fetch_add(1, std::memory_order_relaxed);
  check_dataset(data);
  const std::size_t n = grid.size();
  if (n == 0) throw InputError("nnhm: empty tau grid");
  if (priors.size() != 1 && priors.size() != n) {
    throw InputError("nnhm: effect prior count must be 1 or the grid size");
  }

  std::vector<double> log_weights(n);
  std::vector<Gaussian> cond(n);
  for (std::size_t j = 0; j < n; ++j) {
    const EffectPrior& pr = priors.size() == 1 ? priors[0] : priors[j];
    const ConditionalPosterior cp = conditional_mu_posterior(data, pr, grid.tau[j]);
    cond[j] = {cp.mean, cp.sd};
    const double mass = grid.prior_mass[j];
    log_weights[j] = (mass > 0.0)
                         ? std::log(mass) + cp.log_marginal
                         : -std::numeric_limits<double>::infinity();
  }

  const double logm = log_sum_exp(log_weights);
  if (!std::isfinite(logm)) {
    throw NumericalError("nnhm: non-finite log marginal likelihood");
  }

  std::vector<double> post(n);
  std::vector<NormalComponent> comps(n);
  for (std::size_t j = 0; j < n; ++j) {
    post[j] = std::isfinite(log_weights[j]) ? std::exp(log_weights[j] - logm) : 0.0;
    comps[j] = {post[j], cond[j].mean, cond[j].sd};
  }

  return NNHMFit{logm,
                 grid.tau,
                 grid.quad_weight,
                 std::move(post),
                 std::move(cond),
                 NormalMixture(std::move(comps))};
}

double log_marginal_on_grid(const Dataset& data, const EffectPrior& prior,
                            const TauGrid& grid) {
  std::vector<double> lw;
  lw.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid.prior_mass[j] <= 0.0) continue;
    const ConditionalPosterior cp = conditional_mu_posterior(data, prior, grid.tau[j]);
    lw.push_back(std::log(grid.prior_mass[j]) + cp.log_marginal);
  }
  return log_sum_exp(lw);
}

}  // namespace

void TabulatedPrior::validate() const {
  if (support.empty() || support.size() != density.size()) {
    throw InputError("TabulatedPrior: support/density size mismatch or empty");
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!(support[i] >= 0.0) || !std::isfinite(support[i])) {
      throw InputError("TabulatedPrior: support must be non-negative and finite");
    }
    if (i > 0 && !(support[i] > support[i - 1])) {
      throw InputError("TabulatedPrior: support must be strictly ascending");
    }
    if (!(density[i] >= 0.0) || !std::isfinite(density[i])) {
      throw InputError("TabulatedPrior: density must be non-negative and finite");
    }
  }
  if (support.size() == 1) return;  // point mass

  // Uniform odd-sized grids get the module's Simpson rule, anything else
  // a trapezoid check.
  const std::size_t n = support.size();
  const double h = support[1] - support[0];
  bool uniform = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((support[i] - support[i - 1]) - h) > 1e-9 * (1.0 + h)) {
      uniform = false;
      break;
    }
  }
  double integral = 0.0;
  if (uniform && n % 2 == 1) {
    const auto w = simpson_weights(n, h);
    for (std::size_t i = 0; i < n; ++i) integral += w[i] * density[i];
  } else {
    for (std::size_t i = 1; i < n; ++i) {
      integral += 0.5 * (density[i] + density[i - 1]) * (support[i] - support[i - 1]);
    }
  }
  if (std::abs(integral - 1.0) > 1e-6) {
    throw InputError("TabulatedPrior: density must integrate to 1");
  }
}

void HierarchicalPrior::validate() const {
  const std::size_t n = tau_support.size();
  if (n == 0 || tau_weights.size() != n || mu_given_tau.size() != n) {
    throw InputError("HierarchicalPrior: inconsistent field sizes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(tau_weights[i] >= 0.0)) throw InputError("HierarchicalPrior: negative weight");
    if (!(mu_given_tau[i].sd > 0.0)) throw InputError("HierarchicalPrior: sd must be > 0");
    sum += tau_weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw InputError("HierarchicalPrior: weights must sum to 1");
  }
}

ConditionalPosterior conditional_mu_posterior(const Dataset& data,
                                              const EffectPrior& prior, double tau) {
  check_dataset(data);
  check_effect_prior(prior);
  if (!(tau >= 0.0)) throw InputError("nnhm: tau must be non-negative");

  const double w0 = 1.0 / (prior.sd * prior.sd);
  double wsum = w0;
  double b = w0 * prior.mean;
  double c = w0 * prior.mean * prior.mean;
  double log_w = std::log(w0);
  for (const auto& e : data.estimates) {
    const double w = 1.0 / (e.se * e.se + tau * tau);
    wsum += w;
    b += w * e.y;
    c += w * e.y * e.y;
    log_w += std::log(w);
  }
  const double k = static_cast<double>(data.size());
  ConditionalPosterior out;
  out.mean = b / wsum;
  out.sd = std::sqrt(1.0 / wsum);
  out.log_marginal =
      -0.5 * k * kLogTwoPi + 0.5 * (log_w - std::log(wsum)) - 0.5 * (c - b * b / wsum);
  return out;
}

TauGrid make_uniform_grid(const HeterogeneityPrior& prior, std::size_t intervals) {
  if (intervals % 2 != 0) throw InputError("make_uniform_grid: intervals must be even");

  if (const auto* tab = std::get_if<TabulatedPrior>(&prior)) {
    tab->validate();
    if (tab->support.size() == 1) {
      return TauGrid{{tab->support.front()}, {1.0}, {1.0}};
    }
    const double tau_max = tab->support.back();
    const std::size_t n = intervals + 1;
    const double h = tau_max / static_cast<double>(intervals);
    TauGrid g;
    g.tau.resize(n);
    g.quad_weight = simpson_weights(n, h);
    g.prior_mass.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g.tau[i] = h * static_cast<double>(i);
      g.prior_mass[i] = g.quad_weight[i] * interpolate_density(*tab, g.tau[i]);
      total += g.prior_mass[i];
    }
    if (total <= 0.0) throw InputError("make_uniform_grid: tabulated prior has no mass");
    for (auto& m : g.prior_mass) m /= total;
    return g;
  }

  const auto& hn = std::get<HalfNormalPrior>(prior);
  if (!(hn.scale > 0.0) || !std::isfinite(hn.scale)) {
    throw InputError("make_uniform_grid: half-normal scale must be positive");
  }
  const double tau_max = hn.scale * normal_quantile(0.5 * (1.0 + kTailQuantile));
  const std::size_t n = intervals + 1;
  const double h = tau_max / static_cast<double>(intervals);
  const double norm = 2.0 / (hn.scale * kSqrtTwoPi);
  TauGrid g;
  g.tau.resize(n);
  g.quad_weight = simpson_weights(n, h);
  g.prior_mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.tau[i] = h * static_cast<double>(i);
    const double z = g.tau[i] / hn.scale;
    g.prior_mass[i] = g.quad_weight[i] * norm * std::exp(-0.5 * z * z);
  }
  return g;
}

TauGrid build_tau_grid(const HeterogeneityPrior& het, const Dataset& data,
                       const EffectPrior& eff) {
  check_dataset(data);
  check_effect_prior(eff);

  if (const auto* tab = std::get_if<TabulatedPrior>(&het)) {
    tab->validate();
    if (tab->support.size() == 1) return make_uniform_grid(het, kMinIntervals);
  }

  std::size_t intervals = kMinIntervals;
  TauGrid grid = make_uniform_grid(het, intervals);
  double logm = log_marginal_on_grid(data, eff, grid);
  while (true) {
    const std::size_t next = intervals * 2;
    if (next > kMaxIntervals) {
      throw NumericalError("build_tau_grid: no convergence at " +
                           std::to_string(kMaxIntervals) + " intervals");
    }
    const TauGrid fine = make_uniform_grid(het, next);
    const double logm_fine = log_marginal_on_grid(data, eff, fine);
    if (std::abs(logm_fine - logm) < kLogMarginalTol) {
      return grid;  // converged at the coarser resolution
    }
    intervals = next;
    grid = fine;
    logm = logm_fine;
  }
}

NNHMFit fit_on_grid(const Dataset& data, const EffectPrior& prior, const TauGrid& grid) {
  check_effect_prior(prior);
  return fit_on_grid_impl(data, std::span<const EffectPrior>(&prior, 1), grid);
}

NNHMFit fit(const Dataset& data, const EffectPrior& eff, const HeterogeneityPrior& het) {
  return fit_on_grid(data, eff, build_tau_grid(het, data, eff));
}

NNHMFit fit(const Dataset& data, const HierarchicalPrior& prior) {
  prior.validate();
  TauGrid grid{prior.tau_support,
               std::vector<double>(prior.tau_support.size(), 1.0),
               prior.tau_weights};
  return fit_on_grid_impl(data, prior.mu_given_tau, grid);
}

HierarchicalPrior posterior_as_prior(const NNHMFit& fit) {
  std::vector<EffectPrior> mu(fit.conditional_mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = {fit.conditional_mu[i].mean, fit.conditional_mu[i].sd};
  }
  return HierarchicalPrior{fit.tau_grid, fit.tau_posterior_weights, std::move(mu)};
}

TabulatedPrior tau_prior_from_posterior(const NNHMFit& fit) {
  if (fit.tau_grid.size() == 1) {
    return TabulatedPrior{{fit.tau_grid.front()}, {1.0}};
  }
  TabulatedPrior out;
  out.support = fit.tau_grid;
  out.density.resize(fit.tau_grid.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < out.density.size(); ++i) {
    out.density[i] = fit.tau_posterior_weights[i] / fit.tau_quad_weights[i];
    integral += fit.tau_posterior_weights[i];
  }
  for (auto& d : out.density) d /= integral;
  return out;
}

std::uint64_t fit_call_count() { return g_fit_calls.load(std::memory_order_relaxed); }

}  // namespace metamix
