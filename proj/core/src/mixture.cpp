// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metamix/normal.hpp"

namespace metamix {

NormalMixture::NormalMixture(std::vector<NormalComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw InputError("NormalMixture: at least one component required");
  }
  double sum = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw InputError("NormalMixture: weights must be finite and non-negative");
    }
    if (!(c.sd > 0.0) || !std::isfinite(c.sd) || !std::isfinite(c.mean)) {
      throw InputError("NormalMixture: components need finite mean and positive sd");
    }
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InputError("NormalMixture: weights must sum to 1");
  }
  for (auto& c : components_) c.weight /= sum;
}

double NormalMixture::pdf(double x) const {
  double d = 0.0;
  for (const auto& c : components_) d += c.weight * normal_pdf(x, c.mean, c.sd);
  return d;
}

double NormalMixture::cdf(double x) const {
  double p = 0.0;
  for (const auto& c : components_) p += c.weight * normal_cdf(x, c.mean, c.sd);
  return p;
}

double NormalMixture::mean() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

double NormalMixture::sd() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * (c.sd * c.sd + c.mean * c.mean);
  return std::sqrt(std::max(0.0, v - m * m));
}

double NormalMixture::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw InputError("quantile: p must lie in (0, 1)");
  }
  double min_mean = components_.front().mean;
  double max_mean = min_mean;
  double max_sd = components_.front().sd;
  for (const auto& c : components_) {
    min_mean = std::min(min_mean, c.mean);
    max_mean = std::max(max_mean, c.mean);
    max_sd = std::max(max_sd, c.sd);
  }
  double lo = min_mean - 10.0 * max_sd;
  double hi = max_mean + 10.0 * max_sd;
  for (int i = 0; cdf(lo) > p; ++i) {
    if (i >= 10) throw NumericalError("quantile: lower bracket not found");
    lo -= (hi - lo);
  }
  for (int i = 0; cdf(hi) < p; ++i) {
    if (i >= 10) throw NumericalError("quantile: upper bracket not found");
    hi += (hi - lo);
  }

  // Bisection with safeguarded Newton steps.
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double c = cdf(x);
    if (std::abs(c - p) < 1e-12) break;
    if (c > p) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(x))) break;
    const double d = pdf(x);
    double next = (d > 1e-300) ? x - (c - p) / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

Interval NormalMixture::equal_tailed_interval(double level) const {
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("equal_tailed_interval: level must lie in (0, 1)");
  }
  const double alpha = 0.5 * (1.0 - level);
  return {quantile(alpha), quantile(1.0 - alpha)};
}

Interval NormalMixture::shortest_interval(double level) const {
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("shortest_interval: level must lie in (0, 1)");
  }
  const double min_p = std::min(0.001, 0.5 * (1.0 - level));
  double lo = quantile(min_p);
  double hi = quantile(1.0 - level);

  const auto upper_for = [&](double left) {
    double p = level + cdf(left);
    p = std::min(p, 1.0 - 1e-14);
    return quantile(p);
  };
  const auto width = [&](double left) { return upper_for(left) - left; };

  // Coarse scan guards against local minima of the (possibly multimodal)
  // width objective before the 1D minimization.
  constexpr int kScan = 64;
  const double step = (hi - lo) / kScan;
  double best_left = lo;
  double best_width = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double l = lo + i * step;
    const double w = width(l);
    if (w < best_width) {
      best_width = w;
      best_left = l;
    }
  }

  // Golden-section within the bracketing scan cells.
  double a = std::max(lo, best_left - step);
  double b = std::min(hi, best_left + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = width(x1);
  double f2 = width(x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = width(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = width(x2);
    }
  }
  const double left = 0.5 * (a + b);
  return {left, upper_for(left)};
}

std::vector<double> model_posterior_probs(std::span<const double> log_marginals,
                                          std::span<const double> priors) {
  if (log_marginals.size() != priors.size() || priors.empty()) {
    throw InputError("model_posterior_probs: size mismatch");
  }
  double prior_sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw InputError("model_posterior_probs: negative prior");
    prior_sum += p;
  }
  if (prior_sum <= 0.0) {
    throw InputError("model_posterior_probs: all prior probabilities are zero");
  }
  std::vector<double> log_post(priors.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < priors.size(); ++i) {
    if (priors[i] > 0.0) {
      if (!std::isfinite(log_marginals[i])) {
        throw InputError("model_posterior_probs: non-finite log marginal");
      }
      log_post[i] = log_marginals[i] + std::log(priors[i]);
    }
  }
  const double norm = log_sum_exp(log_post);
  std::vector<double> out(priors.size());
  for (std::size_t i = 0; i < priors.size(); ++i) {
    out[i] = std::isfinite(log_post[i]) ? std::exp(log_post[i] - norm) : 0.0;
  }
  return out;
}

double ModelAverage::bayes_factor_between(std::size_t a, std::size_t b) const {
  return bayes_factor(models.at(a).log_marginal, models.at(b).log_marginal);
}

ModelAverage average(const std::vector<WeightedPosterior>& fits,
                     std::span<const double> priors) {
  if (fits.size() != priors.size()) {
    throw InputError("average: fits/priors size mismatch");
  }
  std::vector<double> logm(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) logm[i] = fits[i].log_marginal;
  const std::vector<double> post = model_posterior_probs(logm, priors);

  std::vector<NormalComponent> pooled;
  std::vector<ModelPosterior> models;
  models.reserve(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    models.push_back({fits[i].label, priors[i], logm[i], post[i]});
    for (const auto& c : fits[i].posterior.components()) {
      pooled.push_back({post[i] * c.weight, c.mean, c.sd});
    }
  }
  return ModelAverage{std::move(models), NormalMixture(std::move(pooled))};
}

}  // namespace metamix
