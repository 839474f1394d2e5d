#ifndef GESTUREHMM_GMM_HPP
#define GESTUREHMM_GMM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gesturehmm/core.hpp"
#include "gesturehmm/numeric.hpp"

namespace gesturehmm {

inline constexpr double kVarianceFloor = 1e-6;

// Diagonal-covariance Gaussian.
struct Gaussian {
  std::vector<double> mean;
  std::vector<double> variance;  // diagonal of Sigma

  double log_pdf(std::span<const double> x) const {
    const std::size_t d = mean.size();
    double acc = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < d; ++i) {
      double diff = x[i] - mean[i];
      acc -= 0.5 * (std::log(variance[i]) + diff * diff / variance[i]);
    }
    return acc;
  }
};

struct MixtureComponent {
  double weight = 1.0;
  Gaussian gaussian;
};

struct GaussianMixture {
  std::vector<MixtureComponent> components;
  std::size_t dimension = 0;

  std::size_t size() const { return components.size(); }

  void validate() const {
    if (components.empty()) throw ValidationError("mixture must have at least 1 component");
    double sum = 0.0;
    for (const auto& c : components) {
      if (!(c.weight > 0)) throw ValidationError("mixture weights must be positive");
      if (c.gaussian.mean.size() != dimension || c.gaussian.variance.size() != dimension)
        throw ValidationError("mixture component dimension mismatch");
      for (double v : c.gaussian.variance)
        if (v < kVarianceFloor) throw ValidationError("variance below floor");
      sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1");
  }
};

// log sum_i c_i N(x; mu_i, diag(sigma^2_i)), max-shifted.
inline double gmm_log_pdf(const GaussianMixture& gmm, std::span<const double> x) {
  if (x.size() != gmm.dimension)
    throw ValidationError("gmm_log_pdf: dimension mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(gmm.dimension) + ")");
  std::vector<double> terms(gmm.size());
  for (std::size_t i = 0; i < gmm.size(); ++i)
    terms[i] = std::log(gmm.components[i].weight) + gmm.components[i].gaussian.log_pdf(x);
  return log_sum_exp(terms);
}

struct GmmFitReport {
  int iterations = 0;
  double final_mean_log_likelihood = 0.0;
  bool duplicated_components = false;
  bool component_count_reduced = false;
  std::vector<double> log_likelihood_trace;  // mean log-likelihood per iteration
};

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

// Farthest-point seeding: the seed picks the first center, each further
// center is the point with maximum distance to the chosen set.
inline std::vector<std::size_t> farthest_point_centers(const std::vector<std::vector<double>>& data,
                                                       std::size_t m, std::uint64_t seed) {
  std::vector<std::size_t> centers;
  std::mt19937_64 rng(seed);
  centers.push_back(std::uniform_int_distribution<std::size_t>(0, data.size() - 1)(rng));
  std::vector<double> min_dist(data.size(), std::numeric_limits<double>::infinity());
  while (centers.size() < m) {
    const auto& last = data[centers.back()];
    std::size_t best = 0;
    double best_dist = -1.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      min_dist[i] = std::min(min_dist[i], sq_dist(data[i], last));
      if (min_dist[i] > best_dist) {
        best_dist = min_dist[i];
        best = i;
      }
    }
    centers.push_back(best);
  }
  return centers;
}

}  // namespace detail

// One weighted EM iteration in place: component responsibilities scaled by
// the per-point weights drive a moment M-step. Returns the weighted mean
// log-likelihood under the input mixture. Used both by gmm_fit and by the
// HMM emission re-estimation.
inline double gmm_weighted_em_step(GaussianMixture& gmm, const std::vector<std::vector<double>>& data,
                                   std::span<const double> point_weights) {
  const std::size_t n = data.size();
  const std::size_t m = gmm.size();
  const std::size_t d = gmm.dimension;

  std::vector<double> comp_weight(m, 0.0);
  std::vector<std::vector<double>> sum_x(m, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> sum_xx(m, std::vector<double>(d, 0.0));

  double total_weight = 0.0;
  double weighted_ll = 0.0;
  std::vector<double> log_terms(m);
  for (std::size_t t = 0; t < n; ++t) {
    const double w = point_weights[t];
    if (w <= 0.0) continue;
    for (std::size_t i = 0; i < m; ++i)
      log_terms[i] = std::log(gmm.components[i].weight) + gmm.components[i].gaussian.log_pdf(data[t]);
    const double lse = log_sum_exp(log_terms);
    weighted_ll += w * lse;
    total_weight += w;
    for (std::size_t i = 0; i < m; ++i) {
      double resp = w * std::exp(log_terms[i] - lse);
      comp_weight[i] += resp;
      for (std::size_t f = 0; f < d; ++f) {
        double x = data[t][f];
        sum_x[i][f] += resp * x;
        sum_xx[i][f] += resp * x * x;
      }
    }
  }
  if (total_weight <= 0.0) throw NumericalError("gmm EM step: total point weight is zero");

  for (std::size_t i = 0; i < m; ++i) {
    auto& comp = gmm.components[i];
    // Components that captured no mass keep their parameters.
    if (comp_weight[i] > 1e-300) {
      for (std::size_t f = 0; f < d; ++f) {
        double mu = sum_x[i][f] / comp_weight[i];
        double var = sum_xx[i][f] / comp_weight[i] - mu * mu;
        comp.gaussian.mean[f] = mu;
        comp.gaussian.variance[f] = std::max(var, kVarianceFloor);
      }
    }
    comp.weight = std::max(comp_weight[i] / total_weight, 1e-300);
  }
  double wsum = 0.0;
  for (const auto& c : gmm.components) wsum += c.weight;
  for (auto& c : gmm.components) c.weight /= wsum;

  return weighted_ll / total_weight;
}

inline double gmm_mean_log_likelihood(const GaussianMixture& gmm,
                                      const std::vector<std::vector<double>>& data) {
  double ll = 0.0;
  for (const auto& x : data) ll += gmm_log_pdf(gmm, x);
  return ll / static_cast<double>(data.size());
}

inline GaussianMixture gmm_init(const std::vector<std::vector<double>>& data, std::size_t m,
                                std::uint64_t seed) {
  const std::size_t n = data.size();
  const std::size_t d = data.front().size();

  std::vector<double> global_var(d, 0.0);
  {
    std::vector<double> mean(d, 0.0);
    for (const auto& x : data)
      for (std::size_t f = 0; f < d; ++f) mean[f] += x[f];
    for (double& v : mean) v /= static_cast<double>(n);
    for (const auto& x : data)
      for (std::size_t f = 0; f < d; ++f) {
        double diff = x[f] - mean[f];
        global_var[f] += diff * diff;
      }
    for (double& v : global_var) v = std::max(v / static_cast<double>(n), kVarianceFloor);
  }

  auto centers = detail::farthest_point_centers(data, m, seed);
  GaussianMixture gmm;
  gmm.dimension = d;
  for (std::size_t i = 0; i < m; ++i) {
    MixtureComponent comp;
    comp.weight = 1.0 / static_cast<double>(m);
    comp.gaussian.mean = data[centers[i]];
    comp.gaussian.variance = global_var;
    gmm.components.push_back(std::move(comp));
  }
  return gmm;
}

inline GaussianMixture gmm_fit(const std::vector<std::vector<double>>& data, std::size_t m,
                               std::uint64_t seed, double tol = 1e-6, int max_iter = 200,
                               GmmFitReport* report = nullptr) {
  if (m < 1) throw ValidationError("gmm_fit: M must be >= 1");
  if (data.size() < m)
    throw ValidationError("gmm_fit: need at least M data points (" + std::to_string(data.size()) +
                          " < " + std::to_string(m) + ")");

  GaussianMixture gmm = gmm_init(data, m, seed);
  std::vector<double> unit_weights(data.size(), 1.0);

  GmmFitReport local;
  double prev_ll = kNegInf;
  for (int iter = 0; iter < max_iter; ++iter) {
    double ll = gmm_weighted_em_step(gmm, data, unit_weights);
    local.log_likelihood_trace.push_back(ll);
    local.iterations = iter + 1;
    if (ll - prev_ll < tol && iter > 0) {
      prev_ll = ll;
      break;
    }
    prev_ll = ll;
  }
  local.final_mean_log_likelihood = gmm_mean_log_likelihood(gmm, data);

  if (m > 1) {
    for (std::size_t i = 0; i + 1 < m && !local.duplicated_components; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (detail::sq_dist(gmm.components[i].gaussian.mean, gmm.components[j].gaussian.mean) == 0.0) {
          local.duplicated_components = true;
          break;
        }
  }
  if (report) *report = local;
  gmm.validate();
  return gmm;
}

}  // namespace gesturehmm

#endif
