#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bcilm/error.hpp"
#include "bcilm/inference.hpp"

namespace bcilm {

double spectrum0(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("spectrum0 needs at least two values");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const std::size_t max_order =
      std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::floor(10.0 * std::log10(static_cast<double>(n)))));

  std::vector<double> acov(max_order + 1, 0.0);
  for (std::size_t lag = 0; lag <= max_order; ++lag) {
    double s = 0.0;
    for (std::size_t i = lag; i < n; ++i) s += (x[i] - mean) * (x[i - lag] - mean);
    acov[lag] = s / static_cast<double>(n);
  }
  if (!(acov[0] > 0.0)) return 0.0;

  // Levinson-Durbin recursion; keep the AIC-best order.
  std::vector<double> phi, prev;
  double var = acov[0];
  double best_aic = static_cast<double>(n) * std::log(var);
  std::vector<double> best_phi;
  double best_var = var;
  for (std::size_t p = 1; p <= max_order; ++p) {
    double num = acov[p];
    for (std::size_t j = 1; j < p; ++j) num -= phi[j - 1] * acov[p - j];
    const double k = num / var;
    prev = phi;
    phi.assign(p, 0.0);
    for (std::size_t j = 1; j < p; ++j) phi[j - 1] = prev[j - 1] - k * prev[p - j - 1];
    phi[p - 1] = k;
    var *= (1.0 - k * k);
    if (!(var > 0.0)) break;
    const double aic = static_cast<double>(n) * std::log(var) + 2.0 * static_cast<double>(p);
    if (aic < best_aic) {
      best_aic = aic;
      best_phi = phi;
      best_var = var;
    }
  }
  const double order = static_cast<double>(best_phi.size());
  const double var_pred = best_var * static_cast<double>(n) / (static_cast<double>(n) - (order + 1.0));
  const double denom = 1.0 - std::accumulate(best_phi.begin(), best_phi.end(), 0.0);
  return var_pred / (denom * denom);
}

GewekeResult geweke_diagnostic(std::span<const double> chain, double first_frac, double last_frac) {
  if (!(first_frac > 0.0 && last_frac > 0.0 && first_frac + last_frac <= 1.0))
    throw DomainError("geweke window fractions must be positive and sum to at most 1");
  const std::size_t n = chain.size();
  const auto n1 = static_cast<std::size_t>(std::floor(first_frac * static_cast<double>(n)));
  const auto n2 = static_cast<std::size_t>(std::floor(last_frac * static_cast<double>(n)));
  if (n1 < 2 || n2 < 2) throw DomainError("chain too short for the Geweke diagnostic");
  const auto a = chain.first(n1);
  const auto b = chain.last(n2);
  auto constant = [](std::span<const double> w) {
    return std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
  };
  GewekeResult r;
  if (constant(a) || constant(b)) {
    r.stuck = true;
    r.z = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n1);
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n2);
  const double se2 = spectrum0(a) / static_cast<double>(n1) + spectrum0(b) / static_cast<double>(n2);
  r.z = (ma - mb) / std::sqrt(se2);
  return r;
}

}  // namespace bcilm
