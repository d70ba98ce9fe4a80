#include "bcilm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"
#include "bcilm/inference.hpp"
#include "bcilm/parallel.hpp"
#include "bcilm/simulate.hpp"

namespace bcilm {

double CurveBand::coverage(const std::vector<int>& observed) const {
  if (observed.size() != size()) throw ValidationError("observed curve length differs from the band");
  if (observed.empty()) return 0.0;
  std::size_t in = 0;
  for (std::size_t k = 0; k < size(); ++k) in += (observed[k] >= lower[k] && observed[k] <= upper[k]) ? 1 : 0;
  return static_cast<double>(in) / static_cast<double>(size());
}

CurveBand curve_band(const std::vector<std::vector<int>>& curves, int t_first, double mass) {
  if (curves.empty()) throw DomainError("curve band needs at least one simulated curve");
  const std::size_t len = curves.front().size();
  for (const auto& c : curves)
    if (c.size() != len) throw ValidationError("simulated curves differ in length");
  CurveBand band;
  band.n_draws = curves.size();
  std::vector<double> column(curves.size());
  for (std::size_t k = 0; k < len; ++k) {
    for (std::size_t d = 0; d < curves.size(); ++d) column[d] = curves[d][k];
    const HpdInterval h = hpdi(column, mass);
    std::sort(column.begin(), column.end());
    band.t.push_back(t_first + static_cast<int>(k));
    band.lower.push_back(h.lower);
    band.median.push_back(column[(column.size() - 1) / 2]);
    band.upper.push_back(h.upper);
  }
  return band;
}

CurveBand ppd_curve(const ModelSpec& spec, const Population& pop, const PeriodSpec& periods,
                    const EpidemicHistory& history, const PosteriorSample& posterior, std::size_t n_draws,
                    std::uint64_t rng_seed, std::size_t threads) {
  const auto sims = resimulate_from_posterior(spec, pop, periods, history, posterior, n_draws,
                                              ResimulationStart::full(), rng_seed, threads);
  std::vector<std::vector<int>> curves;
  curves.reserve(sims.size());
  for (const auto& h : sims) curves.push_back(h.epidemic_curve());
  return curve_band(curves, history.t_min());
}

CurveBand forecast_curve(const ModelSpec& spec, const Population& pop, const PeriodSpec& periods,
                         const EpidemicHistory& history, const PosteriorSample& posterior, int t_cut, int horizon,
                         std::size_t n_draws, std::uint64_t rng_seed, std::size_t threads) {
  if (horizon <= t_cut)
    throw RangeError("forecast horizon " + std::to_string(horizon) + " must be after t_cut " + std::to_string(t_cut));
  const auto sims = resimulate_from_posterior(spec, pop, periods, history, posterior, n_draws,
                                              ResimulationStart::truncated_at(t_cut, horizon), rng_seed, threads);
  std::vector<std::vector<int>> curves;
  curves.reserve(sims.size());
  for (const auto& h : sims) {
    std::vector<int> c;
    for (int t = t_cut + 1; t <= horizon; ++t) c.push_back(static_cast<int>(h.new_infections(t).size()));
    curves.push_back(std::move(c));
  }
  return curve_band(curves, t_cut + 1);
}

namespace {

/// Running log-sum-exp and Welford variance of one pointwise term.
struct PointAccumulator {
  double max = -std::numeric_limits<double>::infinity();
  double sum_exp = 0.0;  ///< sum of exp(term - max)
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v, std::size_t count_after) {
    if (v > max) {
      sum_exp = sum_exp * std::exp(max - v) + 1.0;
      max = v;
    } else {
      sum_exp += std::exp(v - max);
    }
    const double d = v - mean;
    mean += d / static_cast<double>(count_after);
    m2 += d * (v - mean);
  }
};

WaicEntry finish(const std::vector<PointAccumulator>& acc, std::size_t draws, std::string label) {
  WaicEntry e;
  e.model = std::move(label);
  e.n_draws = draws;
  e.n_points = acc.size();
  const double log_n = std::log(static_cast<double>(draws));
  for (const auto& a : acc) {
    e.lppd += a.max + (std::log(a.sum_exp) - log_n);
    e.p_waic += a.m2 / static_cast<double>(draws - 1);
  }
  e.waic = -2.0 * (e.lppd - e.p_waic);
  return e;
}

}  // namespace

WaicEntry waic_from_terms(const std::vector<std::vector<double>>& terms, std::string label) {
  if (terms.size() < 2) throw DomainError("WAIC needs at least two posterior draws");
  std::vector<PointAccumulator> acc(terms.front().size());
  for (std::size_t d = 0; d < terms.size(); ++d) {
    if (terms[d].size() != acc.size()) throw ValidationError("pointwise term counts differ between draws");
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p].add(terms[d][p], d + 1);
  }
  return finish(acc, terms.size(), std::move(label));
}

WaicEntry waic(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
               const PosteriorSample& posterior, std::string label, std::size_t max_draws, std::size_t threads) {
  const std::size_t kept = posterior.kept();
  if (kept < 2) throw DomainError("WAIC needs at least two posterior draws");
  if (max_draws < 2) throw DomainError("WAIC needs max_draws >= 2");
  const std::size_t stride = (kept + max_draws - 1) / max_draws;
  std::vector<std::size_t> draws;
  for (std::size_t k = posterior.burn_in; k < posterior.iterations(); k += stride) draws.push_back(k);
  if (draws.size() < 2) throw DomainError("WAIC needs at least two posterior draws");

  threads = std::max<std::size_t>(1, std::min(threads, draws.size()));
  std::vector<std::unique_ptr<LikelihoodEngine>> engines;
  for (std::size_t k = 0; k < threads; ++k) engines.push_back(std::make_unique<LikelihoodEngine>(spec, pop, history));
  const std::size_t points = engines.front()->term_count();
  std::vector<PointAccumulator> acc(points);
  std::vector<std::vector<double>> buffers(threads);

  std::size_t done = 0;
  for (std::size_t start = 0; start < draws.size(); start += threads) {
    const std::size_t chunk = std::min(threads, draws.size() - start);
    parallel_for(chunk, threads, [&](std::size_t j) {
      engines[j]->pointwise(posterior.params_at(draws[start + j]), buffers[j]);
    });
    // Fold in draw order so the result does not depend on `threads`.
    for (std::size_t j = 0; j < chunk; ++j) {
      ++done;
      for (std::size_t p = 0; p < points; ++p) acc[p].add(buffers[j][p], done);
    }
  }
  return finish(acc, draws.size(), std::move(label));
}

WaicReport compare_models(std::vector<WaicEntry> entries) {
  if (entries.empty()) throw ValidationError("compare_models needs at least one model");
  WaicReport r;
  r.entries = std::move(entries);
  for (std::size_t k = 1; k < r.entries.size(); ++k)
    if (r.entries[k].waic < r.entries[r.best].waic) r.best = k;
  return r;
}

std::string WaicReport::to_csv() const {
  std::string out = "model,lppd,p_waic,waic,delta_vs_best,best,n_draws,n_points\n";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    out += e.model + "," + csv::format(e.lppd) + "," + csv::format(e.p_waic) + "," + csv::format(e.waic) + "," +
           csv::format(delta(k, best)) + "," + (k == best ? "1" : "0") + "," + std::to_string(e.n_draws) + "," +
           std::to_string(e.n_points) + "\n";
  }
  return out;
}

const std::vector<std::string>& model_grid_labels() {
  static const std::vector<std::string> labels{"Base", "1A", "1B", "2A", "2B", "3A", "3B", "4A", "4B"};
  return labels;
}

}  // namespace bcilm
