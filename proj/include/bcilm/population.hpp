#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bcilm {

struct Individual {
  std::size_t id = 0;
  double x = 0.0;
  double y = 0.0;
  std::vector<double> covariates;

  bool operator==(const Individual&) const = default;
};

struct Interval {
  double min = 0.0;
  double max = 0.0;
};

/// Static spatial population with a cached pairwise Euclidean distance matrix.
///
/// Immutable after construction. Individuals are stored in id order, ids are
/// 0..n-1.
class Population {
 public:
  Population() = default;
  /// `individuals[k].id` must equal k.
  explicit Population(std::vector<Individual> individuals,
                      std::vector<std::string> covariate_names = {});

  std::size_t size() const { return individuals_.size(); }
  const Individual& operator[](std::size_t i) const { return individuals_[i]; }
  const std::vector<Individual>& individuals() const { return individuals_; }
  const std::vector<std::string>& covariate_names() const { return covariate_names_; }

  double distance(std::size_t i, std::size_t j) const { return distances_[i * size() + j]; }
  /// Row i of the distance matrix.
  std::span<const double> distances_from(std::size_t i) const {
    return {distances_.data() + i * size(), size()};
  }
  /// Smallest off-diagonal distance; +inf when n < 2.
  double min_distance() const;

  /// Index of a named covariate column; throws ConfigError when absent.
  std::size_t covariate_index(const std::string& name) const;

  bool operator==(const Population&) const = default;

 private:
  std::vector<Individual> individuals_;
  std::vector<std::string> covariate_names_;
  std::vector<double> distances_;
};

/// n individuals with coordinates drawn independently and uniformly over the
/// ranges.
Population generate_population(std::size_t n, Interval x_range, Interval y_range,
                               std::uint64_t rng_seed);

/// Reads `id,x,y[,cov...]`. Rows may appear in any order but the ids must be
/// exactly 0..n-1.
Population load_population(const std::filesystem::path& path);
void save_population(const Population& pop, const std::filesystem::path& path);

/// Scales all coordinates by a common factor so that the minimum pairwise
/// distance is `target_min`. Returns the population unchanged when it already
/// satisfies the bound.
Population rescale_min_distance(const Population& pop, double target_min);

}  // namespace bcilm
