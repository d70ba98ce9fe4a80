#include "bcilm/population.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"
#include "bcilm/rng.hpp"

namespace bcilm {

Population::Population(std::vector<Individual> individuals, std::vector<std::string> covariate_names)
    : individuals_(std::move(individuals)), covariate_names_(std::move(covariate_names)) {
  const std::size_t n = individuals_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (individuals_[k].id != k)
      throw ValidationError("individual at position " + std::to_string(k) + " has id " +
                            std::to_string(individuals_[k].id));
    if (!covariate_names_.empty() && individuals_[k].covariates.size() != covariate_names_.size())
      throw ValidationError("individual " + std::to_string(k) + " has wrong covariate count");
  }
  distances_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(individuals_[i].x - individuals_[j].x,
                                  individuals_[i].y - individuals_[j].y);
      distances_[i * n + j] = d;
      distances_[j * n + i] = d;
    }
  }
}

double Population::min_distance() const {
  double m = std::numeric_limits<double>::infinity();
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m = std::min(m, distances_[i * n + j]);
  return m;
}

std::size_t Population::covariate_index(const std::string& name) const {
  for (std::size_t c = 0; c < covariate_names_.size(); ++c)
    if (covariate_names_[c] == name) return c;
  throw ConfigError("population has no covariate column '" + name + "'");
}

Population generate_population(std::size_t n, Interval x_range, Interval y_range,
                               std::uint64_t rng_seed) {
  if (n < 1) throw ConfigError("population size must be at least 1");
  if (!(x_range.min < x_range.max) || !(y_range.min < y_range.max))
    throw ConfigError("coordinate range must satisfy min < max");
  Rng rng(mix_seed(rng_seed));
  std::uniform_real_distribution<double> ux(x_range.min, x_range.max);
  std::uniform_real_distribution<double> uy(y_range.min, y_range.max);
  std::vector<Individual> people(n);
  for (std::size_t i = 0; i < n; ++i) {
    people[i].id = i;
    people[i].x = ux(rng);
    people[i].y = uy(rng);
  }
  return Population(std::move(people));
}

Population load_population(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  if (t.header.size() < 3 || t.header[0] != "id" || t.header[1] != "x" || t.header[2] != "y")
    throw ParseError(t.source + ":1: header must start with id,x,y");
  std::vector<std::string> cov_names(t.header.begin() + 3, t.header.end());
  const std::size_t n = t.rows.size();
  std::vector<Individual> people(n);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const long long id = csv::to_int(t, r, 0);
    if (id < 0 || static_cast<std::size_t>(id) >= n)
      throw ParseError(t.where(r) + ": id " + std::to_string(id) + " outside 0.." +
                       std::to_string(n - 1));
    if (seen[id]) throw ParseError(t.where(r) + ": duplicate id " + std::to_string(id));
    seen[id] = true;
    Individual& ind = people[id];
    ind.id = static_cast<std::size_t>(id);
    ind.x = csv::to_double(t, r, 1);
    ind.y = csv::to_double(t, r, 2);
    for (std::size_t c = 3; c < t.header.size(); ++c) ind.covariates.push_back(csv::to_double(t, r, c));
  }
  return Population(std::move(people), std::move(cov_names));
}

void save_population(const Population& pop, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "id,x,y";
  for (const auto& name : pop.covariate_names()) os << ',' << name;
  os << '\n';
  for (const auto& ind : pop.individuals()) {
    os << ind.id << ',' << csv::format(ind.x) << ',' << csv::format(ind.y);
    for (double c : ind.covariates) os << ',' << csv::format(c);
    os << '\n';
  }
  csv::write_file(path, os.str());
}

Population rescale_min_distance(const Population& pop, double target_min) {
  if (pop.size() < 2) throw ConfigError("rescaling needs at least two individuals");
  if (!(target_min > 0.0)) throw ConfigError("target minimum distance must be positive");
  const double current = pop.min_distance();
  if (current == 0.0) throw ValidationError("coincident individuals; cannot rescale to a positive minimum distance");
  if (current >= target_min) return pop;
  const double factor = target_min / current;
  std::vector<Individual> people = pop.individuals();
  for (auto& ind : people) {
    ind.x *= factor;
    ind.y *= factor;
  }
  return Population(std::move(people), pop.covariate_names());
}

}  // namespace bcilm
