#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bcilm/rng.hpp"

namespace bcilm {

/// Uniform(a, b), Beta(a, b) or Gamma(shape = a, rate = b).
class Prior {
 public:
  enum class Kind { Uniform, Beta, Gamma };

  static Prior uniform(double lo, double hi);
  static Prior beta(double a, double b);
  static Prior gamma(double shape, double rate);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }

  /// Log density up to a constant that does not depend on x; -inf outside
  /// the support.
  double log_density(double x) const;
  bool in_support(double x) const;
  double median() const;
  double mean() const;
  double variance() const;
  double sample(Rng& rng) const;
  std::string describe() const;

 private:
  Prior(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

/// Ordered (parameter name, prior) pairs; the order fixes the sampling order.
using PriorSpec = std::vector<std::pair<std::string, Prior>>;

}  // namespace bcilm
