#include "bcilm/prior.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>

#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"

namespace bcilm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Prior Prior::uniform(double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("Uniform prior needs a < b");
  return Prior(Kind::Uniform, lo, hi);
}

Prior Prior::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("Beta prior needs positive shape parameters");
  return Prior(Kind::Beta, a, b);
}

Prior Prior::gamma(double shape, double rate) {
  if (!(shape > 0.0 && rate > 0.0)) throw ConfigError("Gamma prior needs positive shape and rate");
  return Prior(Kind::Gamma, shape, rate);
}

bool Prior::in_support(double x) const {
  switch (kind_) {
    case Kind::Uniform: return x > a_ && x < b_;
    case Kind::Beta: return x > 0.0 && x < 1.0;
    case Kind::Gamma: return x > 0.0 && std::isfinite(x);
  }
  return false;
}

double Prior::log_density(double x) const {
  if (!in_support(x)) return kNegInf;
  switch (kind_) {
    case Kind::Uniform: return 0.0;
    case Kind::Beta: return (a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x);
    case Kind::Gamma: return (a_ - 1.0) * std::log(x) - b_ * x;
  }
  return kNegInf;
}

double Prior::mean() const {
  switch (kind_) {
    case Kind::Uniform: return 0.5 * (a_ + b_);
    case Kind::Beta: return a_ / (a_ + b_);
    case Kind::Gamma: return a_ / b_;
  }
  return 0.0;
}

double Prior::variance() const {
  switch (kind_) {
    case Kind::Uniform: return (b_ - a_) * (b_ - a_) / 12.0;
    case Kind::Beta: return a_ * b_ / ((a_ + b_) * (a_ + b_) * (a_ + b_ + 1.0));
    case Kind::Gamma: return a_ / (b_ * b_);
  }
  return 0.0;
}

double Prior::median() const {
  switch (kind_) {
    case Kind::Uniform: return 0.5 * (a_ + b_);
    case Kind::Beta: return boost::math::median(boost::math::beta_distribution<double>(a_, b_));
    case Kind::Gamma: return boost::math::median(boost::math::gamma_distribution<double>(a_, 1.0 / b_));
  }
  return 0.0;
}

double Prior::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Uniform: {
      double x;
      do {
        x = std::uniform_real_distribution<double>(a_, b_)(rng);
      } while (!in_support(x));
      return x;
    }
    case Kind::Beta: {
      double x;
      do {
        const double g1 = std::gamma_distribution<double>(a_, 1.0)(rng);
        const double g2 = std::gamma_distribution<double>(b_, 1.0)(rng);
        x = g1 / (g1 + g2);
      } while (!in_support(x));
      return x;
    }
    case Kind::Gamma: {
      double x;
      do {
        x = std::gamma_distribution<double>(a_, 1.0 / b_)(rng);
      } while (!in_support(x));
      return x;
    }
  }
  return 0.0;
}

std::string Prior::describe() const {
  const char* name = kind_ == Kind::Uniform ? "Uniform" : kind_ == Kind::Beta ? "Beta" : "Gamma";
  std::string s = std::string(name) + "(" + csv::format(a_) + ", " + csv::format(b_);
  if (kind_ == Kind::Gamma) s += " [rate]";
  return s + ")";
}

}  // namespace bcilm
