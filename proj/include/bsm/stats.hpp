#pragma once

// Descriptive statistics with t-based confidence intervals, one-way ANOVA,
// and pairwise contrasts on the pooled within-group variance.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "bsm/errors.hpp"

namespace bsm {

struct Descriptives {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double std_error = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  bool degenerate = false;  // single observation: interval collapses to the value
};

inline Descriptives describe(std::span<const double> values, double confidence = 0.95) {
  if (values.empty()) raise(ErrorKind::InsufficientData, "no values to describe");
  Descriptives d;
  d.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  d.mean = sum / static_cast<double>(d.count);
  if (d.count == 1) {
    d.ci_lower = d.ci_upper = d.mean;
    d.degenerate = true;
    return d;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - d.mean) * (v - d.mean);
  d.stddev = std::sqrt(ss / static_cast<double>(d.count - 1));
  d.std_error = d.stddev / std::sqrt(static_cast<double>(d.count));
  const boost::math::students_t_distribution<> t(static_cast<double>(d.count - 1));
  const double q = boost::math::quantile(t, 0.5 + confidence / 2.0);
  d.ci_lower = d.mean - q * d.std_error;
  d.ci_upper = d.mean + q * d.std_error;
  return d;
}

struct AnovaResult {
  double f = 0.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double p_value = 1.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  std::vector<Descriptives> groups;
};

inline AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) raise(ErrorKind::InsufficientData, "ANOVA needs at least 2 groups");
  std::size_t n_total = 0;
  double grand_sum = 0.0;
  AnovaResult result;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      raise(ErrorKind::InsufficientData, "every ANOVA group needs at least 2 values");
    }
    result.groups.push_back(describe(g));
    n_total += g.size();
    for (double v : g) grand_sum += v;
  }
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double n = static_cast<double>(groups[i].size());
    const double diff = result.groups[i].mean - grand_mean;
    ss_between += n * diff * diff;
    for (double v : groups[i]) {
      ss_within += (v - result.groups[i].mean) * (v - result.groups[i].mean);
    }
  }

  result.df_between = groups.size() - 1;
  result.df_within = n_total - groups.size();
  if (ss_within <= 0.0) {
    raise(ErrorKind::DegenerateVariance, "zero within-group variance; F is undefined");
  }
  result.ms_between = ss_between / static_cast<double>(result.df_between);
  result.ms_within = ss_within / static_cast<double>(result.df_within);
  result.f = result.ms_between / result.ms_within;

  const boost::math::fisher_f_distribution<> f_dist(static_cast<double>(result.df_between),
                                                    static_cast<double>(result.df_within));
  result.p_value = result.f > 0.0 ? boost::math::cdf(boost::math::complement(f_dist, result.f))
                                  : 1.0;
  return result;
}

struct ContrastResult {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  double mean_difference = 0.0;
  double t = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
};

// Two-group contrast on the pooled within-group variance of a fitted ANOVA.
inline ContrastResult contrast(const AnovaResult& anova, std::size_t group_a,
                               std::size_t group_b) {
  if (group_a >= anova.groups.size() || group_b >= anova.groups.size() || group_a == group_b) {
    raise(ErrorKind::DomainError, "contrast requires two distinct fitted group indices");
  }
  const Descriptives& a = anova.groups[group_a];
  const Descriptives& b = anova.groups[group_b];
  ContrastResult c;
  c.group_a = group_a;
  c.group_b = group_b;
  c.mean_difference = a.mean - b.mean;
  const double se = std::sqrt(anova.ms_within * (1.0 / static_cast<double>(a.count) +
                                                 1.0 / static_cast<double>(b.count)));
  c.t = c.mean_difference / se;
  c.df = anova.df_within;
  const boost::math::students_t_distribution<> t_dist(static_cast<double>(c.df));
  c.p_value = 2.0 * boost::math::cdf(boost::math::complement(t_dist, std::abs(c.t)));
  return c;
}

// Report-facing rendering: full precision is preserved in data fields; this
// is only the human-readable form.
inline std::string format_p_value(double p) {
  if (p < 1e-6) return "~0";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", p);
  return buffer;
}

}  // namespace bsm
