#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tlab {

/// Confidence level used whenever an inequality is judged "within CI".
inline constexpr double kPolicyConfidence = 0.9999;
/// Number of standard errors both sides are widened by under the same policy.
inline constexpr double kPolicySigmas = 4.0;

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Exact binomial (Clopper–Pearson) interval for hits out of trials.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence = 0.95);

/// Standard error of a proportion estimate, sqrt(q(1-q)/trials).
double proportion_stderr(std::uint64_t hits, std::uint64_t trials);

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a - F_b|. Sorts copies.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample KS critical value at the given significance.
double ks_critical_value(std::size_t na, std::size_t nb, double significance);

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

}  // namespace tlab
