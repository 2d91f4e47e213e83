#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tlab/orthogonal.hpp"
#include "tlab/sampler.hpp"

namespace tlab {

/// Running sum of exp(l_i) kept in log-domain, plus the second moment of
/// the same terms (for the delta-method standard error). Terms are added
/// in a fixed order so results are reproducible bit-for-bit.
struct LogMomentAccumulator {
    double max = -std::numeric_limits<double>::infinity();
    double s1 = 0.0;  // sum exp(l - max)
    double s2 = 0.0;  // sum exp(2 (l - max))
    std::uint64_t terms = 0;

    void add(double l) noexcept;
    void merge(const LogMomentAccumulator& other) noexcept;
    [[nodiscard]] bool empty() const noexcept { return terms == 0; }
    /// log of (1/count) sum exp(l_i); -inf when empty.
    [[nodiscard]] double log_mean(std::uint64_t count) const noexcept;
    /// Standard error of the mean divided by the mean.
    [[nodiscard]] double relative_stderr(std::uint64_t count) const noexcept;
};

struct SupportEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double p = 0.0;
    Direction direction = Direction::axis(1, 0);
    std::size_t count = 0;
};

/// h_{Z_p}(theta), h_{Z_p^+}(theta) and h_{Z_p^+}(-theta) from one pass.
struct SupportTriple {
    SupportEstimate zp;
    SupportEstimate plus;
    SupportEstimate minus;
};

/// Evaluates all (direction, p) pairs over the batch; result[d][k] matches
/// dirs[d], ps[k]. Throws DegenerateEstimate if some direction has every
/// projection equal to zero.
std::vector<std::vector<SupportTriple>> support_profile(const Matrix& data, std::span<const Direction> dirs,
                                                        std::span<const double> ps, std::size_t threads = 0);

/// (E|G_1|^p)^{1/p} for a standard Gaussian, via log-gamma.
double gaussian_moment(double p);

SupportEstimate support_zp(const SampleBatch& batch, const Direction& theta, double p);
SupportEstimate support_zp_plus(const SampleBatch& batch, const Direction& theta, double p);
SupportEstimate support_zp(const Matrix& data, const Direction& theta, double p);
SupportEstimate support_zp_plus(const Matrix& data, const Direction& theta, double p);

struct SuperGaussianRatio {
    double ratio = 0.0;        // h_{Z_p^+}(theta) / gaussian_moment(p)
    double ratio_sqrtp = 0.0;  // h_{Z_p^+}(theta) / sqrt(p)
    double std_error = 0.0;    // of ratio
};

SuperGaussianRatio super_gaussian_ratio(const SampleBatch& batch, const Direction& theta, double p);

struct WorstDirection {
    Direction direction = Direction::axis(1, 0);
    double ratio_sqrtp = 0.0;
    double std_error = 0.0;
    std::size_t evaluations = 0;
};

/// Minimizes h_{Z_p^+}(theta)/sqrt(p) over the sphere by multi-start greedy
/// perturbation. The returned ratio is the lowest value evaluated, an upper
/// bound on the true infimum. `seeds` are tried before random restarts.
WorstDirection worst_direction(const Matrix& data, double p, std::size_t restarts, std::size_t steps,
                               const RandomStream& stream, std::span<const Direction> seeds = {});

/// Lowest h_{Z_p^+}(theta)/sqrt(p) over a fixed direction set (one batched pass).
WorstDirection worst_of_directions(const Matrix& data, double p, std::span<const Direction> dirs,
                                   std::size_t threads = 0);

struct PsiEstimate {
    double alpha = 0.0;
    double constant = 0.0;
    double argmax_p = 0.0;
    Direction argmax_direction = Direction::axis(1, 0);
};

/// max over p in the grid and sampled directions of
/// h_{Z_p}(theta) / (p^{1/alpha} h_{Z_2}(theta)); a lower bound on the
/// true psi_alpha constant.
PsiEstimate psi_alpha_estimate(const Matrix& data, double alpha, std::span<const double> p_grid,
                               std::size_t direction_count, const RandomStream& stream);

/// {2, 4, ..., 2^k} with 2^k <= p_max.
std::vector<double> dyadic_grid(double p_max);

struct BerwaldCheck {
    bool mono_ok = false;  // h_p <= h_q up to 1e-9 relative
    double h_p = 0.0;
    double h_q = 0.0;
    double ratio = 0.0;    // h_q / (h_p q / p)
};

BerwaldCheck berwald_check(const Matrix& data, const Direction& theta, double p, double q);

struct MeanWidth {
    double W = 0.0;
    double std_error = 0.0;
};

/// 2 x the average of h_{Z_p} over uniform directions.
MeanWidth mean_width_zp(const Matrix& data, double p, std::size_t direction_count, const RandomStream& stream);

struct TrivialInclusion {
    bool left_ok = false;   // h+(theta) <= 2^{1/p} h(theta)
    bool right_ok = false;  // 2^{1/p} h(theta) <= h+(theta) + h+(-theta)
    double h_plus = 0.0;
    double h_minus = 0.0;
    double h = 0.0;
};

inline constexpr double kExactRelTol = 1e-9;

TrivialInclusion trivial_inclusion_check(const Matrix& data, const Direction& theta, double p);

}  // namespace tlab
