#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "tlab/centroid.hpp"
#include "tlab/orthogonal.hpp"
#include "tlab/sampler.hpp"
#include "tlab/stats.hpp"

namespace tlab {

enum class Sign : std::uint8_t { plus, minus };

/// Y^U_{+/-} = (X +/- U X') / sqrt2 with X' an independent copy of X.
struct ThickenedSpec {
    DistributionSpec base;
    OrthogonalMatrix rotation;
    Sign sign = Sign::plus;

    ThickenedSpec(DistributionSpec b, OrthogonalMatrix u, Sign s);
};

/// (X + G_n) / sqrt2 with G_n an independent standard Gaussian.
struct GaussianConvolvedSpec {
    DistributionSpec base;
};

using Law = std::variant<DistributionSpec, ThickenedSpec, GaussianConvolvedSpec>;

std::size_t dimension(const Law& law);
std::string describe(const Law& law);

/// Samples any law with the same sharding scheme as sample().
SampleBatch sample_law(const Law& law, std::size_t count, const RandomStream& stream, std::size_t threads = 0);
SampleBatch sample_thickened(const ThickenedSpec& spec, std::size_t count, const RandomStream& stream,
                             std::size_t threads = 0);
SampleBatch sample_gaussian_convolved(const DistributionSpec& base, std::size_t count,
                                      const RandomStream& stream, std::size_t threads = 0);

/// X, X' and Y = (X +/- U X')/sqrt2 built from the same draws.
struct ThickenedDraws {
    Matrix x;
    Matrix x_prime;
    Matrix y;
};

ThickenedDraws sample_thickened_joint(const ThickenedSpec& spec, std::size_t count, const RandomStream& stream,
                                      std::size_t threads = 0);

enum class TailSide : std::uint8_t {
    at_least,   // |X| >= threshold
    at_most,    // |X| <= threshold
    deviation,  // ||X| - sqrt(n)| >= threshold
};

struct TailEstimate {
    double threshold = 0.0;
    TailSide side = TailSide::at_least;
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double ci_low = 0.0;   // 95% Clopper–Pearson
    double ci_high = 1.0;

    [[nodiscard]] double estimate() const noexcept {
        return static_cast<double>(hits) / static_cast<double>(trials);
    }
    [[nodiscard]] double std_error() const { return proportion_stderr(hits, trials); }
    /// Interval at the decision-policy confidence.
    [[nodiscard]] Interval policy_interval() const { return clopper_pearson(hits, trials, kPolicyConfidence); }
};

/// Upper limit on streamed trials for a single estimate.
inline constexpr std::uint64_t kMaxTrials = 100'000'000;

/// Streams `trials` draws of the law and counts the event for each
/// threshold, all on the same draws (so estimates are nested in the
/// threshold). Never materializes the draws.
std::vector<TailEstimate> tail_estimates(const Law& law, std::span<const double> thresholds, TailSide side,
                                         std::uint64_t trials, const RandomStream& stream,
                                         std::size_t threads = 0);

TailEstimate tail_estimate(const Law& law, double threshold, TailSide side, std::uint64_t trials,
                           const RandomStream& stream, std::size_t threads = 0);

struct TransferenceCheck {
    TailEstimate lhs;      // X at radius (1 +/- t) sqrt n
    TailEstimate y_plus;
    TailEstimate y_minus;
    double rhs_point = 0.0;  // (2 max(q+, q-))^{1/2} from point estimates
    double rhs_bound = 0.0;  // same, from the policy upper limits
    bool ok_within_ci = false;
};

/// P(|X| >= (1+t)sqrt n) <= (2 max_{+/-} P(|Y^U_{+/-}| >= (1+t)sqrt n))^{1/2} for side at_least,
/// and the (1-t) small-ball twin for side at_most (t in [0, 1]).
TransferenceCheck transference_check(const DistributionSpec& base, const OrthogonalMatrix& u, double t,
                                     TailSide side, std::uint64_t trials, const RandomStream& stream,
                                     std::size_t threads = 0);

struct Curve {
    std::vector<double> grid;
    std::vector<TailEstimate> points;
    std::vector<double> envelope;    // running min (deviation) of the estimates
    bool monotone_within_ci = true;  // successive policy intervals never contradict monotonicity
    double log_slope = 0.0;          // small-ball only: d log P / d log eps over points with hits
};

/// P(||X| - sqrt n| >= t sqrt n) per t.
Curve deviation_curve(const Law& law, std::span<const double> t_grid, std::uint64_t trials,
                      const RandomStream& stream, std::size_t threads = 0);

/// P(|X| <= eps sqrt n) per eps.
Curve small_ball_curve(const Law& law, std::span<const double> eps_grid, std::uint64_t trials,
                       const RandomStream& stream, std::size_t threads = 0);

struct FloorRow {
    double t = 0.0;
    double floor_bound = 0.0;  // P(|(X+G)/sqrt2| <= sqrt(((1-t)^2+1)/2) sqrt n), constant taken as 1
    double thm1_bound = 0.0;   // (2 max_{+/-} P(|Y^U_{+/-}| <= (1-t) sqrt n))^{1/2}
    TailEstimate floor_est;
    TailEstimate y_plus;
    TailEstimate y_minus;
};

std::vector<FloorRow> gaussian_floor_demo(const DistributionSpec& base, const OrthogonalMatrix& u,
                                          std::span<const double> t_grid, std::uint64_t trials,
                                          const RandomStream& stream, std::size_t threads = 0);

struct Lemma0Case {
    std::size_t direction_index = 0;
    double p = 0.0;
    double lhs = 0.0;      // h_{Z_p^+(Y)}(theta)
    double rhs = 0.0;      // (h_{Z_p^+(X)}(theta) + h_{Z_p^+(X)}(U^T theta)) / (2 sqrt2 e^{1/p})
    double joint_se = 0.0;
    bool ok = false;       // lhs + 4 joint_se >= rhs
};

/// Per-direction Minkowski-sum lower bound for Y = (X + U X')/sqrt2.
std::vector<Lemma0Case> lemma0_check(const DistributionSpec& base, const OrthogonalMatrix& u,
                                     std::span<const Direction> dirs, std::span<const double> ps,
                                     std::size_t count, const RandomStream& stream, std::size_t threads = 0);

struct Part2Row {
    double p = 0.0;
    double base_envelope = 0.0;   // max_theta h_{Z_p^+(X)}(theta) / p^{1/alpha}
    double plus_envelope = 0.0;
    double minus_envelope = 0.0;
    bool ok = false;              // max(plus, minus) <= 2 base
};

std::vector<Part2Row> part2_envelope(const DistributionSpec& base, const OrthogonalMatrix& u,
                                     std::span<const double> ps, std::size_t direction_count,
                                     std::size_t count, const RandomStream& stream, std::size_t threads = 0);

}  // namespace tlab
