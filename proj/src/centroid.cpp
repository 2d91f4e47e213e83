#include "tlab/centroid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"

namespace tlab {

void LogMomentAccumulator::add(double l) noexcept {
    if (l > max) {
        const double r = std::exp(max - l);
        s1 = s1 * r + 1.0;
        s2 = s2 * r * r + 1.0;
        max = l;
    } else {
        const double w = std::exp(l - max);
        s1 += w;
        s2 += w * w;
    }
    ++terms;
}

void LogMomentAccumulator::merge(const LogMomentAccumulator& other) noexcept {
    if (other.empty()) return;
    if (empty()) {
        *this = other;
        return;
    }
    if (other.max > max) {
        const double r = std::exp(max - other.max);
        s1 = s1 * r + other.s1;
        s2 = s2 * r * r + other.s2;
        max = other.max;
    } else {
        const double r = std::exp(other.max - max);
        s1 += other.s1 * r;
        s2 += other.s2 * r * r;
    }
    terms += other.terms;
}

double LogMomentAccumulator::log_mean(std::uint64_t count) const noexcept {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max + std::log(s1) - std::log(static_cast<double>(count));
}

double LogMomentAccumulator::relative_stderr(std::uint64_t count) const noexcept {
    if (empty() || count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double mean = s1 / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    return std::sqrt(var / (n - 1.0)) / mean;
}

namespace {

constexpr Eigen::Index kChunkRows = 4096;
constexpr std::size_t kDirGroup = 64;

struct SideAccumulators {
    LogMomentAccumulator pos;
    LogMomentAccumulator neg;
};

SupportEstimate make_estimate(const LogMomentAccumulator& acc, double log_scale, double p,
                              const Direction& dir, std::size_t count) {
    SupportEstimate e{0.0, 0.0, p, dir, count};
    if (acc.empty()) return e;
    e.value = std::exp((log_scale + acc.log_mean(count)) / p);
    e.std_error = e.value * acc.relative_stderr(count) / p;
    return e;
}

}  // namespace

std::vector<std::vector<SupportTriple>> support_profile(const Matrix& data, std::span<const Direction> dirs,
                                                        std::span<const double> ps, std::size_t threads) {
    require(data.rows() >= 2, "support: need at least two samples");
    require(!dirs.empty() && !ps.empty(), "support: need directions and p values");
    for (double p : ps) require(p >= 1.0 && std::isfinite(p), "support: p must be >= 1");
    for (const auto& d : dirs)
        require(d.dimension() == static_cast<std::size_t>(data.cols()), "support: direction dimension mismatch");

    const std::size_t count = static_cast<std::size_t>(data.rows());
    const std::size_t np = ps.size();
    std::vector<std::vector<SideAccumulators>> acc(dirs.size(), std::vector<SideAccumulators>(np));

    const std::size_t groups = (dirs.size() + kDirGroup - 1) / kDirGroup;
    parallel_for(
        groups,
        [&](std::size_t g) {
            const std::size_t d0 = g * kDirGroup;
            const std::size_t dn = std::min(dirs.size(), d0 + kDirGroup) - d0;
            Eigen::MatrixXd basis(data.cols(), static_cast<Eigen::Index>(dn));
            for (std::size_t d = 0; d < dn; ++d) basis.col(static_cast<Eigen::Index>(d)) = dirs[d0 + d].coords();
            Eigen::MatrixXd proj;
            for (Eigen::Index r = 0; r < data.rows(); r += kChunkRows) {
                const Eigen::Index len = std::min(kChunkRows, data.rows() - r);
                proj.noalias() = data.middleRows(r, len) * basis;
                for (std::size_t d = 0; d < dn; ++d) {
                    auto& row_acc = acc[d0 + d];
                    const double* col = proj.col(static_cast<Eigen::Index>(d)).data();
                    for (Eigen::Index i = 0; i < len; ++i) {
                        const double s = col[i];
                        if (s == 0.0) continue;
                        const double ls = std::log(std::abs(s));
                        for (std::size_t k = 0; k < np; ++k) {
                            auto& side = s > 0.0 ? row_acc[k].pos : row_acc[k].neg;
                            side.add(ps[k] * ls);
                        }
                    }
                }
            }
        },
        threads);

    const double log2 = std::numbers::ln2;
    std::vector<std::vector<SupportTriple>> out(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        out[d].reserve(np);
        for (std::size_t k = 0; k < np; ++k) {
            const auto& a = acc[d][k];
            LogMomentAccumulator both = a.pos;
            both.merge(a.neg);
            if (both.empty()) throw DegenerateEstimate("support: every projection is zero");
            out[d].push_back({make_estimate(both, 0.0, ps[k], dirs[d], count),
                              make_estimate(a.pos, log2, ps[k], dirs[d], count),
                              make_estimate(a.neg, log2, ps[k], -dirs[d], count)});
        }
    }
    return out;
}

double gaussian_moment(double p) {
    require(p >= 1.0, "gaussian_moment: p must be >= 1");
    const double log_ratio = std::lgamma(0.5 * (p + 1.0)) - std::lgamma(0.5);
    return std::numbers::sqrt2 * std::exp(log_ratio / p);
}

namespace {

SupportTriple single(const Matrix& data, const Direction& theta, double p) {
    require(p >= 1.0, "support: p must be >= 1");
    const double ps[] = {p};
    return support_profile(data, {&theta, 1}, ps, 1).front().front();
}

}  // namespace

SupportEstimate support_zp(const Matrix& data, const Direction& theta, double p) {
    return single(data, theta, p).zp;
}

SupportEstimate support_zp_plus(const Matrix& data, const Direction& theta, double p) {
    return single(data, theta, p).plus;
}

SupportEstimate support_zp(const SampleBatch& batch, const Direction& theta, double p) {
    return support_zp(batch.data, theta, p);
}

SupportEstimate support_zp_plus(const SampleBatch& batch, const Direction& theta, double p) {
    return support_zp_plus(batch.data, theta, p);
}

SuperGaussianRatio super_gaussian_ratio(const SampleBatch& batch, const Direction& theta, double p) {
    const SupportEstimate h = support_zp_plus(batch, theta, p);
    const double g = gaussian_moment(p);
    return {h.value / g, h.value / std::sqrt(p), h.std_error / g};
}

WorstDirection worst_of_directions(const Matrix& data, double p, std::span<const Direction> dirs,
                                   std::size_t threads) {
    const double ps[] = {p};
    const auto prof = support_profile(data, dirs, ps, threads);
    const double root = std::sqrt(p);
    WorstDirection best;
    best.ratio_sqrtp = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const auto& h = prof[d][0].plus;
        // strict comparison: first encountered wins ties
        if (h.value / root < best.ratio_sqrtp) {
            best.ratio_sqrtp = h.value / root;
            best.std_error = h.std_error / root;
            best.direction = dirs[d];
        }
    }
    best.evaluations = dirs.size();
    return best;
}

WorstDirection worst_direction(const Matrix& data, double p, std::size_t restarts, std::size_t steps,
                               const RandomStream& stream, std::span<const Direction> seeds) {
    require(restarts >= 1, "worst_direction: restarts must be >= 1");
    require(steps >= 1, "worst_direction: steps must be >= 1");
    const auto n = static_cast<std::size_t>(data.cols());
    const double root = std::sqrt(p);
    Engine rng(stream);

    WorstDirection best;
    best.ratio_sqrtp = std::numeric_limits<double>::infinity();
    auto objective = [&](const Direction& theta) {
        const SupportEstimate h = support_zp_plus(data, theta, p);
        ++best.evaluations;
        return std::pair{h.value / root, h.std_error / root};
    };

    const std::size_t starts = std::max(restarts, seeds.size());
    for (std::size_t r = 0; r < starts; ++r) {
        Direction theta = r < seeds.size() ? seeds[r] : uniform_direction(n, rng);
        auto [value, se] = objective(theta);
        double step = 0.5;
        int rejected = 0;
        for (std::size_t s = 0; s < steps; ++s) {
            Eigen::VectorXd v = theta.coords();
            for (auto& x : v) x += step * rng.normal() / std::sqrt(static_cast<double>(n));
            if (v.squaredNorm() == 0.0) continue;
            Direction candidate(std::move(v));
            const auto [cv, cse] = objective(candidate);
            if (cv < value) {
                theta = std::move(candidate);
                value = cv;
                se = cse;
                rejected = 0;
            } else if (++rejected == 20) {
                step *= 0.5;
                rejected = 0;
            }
        }
        if (value < best.ratio_sqrtp) {
            best.ratio_sqrtp = value;
            best.std_error = se;
            best.direction = theta;
        }
    }
    return best;
}

std::vector<double> dyadic_grid(double p_max) {
    std::vector<double> grid;
    for (double p = 2.0; p <= p_max; p *= 2.0) grid.push_back(p);
    return grid;
}

PsiEstimate psi_alpha_estimate(const Matrix& data, double alpha, std::span<const double> p_grid,
                               std::size_t direction_count, const RandomStream& stream) {
    require(!p_grid.empty(), "psi_alpha_estimate: empty p grid");
    require(alpha > 0.0, "psi_alpha_estimate: alpha must be positive");
    require(direction_count >= 1, "psi_alpha_estimate: need at least one direction");
    for (double p : p_grid) require(p >= 2.0, "psi_alpha_estimate: grid values must be >= 2");

    std::vector<double> ps(p_grid.begin(), p_grid.end());
    ps.push_back(2.0);
    const auto dirs = uniform_directions(static_cast<std::size_t>(data.cols()), direction_count, stream);
    const auto prof = support_profile(data, dirs, ps);

    PsiEstimate out;
    out.alpha = alpha;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const double h2 = prof[d].back().zp.value;
        for (std::size_t k = 0; k < p_grid.size(); ++k) {
            const double c = prof[d][k].zp.value / (std::pow(p_grid[k], 1.0 / alpha) * h2);
            if (c > out.constant) {
                out.constant = c;
                out.argmax_p = p_grid[k];
                out.argmax_direction = dirs[d];
            }
        }
    }
    return out;
}

BerwaldCheck berwald_check(const Matrix& data, const Direction& theta, double p, double q) {
    require(p >= 1.0, "berwald_check: p must be >= 1");
    require(p <= q, "berwald_check: need p <= q");
    const double ps[] = {p, q};
    const auto prof = support_profile(data, {&theta, 1}, ps, 1);
    BerwaldCheck out;
    out.h_p = prof[0][0].zp.value;
    out.h_q = prof[0][1].zp.value;
    out.mono_ok = out.h_p <= out.h_q * (1.0 + kExactRelTol);
    out.ratio = out.h_q / (out.h_p * q / p);
    return out;
}

MeanWidth mean_width_zp(const Matrix& data, double p, std::size_t direction_count, const RandomStream& stream) {
    require(direction_count >= 10, "mean_width_zp: need at least 10 directions");
    const auto dirs = uniform_directions(static_cast<std::size_t>(data.cols()), direction_count, stream);
    const double ps[] = {p};
    const auto prof = support_profile(data, dirs, ps);
    const double m = static_cast<double>(direction_count);
    double sum = 0.0, sum2 = 0.0, se2 = 0.0;
    for (const auto& row : prof) {
        const double h = row[0].zp.value;
        sum += h;
        sum2 += h * h;
        se2 += row[0].zp.std_error * row[0].zp.std_error;
    }
    const double mean = sum / m;
    const double dir_var = std::max(0.0, sum2 / m - mean * mean) / (m - 1.0);
    // The per-direction sampling errors share one batch, so their average is
    // treated as fully correlated.
    const double sample_se = std::sqrt(se2 / m);
    return {2.0 * mean, 2.0 * std::sqrt(dir_var + sample_se * sample_se)};
}

TrivialInclusion trivial_inclusion_check(const Matrix& data, const Direction& theta, double p) {
    const SupportTriple t = single(data, theta, p);
    TrivialInclusion out;
    out.h_plus = t.plus.value;
    out.h_minus = t.minus.value;
    out.h = t.zp.value;
    const double mid = std::pow(2.0, 1.0 / p) * out.h;
    out.left_ok = out.h_plus <= mid * (1.0 + kExactRelTol);
    out.right_ok = mid <= (out.h_plus + out.h_minus) * (1.0 + kExactRelTol);
    return out;
}

}  // namespace tlab
