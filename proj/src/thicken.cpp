#include "tlab/thicken.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"

namespace tlab {

ThickenedSpec::ThickenedSpec(DistributionSpec b, OrthogonalMatrix u, Sign s)
    : base(b), rotation(std::move(u)), sign(s) {
    require(rotation.dimension() == base.dimension, "ThickenedSpec: rotation dimension != base dimension");
}

std::size_t dimension(const Law& law) {
    return std::visit(
        [](const auto& l) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, DistributionSpec>)
                return l.dimension;
            else
                return l.base.dimension;
        },
        law);
}

std::string describe(const Law& law) {
    struct {
        std::string operator()(const DistributionSpec& s) const { return std::string(family_name(s.family)); }
        std::string operator()(const ThickenedSpec& s) const {
            return "thickened" + std::string(s.sign == Sign::plus ? "+" : "-") + "(" +
                   std::string(family_name(s.base.family)) + ")";
        }
        std::string operator()(const GaussianConvolvedSpec& s) const {
            return "gauss_conv(" + std::string(family_name(s.base.family)) + ")";
        }
    } visitor;
    return std::visit(visitor, law);
}

namespace {

// Fills `out` (rows x n). For thickened laws, the X and X' rows are left in
// `x` and `xp` when those are given.
void fill_rows(const Law& law, Engine& rng, Eigen::Ref<Matrix> out, Matrix* x = nullptr, Matrix* xp = nullptr) {
    const std::size_t n = dimension(law);
    const Eigen::Index rows = out.rows();
    if (const auto* spec = std::get_if<DistributionSpec>(&law)) {
        for (Eigen::Index i = 0; i < rows; ++i) draw(*spec, rng, {out.row(i).data(), n});
        return;
    }
    if (const auto* conv = std::get_if<GaussianConvolvedSpec>(&law)) {
        std::vector<double> g(n);
        for (Eigen::Index i = 0; i < rows; ++i) {
            double* row = out.row(i).data();
            draw(conv->base, rng, {row, n});
            for (auto& v : g) v = rng.normal();
            for (std::size_t k = 0; k < n; ++k) row[k] = (row[k] + g[k]) * (1.0 / std::numbers::sqrt2);
        }
        return;
    }
    const auto& th = std::get<ThickenedSpec>(law);
    Matrix local_x, local_xp;
    Matrix& a = x ? *x : local_x;
    Matrix& b = xp ? *xp : local_xp;
    a.resize(rows, static_cast<Eigen::Index>(n));
    b.resize(rows, static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < rows; ++i) {
        draw(th.base, rng, {a.row(i).data(), n});
        draw(th.base, rng, {b.row(i).data(), n});
    }
    // Row form of U x': x'^T U^T.
    const double s = th.sign == Sign::plus ? 1.0 : -1.0;
    out.noalias() = a;
    out.noalias() += s * (b * th.rotation.matrix().transpose());
    out *= 1.0 / std::numbers::sqrt2;
}

}  // namespace

SampleBatch sample_law(const Law& law, std::size_t count, const RandomStream& stream, std::size_t threads) {
    require(count >= 1, "sample: count must be positive");
    const std::size_t n = dimension(law);
    require(n >= 1, "sample: dimension must be positive");
    SampleBatch batch;
    batch.spec = std::visit(
        [](const auto& l) -> DistributionSpec {
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, DistributionSpec>)
                return l;
            else
                return l.base;
        },
        law);
    batch.provenance = stream;
    batch.law = describe(law);
    batch.data.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
    const std::size_t shards = (count + kShardRows - 1) / kShardRows;
    parallel_for(
        shards,
        [&](std::size_t s) {
            Engine rng(stream.child(s));
            const std::size_t begin = s * kShardRows;
            const std::size_t len = std::min(count, begin + kShardRows) - begin;
            fill_rows(law, rng,
                      batch.data.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(len)));
        },
        threads);
    return batch;
}

SampleBatch sample_thickened(const ThickenedSpec& spec, std::size_t count, const RandomStream& stream,
                             std::size_t threads) {
    return sample_law(spec, count, stream, threads);
}

SampleBatch sample_gaussian_convolved(const DistributionSpec& base, std::size_t count, const RandomStream& stream,
                                      std::size_t threads) {
    return sample_law(GaussianConvolvedSpec{base}, count, stream, threads);
}

ThickenedDraws sample_thickened_joint(const ThickenedSpec& spec, std::size_t count, const RandomStream& stream,
                                      std::size_t threads) {
    require(count >= 1, "sample: count must be positive");
    const auto n = static_cast<Eigen::Index>(spec.base.dimension);
    ThickenedDraws out;
    out.x.resize(static_cast<Eigen::Index>(count), n);
    out.x_prime.resize(static_cast<Eigen::Index>(count), n);
    out.y.resize(static_cast<Eigen::Index>(count), n);
    const Law law = spec;
    const std::size_t shards = (count + kShardRows - 1) / kShardRows;
    parallel_for(
        shards,
        [&](std::size_t s) {
            Engine rng(stream.child(s));
            const auto begin = static_cast<Eigen::Index>(s * kShardRows);
            const auto len = static_cast<Eigen::Index>(std::min(count, (s + 1) * kShardRows)) - begin;
            Matrix a, b;
            fill_rows(law, rng, out.y.middleRows(begin, len), &a, &b);
            out.x.middleRows(begin, len) = a;
            out.x_prime.middleRows(begin, len) = b;
        },
        threads);
    return out;
}

std::vector<TailEstimate> tail_estimates(const Law& law, std::span<const double> thresholds, TailSide side,
                                         std::uint64_t trials, const RandomStream& stream, std::size_t threads) {
    require(trials >= 1, "tail_estimate: trials must be positive");
    require(trials <= kMaxTrials, "tail_estimate: trials exceed the streaming cap");
    require(!thresholds.empty(), "tail_estimate: no thresholds");
    for (double t : thresholds) require(t >= 0.0 && std::isfinite(t), "tail_estimate: threshold must be >= 0");

    const std::size_t n = dimension(law);
    const double root_n = std::sqrt(static_cast<double>(n));
    const std::size_t m = thresholds.size();
    const std::uint64_t shards = (trials + kShardRows - 1) / kShardRows;
    std::vector<std::uint64_t> hits(shards * m, 0);

    parallel_for(
        shards,
        [&](std::size_t s) {
            Engine rng(stream.child(s));
            const std::uint64_t begin = s * kShardRows;
            const auto len = static_cast<Eigen::Index>(std::min<std::uint64_t>(trials, begin + kShardRows) - begin);
            Matrix buf(len, static_cast<Eigen::Index>(n));
            fill_rows(law, rng, buf);
            std::uint64_t* h = hits.data() + s * m;
            for (Eigen::Index i = 0; i < len; ++i) {
                const double r = buf.row(i).norm();
                for (std::size_t k = 0; k < m; ++k) {
                    bool event = false;
                    switch (side) {
                        case TailSide::at_least: event = r >= thresholds[k]; break;
                        case TailSide::at_most: event = r <= thresholds[k]; break;
                        case TailSide::deviation: event = std::abs(r - root_n) >= thresholds[k]; break;
                    }
                    h[k] += event ? 1 : 0;
                }
            }
        },
        threads);

    std::vector<TailEstimate> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        auto& e = out[k];
        e.threshold = thresholds[k];
        e.side = side;
        e.trials = trials;
        for (std::uint64_t s = 0; s < shards; ++s) e.hits += hits[s * m + k];
        const Interval ci = clopper_pearson(e.hits, trials);
        e.ci_low = ci.low;
        e.ci_high = ci.high;
    }
    return out;
}

TailEstimate tail_estimate(const Law& law, double threshold, TailSide side, std::uint64_t trials,
                           const RandomStream& stream, std::size_t threads) {
    return tail_estimates(law, {&threshold, 1}, side, trials, stream, threads).front();
}

TransferenceCheck transference_check(const DistributionSpec& base, const OrthogonalMatrix& u, double t,
                                     TailSide side, std::uint64_t trials, const RandomStream& stream,
                                     std::size_t threads) {
    require(side != TailSide::deviation, "transference_check: side must be at_least or at_most");
    require(t >= 0.0, "transference_check: t must be >= 0");
    if (side == TailSide::at_most) require(t <= 1.0, "transference_check: at_most requires t in [0, 1]");
    const double root_n = std::sqrt(static_cast<double>(base.dimension));
    const double radius = (side == TailSide::at_least ? 1.0 + t : 1.0 - t) * root_n;

    TransferenceCheck out;
    out.lhs = tail_estimate(base, radius, side, trials, stream.child(0), threads);
    out.y_plus = tail_estimate(ThickenedSpec(base, u, Sign::plus), radius, side, trials, stream.child(1), threads);
    out.y_minus = tail_estimate(ThickenedSpec(base, u, Sign::minus), radius, side, trials, stream.child(2), threads);
    out.rhs_point = std::sqrt(2.0 * std::max(out.y_plus.estimate(), out.y_minus.estimate()));
    out.rhs_bound =
        std::sqrt(2.0 * std::max(out.y_plus.policy_interval().high, out.y_minus.policy_interval().high));
    out.ok_within_ci = out.lhs.policy_interval().low <= out.rhs_bound;
    return out;
}

namespace {

// Checks that estimates ordered along the grid are monotone up to the policy
// intervals; `decreasing` selects the direction.
bool monotone_within_policy(const std::vector<TailEstimate>& pts, const std::vector<std::size_t>& order,
                            bool decreasing) {
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& prev = pts[order[k - 1]];
        const auto& next = pts[order[k]];
        if (decreasing ? next.policy_interval().low > prev.policy_interval().high
                       : next.policy_interval().high < prev.policy_interval().low)
            return false;
    }
    return true;
}

std::vector<std::size_t> sorted_order(std::span<const double> grid) {
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
    return order;
}

}  // namespace

Curve deviation_curve(const Law& law, std::span<const double> t_grid, std::uint64_t trials,
                      const RandomStream& stream, std::size_t threads) {
    require(!t_grid.empty(), "deviation_curve: empty grid");
    const double root_n = std::sqrt(static_cast<double>(dimension(law)));
    std::vector<double> thresholds;
    for (double t : t_grid) {
        require(t >= 0.0, "deviation_curve: t must be >= 0");
        thresholds.push_back(t * root_n);
    }
    Curve c;
    c.grid.assign(t_grid.begin(), t_grid.end());
    c.points = tail_estimates(law, thresholds, TailSide::deviation, trials, stream, threads);
    const auto order = sorted_order(t_grid);
    c.envelope.resize(c.points.size());
    double running = 1.0;
    for (std::size_t k : order) {
        running = std::min(running, c.points[k].estimate());
        c.envelope[k] = running;
    }
    c.monotone_within_ci = monotone_within_policy(c.points, order, true);
    c.log_slope = std::numeric_limits<double>::quiet_NaN();
    return c;
}

Curve small_ball_curve(const Law& law, std::span<const double> eps_grid, std::uint64_t trials,
                       const RandomStream& stream, std::size_t threads) {
    require(!eps_grid.empty(), "small_ball_curve: empty grid");
    const double root_n = std::sqrt(static_cast<double>(dimension(law)));
    std::vector<double> thresholds;
    for (double e : eps_grid) {
        require(e > 0.0 && e <= 1.0, "small_ball_curve: eps must lie in (0, 1]");
        thresholds.push_back(e * root_n);
    }
    Curve c;
    c.grid.assign(eps_grid.begin(), eps_grid.end());
    c.points = tail_estimates(law, thresholds, TailSide::at_most, trials, stream, threads);
    const auto order = sorted_order(eps_grid);
    c.envelope.resize(c.points.size());
    double running = 0.0;
    for (std::size_t k : order) {
        running = std::max(running, c.points[k].estimate());
        c.envelope[k] = running;
    }
    c.monotone_within_ci = monotone_within_policy(c.points, order, false);
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        if (c.points[k].hits == 0) continue;
        lx.push_back(std::log(eps_grid[k]));
        ly.push_back(std::log(c.points[k].estimate()));
    }
    bool distinct = lx.size() >= 2 && std::any_of(lx.begin(), lx.end(), [&](double v) { return v != lx[0]; });
    c.log_slope = distinct ? ls_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
    return c;
}

std::vector<FloorRow> gaussian_floor_demo(const DistributionSpec& base, const OrthogonalMatrix& u,
                                          std::span<const double> t_grid, std::uint64_t trials,
                                          const RandomStream& stream, std::size_t threads) {
    require(!t_grid.empty(), "gaussian_floor_demo: empty grid");
    const double root_n = std::sqrt(static_cast<double>(base.dimension));
    std::vector<double> floor_radii, thm_radii;
    for (double t : t_grid) {
        require(t >= 0.0 && t <= 1.0, "gaussian_floor_demo: t must lie in [0, 1]");
        floor_radii.push_back(std::sqrt(((1.0 - t) * (1.0 - t) + 1.0) / 2.0) * root_n);
        thm_radii.push_back((1.0 - t) * root_n);
    }
    const auto floor = tail_estimates(GaussianConvolvedSpec{base}, floor_radii, TailSide::at_most, trials,
                                      stream.child(0), threads);
    const auto yp = tail_estimates(ThickenedSpec(base, u, Sign::plus), thm_radii, TailSide::at_most, trials,
                                   stream.child(1), threads);
    const auto ym = tail_estimates(ThickenedSpec(base, u, Sign::minus), thm_radii, TailSide::at_most, trials,
                                   stream.child(2), threads);
    std::vector<FloorRow> rows;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        FloorRow r;
        r.t = t_grid[k];
        r.floor_est = floor[k];
        r.y_plus = yp[k];
        r.y_minus = ym[k];
        r.floor_bound = floor[k].estimate();
        r.thm1_bound = std::sqrt(2.0 * std::max(yp[k].estimate(), ym[k].estimate()));
        rows.push_back(r);
    }
    return rows;
}

std::vector<Lemma0Case> lemma0_check(const DistributionSpec& base, const OrthogonalMatrix& u,
                                     std::span<const Direction> dirs, std::span<const double> ps,
                                     std::size_t count, const RandomStream& stream, std::size_t threads) {
    const ThickenedSpec spec(base, u, Sign::plus);
    const ThickenedDraws draws = sample_thickened_joint(spec, count, stream, threads);
    std::vector<Direction> pulled;
    pulled.reserve(dirs.size());
    for (const auto& d : dirs) pulled.push_back(u.pullback(d));

    const auto hy = support_profile(draws.y, dirs, ps, threads);
    const auto hx = support_profile(draws.x, dirs, ps, threads);
    const auto hxp = support_profile(draws.x_prime, pulled, ps, threads);

    std::vector<Lemma0Case> out;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const double c = 1.0 / (2.0 * std::numbers::sqrt2 * std::exp(1.0 / ps[k]));
            const auto& y = hy[d][k].plus;
            const auto& a = hx[d][k].plus;
            const auto& b = hxp[d][k].plus;
            Lemma0Case lc;
            lc.direction_index = d;
            lc.p = ps[k];
            lc.lhs = y.value;
            lc.rhs = c * (a.value + b.value);
            lc.joint_se = std::sqrt(y.std_error * y.std_error +
                                    c * c * (a.std_error * a.std_error + b.std_error * b.std_error));
            lc.ok = lc.lhs + kPolicySigmas * lc.joint_se >= lc.rhs;
            out.push_back(lc);
        }
    }
    return out;
}

std::vector<Part2Row> part2_envelope(const DistributionSpec& base, const OrthogonalMatrix& u,
                                     std::span<const double> ps, std::size_t direction_count, std::size_t count,
                                     const RandomStream& stream, std::size_t threads) {
    require(direction_count >= 1, "part2_envelope: need directions");
    const auto dirs = uniform_directions(base.dimension, direction_count, stream.child(0));
    const SampleBatch x = sample(base, count, stream.child(1), threads);
    const SampleBatch yp = sample_law(ThickenedSpec(base, u, Sign::plus), count, stream.child(2), threads);
    const SampleBatch ym = sample_law(ThickenedSpec(base, u, Sign::minus), count, stream.child(3), threads);
    const auto hx = support_profile(x.data, dirs, ps, threads);
    const auto hp = support_profile(yp.data, dirs, ps, threads);
    const auto hm = support_profile(ym.data, dirs, ps, threads);
    const double alpha = base.nominal_alpha();

    std::vector<Part2Row> rows;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        Part2Row r;
        r.p = ps[k];
        const double scale = std::pow(ps[k], 1.0 / alpha);
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            r.base_envelope = std::max(r.base_envelope, hx[d][k].plus.value / scale);
            r.plus_envelope = std::max(r.plus_envelope, hp[d][k].plus.value / scale);
            r.minus_envelope = std::max(r.minus_envelope, hm[d][k].plus.value / scale);
        }
        r.ok = std::max(r.plus_envelope, r.minus_envelope) <= 2.0 * r.base_envelope;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace tlab
