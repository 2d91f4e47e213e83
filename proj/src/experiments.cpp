#include "tlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>

#include "tlab/centroid.hpp"
#include "tlab/error.hpp"
#include "tlab/orthogonal.hpp"
#include "tlab/polygon2d.hpp"
#include "tlab/sampler.hpp"
#include "tlab/thicken.hpp"

namespace tlab {
namespace {

// Per-run context shared by the experiment bodies.
struct Ctx {
    const ExperimentConfig& cfg;
    RandomStream stream;
    std::size_t threads;
    std::vector<ResultRecord> out;

    ResultRecord& add(std::string metric, double estimate) {
        ResultRecord r;
        r.experiment = cfg.experiment;
        r.params = cfg;
        r.params.out_path.clear();
        r.metric = std::move(metric);
        r.estimate = estimate;
        r.seed = cfg.root_seed;
        r.samples = cfg.trials;
        out.push_back(std::move(r));
        return out.back();
    }
};

thread_local std::size_t tl_threads = 0;

std::uint64_t name_hash(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<Family> families(const ExperimentConfig& cfg, std::initializer_list<Family> all_set) {
    if (cfg.family == "all") return {all_set};
    return {parse_family(cfg.family)};
}

constexpr std::initializer_list<Family> kEveryFamily = {Family::gaussian, Family::cube, Family::ball,
                                                        Family::laplace_product, Family::shifted_exp_product};

std::string tag(std::string_view base, Family f) { return std::string(base) + "[" + std::string(family_name(f)) + "]"; }

std::vector<Direction> axes_and_random(std::size_t n, std::size_t random_count, const RandomStream& stream) {
    std::vector<Direction> dirs;
    for (std::size_t k = 0; k < n; ++k) {
        dirs.push_back(Direction::axis(n, k, 1.0));
        dirs.push_back(Direction::axis(n, k, -1.0));
    }
    auto extra = uniform_directions(n, random_count, stream);
    dirs.insert(dirs.end(), extra.begin(), extra.end());
    return dirs;
}

double fourth_moment_bound(Family f) {
    switch (f) {
        case Family::gaussian: return 3.0;
        case Family::cube: return 1.8;
        case Family::ball: return 3.0;
        case Family::laplace_product: return 6.0;
        case Family::shifted_exp_product: return 9.0;
    }
    return 24.0;
}

// ---------------------------------------------------------------------------

void run_isotropy(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const SampleBatch b = sample({f, c.cfg.n}, c.cfg.trials, c.stream.child(static_cast<unsigned>(f)), c.threads);
        const IsotropyReport rep = isotropy_report(b);
        const double limit = 5.0 * std::sqrt(fourth_moment_bound(f) / static_cast<double>(c.cfg.trials));
        c.add(tag("max_abs_mean", f), rep.max_abs_mean).pass = rep.max_abs_mean < limit;
        c.add(tag("max_cov_deviation", f), rep.max_cov_deviation).pass = rep.max_cov_deviation < limit;
    }
}

void run_gruenbaum(Ctx& c) {
    const double lo = std::exp(-1.0), hi = 1.0 - std::exp(-1.0);
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const SampleBatch b = sample({f, c.cfg.n}, c.cfg.trials, rs.child(0), c.threads);
        std::vector<Direction> dirs{Direction::axis(c.cfg.n, 0)};
        if (c.cfg.directions > 1) {
            auto more = uniform_directions(c.cfg.n, c.cfg.directions - 1, rs.child(1));
            dirs.insert(dirs.end(), more.begin(), more.end());
        }
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const Eigen::VectorXd proj = b.data * dirs[d].coords();
            std::uint64_t hits = 0;
            for (double s : proj) hits += s >= 0.0 ? 1 : 0;
            const double q = static_cast<double>(hits) / static_cast<double>(b.count());
            const double se = proportion_stderr(hits, b.count());
            auto& r = c.add(tag("p_nonneg", f), q);
            r.x_name = "dir";
            r.x = static_cast<double>(d);
            r.std_error = se;
            r.pass = q >= lo - kPolicySigmas * se && q <= hi + kPolicySigmas * se;
        }
    }
}

void run_trivial_inclusion(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const SampleBatch b = sample({f, c.cfg.n}, c.cfg.trials, rs.child(0), c.threads);
        Engine rng(rs.child(1));
        std::size_t ok = 0;
        double worst_left = 0.0, worst_right = 0.0;
        for (std::size_t k = 0; k < c.cfg.directions; ++k) {
            const Direction theta = uniform_direction(c.cfg.n, rng);
            const double p = rng.uniform(1.0, 64.0);
            const TrivialInclusion t = trivial_inclusion_check(b.data, theta, p);
            ok += (t.left_ok && t.right_ok) ? 1 : 0;
            const double mid = std::pow(2.0, 1.0 / p) * t.h;
            worst_left = std::max(worst_left, t.h_plus / mid);
            worst_right = std::max(worst_right, mid / (t.h_plus + t.h_minus));
        }
        const bool all = ok == c.cfg.directions;
        c.add(tag("cases_ok_fraction", f), static_cast<double>(ok) / static_cast<double>(c.cfg.directions)).pass = all;
        c.add(tag("max_left_ratio", f), worst_left).pass = worst_left <= 1.0 + kExactRelTol;
        c.add(tag("max_right_ratio", f), worst_right).pass = worst_right <= 1.0 + kExactRelTol;
    }
}

void run_berwald(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const SampleBatch b = sample({f, c.cfg.n}, c.cfg.trials, rs.child(0), c.threads);
        Engine rng(rs.child(1));
        std::size_t ok = 0;
        double max_ratio = 0.0;
        for (std::size_t k = 0; k < c.cfg.directions; ++k) {
            const Direction theta = uniform_direction(c.cfg.n, rng);
            double p = rng.uniform(1.0, 64.0), q = rng.uniform(1.0, 64.0);
            if (p > q) std::swap(p, q);
            const BerwaldCheck bc = berwald_check(b.data, theta, p, q);
            ok += bc.mono_ok ? 1 : 0;
            max_ratio = std::max(max_ratio, bc.ratio);
        }
        c.add(tag("monotone_fraction", f), static_cast<double>(ok) / static_cast<double>(c.cfg.directions)).pass =
            ok == c.cfg.directions;
        c.add(tag("max_reverse_ratio", f), max_ratio);
    }
}

void run_super_gaussian(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const SampleBatch b = sample({f, c.cfg.n}, c.cfg.trials, rs.child(0), c.threads);
        const auto dirs = axes_and_random(c.cfg.n, c.cfg.directions, rs.child(1));
        for (double p : c.cfg.p_list) {
            const WorstDirection w = worst_of_directions(b.data, p, dirs, c.threads);
            auto& r1 = c.add(tag("min_ratio_gaussian", f), w.ratio_sqrtp * std::sqrt(p) / gaussian_moment(p));
            r1.x_name = "p";
            r1.x = p;
            r1.std_error = w.std_error * std::sqrt(p) / gaussian_moment(p);
            auto& r2 = c.add(tag("min_ratio_sqrtp", f), w.ratio_sqrtp);
            r2.x_name = "p";
            r2.x = p;
            r2.std_error = w.std_error;
        }
    }
}

// Recovery factor is asserted for p >= kCounterexampleMinP only.
constexpr double kCounterexampleMinP = 16.0;
constexpr double kRecoveryFactor = 1.4;

void run_cube_counterexample(Ctx& c) {
    const std::size_t n = c.cfg.n;
    const DistributionSpec cube{Family::cube, n};
    const OrthogonalMatrix u = haar(n, c.stream.child(0));
    const SampleBatch x = sample(cube, c.cfg.trials, c.stream.child(1), c.threads);
    const SampleBatch yp = sample_law(ThickenedSpec(cube, u, Sign::plus), c.cfg.trials, c.stream.child(2), c.threads);
    const SampleBatch ym = sample_law(ThickenedSpec(cube, u, Sign::minus), c.cfg.trials, c.stream.child(3), c.threads);
    const auto dirs = axes_and_random(n, c.cfg.directions, c.stream.child(4));
    const Direction e1 = Direction::axis(n, 0);
    for (double p : c.cfg.p_list) {
        const SupportEstimate h = support_zp_plus(x.data, e1, p);
        const double root = std::sqrt(p);
        const double oracle = std::pow(axis_moment_oracle(Family::cube, p, MomentSide::absolute), 1.0 / p) / root;
        auto& ax = c.add("cube_axis_ratio_sqrtp", h.value / root);
        ax.x_name = "p";
        ax.x = p;
        ax.std_error = h.std_error / root;
        ax.pass = std::abs(h.value / root - oracle) <= kPolicySigmas * h.std_error / root;

        const WorstDirection wp = worst_of_directions(yp.data, p, dirs, c.threads);
        const WorstDirection wm = worst_of_directions(ym.data, p, dirs, c.threads);
        const double worst = std::min(wp.ratio_sqrtp, wm.ratio_sqrtp);
        auto& th = c.add("thickened_worst_ratio_sqrtp", worst);
        th.x_name = "p";
        th.x = p;
        th.std_error = wp.ratio_sqrtp <= wm.ratio_sqrtp ? wp.std_error : wm.std_error;
        if (p >= kCounterexampleMinP) th.pass = worst >= kRecoveryFactor * h.value / root;
    }
}

void run_psi_alpha(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const DistributionSpec spec{f, c.cfg.n};
        const SampleBatch b = sample(spec, c.cfg.trials, rs.child(0), c.threads);
        const PsiEstimate est = psi_alpha_estimate(b.data, spec.nominal_alpha(), c.cfg.p_list, c.cfg.directions, rs.child(1));
        auto& r = c.add(tag("psi_constant", f), est.constant);
        r.x_name = "argmax_p";
        r.x = est.argmax_p;
    }
}

void run_mean_width(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const SampleBatch b = sample({f, c.cfg.n}, c.cfg.trials, rs.child(0), c.threads);
        for (double p : c.cfg.p_list) {
            const MeanWidth w = mean_width_zp(b.data, p, std::max<std::size_t>(10, c.cfg.directions), rs.child(1));
            auto& r = c.add(tag("W_over_sqrtp", f), w.W / std::sqrt(p));
            r.x_name = "p";
            r.x = p;
            r.std_error = w.std_error / std::sqrt(p);
            r.pass = w.W / std::sqrt(p) <= 2.0;
        }
    }
}

void run_thm1_transference(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const DistributionSpec spec{f, c.cfg.n};
        const OrthogonalMatrix u = haar(c.cfg.n, rs.child(0));
        for (std::size_t k = 0; k < c.cfg.t_grid.size(); ++k) {
            const double t = c.cfg.t_grid[k];
            for (TailSide side : {TailSide::at_least, TailSide::at_most}) {
                if (side == TailSide::at_most && t > 1.0) continue;
                const auto chk = transference_check(spec, u, t, side, c.cfg.trials,
                                                    rs.child(1 + 2 * k + (side == TailSide::at_most)), c.threads);
                const std::string s = side == TailSide::at_least ? "at_least" : "at_most";
                auto& r = c.add(tag("lhs_" + s, f), chk.lhs.estimate());
                r.x_name = "t";
                r.x = t;
                r.ci_low = chk.lhs.ci_low;
                r.ci_high = chk.lhs.ci_high;
                r.pass = chk.ok_within_ci;
                auto& b = c.add(tag("rhs_bound_" + s, f), chk.rhs_bound);
                b.x_name = "t";
                b.x = t;
            }
        }
    }
}

void run_thm1_part2(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const DistributionSpec spec{f, c.cfg.n};
        const OrthogonalMatrix u = haar(c.cfg.n, rs.child(0));
        const auto rows = part2_envelope(spec, u, c.cfg.p_list, c.cfg.directions, c.cfg.trials, rs.child(1), c.threads);
        for (const auto& row : rows) {
            auto& r = c.add(tag("envelope_ratio", f), std::max(row.plus_envelope, row.minus_envelope) / row.base_envelope);
            r.x_name = "p";
            r.x = row.p;
            r.pass = row.ok;
        }
    }
}

void run_thm1_part3(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const DistributionSpec spec{f, c.cfg.n};
        const OrthogonalMatrix u = haar(c.cfg.n, rs.child(0));
        const SampleBatch x = sample(spec, c.cfg.trials, rs.child(1), c.threads);
        const SampleBatch yp = sample_law(ThickenedSpec(spec, u, Sign::plus), c.cfg.trials, rs.child(2), c.threads);
        const SampleBatch ym = sample_law(ThickenedSpec(spec, u, Sign::minus), c.cfg.trials, rs.child(3), c.threads);
        std::vector<Direction> seeds;
        for (std::size_t k = 0; k < c.cfg.n; ++k) seeds.push_back(Direction::axis(c.cfg.n, k, -1.0));
        for (double p : c.cfg.p_list) {
            const auto wx = worst_direction(x.data, p, c.cfg.restarts, c.cfg.steps, rs.child(4), seeds);
            const auto wp = worst_direction(yp.data, p, c.cfg.restarts, c.cfg.steps, rs.child(5));
            const auto wm = worst_direction(ym.data, p, c.cfg.restarts, c.cfg.steps, rs.child(6));
            for (auto [name, w] : {std::pair{"base_worst_ratio_sqrtp", &wx}, std::pair{"plus_worst_ratio_sqrtp", &wp},
                                   std::pair{"minus_worst_ratio_sqrtp", &wm}}) {
                auto& r = c.add(tag(name, f), w->ratio_sqrtp);
                r.x_name = "p";
                r.x = p;
                r.std_error = w->std_error;
            }
        }
    }
}

void run_lemma0(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const DistributionSpec spec{f, c.cfg.n};
        const OrthogonalMatrix u = haar(c.cfg.n, rs.child(0));
        const auto dirs = uniform_directions(c.cfg.n, c.cfg.directions, rs.child(1));
        const auto cases = lemma0_check(spec, u, dirs, c.cfg.p_list, c.cfg.trials, rs.child(2), c.threads);
        for (double p : c.cfg.p_list) {
            double min_ratio = std::numeric_limits<double>::infinity();
            bool ok = true;
            for (const auto& lc : cases) {
                if (lc.p != p) continue;
                min_ratio = std::min(min_ratio, lc.lhs / lc.rhs);
                ok = ok && lc.ok;
            }
            auto& r = c.add(tag("min_lhs_over_rhs", f), min_ratio);
            r.x_name = "p";
            r.x = p;
            r.pass = ok;
        }
    }
}

void run_gaussian_floor(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto rs = c.stream.child(static_cast<unsigned>(f));
        const DistributionSpec spec{f, c.cfg.n};
        const OrthogonalMatrix u = haar(c.cfg.n, rs.child(0));
        const auto rows = gaussian_floor_demo(spec, u, c.cfg.t_grid, c.cfg.trials, rs.child(1), c.threads);
        for (const auto& row : rows) {
            auto& a = c.add(tag("floor_bound", f), row.floor_bound);
            a.x_name = "t";
            a.x = row.t;
            a.ci_low = row.floor_est.ci_low;
            a.ci_high = row.floor_est.ci_high;
            auto& b = c.add(tag("thm1_bound", f), row.thm1_bound);
            b.x_name = "t";
            b.x = row.t;
        }
    }
}

void add_curve(Ctx& c, const std::string& metric, const std::string& x_name, const Curve& curve) {
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        auto& r = c.add(metric, curve.points[k].estimate());
        r.x_name = x_name;
        r.x = curve.grid[k];
        r.std_error = curve.points[k].std_error();
        r.ci_low = curve.points[k].ci_low;
        r.ci_high = curve.points[k].ci_high;
    }
    c.add(metric + "_monotone", curve.monotone_within_ci ? 1.0 : 0.0).pass = curve.monotone_within_ci;
}

void run_deviation_curve(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto curve = deviation_curve(DistributionSpec{f, c.cfg.n}, c.cfg.t_grid, c.cfg.trials,
                                           c.stream.child(static_cast<unsigned>(f)), c.threads);
        add_curve(c, tag("deviation", f), "t", curve);
    }
}

void run_small_ball(Ctx& c) {
    for (Family f : families(c.cfg, kEveryFamily)) {
        const auto curve = small_ball_curve(DistributionSpec{f, c.cfg.n}, c.cfg.eps_grid, c.cfg.trials,
                                            c.stream.child(static_cast<unsigned>(f)), c.threads);
        add_curve(c, tag("small_ball", f), "eps", curve);
        if (std::isfinite(curve.log_slope)) c.add(tag("log_slope", f), curve.log_slope);
    }
}

void run_cap_bound(Ctx& c) {
    const std::size_t n = c.cfg.n;
    std::vector<double> scan;
    for (double e : c.cfg.eps_grid)
        if (e > 0.0 && e < 1.0) scan.push_back(e);
    if (scan.empty())
        for (int k = 1; k <= 9; ++k) scan.push_back(0.1 * k);
    const CapBoundScan s = cap_bound_scan(n, scan);
    auto& r = c.add("empirical_C", s.empirical_C);
    r.x_name = "eps";
    r.x = s.argmax_eps;

    const auto dirs = uniform_directions(n, c.cfg.trials, c.stream.child(0));
    const Eigen::VectorXd pole = Direction::axis(n, 0).coords();
    for (double eps : c.cfg.eps_grid) {
        if (!(eps > 0.0 && eps <= 2.0)) throw InvalidArgument("cap-bound: eps must lie in (0, 2]");
        std::uint64_t hits = 0;
        for (const auto& d : dirs) hits += (d.coords() - pole).norm() <= eps ? 1 : 0;
        const double q = static_cast<double>(hits) / static_cast<double>(dirs.size());
        const double se = proportion_stderr(hits, dirs.size());
        const double exact = cap_measure(n, eps);
        auto& m = c.add("cap_frequency", q);
        m.x_name = "eps";
        m.x = eps;
        m.std_error = se;
        m.pass = std::abs(q - exact) <= kPolicySigmas * std::max(se, std::sqrt(exact * (1 - exact) / dirs.size()));
    }
}

void run_rotation_separation(Ctx& c) {
    const std::size_t n = c.cfg.n;
    constexpr double kNorm = 10.0, kR = 5.0;
    std::vector<Eigen::VectorXd> centers{kNorm * Direction::axis(n, 0).coords(),
                                         -kNorm * Direction::axis(n, 0).coords()};
    const auto res = rotation_separation_sim(centers, kR, c.cfg.trials, c.stream, c.threads);
    auto& r = c.add("p_all_separated", res.p_all_separated);
    r.ci_low = res.ci.low;
    r.ci_high = res.ci.high;
    const double exact = cap_measure(n, 2.0 / kNorm);
    c.add("pair_rate_exact", exact);
    for (const auto& pr : res.pair_rates) {
        const Interval ci = clopper_pearson(pr.hits, res.trials, kPolicyConfidence);
        auto& m = c.add("pair_rate[" + std::to_string(pr.i) + "," + std::to_string(pr.j) + "]", pr.rate);
        m.std_error = pr.std_error;
        m.ci_low = ci.low;
        m.ci_high = ci.high;
        m.pass = ci.low <= exact && exact <= ci.high;
    }
}

double vertex_distance(const poly::ConvexPolygon& a, const poly::ConvexPolygon& b) {
    auto one_way = [](const poly::ConvexPolygon& from, const poly::ConvexPolygon& to) {
        double worst = 0.0;
        for (const auto& v : from.vertices()) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& w : to.vertices()) best = std::min(best, std::hypot(v.x - w.x, v.y - w.y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

void run_polygon_suite(Ctx& c) {
    using namespace poly;
    const ConvexPolygon tri({{0, 0}, {1, 0}, {0, 1}});
    const ConvexPolygon square({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const double rs_tri = rogers_shephard_ratio(tri);
    const double rs_sq = rogers_shephard_ratio(square);
    c.add("rogers_shephard_triangle", rs_tri).pass = std::abs(rs_tri - 6.0) <= 1e-9;
    c.add("rogers_shephard_square", rs_sq).pass = std::abs(rs_sq - 4.0) <= 1e-9;
    const Point b = barycenter(tri);
    const double mp_tri = milman_pajor_ratio(translate(tri, -1.0 * b));
    c.add("milman_pajor_centered_triangle", mp_tri).pass = std::abs(mp_tri - 2.0 / 3.0) <= 1e-9;

    Engine rng(c.stream.child(0));
    double mp_min = 1.0, rs_min = 6.0, rs_max = 4.0, polar_err = 0.0;
    for (std::size_t k = 0; k < c.cfg.directions; ++k) {
        const std::size_t m = 3 + static_cast<std::size_t>(rng.uniform() * 14.0);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < m; ++i) pts.push_back({rng.normal(), rng.normal()});
        ConvexPolygon hull = [&] {
            for (;;) {
                try {
                    return convex_hull(pts);
                } catch (const InvalidPolygon&) {
                    pts.push_back({rng.normal(), rng.normal()});
                }
            }
        }();
        const ConvexPolygon centered = translate(hull, -1.0 * barycenter(hull));
        mp_min = std::min(mp_min, milman_pajor_ratio(centered));
        const double rs = rogers_shephard_ratio(centered);
        rs_min = std::min(rs_min, rs);
        rs_max = std::max(rs_max, rs);
        polar_err = std::max(polar_err, vertex_distance(polar(polar(centered)), centered));
    }
    c.add("milman_pajor_random_min", mp_min).pass = mp_min >= 0.25;
    c.add("rogers_shephard_random_min", rs_min).pass = rs_min >= 4.0 - 1e-9;
    c.add("rogers_shephard_random_max", rs_max).pass = rs_max <= 6.0 + 1e-9;
    c.add("polar_involution_max_error", polar_err).pass = polar_err <= 1e-9;

    const SampleBatch g2 = sample({Family::gaussian, 2}, c.cfg.trials, c.stream.child(1), c.threads);
    double prev_area = std::numeric_limits<double>::infinity();
    bool shrinking = true;
    for (std::size_t angles : {90u, 180u, 360u}) {
        const ZpPolygon z = zp_polygon(g2.data, 4.0, angles);
        const double a = area(z.body);
        shrinking = shrinking && a <= prev_area;
        prev_area = a;
        auto& r = c.add("zp_vr_gaussian_p4", z.volume_radius);
        r.x_name = "angles";
        r.x = static_cast<double>(angles);
        if (angles == 360) r.pass = std::abs(z.volume_radius / std::pow(3.0, 0.25) - 1.0) <= 0.05;
    }
    c.add("zp_grid_refinement_monotone", shrinking ? 1.0 : 0.0).pass = shrinking;
}

using Body = void (*)(Ctx&);

struct Entry {
    const char* name;
    const char* statement;
    Body body;
};

const Entry kEntries[] = {
    {"isotropy", "mean 0 and identity covariance for every family", run_isotropy},
    {"gruenbaum", "1/e <= P(<X,theta> >= 0) <= 1 - 1/e for centered log-concave marginals", run_gruenbaum},
    {"trivial-inclusion", "Z_p^+ within 2^{1/p} Z_p within Z_p^+ - Z_p^+ (exact on the empirical measure)",
     run_trivial_inclusion},
    {"berwald", "Z_p within Z_q within C (q/p) Z_p for 1 <= p <= q", run_berwald},
    {"super-gaussian", "h_{Z_p^+}(theta) against the Gaussian moment and c sqrt(p)", run_super_gaussian},
    {"cube-counterexample", "cube axis ratio decays like 1/sqrt(p); thickened Y^U recovers sqrt(p) growth",
     run_cube_counterexample},
    {"psi-alpha", "empirical D in Z_p within D p^{1/alpha} Z_2", run_psi_alpha},
    {"mean-width", "W(Z_p(X)) <= C sqrt(p)", run_mean_width},
    {"thm1-transference", "P(|X| >=/<= (1 +/- t) sqrt n) <= (2 max_{+/-} P(|Y^U_{+/-}| >=/<= ...))^{1/2}",
     run_thm1_transference},
    {"thm1-part2", "Z_p^+(Y^U_{+/-}) within C p^{1/alpha} B_2^n", run_thm1_part2},
    {"thm1-part3", "Z_p^+(Y^U_{+/-}) contains c_1 sqrt(p) B_2^n (worst-direction search)", run_thm1_part3},
    {"lemma0", "Z_p^+(Y) contains (Z_p^+(X) + U Z_p^+(X)) / (2 sqrt2 e^{1/p})", run_lemma0},
    {"gaussian-floor", "Gaussian-convolution small-ball bound plateaus; inner-thickening bound decays",
     run_gaussian_floor},
    {"deviation-curve", "P(||X| - sqrt n| >= t sqrt n) <= C exp(-c n^{alpha/2} min(t^{2+alpha}, t))",
     run_deviation_curve},
    {"small-ball", "P(|X| <= eps sqrt n) <= (C eps)^{c n^{alpha/2}}", run_small_ball},
    {"cap-bound", "mu(B_eps) <= (C eps)^{n-1} for spherical caps of chordal radius eps", run_cap_bound},
    {"rotation-separation", "P(L cap U(L) within (R+1) B_2^n) for unions of unit balls", run_rotation_separation},
    {"polygon-suite", "Rogers-Shephard, Milman-Pajor, polar involution and vr(Z_p) in the plane", run_polygon_suite},
};

}  // namespace

const std::vector<ExperimentInfo>& registry() {
    static const std::vector<ExperimentInfo> reg = [] {
        std::vector<ExperimentInfo> out;
        for (const Entry& e : kEntries) {
            const Body body = e.body;
            const std::string name = e.name;
            out.push_back({e.name, e.statement, [body, name](const ExperimentConfig& cfg) {
                               Ctx c{cfg, RandomStream{cfg.root_seed, name_hash(name)}, tl_threads, {}};
                               body(c);
                               return std::move(c.out);
                           }});
        }
        return out;
    }();
    return reg;
}

const ExperimentInfo* find_experiment(std::string_view name) {
    for (const auto& e : registry())
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    const ExperimentInfo* info = find_experiment(cfg.experiment);
    if (!info) throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    tl_threads = opts.threads;
    const auto start = std::chrono::steady_clock::now();
    std::vector<ResultRecord> recs;
    try {
        recs = info->run(cfg);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string(cfg.experiment) + ": " + e.what());
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : recs) r.wall_time_ms = opts.timing ? std::round(ms) : 0.0;
    return recs;
}

bool all_pass(const std::vector<ResultRecord>& records) {
    return std::none_of(records.begin(), records.end(), [](const ResultRecord& r) { return r.pass == false; });
}

ReplayOutcome replay(const std::vector<ResultRecord>& records, const RunOptions& opts) {
    std::map<std::string, std::vector<ResultRecord>> cache;
    ReplayOutcome out;
    for (const auto& rec : records) {
        const std::string key = config_to_json(rec.params).dump();
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, run_experiment(rec.params, opts)).first;
        ++out.checked;
        const auto& fresh = it->second;
        const auto match = std::find_if(fresh.begin(), fresh.end(), [&](const ResultRecord& r) {
            return r.metric == rec.metric && r.x_name == rec.x_name && r.x == rec.x;
        });
        if (match == fresh.end()) {
            out.mismatches.push_back({rec.metric, rec.estimate, std::numeric_limits<double>::quiet_NaN()});
        } else if (match->estimate != rec.estimate || match->pass != rec.pass) {
            out.mismatches.push_back({rec.metric, rec.estimate, match->estimate});
        }
    }
    return out;
}

void print_summary(std::ostream& out, const std::vector<ResultRecord>& records) {
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %-42s %10s %14s %12s  %s\n", "experiment", "metric", "x", "estimate",
                  "stderr", "status");
    out << line;
    for (const auto& r : records) {
        const std::string x = r.x_name.empty() ? "" : r.x_name + "=" + format_double(r.x);
        char se[32] = "";
        if (r.std_error) std::snprintf(se, sizeof se, "%.4g", *r.std_error);
        const char* status = !r.pass ? "-" : (*r.pass ? "PASS" : "FAIL");
        std::snprintf(line, sizeof line, "%-22s %-42s %10s %14.6g %12s  %s\n", r.experiment.c_str(),
                      r.metric.c_str(), x.c_str(), r.estimate, se, status);
        out << line;
    }
}

}  // namespace tlab
