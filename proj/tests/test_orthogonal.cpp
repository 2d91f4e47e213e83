#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/orthogonal.hpp"
#include "tlab/stats.hpp"

using namespace tlab;

TEST_CASE("haar matrices are orthogonal") {
    for (std::size_t n : {1u, 2u, 5u, 16u, 40u}) {
        const auto u = haar(n, RandomStream{1, n});
        CHECK(u.orthogonality_error() < 1e-12);
        CHECK(std::abs(std::abs(u.matrix().determinant()) - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(haar(0, RandomStream{1, 0}), InvalidArgument);
}

TEST_CASE("O(1) is sampled as +1 and -1 with equal frequency") {
    Engine rng({2, 0});
    int plus = 0;
    for (int k = 0; k < 10000; ++k) plus += haar(1, rng).matrix()(0, 0) > 0 ? 1 : 0;
    CHECK(std::abs(plus / 10000.0 - 0.5) < 0.01);
}

TEST_CASE("U e_1 is uniform on the sphere") {
    const std::size_t n = 8, draws = 100'000;
    Engine rng({3, 0});
    double s1 = 0.0, s2 = 0.0;
    std::vector<double> a, b;
    Engine rng2({3, 1});
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w(2) = 0.6;
    w(5) = -0.8;
    for (std::size_t k = 0; k < draws; ++k) {
        const auto u = haar(n, rng);
        const double c = u.matrix()(0, 0);
        s1 += c * c;
        s2 += c * c * c * c;
        if (k < 10000) {
            a.push_back(c);
            b.push_back(w.dot(haar(n, rng2).matrix() * v));
        }
    }
    const double mean = s1 / draws;
    const double se = std::sqrt((s2 / draws - mean * mean) / (draws - 1));
    CHECK(std::abs(mean - 1.0 / n) <= 3.0 * se);
    CHECK(ks_statistic(a, b) < ks_critical_value(a.size(), b.size(), 0.01));
}

TEST_CASE("pullback is the adjoint action") {
    const std::size_t n = 6;
    const auto u = haar(n, RandomStream{4, 0});
    Engine rng({4, 1});
    const Direction theta = uniform_direction(n, rng);
    Eigen::VectorXd x(n);
    for (auto& xi : x) xi = rng.normal();
    CHECK((u.matrix() * x).dot(theta.coords()) == doctest::Approx(x.dot(u.pullback(theta).coords())).epsilon(1e-12));
}

TEST_CASE("orthogonal and direction invariants are enforced") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(OrthogonalMatrix{m}, InvalidArgument);
    CHECK_THROWS_AS(Direction(Eigen::VectorXd::Zero(3)), InvalidArgument);
    const Direction d(Eigen::Vector3d(3, 0, 4));
    CHECK(d.coords().norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform directions") {
    Engine rng({5, 0});
    for (int k = 0; k < 100; ++k) {
        const auto d = uniform_direction(2, rng);
        CHECK(std::abs(d.coords().squaredNorm() - 1.0) < 1e-12);
    }
    const auto dirs = uniform_directions(8, 100'000, {5, 1});
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(8);
    for (const auto& d : dirs) mean += d.coords();
    mean /= static_cast<double>(dirs.size());
    CHECK(mean.cwiseAbs().maxCoeff() < 0.02);
    CHECK_THROWS_AS(uniform_direction(0, rng), InvalidArgument);
}

TEST_CASE("cap measure exact values") {
    for (std::size_t n : {2u, 3u, 8u, 30u}) {
        CHECK(std::abs(cap_measure(n, std::sqrt(2.0)) - 0.5) < 1e-12);
        CHECK(cap_measure(n, 2.0) == 1.0);
    }
    CHECK(std::abs(cap_measure(2, 1.0) - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(cap_measure(3, 0.2) - 0.01) < 1e-12);
    CHECK(std::abs(cap_measure(3, 1.0) - 0.25) < 1e-12);
    // Quadrature values from tests/oracles/derive_oracles.py.
    CHECK(std::abs(cap_measure(2, 0.5) - 0.160861246510332488) < 1e-12);
    CHECK(std::abs(cap_measure(8, 1.0) - 0.0852353303935269111) < 1e-12);
    CHECK(std::abs(cap_measure(8, 1.7) - 0.884978905616297619) < 1e-12);
    CHECK(std::abs(cap_measure(8, 0.3) - 3.04505874354225823e-5) < 1e-15);
    CHECK(std::abs(cap_measure(3, 1.7) - 0.7225) < 1e-12);

    double prev = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double v = cap_measure(5, 0.01 * k);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(cap_measure(3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(cap_measure(3, 2.01), InvalidArgument);
}

TEST_CASE("cap frequencies from sphere sampling match the exact measure") {
    for (std::size_t n : {3u, 8u}) {
        const auto dirs = uniform_directions(n, 100'000, {6, n});
        for (double eps : {0.3, 1.0, std::sqrt(2.0)}) {
            std::uint64_t hits = 0;
            for (const auto& d : dirs) {
                Eigen::VectorXd diff = d.coords();
                diff(0) -= 1.0;
                hits += diff.norm() <= eps ? 1 : 0;
            }
            const double exact = cap_measure(n, eps);
            const double se = std::sqrt(exact * (1 - exact) / dirs.size());
            CAPTURE(n);
            CAPTURE(eps);
            CHECK(std::abs(hits / double(dirs.size()) - exact) <= 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("cap bound scan") {
    std::vector<double> grid;
    for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
    CHECK(cap_bound_scan(3, grid).empirical_C == doctest::Approx(0.5).epsilon(1e-12));
    const std::vector<double> half{0.5};
    CHECK(cap_bound_scan(2, half).empirical_C == doctest::Approx(0.160861246510332488 / 0.5).epsilon(1e-12));
    CHECK_THROWS_AS(cap_bound_scan(1, half), InvalidArgument);
}

TEST_CASE("rotation separation simulation") {
    const std::size_t n = 3;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x(0) = 10.0;

    SUBCASE("antipodal centers: each pair rate is the cap of chordal radius 0.2") {
        std::vector<Eigen::VectorXd> centers{x, -x};
        const auto res = rotation_separation_sim(centers, 5.0, 100'000, {7, 0});
        CHECK(res.pair_rates.size() == 4);
        for (const auto& pr : res.pair_rates) {
            const double se = std::sqrt(0.01 * 0.99 / 100'000);
            CHECK(std::abs(pr.rate - 0.01) <= 3.0 * se);
        }
    }
    SUBCASE("one center: only the self pair") {
        std::vector<Eigen::VectorXd> centers{x};
        const auto res = rotation_separation_sim(centers, 5.0, 100'000, {7, 1});
        const double se = std::sqrt(0.01 * 0.99 / 100'000);
        CHECK(std::abs(res.p_all_separated - 0.99) <= 3.0 * se);
        CHECK(res.ci.low <= res.p_all_separated);
        CHECK(res.ci.high >= res.p_all_separated);
    }
    SUBCASE("centers inside R B give certainty") {
        std::vector<Eigen::VectorXd> centers{0.1 * x};
        const auto res = rotation_separation_sim(centers, 5.0, 1000, {7, 2});
        CHECK(res.p_all_separated == 1.0);
    }
    SUBCASE("deterministic across worker counts") {
        std::vector<Eigen::VectorXd> centers{x, -x};
        const auto a = rotation_separation_sim(centers, 5.0, 5000, {7, 3}, 1);
        const auto b = rotation_separation_sim(centers, 5.0, 5000, {7, 3}, 4);
        CHECK(a.separated == b.separated);
    }
    SUBCASE("empty centers are rejected") {
        std::vector<Eigen::VectorXd> centers;
        CHECK_THROWS_AS(rotation_separation_sim(centers, 5.0, 10, {7, 4}), InvalidArgument);
    }
}
