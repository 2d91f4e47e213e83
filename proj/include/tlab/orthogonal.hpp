#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tlab/rng.hpp"
#include "tlab/stats.hpp"

namespace tlab {

/// A point of S^{n-1}. Construction normalizes; a zero vector is rejected.
class Direction {
public:
    explicit Direction(Eigen::VectorXd v);

    static Direction axis(std::size_t n, std::size_t k, double sign = 1.0);

    [[nodiscard]] const Eigen::VectorXd& coords() const noexcept { return v_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(v_.size()); }
    [[nodiscard]] Direction operator-() const { return Direction(Eigen::VectorXd(-v_)); }

private:
    Eigen::VectorXd v_;
};

/// An element of O(n). The constructor checks |U^T U - I|_max <= 1e-10.
class OrthogonalMatrix {
public:
    explicit OrthogonalMatrix(Eigen::MatrixXd m);

    static OrthogonalMatrix identity(std::size_t n);

    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] double orthogonality_error() const;
    [[nodiscard]] OrthogonalMatrix operator-() const { return OrthogonalMatrix(Eigen::MatrixXd(-m_)); }

    /// U^T theta, i.e. the direction at which h_{U(K)}(theta) = h_K(U^T theta).
    [[nodiscard]] Direction pullback(const Direction& theta) const;

    /// FNV-1a over the entry bytes, for logging which U an experiment used.
    [[nodiscard]] std::uint64_t fingerprint() const noexcept;

private:
    Eigen::MatrixXd m_;
};

/// Haar-distributed U: QR of an n x n standard Gaussian matrix, with the
/// columns of Q flipped so that R has a positive diagonal.
OrthogonalMatrix haar(std::size_t n, Engine& rng);
OrthogonalMatrix haar(std::size_t n, const RandomStream& stream);

Direction uniform_direction(std::size_t n, Engine& rng);
std::vector<Direction> uniform_directions(std::size_t n, std::size_t count, const RandomStream& stream);

/// Normalized measure of {x in S^{n-1} : |x - pole| <= eps} (chordal radius).
double cap_measure(std::size_t n, double eps);

struct CapBoundScan {
    double empirical_C = 0.0;
    double argmax_eps = 0.0;
};

/// max over the grid of cap_measure(n, eps)^{1/(n-1)} / eps.
CapBoundScan cap_bound_scan(std::size_t n, std::span<const double> eps_grid);

struct PairRate {
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint64_t hits = 0;
    double rate = 0.0;
    double std_error = 0.0;
};

struct SeparationResult {
    std::uint64_t trials = 0;
    std::uint64_t separated = 0;
    double p_all_separated = 0.0;
    Interval ci;
    double worst_pair_rate = 0.0;
    std::vector<PairRate> pair_rates;  // ordered pairs among far centers
};

/// For each Haar U, checks every ordered pair (i, j) of centers with norm
/// greater than R for |U x_i - x_j| <= 2, i.e. whether the translated unit
/// balls U(x_i + B) and x_j + B meet.
SeparationResult rotation_separation_sim(std::span<const Eigen::VectorXd> centers, double R,
                                         std::uint64_t trials, const RandomStream& stream,
                                         std::size_t threads = 0);

}  // namespace tlab
