#include "tlab/orthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <boost/math/special_functions/beta.hpp>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"

namespace tlab {

Direction::Direction(Eigen::VectorXd v) : v_(std::move(v)) {
    require(v_.size() >= 1, "Direction: empty vector");
    const double norm = v_.norm();
    require(norm > 0.0 && std::isfinite(norm), "Direction: vector must be finite and nonzero");
    v_ /= norm;
}

Direction Direction::axis(std::size_t n, std::size_t k, double sign) {
    require(k < n, "Direction::axis: index out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    v[static_cast<Eigen::Index>(k)] = sign;
    return Direction(std::move(v));
}

OrthogonalMatrix::OrthogonalMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    require(m_.rows() >= 1 && m_.rows() == m_.cols(), "OrthogonalMatrix: must be square and nonempty");
    require(orthogonality_error() <= 1e-10, "OrthogonalMatrix: U^T U deviates from I");
}

OrthogonalMatrix OrthogonalMatrix::identity(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return OrthogonalMatrix(Eigen::MatrixXd::Identity(k, k));
}

double OrthogonalMatrix::orthogonality_error() const {
    const Eigen::MatrixXd e = m_.transpose() * m_ - Eigen::MatrixXd::Identity(m_.rows(), m_.cols());
    return e.cwiseAbs().maxCoeff();
}

Direction OrthogonalMatrix::pullback(const Direction& theta) const {
    require(theta.dimension() == dimension(), "pullback: dimension mismatch");
    return Direction(m_.transpose() * theta.coords());
}

std::uint64_t OrthogonalMatrix::fingerprint() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    const auto* bytes = reinterpret_cast<const unsigned char*>(m_.data());
    for (std::size_t i = 0; i < static_cast<std::size_t>(m_.size()) * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

OrthogonalMatrix haar(std::size_t n, Engine& rng) {
    require(n >= 1, "haar: dimension must be positive");
    const auto k = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd g(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < k; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return OrthogonalMatrix(std::move(q));
}

OrthogonalMatrix haar(std::size_t n, const RandomStream& stream) {
    Engine rng(stream);
    return haar(n, rng);
}

Direction uniform_direction(std::size_t n, Engine& rng) {
    require(n >= 1, "uniform_direction: dimension must be positive");
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    do {
        for (auto& x : v) x = rng.normal();
    } while (v.squaredNorm() == 0.0);
    return Direction(std::move(v));
}

std::vector<Direction> uniform_directions(std::size_t n, std::size_t count, const RandomStream& stream) {
    require(n >= 1, "uniform_directions: dimension must be positive");
    Engine rng(stream);
    std::vector<Direction> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(uniform_direction(n, rng));
    return out;
}

double cap_measure(std::size_t n, double eps) {
    require(n >= 2, "cap_measure: n must be >= 2");
    require(eps > 0.0 && eps <= 2.0, "cap_measure: eps must lie in (0, 2]");
    if (eps == 2.0) return 1.0;
    // Polar angle phi with eps = 2 sin(phi/2); sin^2(phi) = eps^2 (1 - eps^2/4).
    const double s2 = std::min(1.0, eps * eps * (1.0 - 0.25 * eps * eps));
    const double half_ibeta = 0.5 * boost::math::ibeta(0.5 * static_cast<double>(n - 1), 0.5, s2);
    return eps * eps <= 2.0 ? half_ibeta : 1.0 - half_ibeta;
}

CapBoundScan cap_bound_scan(std::size_t n, std::span<const double> eps_grid) {
    require(n >= 2, "cap_bound_scan: n must be >= 2");
    require(!eps_grid.empty(), "cap_bound_scan: empty grid");
    CapBoundScan out;
    for (double eps : eps_grid) {
        require(eps > 0.0 && eps < 1.0, "cap_bound_scan: grid values must lie in (0, 1)");
        const double c = std::pow(cap_measure(n, eps), 1.0 / static_cast<double>(n - 1)) / eps;
        if (c > out.empirical_C) {
            out.empirical_C = c;
            out.argmax_eps = eps;
        }
    }
    return out;
}

SeparationResult rotation_separation_sim(std::span<const Eigen::VectorXd> centers, double R,
                                         std::uint64_t trials, const RandomStream& stream,
                                         std::size_t threads) {
    require(!centers.empty(), "rotation_separation_sim: no centers");
    require(trials >= 1, "rotation_separation_sim: trials must be positive");
    require(R > 0.0, "rotation_separation_sim: R must be positive");
    const auto n = static_cast<std::size_t>(centers.front().size());
    require(n >= 2, "rotation_separation_sim: n must be >= 2");
    std::vector<std::size_t> far;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        require(static_cast<std::size_t>(centers[i].size()) == n, "rotation_separation_sim: ragged centers");
        if (centers[i].norm() > R) far.push_back(i);
    }

    const std::size_t pairs = far.size() * far.size();
    constexpr std::uint64_t kShard = 1024;
    const std::uint64_t shards = (trials + kShard - 1) / kShard;
    std::vector<std::vector<std::uint64_t>> pair_hits(shards, std::vector<std::uint64_t>(pairs, 0));
    std::vector<std::uint64_t> separated(shards, 0);

    parallel_for(
        shards,
        [&](std::size_t s) {
            Engine rng(stream.child(s));
            const std::uint64_t end = std::min<std::uint64_t>(trials, (s + 1) * kShard);
            for (std::uint64_t t = s * kShard; t < end; ++t) {
                if (far.empty()) {
                    ++separated[s];
                    continue;
                }
                const OrthogonalMatrix u = haar(n, rng);
                bool any = false;
                for (std::size_t a = 0; a < far.size(); ++a) {
                    const Eigen::VectorXd ux = u.matrix() * centers[far[a]];
                    for (std::size_t b = 0; b < far.size(); ++b) {
                        if ((ux - centers[far[b]]).norm() <= 2.0) {
                            ++pair_hits[s][a * far.size() + b];
                            any = true;
                        }
                    }
                }
                if (!any) ++separated[s];
            }
        },
        threads);

    SeparationResult out;
    out.trials = trials;
    for (std::size_t s = 0; s < shards; ++s) out.separated += separated[s];
    out.p_all_separated = static_cast<double>(out.separated) / static_cast<double>(trials);
    out.ci = clopper_pearson(out.separated, trials);
    for (std::size_t a = 0; a < far.size(); ++a) {
        for (std::size_t b = 0; b < far.size(); ++b) {
            PairRate pr{far[a], far[b], 0, 0.0, 0.0};
            for (std::size_t s = 0; s < shards; ++s) pr.hits += pair_hits[s][a * far.size() + b];
            pr.rate = static_cast<double>(pr.hits) / static_cast<double>(trials);
            pr.std_error = proportion_stderr(pr.hits, trials);
            out.worst_pair_rate = std::max(out.worst_pair_rate, pr.rate);
            out.pair_rates.push_back(pr);
        }
    }
    return out;
}

}  // namespace tlab
