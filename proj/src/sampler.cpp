#include "tlab/sampler.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"

static_assert(std::endian::native == std::endian::little, "batch files assume a little-endian host");

namespace tlab {

std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::cube: return "cube";
        case Family::ball: return "ball";
        case Family::laplace_product: return "laplace_product";
        case Family::shifted_exp_product: return "shifted_exp_product";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "cube") return Family::cube;
    if (name == "ball") return Family::ball;
    if (name == "laplace_product" || name == "laplace") return Family::laplace_product;
    if (name == "shifted_exp_product" || name == "shifted_exp") return Family::shifted_exp_product;
    throw InvalidArgument("unknown family: " + std::string(name));
}

bool is_even(Family f) noexcept { return f != Family::shifted_exp_product; }

double DistributionSpec::nominal_alpha() const noexcept {
    switch (family) {
        case Family::laplace_product:
        case Family::shifted_exp_product: return 1.0;
        default: return 2.0;
    }
}

void draw(const DistributionSpec& spec, Engine& rng, std::span<double> row) {
    constexpr double sqrt3 = std::numbers::sqrt3;
    constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    switch (spec.family) {
        case Family::gaussian:
            for (double& x : row) x = rng.normal();
            return;
        case Family::cube:
            for (double& x : row) x = rng.uniform(-sqrt3, sqrt3);
            return;
        case Family::laplace_product:
            for (double& x : row) {
                const double e = rng.exponential() * inv_sqrt2;
                x = rng.coin() ? e : -e;
            }
            return;
        case Family::shifted_exp_product:
            for (double& x : row) x = rng.exponential() - 1.0;
            return;
        case Family::ball: {
            double norm2 = 0.0;
            for (double& x : row) {
                x = rng.normal();
                norm2 += x * x;
            }
            const double n = static_cast<double>(row.size());
            const double radius = std::sqrt(n + 2.0) * std::pow(rng.uniform(), 1.0 / n);
            const double scale = radius / std::sqrt(norm2);
            for (double& x : row) x *= scale;
            return;
        }
    }
    throw InvalidArgument("unknown family");
}

SampleBatch sample(const DistributionSpec& spec, std::size_t count, const RandomStream& stream,
                   std::size_t threads) {
    require(count >= 1, "sample: count must be positive");
    require(spec.dimension >= 1, "sample: dimension must be positive");
    if (static_cast<unsigned>(spec.family) > static_cast<unsigned>(Family::shifted_exp_product))
        throw InvalidArgument("sample: unknown family");

    SampleBatch batch;
    batch.spec = spec;
    batch.provenance = stream;
    batch.law = std::string(family_name(spec.family));
    batch.data.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(spec.dimension));

    const std::size_t shards = (count + kShardRows - 1) / kShardRows;
    parallel_for(
        shards,
        [&](std::size_t s) {
            Engine rng(stream.child(s));
            const std::size_t end = std::min(count, (s + 1) * kShardRows);
            for (std::size_t i = s * kShardRows; i < end; ++i) {
                double* row = batch.data.row(static_cast<Eigen::Index>(i)).data();
                draw(spec, rng, {row, spec.dimension});
            }
        },
        threads);
    return batch;
}

IsotropyReport isotropy_report(const Matrix& data) {
    require(data.rows() >= 2, "isotropy_report: need at least two rows");
    const double count = static_cast<double>(data.rows());
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Matrix centered = data.rowwise() - mean;
    // Divide by count - 1 (unbiased); for the degenerate identical-rows batch
    // the covariance is exactly zero either way.
    Eigen::MatrixXd cov = (centered.transpose() * centered) / (count - 1.0);
    cov -= Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
    return {mean.cwiseAbs().maxCoeff(), cov.cwiseAbs().maxCoeff()};
}

IsotropyReport isotropy_report(const SampleBatch& batch) { return isotropy_report(batch.data); }

namespace {

double shifted_exp_negative_moment(double p) {
    // E (X)_-^p = int_0^1 x^p e^{x-1} dx = e^{-1} sum_k 1 / (k! (p + k + 1)).
    double term = 1.0;  // 1/k!
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double add = term / (p + k + 1.0);
        sum += add;
        if (add < 1e-18 * sum) break;
        term /= (k + 1.0);
    }
    return sum * std::exp(-1.0);
}

}  // namespace

double axis_moment_oracle(Family family, double p, MomentSide side) {
    require(p >= 1.0, "axis_moment_oracle: p must be >= 1");
    double absolute = 0.0;
    switch (family) {
        case Family::gaussian:
            absolute = std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) -
                                0.5 * std::log(std::numbers::pi));
            break;
        case Family::cube:
            absolute = std::exp(0.5 * p * std::log(3.0)) / (p + 1.0);
            break;
        case Family::laplace_product:
            absolute = std::exp(std::lgamma(p + 1.0) - 0.5 * p * std::log(2.0));
            break;
        case Family::shifted_exp_product: {
            const double pos = std::exp(std::lgamma(p + 1.0) - 1.0);
            const double neg = shifted_exp_negative_moment(p);
            switch (side) {
                case MomentSide::absolute: return pos + neg;
                case MomentSide::positive: return pos;
                case MomentSide::negative: return neg;
            }
            break;
        }
        case Family::ball:
            throw Unsupported("axis_moment_oracle: ball marginal has no dimension-free closed form");
    }
    return side == MomentSide::absolute ? absolute : 0.5 * absolute;
}

namespace {

constexpr std::array<char, 8> kMagic = {'T', 'L', 'A', 'B', 'B', 'A', 'T', '1'};

template <class T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw InvalidArgument("read_batch: truncated header");
    return v;
}

}  // namespace

void write_batch(const SampleBatch& batch, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("write_batch: cannot open " + path.string());
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(batch.dimension()));
    put<std::uint64_t>(out, batch.count());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(batch.spec.family));
    put<std::uint64_t>(out, batch.provenance.root_seed);
    put<std::uint64_t>(out, batch.provenance.stream_index);
    out.write(reinterpret_cast<const char*>(batch.data.data()),
              static_cast<std::streamsize>(batch.data.size() * sizeof(double)));
}

SampleBatch read_batch(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("read_batch: cannot open " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw InvalidArgument("read_batch: bad magic");
    SampleBatch batch;
    const auto n = get<std::uint32_t>(in);
    const auto count = get<std::uint64_t>(in);
    const auto tag = get<std::uint32_t>(in);
    if (tag > static_cast<std::uint32_t>(Family::shifted_exp_product))
        throw InvalidArgument("read_batch: unknown family tag");
    batch.spec = {static_cast<Family>(tag), n};
    batch.provenance.root_seed = get<std::uint64_t>(in);
    batch.provenance.stream_index = get<std::uint64_t>(in);
    batch.law = std::string(family_name(batch.spec.family));
    batch.data.resize(static_cast<Eigen::Index>(count), n);
    in.read(reinterpret_cast<char*>(batch.data.data()),
            static_cast<std::streamsize>(batch.data.size() * sizeof(double)));
    if (!in) throw InvalidArgument("read_batch: truncated data");
    return batch;
}

}  // namespace tlab
