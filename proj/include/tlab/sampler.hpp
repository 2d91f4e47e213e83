#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "tlab/rng.hpp"

namespace tlab {

// Isotropic log-concave laws with exact samplers.
//   gaussian             standard normal on R^n
//   cube                 uniform on [-sqrt3, sqrt3]^n
//   ball                 uniform on sqrt(n+2) B_2^n
//   laplace_product      i.i.d. density exp(-sqrt2 |x|) / sqrt2
//   shifted_exp_product  i.i.d. Exp(1) - 1 (not even)
enum class Family : std::uint8_t {
    gaussian = 0,
    cube = 1,
    ball = 2,
    laplace_product = 3,
    shifted_exp_product = 4,
};

inline constexpr Family kAllFamilies[] = {Family::gaussian, Family::cube, Family::ball,
                                          Family::laplace_product, Family::shifted_exp_product};

std::string_view family_name(Family f) noexcept;

/// Parses a family name. Accepts the short aliases "laplace" and
/// "shifted_exp". Throws InvalidArgument for anything else.
Family parse_family(std::string_view name);

bool is_even(Family f) noexcept;

struct DistributionSpec {
    Family family = Family::gaussian;
    std::size_t dimension = 1;

    // 2 for gaussian, cube and ball; 1 for the exponential-tailed products.
    [[nodiscard]] double nominal_alpha() const noexcept;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// count x n matrix of draws. `spec` is the base law; `law` is a short
/// human-readable description that also covers derived laws (thickened,
/// Gaussian-convolved).
struct SampleBatch {
    Matrix data;
    DistributionSpec spec;
    RandomStream provenance;
    std::string law;

    [[nodiscard]] std::size_t count() const noexcept { return static_cast<std::size_t>(data.rows()); }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(data.cols()); }
};

/// Rows generated per shard. Each shard draws from stream.child(shard), so
/// output does not depend on how many workers process the shards.
inline constexpr std::size_t kShardRows = 4096;

/// Writes one draw of `spec` into `row` (length = dimension).
void draw(const DistributionSpec& spec, Engine& rng, std::span<double> row);

SampleBatch sample(const DistributionSpec& spec, std::size_t count, const RandomStream& stream,
                   std::size_t threads = 0);

struct IsotropyReport {
    double max_abs_mean = 0.0;
    double max_cov_deviation = 0.0;
};

IsotropyReport isotropy_report(const SampleBatch& batch);
IsotropyReport isotropy_report(const Matrix& data);

enum class MomentSide : std::uint8_t { absolute, positive, negative };

/// Exact axis-marginal moment E|X_1|^p, E (X_1)_+^p or E (X_1)_-^p.
/// Throws Unsupported for the ball, whose marginal depends on n.
double axis_moment_oracle(Family family, double p, MomentSide side);

// Binary persistence: "TLABBAT1", u32 n, u64 count, u32 family, u64 seed,
// u64 stream index, then count*n little-endian doubles, row-major.
void write_batch(const SampleBatch& batch, const std::filesystem::path& path);
SampleBatch read_batch(const std::filesystem::path& path);

}  // namespace tlab
