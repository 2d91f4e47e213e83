#include "tlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "tlab/error.hpp"

namespace tlab {

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
    require(trials >= 1, "clopper_pearson: trials must be positive");
    require(hits <= trials, "clopper_pearson: hits exceed trials");
    require(confidence > 0.0 && confidence < 1.0, "clopper_pearson: confidence must be in (0,1)");
    const double a = 1.0 - confidence;
    const double k = static_cast<double>(hits);
    const double n = static_cast<double>(trials);
    Interval ci;
    ci.low = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, a / 2.0);
    ci.high = hits == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - a / 2.0);
    return ci;
}

double proportion_stderr(std::uint64_t hits, std::uint64_t trials) {
    require(trials >= 1, "proportion_stderr: trials must be positive");
    const double q = static_cast<double>(hits) / static_cast<double>(trials);
    return std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(std::size_t na, std::size_t nb, double significance) {
    const double c = std::sqrt(-0.5 * std::log(significance / 2.0));
    const double a = static_cast<double>(na);
    const double b = static_cast<double>(nb);
    return c * std::sqrt((a + b) / (a * b));
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "ls_slope: need >= 2 paired points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    require(sxx > 0.0, "ls_slope: x values are all equal");
    return sxy / sxx;
}

}  // namespace tlab
