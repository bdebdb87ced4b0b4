#pragma once

// Monte-Carlo product experiments and goodness-of-fit.
//
// A run of n products is split into fixed chunks of kChunkSize draws; chunk c
// consumes Stream(seed, c). Output therefore depends only on (classes, n,
// seed), never on the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "classes.hpp"
#include "densities.hpp"
#include "error.hpp"
#include "group.hpp"
#include "harmonic.hpp"
#include "random.hpp"

namespace orbprod {

inline constexpr std::size_t kChunkSize = 1u << 16;
inline constexpr int kDefaultBins = 200;

/// Equal-width bins over [lo, hi]. Values outside the range land in the
/// nearest edge bin.
class Histogram {
public:
    Histogram() = default;
    Histogram(double lo, double hi, int bins) : lo_(lo), hi_(hi), counts_(static_cast<std::size_t>(bins), 0) {
        if (bins < 1 || !(hi > lo)) throw Error(ErrorKind::InvalidParams, "histogram needs bins >= 1 and hi > lo");
    }

    void add(double x) noexcept {
        const auto bins = static_cast<double>(counts_.size());
        double pos = std::floor((x - lo_) / (hi_ - lo_) * bins);
        pos = std::clamp(pos, 0.0, bins - 1.0);
        ++counts_[static_cast<std::size_t>(pos)];
        ++n_total_;
    }

    void add(std::span<const double> xs) noexcept {
        for (const double x : xs) add(x);
    }

    /// Requires identical binning.
    Histogram& merge(const Histogram& other) {
        if (other.lo_ != lo_ || other.hi_ != hi_ || other.counts_.size() != counts_.size()) {
            throw Error(ErrorKind::InvalidParams, "cannot merge histograms with different binning");
        }
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
        n_total_ += other.n_total_;
        return *this;
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    int bins() const noexcept { return static_cast<int>(counts_.size()); }
    double bin_width() const noexcept { return (hi_ - lo_) / static_cast<double>(counts_.size()); }
    double bin_center(int i) const noexcept { return lo_ + (i + 0.5) * bin_width(); }
    double bin_edge(int i) const noexcept { return lo_ + i * bin_width(); }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t n_total() const noexcept { return n_total_; }

    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<std::uint64_t> counts_;
    std::uint64_t n_total_ = 0;
};

struct ComparisonReport {
    double ks = 0.0;
    double l1 = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    DensityKind kind = DensityKind::ConjSu2;
    std::array<double, 2> params{};
};

/// Both classes must be of the same family (and flavor for SL(2)).
inline DensityKind product_kind(const ClassDescriptor& a, const ClassDescriptor& b) {
    if (a.index() != b.index()) throw Error(ErrorKind::InvalidParams, "classes belong to different groups");
    if (std::holds_alternative<ConjugacyClass>(a)) return DensityKind::ConjSu2;
    if (std::holds_alternative<SphericalClassCompact>(a)) return DensityKind::SphSu2;
    const auto& na = std::get<SphericalClassNC>(a);
    const auto& nb = std::get<SphericalClassNC>(b);
    if (na.flavor != nb.flavor) throw Error(ErrorKind::InvalidParams, "classes belong to different groups");
    return na.flavor == Flavor::Real ? DensityKind::SphSl2R : DensityKind::SphSl2C;
}

inline double class_parameter(const ClassDescriptor& d) {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ConjugacyClass>) return c.alpha;
            else if constexpr (std::is_same_v<T, SphericalClassCompact>) return c.r;
            else return c.t;
        },
        d);
}

/// Analytic density of the product of the two classes.
inline ProductDensity density_for(const ClassDescriptor& a, const ClassDescriptor& b) {
    return make_density(product_kind(a, b), class_parameter(a), class_parameter(b));
}

/// Class parameter of one product g·h with g, h drawn from the two classes.
inline double sample_product_parameter(const ClassDescriptor& a, const ClassDescriptor& b, Stream& rng) {
    if (const auto* ca = std::get_if<ConjugacyClass>(&a)) {
        const Su2Element g = sample_conjugacy(*ca, rng);
        const Su2Element h = sample_conjugacy(std::get<ConjugacyClass>(b), rng);
        return class_angle(g * h);
    }
    if (const auto* sa = std::get_if<SphericalClassCompact>(&a)) {
        const Su2Element g = sample_spherical_compact(*sa, rng);
        const Su2Element h = sample_spherical_compact(std::get<SphericalClassCompact>(b), rng);
        return spherical_radius(g * h);
    }
    const Sl2Element g = sample_spherical_nc(std::get<SphericalClassNC>(a), rng);
    const Sl2Element h = sample_spherical_nc(std::get<SphericalClassNC>(b), rng);
    return cartan_parameter(g * h);
}

namespace detail {

// Runs fill(chunk_index, out_span) for every chunk, spread over `threads`.
template <class Fill>
void run_chunked(std::vector<double>& out, int threads, Fill&& fill) {
    const std::size_t n = out.size();
    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t c = first; c < chunks; c += stride) {
            const std::size_t begin = c * kChunkSize;
            const std::size_t len = std::min(kChunkSize, n - begin);
            fill(c, std::span<double>(out.data() + begin, len));
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || chunks <= 1) {
        work(0, 1);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
}

} // namespace detail

/// n independent products, returning the sorted class parameters.
inline std::vector<double> product_experiment(const ClassDescriptor& a, const ClassDescriptor& b, std::size_t n,
                                              std::uint64_t seed, int threads = 1) {
    if (n < 1) throw Error(ErrorKind::InvalidParams, "n must be >= 1");
    product_kind(a, b);
    require_nondegenerate(a);
    require_nondegenerate(b);
    std::vector<double> out(n);
    detail::run_chunked(out, threads, [&](std::size_t chunk, std::span<double> dst) {
        Stream rng(seed, chunk);
        for (double& x : dst) x = sample_product_parameter(a, b, rng);
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// n draws from the exact one-dimensional law, sorted.
inline std::vector<double> oracle_experiment(const ProductDensity& d, std::size_t n, std::uint64_t seed,
                                             int threads = 1) {
    if (n < 1) throw Error(ErrorKind::InvalidParams, "n must be >= 1");
    std::vector<double> out(n);
    detail::run_chunked(out, threads, [&](std::size_t chunk, std::span<double> dst) {
        Stream rng(seed, chunk);
        for (double& x : dst) x = d.sample_oracle(rng);
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline void require_sorted(std::span<const double> xs) {
    if (!std::is_sorted(xs.begin(), xs.end())) throw Error(ErrorKind::UnsortedInput, "sample must be sorted ascending");
}

/// sup_x |F_n(x) − F(x)| over a sorted sample, checking both one-sided gaps.
template <class Cdf>
double ks_distance(std::span<const double> sorted, Cdf&& cdf) {
    require_sorted(sorted);
    if (sorted.empty()) return 0.0;
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return std::clamp(d, 0.0, 1.0);
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require_sorted(a);
    require_sorted(b);
    if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : 1.0;
    const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
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

/// Σ_bins |empirical bin mass − analytic bin mass|.
inline double histogram_l1(const Histogram& h, const ProductDensity& d) {
    if (h.n_total() == 0) return 0.0;
    double l1 = 0.0;
    const auto n = static_cast<double>(h.n_total());
    for (int i = 0; i < h.bins(); ++i) {
        const double mass = d.cdf(h.bin_edge(i + 1)) - d.cdf(h.bin_edge(i));
        l1 += std::abs(static_cast<double>(h.counts()[static_cast<std::size_t>(i)]) / n - mass);
    }
    return l1;
}

inline Histogram histogram_over_support(const ProductDensity& d, std::span<const double> xs, int bins = kDefaultBins) {
    Histogram h(d.support().lo, d.support().hi, bins);
    h.add(xs);
    return h;
}

inline ComparisonReport compare_with_density(const ClassDescriptor& a, const ClassDescriptor& b, std::size_t n,
                                             std::uint64_t seed, int threads = 1) {
    const ProductDensity d = density_for(a, b);
    const std::vector<double> xs = product_experiment(a, b, n, seed, threads);
    ComparisonReport r;
    r.ks = ks_distance(xs, [&](double x) { return d.cdf(x); });
    r.l1 = histogram_l1(histogram_over_support(d, xs), d);
    r.n = n;
    r.seed = seed;
    r.kind = d.kind();
    r.params = d.params();
    return r;
}

struct ConvergenceRow {
    std::size_t n = 0;
    double mean_ks = 0.0;
    double sd_ks = 0.0;
};

/// KS statistics over `seeds` independent runs per sample size; run s uses
/// seed base_seed + s.
inline std::vector<ConvergenceRow> convergence_study(const ClassDescriptor& a, const ClassDescriptor& b,
                                                     std::span<const std::size_t> n_grid, int seeds = 10,
                                                     std::uint64_t base_seed = 0, int threads = 1) {
    if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
        throw Error(ErrorKind::InvalidParams, "sample-size grid must be ascending");
    }
    if (seeds < 2) throw Error(ErrorKind::InvalidParams, "need at least two seeds per sample size");
    const ProductDensity d = density_for(a, b);
    std::vector<ConvergenceRow> rows;
    for (const std::size_t n : n_grid) {
        std::vector<double> ks;
        for (int s = 0; s < seeds; ++s) {
            const auto xs = product_experiment(a, b, n, base_seed + static_cast<std::uint64_t>(s), threads);
            ks.push_back(ks_distance(xs, [&](double x) { return d.cdf(x); }));
        }
        double mean = 0.0;
        for (const double k : ks) mean += k;
        mean /= static_cast<double>(ks.size());
        double var = 0.0;
        for (const double k : ks) var += (k - mean) * (k - mean);
        var /= static_cast<double>(ks.size() - 1);
        rows.push_back({n, mean, std::sqrt(var)});
    }
    return rows;
}

/// Least-squares slope of log(mean_ks) against log(n).
inline double loglog_slope(std::span<const ConvergenceRow> rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(static_cast<double>(r.n)), y = std::log(r.mean_ks);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Support of a product of conjugacy classes with angles in [a.lo, a.hi]
/// and the fixed class angle beta.
inline SupportInterval convolve_support(const SupportInterval& a, double beta) {
    constexpr double pi = std::numbers::pi;
    double lo = 0.0;
    if (beta < a.lo) lo = a.lo - beta;
    else if (beta > a.hi) lo = beta - a.hi;
    double hi;
    if (a.lo + beta <= pi && a.hi + beta >= pi) hi = pi;
    else hi = std::max(fold_angle(a.lo + beta), fold_angle(a.hi + beta));
    return {lo, hi};
}

/// Support of the product C_{a1} ··· C_{ak}.
inline SupportInterval iterated_support(std::span<const double> angles) {
    if (angles.size() < 2) throw Error(ErrorKind::InvalidParams, "need at least two classes");
    for (const double a : angles) require_open_angle(a, "angle");
    SupportInterval s{angles[0], angles[0]};
    for (std::size_t i = 1; i < angles.size(); ++i) s = convolve_support(s, angles[i]);
    return s;
}

struct IteratedResult {
    Histogram histogram;
    double min_angle = 0.0;
    double max_angle = 0.0;
};

/// Empirical law of the class angle of g1 ··· gk, gi ~ C_{angles[i]}.
inline IteratedResult iterated_convolution(std::span<const double> angles, std::size_t n, std::uint64_t seed,
                                           int bins = kDefaultBins, int threads = 1) {
    if (angles.size() < 2) throw Error(ErrorKind::InvalidParams, "need at least two classes");
    if (n < 1) throw Error(ErrorKind::InvalidParams, "n must be >= 1");
    std::vector<ConjugacyClass> classes;
    for (const double a : angles) {
        classes.push_back({a});
        require_nondegenerate(classes.back());
    }
    std::vector<double> xs(n);
    detail::run_chunked(xs, threads, [&](std::size_t chunk, std::span<double> dst) {
        Stream rng(seed, chunk);
        for (double& x : dst) {
            Su2Element g = Su2Element::identity();
            for (const auto& c : classes) g = g * sample_conjugacy(c, rng);
            x = class_angle(g);
        }
    });
    IteratedResult r{Histogram(0.0, std::numbers::pi, bins), *std::min_element(xs.begin(), xs.end()),
                     *std::max_element(xs.begin(), xs.end())};
    r.histogram.add(xs);
    return r;
}

} // namespace orbprod
