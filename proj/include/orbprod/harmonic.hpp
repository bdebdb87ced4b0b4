#pragma once

// Character series for products of conjugacy classes of SU(2).
//
// Index convention: k ≥ 0 labels the (k+1)-dimensional irreducible
// representation, χ_k(θ) = sin((k+1)θ)/sin θ. Series over representations are
// written with j = k + 1 ≥ 1 throughout.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "densities.hpp"

namespace orbprod {

/// Pairwise (tree) summation; fixed reduction order independent of threading.
inline double pairwise_sum(std::span<const double> xs) noexcept {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (const double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Character of the (k+1)-dimensional representation at class angle θ.
inline double character(int k, double theta) noexcept {
    const double s = std::sin(theta);
    if (std::abs(s) > 1e-6) return std::sin((k + 1) * theta) / s;
    // Chebyshev U_k(cos θ) recurrence near θ ∈ {0, π}.
    const double x = std::cos(theta);
    double prev = 1.0, cur = 2.0 * x;
    if (k == 0) return 1.0;
    for (int j = 1; j < k; ++j) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

enum class Summation { Partial, Cesaro };

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    Summation summation = Summation::Cesaro;
};

namespace detail {

// Product of three values in sorted order, so that the result is exactly
// symmetric under permutations of the inputs.
inline double sorted_product(double a, double b, double c) noexcept {
    std::array<double, 3> v{a, b, c};
    std::sort(v.begin(), v.end());
    return v[0] * v[1] * v[2];
}

// Σ w_j a_j with Cesàro (C,1) weights (K − j + 1)/K or unit weights.
inline double weighted_series(std::vector<double>& terms, Summation mode) noexcept {
    const auto kk = static_cast<double>(terms.size());
    if (mode == Summation::Cesaro) {
        for (std::size_t j = 0; j < terms.size(); ++j) terms[j] *= (kk - static_cast<double>(j)) / kk;
    }
    return pairwise_sum(terms);
}

} // namespace detail

/// 16π sin α sin β sin θ · Σ_{j=1}^{K} sin(jα) sin(jβ) sin(jθ) / j.
/// Converges (weakly; pointwise away from the support edges under Cesàro
/// averaging) to the two-branch density 4π² sin α sin β sin θ · 1[θ ∈ support].
inline SeriesResult nu_series(double alpha, double beta, double theta, int terms,
                              Summation mode = Summation::Cesaro) {
    if (terms < 1) throw Error(ErrorKind::InvalidParams, "series needs at least one term");
    std::vector<double> t(static_cast<std::size_t>(terms));
    for (int j = 1; j <= terms; ++j) {
        t[static_cast<std::size_t>(j - 1)] =
            detail::sorted_product(std::sin(j * alpha), std::sin(j * beta), std::sin(j * theta)) / j;
    }
    const double sum = detail::weighted_series(t, mode);
    const double pref =
        16.0 * std::numbers::pi * detail::sorted_product(std::sin(alpha), std::sin(beta), std::sin(theta));
    return {pref * sum, terms, mode};
}

/// Cosine coefficient a_n of the normalized shape g(θ) = |sin θ| · 1[θ ∈ support]
/// (the two-branch density divided by 4π² sin α sin β):
///   a_n = (2/π) [ sin((n+1)α) sin((n+1)β)/(n+1) − sin((n−1)α) sin((n−1)β)/(n−1) ].
/// The second term is 0 at n = 1 (its limit).
inline double fourier_coefficient(int n, double alpha, double beta) {
    if (n < 0) throw Error(ErrorKind::InvalidParams, "coefficient index must be >= 0");
    const double up = std::sin((n + 1) * alpha) * std::sin((n + 1) * beta) / (n + 1);
    const double down = n == 1 ? 0.0 : std::sin((n - 1) * alpha) * std::sin((n - 1) * beta) / (n - 1);
    return 2.0 / std::numbers::pi * (up - down);
}

/// 4π² sin α sin β · (a_0/2 + Σ_{n=1}^{K} a_n cos nθ), the cosine-series
/// synthesis on the same scale as nu_series.
inline SeriesResult fourier_synthesis(double alpha, double beta, double theta, int terms,
                                      Summation mode = Summation::Cesaro) {
    if (terms < 1) throw Error(ErrorKind::InvalidParams, "series needs at least one term");
    std::vector<double> t(static_cast<std::size_t>(terms));
    for (int n = 1; n <= terms; ++n) t[static_cast<std::size_t>(n - 1)] = fourier_coefficient(n, alpha, beta) * std::cos(n * theta);
    const double sum = 0.5 * fourier_coefficient(0, alpha, beta) + detail::weighted_series(t, mode);
    const double pi = std::numbers::pi;
    return {4.0 * pi * pi * std::sin(alpha) * std::sin(beta) * sum, terms, mode};
}

/// Σ_{j=1}^{K} 16 sin²(jα) sin²(jβ) / j², the squared L² norm of the product
/// density by Plancherel. Nondecreasing in K; tail beyond K is at most 16/K.
inline double plancherel_norm_sq(double alpha, double beta, int terms) {
    if (terms < 1) throw Error(ErrorKind::InvalidParams, "series needs at least one term");
    std::vector<double> t(static_cast<std::size_t>(terms));
    for (int j = 1; j <= terms; ++j) {
        const double sa = std::sin(j * alpha), sb = std::sin(j * beta);
        t[static_cast<std::size_t>(j - 1)] = 16.0 * sa * sa * sb * sb / (static_cast<double>(j) * j);
    }
    return pairwise_sum(t);
}

struct SeriesDiagnostic {
    int terms = 0;
    double partial = 0.0;
    double cesaro = 0.0;
    double reference = 0.0;
};

/// nu_series at each requested truncation next to the two-branch density.
inline std::vector<SeriesDiagnostic> series_diagnostics(double alpha, double beta, double theta,
                                                        std::span<const int> truncations) {
    std::vector<SeriesDiagnostic> rows;
    rows.reserve(truncations.size());
    const double ref = conj_density_raw(alpha, beta, theta);
    for (const int k : truncations) {
        rows.push_back({k, nu_series(alpha, beta, theta, k, Summation::Partial).value,
                        nu_series(alpha, beta, theta, k, Summation::Cesaro).value, ref});
    }
    return rows;
}

} // namespace orbprod
