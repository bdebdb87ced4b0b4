#pragma once

// Closed-form densities of the class parameter of a product g·h, where g and
// h are drawn from the invariant probability measures on two classes:
//
//   CONJ_SU2  conjugacy classes of SU(2); parameter = class angle θ
//   SPH_SU2   spherical classes of (SU(2), torus); parameter = |(gh)_11|
//   SPH_SL2R  spherical classes of (SL(2,R), SO(2)); parameter = Cartan t
//   SPH_SL2C  spherical classes of (SL(2,C), SU(2)); parameter = Cartan t
//
// Each normalized pdf is `norm_constant * shape`. Alongside the pdfs live the
// one-dimensional exact samplers that realize the same laws:
//
//   CONJ_SU2  cos θ = cos α cos β − sin α sin β · U,     U ~ U[−1, 1]
//   SPH_SU2   u² = c0 + c1 cos X,                        X ~ U[0, 2π)
//   SPH_SL2R  cosh r = c1 − c2 cos X,                    X ~ U[0, 2π)
//   SPH_SL2C  cosh r = c1 − c2 V,                        V ~ U[−1, 1]
//
// The two arcsine-type laws have inverse square-root singularities at both
// support endpoints; their normalization integrals are taken in the angle
// variable, where the integrand is smooth.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "quadrature.hpp"
#include "random.hpp"

namespace orbprod {

enum class DensityKind { ConjSu2, SphSu2, SphSl2R, SphSl2C };

constexpr std::string_view to_string(DensityKind k) noexcept {
    switch (k) {
    case DensityKind::ConjSu2: return "CONJ_SU2";
    case DensityKind::SphSu2: return "SPH_SU2";
    case DensityKind::SphSl2R: return "SPH_SL2R";
    case DensityKind::SphSl2C: return "SPH_SL2C";
    }
    return "UNKNOWN";
}

/// Closed interval [lo, hi]. Open supports are reported closed.
struct SupportInterval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double x, double slack = 0.0) const noexcept { return x >= lo - slack && x <= hi + slack; }
    friend bool operator==(const SupportInterval&, const SupportInterval&) = default;
};

/// Stand-in for +infinity at the singular endpoints of the arcsine-type laws.
inline constexpr double kSingularSentinel = std::numeric_limits<double>::max();

struct PdfValue {
    double value = 0.0;
    bool singular = false;
};

// ---------------------------------------------------------------------------
// Conjugacy classes of SU(2)

/// θ ↦ θ reflected through π into [0, π] (input in [0, 2π]).
inline double fold_angle(double theta) noexcept { return theta > std::numbers::pi ? 2.0 * std::numbers::pi - theta : theta; }

inline void require_open_angle(double a, const char* name) {
    if (!(a > 0.0 && a < std::numbers::pi)) {
        throw Error(ErrorKind::DegenerateClass, std::string(name) + " must lie in (0, pi), got " + std::to_string(a));
    }
}

inline SupportInterval conj_support(double alpha, double beta) {
    require_open_angle(alpha, "alpha");
    require_open_angle(beta, "beta");
    return {std::abs(alpha - beta), fold_angle(alpha + beta)};
}

/// Unnormalized two-branch density 4π² sin α sin β sin θ on θ ∈ (−π, π].
/// The branch intervals are taken on the circle, so the positive branch
/// that runs past π cancels against the wrapped negative branch; the
/// result is even in θ and vanishes on the folded gap (2π − α − β, π].
inline double conj_density_raw(double alpha, double beta, double theta) {
    require_open_angle(alpha, "alpha");
    require_open_angle(beta, "beta");
    constexpr double pi = std::numbers::pi;
    const double big = std::max(alpha, beta);
    const double small = std::min(alpha, beta);
    theta = std::remainder(theta, 2.0 * pi); // [−π, π]
    if (theta == -pi) theta = pi;
    int weight = 0;
    for (const double image : {theta - 2.0 * pi, theta, theta + 2.0 * pi}) {
        if (image >= big - small && image <= big + small) ++weight;
        if (image >= -big - small && image <= -big + small) --weight;
    }
    return 4.0 * pi * pi * std::sin(alpha) * std::sin(beta) * std::sin(theta) * weight;
}

/// sin θ / (2 sin α sin β) on the folded support.
inline double conj_pdf(double alpha, double beta, double theta) {
    const SupportInterval s = conj_support(alpha, beta);
    if (!s.contains(theta)) return 0.0;
    return std::sin(theta) / (2.0 * std::sin(alpha) * std::sin(beta));
}

inline double conj_cdf(double alpha, double beta, double theta) {
    const SupportInterval s = conj_support(alpha, beta);
    if (theta <= s.lo) return 0.0;
    if (theta >= s.hi) return 1.0;
    return std::clamp((std::cos(s.lo) - std::cos(theta)) / (2.0 * std::sin(alpha) * std::sin(beta)), 0.0, 1.0);
}

/// Quantile form of the exact sampler: U ∈ [−1, 1].
inline double conj_angle_from_uniform(double alpha, double beta, double u) noexcept {
    const double c = std::cos(alpha) * std::cos(beta) - std::sin(alpha) * std::sin(beta) * u;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

inline double conj_exact_sampler(double alpha, double beta, Stream& rng) {
    require_open_angle(alpha, "alpha");
    require_open_angle(beta, "beta");
    return conj_angle_from_uniform(alpha, beta, rng.uniform(-1.0, 1.0));
}

// ---------------------------------------------------------------------------
// Spherical classes of (SU(2), torus)

struct SphericalCoeffsA {
    double c0 = 0.0;
    double c1 = 0.0;
    double lo = 0.0; // sqrt(c0 − c1) = |ra rb − sa sb|
    double hi = 0.0; // sqrt(c0 + c1) = ra rb + sa sb
};

inline void require_open_radius(double r, const char* name) {
    if (!(r > 0.0 && r < 1.0)) {
        throw Error(ErrorKind::DegenerateInput, std::string(name) + " must lie in (0, 1), got " + std::to_string(r));
    }
}

/// c0 = ra²rb² + (1−ra²)(1−rb²), c1 = 2 ra rb sqrt((1−ra²)(1−rb²)).
inline SphericalCoeffsA spherical_coeffs_A(double ra, double rb) noexcept {
    const double sa = std::sqrt(std::max(0.0, (1.0 - ra) * (1.0 + ra)));
    const double sb = std::sqrt(std::max(0.0, (1.0 - rb) * (1.0 + rb)));
    SphericalCoeffsA c;
    c.c0 = ra * ra * rb * rb + sa * sa * sb * sb;
    c.c1 = 2.0 * ra * rb * sa * sb;
    c.lo = std::abs(ra * rb - sa * sb);
    c.hi = ra * rb + sa * sb;
    return c;
}

inline SphericalCoeffsA checked_coeffs_A(double ra, double rb) {
    require_open_radius(ra, "ra");
    require_open_radius(rb, "rb");
    const SphericalCoeffsA c = spherical_coeffs_A(ra, rb);
    if (!(c.c1 > 0.0)) throw Error(ErrorKind::DegenerateInput, "c1 = 0");
    return c;
}

/// u / sqrt(c1² − (u² − c0)²) written as u / sqrt((u²−lo²)(hi²−u²)).
inline double spherical_shape_A(const SphericalCoeffsA& c, double u) noexcept {
    if (u < c.lo || u > c.hi) return 0.0;
    if (u == c.hi || (u == c.lo && c.lo > 0.0)) return kSingularSentinel;
    if (c.lo == 0.0) return 1.0 / std::sqrt((c.hi - u) * (c.hi + u));
    return u / std::sqrt((u - c.lo) * (u + c.lo) * (c.hi - u) * (c.hi + u));
}

inline constexpr double kNormA = 2.0 / std::numbers::pi;
inline constexpr double kPrintedNormA = 1.0 / (2.0 * std::numbers::pi);

/// (2/π) · u / sqrt(c1² − (u² − c0)²) on [sqrt(c0−c1), sqrt(c0+c1)].
inline double spherical_pdf_A(double ra, double rb, double u) {
    const SphericalCoeffsA c = checked_coeffs_A(ra, rb);
    const double s = spherical_shape_A(c, u);
    return s == kSingularSentinel ? s : kNormA * s;
}

inline double spherical_cdf_A(double ra, double rb, double u) {
    const SphericalCoeffsA c = checked_coeffs_A(ra, rb);
    if (u <= c.lo) return 0.0;
    if (u >= c.hi) return 1.0;
    return std::acos(std::clamp((c.c0 - u * u) / c.c1, -1.0, 1.0)) / std::numbers::pi;
}

inline double spherical_oracle_A(double ra, double rb, Stream& rng) {
    const SphericalCoeffsA c = checked_coeffs_A(ra, rb);
    return std::sqrt(std::max(0.0, c.c0 + c.c1 * std::cos(rng.angle())));
}

// ---------------------------------------------------------------------------
// Spherical classes of SL(2,R) and SL(2,C)

struct HyperbolicCoeffs {
    double c1 = 0.0; // cosh t1 cosh t2
    double c2 = 0.0; // sinh t1 sinh t2
    double lo = 0.0; // |t1 − t2|
    double hi = 0.0; // t1 + t2
};

inline HyperbolicCoeffs hyperbolic_coeffs(double t1, double t2) {
    for (const double t : {t1, t2}) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw Error(ErrorKind::DegenerateInput, "Cartan parameters must be > 0, got " + std::to_string(t));
        }
    }
    return {std::cosh(t1) * std::cosh(t2), std::sinh(t1) * std::sinh(t2), std::abs(t1 - t2), t1 + t2};
}

/// sinh r / sqrt(c2² − (c1 − cosh r)²), evaluated through
/// (cosh r − cosh lo)(cosh hi − cosh r) in product-of-sinh form.
inline double hyperbolic_shape_B(const HyperbolicCoeffs& c, double r) noexcept {
    if (r < c.lo || r > c.hi) return 0.0;
    if (r == c.hi || (r == c.lo && c.lo > 0.0)) return kSingularSentinel;
    const double below = 2.0 * std::sinh(0.5 * (r + c.lo)) * std::sinh(0.5 * (r - c.lo));
    const double above = 2.0 * std::sinh(0.5 * (c.hi + r)) * std::sinh(0.5 * (c.hi - r));
    if (c.lo == 0.0) {
        // below = 2 sinh²(r/2); sinh r / sqrt(below) = 2 cosh(r/2) / sqrt(2)
        return std::sqrt(2.0) * std::cosh(0.5 * r) / std::sqrt(above);
    }
    return std::sinh(r) / std::sqrt(below * above);
}

/// (1/π) · sinh r / sqrt(c2² − (c1 − cosh r)²) on [|t1−t2|, t1+t2].
inline double spherical_pdf_B(double t1, double t2, double r) {
    const HyperbolicCoeffs c = hyperbolic_coeffs(t1, t2);
    const double s = hyperbolic_shape_B(c, r);
    return s == kSingularSentinel ? s : s / std::numbers::pi;
}

inline double spherical_cdf_B(double t1, double t2, double r) {
    const HyperbolicCoeffs c = hyperbolic_coeffs(t1, t2);
    if (r <= c.lo) return 0.0;
    if (r >= c.hi) return 1.0;
    return std::acos(std::clamp((c.c1 - std::cosh(r)) / c.c2, -1.0, 1.0)) / std::numbers::pi;
}

inline double spherical_oracle_B(double t1, double t2, Stream& rng) {
    const HyperbolicCoeffs c = hyperbolic_coeffs(t1, t2);
    return std::acosh(std::max(1.0, c.c1 - c.c2 * std::cos(rng.angle())));
}

/// sinh r / (2 sinh t1 sinh t2) on [|t1−t2|, t1+t2].
inline double spherical_pdf_C(double t1, double t2, double r) {
    const HyperbolicCoeffs c = hyperbolic_coeffs(t1, t2);
    if (r < c.lo || r > c.hi) return 0.0;
    return std::sinh(r) / (2.0 * c.c2);
}

inline double spherical_cdf_C(double t1, double t2, double r) {
    const HyperbolicCoeffs c = hyperbolic_coeffs(t1, t2);
    if (r <= c.lo) return 0.0;
    if (r >= c.hi) return 1.0;
    // (cosh r − cosh lo) / (2 c2) in product form
    const double num = 2.0 * std::sinh(0.5 * (r + c.lo)) * std::sinh(0.5 * (r - c.lo));
    return std::clamp(num / (2.0 * c.c2), 0.0, 1.0);
}

inline double spherical_oracle_C(double t1, double t2, Stream& rng) {
    const HyperbolicCoeffs c = hyperbolic_coeffs(t1, t2);
    return std::acosh(std::max(1.0, c.c1 - c.c2 * rng.uniform(-1.0, 1.0)));
}

// ---------------------------------------------------------------------------

/// A product density with its parameters, support and normalization.
class ProductDensity {
public:
    static ProductDensity conjugacy(double alpha, double beta) {
        ProductDensity d(DensityKind::ConjSu2, alpha, beta);
        d.support_ = conj_support(alpha, beta);
        d.norm_ = 1.0 / (2.0 * std::sin(alpha) * std::sin(beta));
        return d;
    }

    static ProductDensity spherical_compact(double ra, double rb) {
        ProductDensity d(DensityKind::SphSu2, ra, rb);
        d.coeffs_a_ = checked_coeffs_A(ra, rb);
        d.support_ = {d.coeffs_a_.lo, d.coeffs_a_.hi};
        d.norm_ = kNormA;
        return d;
    }

    static ProductDensity spherical_nc(double t1, double t2, Flavor flavor) {
        ProductDensity d(flavor == Flavor::Real ? DensityKind::SphSl2R : DensityKind::SphSl2C, t1, t2);
        d.coeffs_h_ = hyperbolic_coeffs(t1, t2);
        d.support_ = {d.coeffs_h_.lo, d.coeffs_h_.hi};
        d.norm_ = flavor == Flavor::Real ? 1.0 / std::numbers::pi : 1.0 / (2.0 * d.coeffs_h_.c2);
        return d;
    }

    DensityKind kind() const noexcept { return kind_; }
    std::array<double, 2> params() const noexcept { return {p1_, p2_}; }
    const SupportInterval& support() const noexcept { return support_; }
    double norm_constant() const noexcept { return norm_; }
    bool has_singular_endpoints() const noexcept {
        return kind_ == DensityKind::SphSu2 || kind_ == DensityKind::SphSl2R;
    }

    /// Unnormalized shape; pdf = norm_constant() * shape.
    double shape(double x) const noexcept {
        switch (kind_) {
        case DensityKind::ConjSu2: return support_.contains(x) ? std::sin(x) : 0.0;
        case DensityKind::SphSu2: return spherical_shape_A(coeffs_a_, x);
        case DensityKind::SphSl2R: return hyperbolic_shape_B(coeffs_h_, x);
        case DensityKind::SphSl2C: return support_.contains(x) ? std::sinh(x) : 0.0;
        }
        return 0.0;
    }

    PdfValue at(double x) const noexcept {
        const double s = shape(x);
        if (s == kSingularSentinel) return {kSingularSentinel, true};
        return {norm_ * s, false};
    }

    double pdf(double x) const noexcept { return at(x).value; }

    double cdf(double x) const {
        switch (kind_) {
        case DensityKind::ConjSu2: return conj_cdf(p1_, p2_, x);
        case DensityKind::SphSu2: return spherical_cdf_A(p1_, p2_, x);
        case DensityKind::SphSl2R: return spherical_cdf_B(p1_, p2_, x);
        case DensityKind::SphSl2C: return spherical_cdf_C(p1_, p2_, x);
        }
        return 0.0;
    }

    /// One draw from the exact one-dimensional law.
    double sample_oracle(Stream& rng) const {
        switch (kind_) {
        case DensityKind::ConjSu2: return conj_exact_sampler(p1_, p2_, rng);
        case DensityKind::SphSu2: return spherical_oracle_A(p1_, p2_, rng);
        case DensityKind::SphSl2R: return spherical_oracle_B(p1_, p2_, rng);
        case DensityKind::SphSl2C: return spherical_oracle_C(p1_, p2_, rng);
        }
        return 0.0;
    }

    /// ∫ shape over the support. Arcsine-type kinds are integrated in the
    /// angle variable s ∈ [0, π] (u² = c0 − c1 cos s, resp.
    /// cosh r = c1 − c2 cos s), where the integrand is bounded.
    double shape_integral() const {
        constexpr double pi = std::numbers::pi;
        switch (kind_) {
        case DensityKind::ConjSu2:
            return integrate_smooth([](double x) { return std::sin(x); }, support_.lo, support_.hi).value;
        case DensityKind::SphSl2C:
            return integrate_smooth([](double x) { return std::sinh(x); }, support_.lo, support_.hi).value;
        case DensityKind::SphSu2: {
            // u² − lo² = 2 c1 sin²(s/2), hi² − u² = 2 c1 cos²(s/2), du = c1 sin s / (2u) ds
            const auto c = coeffs_a_;
            auto f = [c](double s) {
                const double below = 2.0 * c.c1 * std::sin(0.5 * s) * std::sin(0.5 * s);
                const double above = 2.0 * c.c1 * std::cos(0.5 * s) * std::cos(0.5 * s);
                const double u = std::sqrt(c.lo * c.lo + below);
                return u / std::sqrt(below * above) * c.c1 * std::sin(s) / (2.0 * u);
            };
            return integrate_smooth(f, 0.0, pi).value;
        }
        case DensityKind::SphSl2R: {
            // cosh r − cosh lo = 2 c2 sin²(s/2), cosh hi − cosh r = 2 c2 cos²(s/2)
            const auto c = coeffs_h_;
            auto f = [c](double s) {
                const double below = 2.0 * c.c2 * std::sin(0.5 * s) * std::sin(0.5 * s);
                const double above = 2.0 * c.c2 * std::cos(0.5 * s) * std::cos(0.5 * s);
                const double sh = std::sinh(std::acosh(std::cosh(c.lo) + below));
                return sh / std::sqrt(below * above) * c.c2 * std::sin(s) / sh;
            };
            return integrate_smooth(f, 0.0, pi).value;
        }
        }
        return 0.0;
    }

    /// ∫ pdf over the support.
    double integral() const { return norm_ * shape_integral(); }

    /// The unnormalized density exactly as stated with its prefactor:
    ///   CONJ_SU2  4π² sin α sin β sin θ (two-branch form on (−π, π])
    ///   SPH_SU2   16π² ra rb u / sqrt(c1² − (u² − c0)²)
    ///   SPH_SL2R  4 c² π² sinh t1 sinh t2 · sinh r / sqrt(c2² − (c1 − cosh r)²)
    ///   SPH_SL2C  32 c² π⁶ sinh t1 sinh t2 · sinh r
    /// with c the KAK Haar constant.
    double raw_value(double x, double haar_constant = 1.0) const {
        constexpr double pi = std::numbers::pi;
        const double s = shape(x);
        if (s == kSingularSentinel) return kSingularSentinel;
        switch (kind_) {
        case DensityKind::ConjSu2: return conj_density_raw(p1_, p2_, x);
        case DensityKind::SphSu2: return 16.0 * pi * pi * p1_ * p2_ * s;
        case DensityKind::SphSl2R:
            return 4.0 * haar_constant * haar_constant * pi * pi * coeffs_h_.c2 * s;
        case DensityKind::SphSl2C:
            return 32.0 * haar_constant * haar_constant * std::pow(pi, 6) * coeffs_h_.c2 * s;
        }
        return 0.0;
    }

    /// Normalization constant printed next to the normalized forms, if any.
    std::optional<double> printed_norm_constant() const {
        switch (kind_) {
        case DensityKind::ConjSu2: return std::nullopt;
        case DensityKind::SphSu2: return kPrintedNormA;
        case DensityKind::SphSl2R: return 1.0 / std::numbers::pi;
        case DensityKind::SphSl2C: return 1.0 / (2.0 * coeffs_h_.c2);
        }
        return std::nullopt;
    }

private:
    ProductDensity(DensityKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

    DensityKind kind_;
    double p1_;
    double p2_;
    SupportInterval support_{};
    double norm_ = 1.0;
    SphericalCoeffsA coeffs_a_{};
    HyperbolicCoeffs coeffs_h_{};
};

/// Free-function form of ProductDensity::raw_value.
inline double unnormalized_product_value(DensityKind kind, double p1, double p2, double x) {
    switch (kind) {
    case DensityKind::ConjSu2: return ProductDensity::conjugacy(p1, p2).raw_value(x);
    case DensityKind::SphSu2: return ProductDensity::spherical_compact(p1, p2).raw_value(x);
    case DensityKind::SphSl2R: return ProductDensity::spherical_nc(p1, p2, Flavor::Real).raw_value(x);
    case DensityKind::SphSl2C: return ProductDensity::spherical_nc(p1, p2, Flavor::Complex).raw_value(x);
    }
    return 0.0;
}

inline ProductDensity make_density(DensityKind kind, double p1, double p2) {
    switch (kind) {
    case DensityKind::ConjSu2: return ProductDensity::conjugacy(p1, p2);
    case DensityKind::SphSu2: return ProductDensity::spherical_compact(p1, p2);
    case DensityKind::SphSl2R: return ProductDensity::spherical_nc(p1, p2, Flavor::Real);
    case DensityKind::SphSl2C: return ProductDensity::spherical_nc(p1, p2, Flavor::Complex);
    }
    throw Error(ErrorKind::InvalidParams, "unknown density kind");
}

// ---------------------------------------------------------------------------

struct ConstantsEntry {
    DensityKind kind = DensityKind::ConjSu2;
    std::array<double, 2> params{};
    std::optional<double> paper_constant;
    double verified_constant = 0.0;
    std::optional<double> ratio; // printed / verified
    bool flagged = false;        // printed constant does not normalize the density
};

/// Verified normalization constant (1 / ∫ shape by quadrature) against the
/// printed one.
inline ConstantsEntry constants_entry(const ProductDensity& d) {
    ConstantsEntry e;
    e.kind = d.kind();
    e.params = d.params();
    e.paper_constant = d.printed_norm_constant();
    e.verified_constant = 1.0 / d.shape_integral();
    if (e.paper_constant) {
        e.ratio = *e.paper_constant / e.verified_constant;
        e.flagged = std::abs(*e.ratio - 1.0) > 1e-6;
    }
    return e;
}

inline std::vector<ConstantsEntry> constants_report(double alpha, double beta, double ra, double rb, double t1,
                                                    double t2) {
    return {constants_entry(ProductDensity::conjugacy(alpha, beta)),
            constants_entry(ProductDensity::spherical_compact(ra, rb)),
            constants_entry(ProductDensity::spherical_nc(t1, t2, Flavor::Real)),
            constants_entry(ProductDensity::spherical_nc(t1, t2, Flavor::Complex))};
}

} // namespace orbprod
