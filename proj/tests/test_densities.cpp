#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <orbprod/densities.hpp>
#include <orbprod/experiments.hpp>

using namespace orbprod;
using std::numbers::pi;

namespace {

// Integral of the normalized pdf in its own variable, by tanh-sinh with the
// endpoint gap passed separately so the inverse square roots stay accurate.
double tanh_sinh_mass_A(double ra, double rb) {
    const auto c = spherical_coeffs_A(ra, rb);
    auto f = [&](double u, double uc) {
        const double below = uc < 0 ? -uc : u - c.lo;
        const double above = uc > 0 ? uc : c.hi - u;
        return (2.0 / pi) * u / std::sqrt(below * (u + c.lo) * above * (c.hi + u));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, c.lo, c.hi, 1e-14);
}

double tanh_sinh_mass_B(double t1, double t2) {
    const double lo = std::abs(t1 - t2), hi = t1 + t2;
    auto f = [&](double r, double rc) {
        const double dlo = rc < 0 ? -rc : r - lo;
        const double dhi = rc > 0 ? rc : hi - r;
        const double below = 2.0 * std::sinh(0.5 * (r + lo)) * std::sinh(0.5 * dlo);
        const double above = 2.0 * std::sinh(0.5 * (hi + r)) * std::sinh(0.5 * dhi);
        return std::sinh(r) / (pi * std::sqrt(below * above));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, lo, hi, 1e-14);
}

std::vector<double> oracle_samples(const ProductDensity& d, std::size_t n, std::uint64_t seed) {
    return oracle_experiment(d, n, seed);
}

template <class T>
ErrorKind error_kind_of(T&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::NumericalFailure;
}

} // namespace

// ---------------------------------------------------------------------------
// Conjugacy products

TEST(ConjSupport, Examples) {
    EXPECT_EQ(conj_support(pi / 2, pi / 2), (SupportInterval{0.0, pi}));
    const auto s = conj_support(pi / 3, pi / 6);
    EXPECT_NEAR(s.lo, pi / 6, 1e-15);
    EXPECT_NEAR(s.hi, pi / 2, 1e-15);
    const auto f = conj_support(2 * pi / 3, 2 * pi / 3);
    EXPECT_EQ(f.lo, 0.0);
    EXPECT_NEAR(f.hi, 2 * pi / 3, 1e-15);
}

TEST(ConjRaw, Examples) {
    EXPECT_EQ(conj_density_raw(pi / 3, pi / 6, 0.1), 0.0);
    EXPECT_EQ(conj_density_raw(pi / 3, pi / 6, 2.0), 0.0);
    EXPECT_NEAR(conj_density_raw(pi / 2, pi / 2, pi / 2), 4 * pi * pi, 1e-12);
    Stream rng(1);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0.05, 3.0), b = rng.uniform(0.05, 3.0), t = rng.uniform(-pi, pi);
        EXPECT_NEAR(conj_density_raw(a, b, t), conj_density_raw(a, b, -t), 1e-12);
        EXPECT_NEAR(conj_density_raw(a, b, t), conj_density_raw(b, a, t), 1e-12);
        EXPECT_GE(conj_density_raw(a, b, t), 0.0);
    }
}

TEST(ConjRaw, MatchesFoldedShape) {
    Stream rng(2);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.uniform(0.05, 3.0), b = rng.uniform(0.05, 3.0), t = rng.uniform(0.0, pi);
        const auto s = conj_support(a, b);
        if (std::abs(t - s.lo) < 1e-9 || std::abs(t - s.hi) < 1e-9) continue;
        const double expect = 4 * pi * pi * std::sin(a) * std::sin(b) * std::sin(t) * (s.contains(t) ? 1.0 : 0.0);
        EXPECT_NEAR(conj_density_raw(a, b, t), expect, 1e-9);
    }
}

TEST(ConjPdf, Examples) {
    for (const double t : {0.1, 1.0, 2.0, 3.0}) EXPECT_NEAR(conj_pdf(pi / 2, pi / 2, t), std::sin(t) / 2, 1e-15);
    EXPECT_NEAR(conj_pdf(pi / 3, pi / 6, pi / 4), std::sqrt(2.0) / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(conj_pdf(pi / 3, pi / 6, pi / 4), 0.8165, 1e-4);
    EXPECT_EQ(conj_pdf(pi / 3, pi / 6, 0.1), 0.0);
}

TEST(ConjPdf, HistogramAtQuarterPi) {
    const double a = pi / 3, b = pi / 6, w = 0.02;
    Stream rng(3);
    const int n = 10000000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const double t = conj_exact_sampler(a, b, rng);
        if (std::abs(t - pi / 4) < w / 2) ++inside;
    }
    EXPECT_NEAR(inside / (n * w), conj_pdf(a, b, pi / 4), 0.01 * conj_pdf(a, b, pi / 4));
}

TEST(ConjPdf, Normalized) {
    Stream rng(4);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.01, pi - 0.01), b = rng.uniform(0.01, pi - 0.01);
        const auto d = ProductDensity::conjugacy(a, b);
        const auto s = d.support();
        EXPECT_NEAR((std::cos(s.lo) - std::cos(s.hi)) / (2 * std::sin(a) * std::sin(b)), 1.0, 1e-12);
        EXPECT_NEAR(d.integral(), 1.0, 1e-9);
        EXPECT_NEAR(d.cdf(s.hi), 1.0, 1e-15);
    }
}

TEST(ConjSampler, Endpoints) {
    EXPECT_NEAR(conj_angle_from_uniform(2.0, 0.5, -1.0), 1.5, 1e-7);
    EXPECT_NEAR(conj_angle_from_uniform(2.0, 0.5, 1.0), 2.5, 1e-7);
    EXPECT_NEAR(conj_angle_from_uniform(2.5, 2.0, 1.0), fold_angle(4.5), 1e-7);
}

TEST(ConjSampler, MatchesMatrixProducts) {
    const ClassDescriptor a = ConjugacyClass{pi / 2}, b = ConjugacyClass{pi / 3};
    const auto mc = product_experiment(a, b, 1000000, 5);
    const auto ex = oracle_samples(ProductDensity::conjugacy(pi / 2, pi / 3), 1000000, 6);
    EXPECT_LT(ks_two_sample(mc, ex), 0.005);
}

TEST(ConjDegenerate, ConcentratesAtAlpha) {
    // Total variation to the point mass at alpha is the mass outside a small window.
    const double a = 1.2, b = 1e-3;
    const auto d = ProductDensity::conjugacy(a, b);
    EXPECT_NEAR(d.support().lo, a - b, 1e-15);
    EXPECT_NEAR(d.support().hi, a + b, 1e-15);
    EXPECT_NEAR(d.cdf(a + 2 * b) - d.cdf(a - 2 * b), 1.0, 1e-15);
}

// ---------------------------------------------------------------------------
// Compact spherical

TEST(CoeffsA, Examples) {
    const double r = 1 / std::sqrt(2.0);
    const auto c = spherical_coeffs_A(r, r);
    EXPECT_NEAR(c.c0, 0.5, 1e-15);
    EXPECT_NEAR(c.c1, 0.5, 1e-15);
    Stream rng(5);
    for (int i = 0; i < 100; ++i) {
        const double ra = rng.uniform(0.01, 0.99), rb = rng.uniform(0.01, 0.99);
        const auto p = spherical_coeffs_A(ra, rb), q = spherical_coeffs_A(rb, ra);
        EXPECT_NEAR(p.c0, q.c0, 1e-15);
        EXPECT_NEAR(p.c1, q.c1, 1e-15);
        const double d = ra * rb - std::sqrt((1 - ra * ra) * (1 - rb * rb));
        EXPECT_NEAR(p.c0 - p.c1, d * d, 1e-14);
        EXPECT_GE(p.c0 - p.c1, -1e-15);
        EXPECT_LE(p.c0 + p.c1, 1.0 + 1e-15);
    }
}

TEST(PdfA, SquareRootHalf) {
    const double r = 1 / std::sqrt(2.0);
    const auto d = ProductDensity::spherical_compact(r, r);
    EXPECT_NEAR(d.support().lo, 0.0, 1e-15);
    EXPECT_NEAR(d.support().hi, 1.0, 1e-15);
    for (const double u : {0.1, 0.4, 0.7, 0.95}) {
        const double v = u * u - 0.5;
        EXPECT_NEAR(d.pdf(u), (2 / pi) * u / std::sqrt(0.25 - v * v), 1e-12);
    }
    EXPECT_FALSE(d.at(0.0).singular);
    EXPECT_TRUE(d.at(1.0).singular);
    EXPECT_EQ(d.at(1.0).value, kSingularSentinel);
}

TEST(PdfA, Normalized) {
    Stream rng(6);
    for (int i = 0; i < 100; ++i) {
        const double ra = rng.uniform(0.01, 0.99), rb = rng.uniform(0.01, 0.99);
        EXPECT_NEAR(ProductDensity::spherical_compact(ra, rb).integral(), 1.0, 1e-9);
        EXPECT_NEAR(tanh_sinh_mass_A(ra, rb), 1.0, 1e-9);
    }
}

TEST(PdfA, OracleMatchesCdf) {
    const auto d = ProductDensity::spherical_compact(1 / std::sqrt(2.0), 0.6);
    const auto xs = oracle_samples(d, 1000000, 7);
    EXPECT_LT(ks_distance(xs, [&](double u) { return d.cdf(u); }), 0.005);
}

TEST(PdfA, DegenerateInput) {
    EXPECT_EQ(error_kind_of([] { (void)spherical_pdf_A(0.0, 0.5, 0.3); }), ErrorKind::DegenerateInput);
    EXPECT_EQ(error_kind_of([] { (void)spherical_pdf_A(0.5, 1.0, 0.3); }), ErrorKind::DegenerateInput);
}

// ---------------------------------------------------------------------------
// Noncompact spherical

TEST(PdfB, Normalized) {
    Stream rng(8);
    for (int i = 0; i < 100; ++i) {
        const double t1 = rng.uniform(0.01, 3.0), t2 = rng.uniform(0.01, 3.0);
        EXPECT_NEAR(ProductDensity::spherical_nc(t1, t2, Flavor::Real).integral(), 1.0, 1e-9);
        EXPECT_NEAR(tanh_sinh_mass_B(t1, t2), 1.0, 1e-9);
    }
}

TEST(PdfB, SupportAndSingularities) {
    const auto d = ProductDensity::spherical_nc(1.0, 1.0, Flavor::Real);
    EXPECT_EQ(d.support().lo, 0.0);
    EXPECT_EQ(d.support().hi, 2.0);
    EXPECT_TRUE(d.has_singular_endpoints());
    EXPECT_TRUE(d.at(2.0).singular);
    EXPECT_GT(d.pdf(2.0 - 1e-10), 1e3);
    const auto e = ProductDensity::spherical_nc(0.5, 2.0, Flavor::Real);
    EXPECT_TRUE(e.at(1.5).singular);
    EXPECT_EQ(e.pdf(1.4), 0.0);
    EXPECT_EQ(e.pdf(2.6), 0.0);
}

TEST(PdfB, MatchesDirectFormula) {
    const double t1 = 0.5, t2 = 2.0, c1 = std::cosh(t1) * std::cosh(t2), c2 = std::sinh(t1) * std::sinh(t2);
    for (const double r : {1.6, 2.0, 2.4}) {
        const double v = c1 - std::cosh(r);
        EXPECT_NEAR(spherical_pdf_B(t1, t2, r), std::sinh(r) / (pi * std::sqrt(c2 * c2 - v * v)), 1e-10);
    }
}

TEST(PdfB, OracleMatchesCdf) {
    for (const auto& [t1, t2] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
        const auto d = ProductDensity::spherical_nc(t1, t2, Flavor::Real);
        const auto xs = oracle_samples(d, 1000000, 9);
        EXPECT_LT(ks_distance(xs, [&](double r) { return d.cdf(r); }), 0.005);
    }
}

TEST(PdfC, Examples) {
    Stream rng(10);
    for (int i = 0; i < 100; ++i) {
        const double t1 = rng.uniform(0.01, 3.0), t2 = rng.uniform(0.01, 3.0);
        const double closed = (std::cosh(t1 + t2) - std::cosh(t1 - t2)) / (2 * std::sinh(t1) * std::sinh(t2));
        EXPECT_NEAR(closed, 1.0, 1e-12);
        EXPECT_NEAR(ProductDensity::spherical_nc(t1, t2, Flavor::Complex).integral(), 1.0, 1e-9);
    }
    EXPECT_NEAR(spherical_pdf_C(1.0, 1.0, 1.0), 1 / (2 * std::sinh(1.0)), 1e-15);
    EXPECT_NEAR(spherical_pdf_C(1.0, 1.0, 1.0), 0.42546, 1e-5);
    EXPECT_EQ(spherical_pdf_C(1.0, 1.0, 0.0), 0.0);
    EXPECT_FALSE(ProductDensity::spherical_nc(1.0, 1.0, Flavor::Complex).at(2.0).singular);
}

TEST(PdfC, OracleMatchesCdf) {
    const auto d = ProductDensity::spherical_nc(0.5, 2.0, Flavor::Complex);
    const auto xs = oracle_samples(d, 1000000, 11);
    EXPECT_LT(ks_distance(xs, [&](double r) { return d.cdf(r); }), 0.005);
}

TEST(PdfNC, DegenerateInput) {
    EXPECT_EQ(error_kind_of([] { (void)spherical_pdf_B(0.0, 1.0, 0.5); }), ErrorKind::DegenerateInput);
    EXPECT_EQ(error_kind_of([] { (void)spherical_pdf_C(1.0, 0.0, 0.5); }), ErrorKind::DegenerateInput);
}

// ---------------------------------------------------------------------------
// Shared properties

TEST(ProductDensity, OracleRangeMatchesSupport) {
    const std::vector<ProductDensity> ds{ProductDensity::conjugacy(1.0, 0.4),
                                         ProductDensity::spherical_compact(0.3, 0.8),
                                         ProductDensity::spherical_nc(0.7, 1.1, Flavor::Real),
                                         ProductDensity::spherical_nc(0.7, 1.1, Flavor::Complex)};
    for (const auto& d : ds) {
        const auto xs = oracle_samples(d, 1000000, 12);
        EXPECT_NEAR(xs.front(), d.support().lo, 1e-3) << to_string(d.kind());
        EXPECT_NEAR(xs.back(), d.support().hi, 1e-3) << to_string(d.kind());
    }
}

TEST(ProductDensity, SymmetricInInputs) {
    Stream rng(13);
    for (int i = 0; i < 100; ++i) {
        const double p = rng.uniform(0.05, 0.95), q = rng.uniform(0.05, 0.95);
        for (const auto kind : {DensityKind::ConjSu2, DensityKind::SphSu2, DensityKind::SphSl2R, DensityKind::SphSl2C}) {
            const auto d1 = make_density(kind, p, q), d2 = make_density(kind, q, p);
            const double x = rng.uniform(d1.support().lo, d1.support().hi);
            EXPECT_NEAR(d1.pdf(x), d2.pdf(x), 1e-10 * std::max(1.0, d1.pdf(x)));
            EXPECT_NEAR(d1.cdf(x), d2.cdf(x), 1e-12);
        }
    }
}

TEST(ProductDensity, CdfIsIntegralOfPdf) {
    const std::vector<ProductDensity> ds{ProductDensity::conjugacy(2.0, 2.5),
                                         ProductDensity::spherical_compact(0.2, 0.9),
                                         ProductDensity::spherical_nc(1.3, 0.4, Flavor::Real),
                                         ProductDensity::spherical_nc(1.3, 0.4, Flavor::Complex)};
    for (const auto& d : ds) {
        const auto s = d.support();
        const double a = s.lo + 0.25 * s.length(), b = s.lo + 0.75 * s.length();
        const double mass = integrate_smooth([&](double x) { return d.pdf(x); }, a, b).value;
        EXPECT_NEAR(d.cdf(b) - d.cdf(a), mass, 1e-10) << to_string(d.kind());
    }
}

TEST(Unnormalized, RatiosMatchPdf) {
    Stream rng(14);
    for (const auto kind : {DensityKind::ConjSu2, DensityKind::SphSu2, DensityKind::SphSl2R, DensityKind::SphSl2C}) {
        for (int i = 0; i < 100; ++i) {
            const double p = rng.uniform(0.05, 0.95), q = rng.uniform(0.05, 0.95);
            const auto d = make_density(kind, p, q);
            const auto s = d.support();
            const double x1 = rng.uniform(s.lo + 0.01 * s.length(), s.hi - 0.01 * s.length());
            const double x2 = rng.uniform(s.lo + 0.01 * s.length(), s.hi - 0.01 * s.length());
            const double lhs = unnormalized_product_value(kind, p, q, x1) / unnormalized_product_value(kind, p, q, x2);
            EXPECT_NEAR(lhs, d.pdf(x1) / d.pdf(x2), 1e-10 * std::abs(lhs)) << to_string(kind);
        }
    }
}

TEST(Unnormalized, Examples) {
    const double ra = 0.3, rb = 0.8;
    const auto c = spherical_coeffs_A(ra, rb);
    EXPECT_NEAR(unnormalized_product_value(DensityKind::SphSu2, ra, rb, std::sqrt(c.c0)),
                16 * pi * pi * ra * rb * std::sqrt(c.c0) / c.c1, 1e-10);
    EXPECT_NEAR(unnormalized_product_value(DensityKind::ConjSu2, pi / 2, pi / 2, pi / 2), 4 * pi * pi, 1e-12);
}

TEST(Constants, ReportFlagsCompactConstant) {
    const auto rep = constants_report(pi / 2, pi / 3, 1 / std::sqrt(2.0), 0.6, 1.0, 1.0);
    ASSERT_EQ(rep.size(), 4u);
    EXPECT_FALSE(rep[0].paper_constant.has_value());
    EXPECT_FALSE(rep[0].flagged);
    EXPECT_NEAR(rep[1].verified_constant, 2 / pi, 1e-10);
    EXPECT_NEAR(*rep[1].paper_constant, 1 / (2 * pi), 1e-15);
    EXPECT_NEAR(*rep[1].ratio, 0.25, 1e-10);
    EXPECT_TRUE(rep[1].flagged);
    EXPECT_FALSE(rep[2].flagged);
    EXPECT_NEAR(rep[2].verified_constant, 1 / pi, 1e-10);
    EXPECT_FALSE(rep[3].flagged);
}

TEST(Kinds, Names) {
    EXPECT_EQ(to_string(DensityKind::ConjSu2), "CONJ_SU2");
    EXPECT_EQ(to_string(DensityKind::SphSl2C), "SPH_SL2C");
}
