#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <orbprod/classes.hpp>
#include <orbprod/experiments.hpp>

using namespace orbprod;
using std::numbers::pi;

namespace {

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

TEST(Conjugacy, SamplesStayOnClass) {
    Stream rng(1);
    for (const double a : {0.1, pi / 3, pi / 2, 2.9}) {
        for (int i = 0; i < 1000; ++i) EXPECT_NEAR(class_angle(sample_conjugacy({a}, rng)), a, 1e-10);
    }
}

TEST(Conjugacy, Moments) {
    Stream rng(2);
    const int n = 1000000;
    double re = 0;
    for (int i = 0; i < n; ++i) re += sample_conjugacy({pi / 2}, rng).a11.real();
    EXPECT_NEAR(re / n, 0.0, 3e-3);

    // Oracle for E|a11|^2: integrate |(h D h^-1)_11|^2 over the Haar chart of h.
    const double a = pi / 3;
    auto inner = [a](double rho) {
        auto over_phi = [a, rho](double phi) {
            const Su2Element h = su2_from_chart({rho, phi, 0.3});
            return std::norm((h * Su2Element::torus(a) * h.inverse()).a11);
        };
        return 2.0 * rho * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(over_phi, 0.0, 2 * pi) / (2 * pi);
    };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0);
    EXPECT_NEAR(oracle, 0.5, 1e-10);

    double mod2 = 0;
    for (int i = 0; i < n; ++i) mod2 += std::norm(sample_conjugacy({a}, rng).a11);
    EXPECT_NEAR(mod2 / n, oracle, 3e-3);
}

TEST(Conjugacy, DegenerateRejected) {
    Stream rng(0);
    EXPECT_EQ(error_kind_of([&] { sample_conjugacy({0.0}, rng); }), ErrorKind::DegenerateClass);
    EXPECT_EQ(error_kind_of([&] { sample_conjugacy({pi}, rng); }), ErrorKind::DegenerateClass);
}

TEST(Conjugacy, InvariantUnderFixedConjugation) {
    Stream rng(3), hr(99);
    const auto h = haar_sample_su2(hr);
    const int n = 100000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = sample_conjugacy({1.0}, rng).a12.real();
        const auto g = sample_conjugacy({1.0}, rng);
        y[i] = (h * g * h.inverse()).a12.real();
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_LT(ks_two_sample(x, y), 0.01);
}

TEST(SphericalCompact, RadiusAndMoments) {
    Stream rng(4);
    const int n = 1000000;
    cplx mean = 0;
    double re2 = 0;
    for (int i = 0; i < n; ++i) {
        const auto g = sample_spherical_compact({0.5}, rng);
        ASSERT_NEAR(spherical_radius(g), 0.5, 1e-15);
        mean += g.a11;
        re2 += g.a11.real() * g.a11.real();
    }
    EXPECT_NEAR(std::abs(mean) / n, 0.0, 3e-3);
    EXPECT_NEAR(re2 / n, 0.125, 1e-3);
}

TEST(SphericalCompact, TorusBiInvariantInLaw) {
    Stream rng(5);
    const auto k = Su2Element::torus(0.4), kp = Su2Element::torus(2.2);
    const int n = 100000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = sample_spherical_compact({0.3}, rng).a12.real();
        y[i] = (k * sample_spherical_compact({0.3}, rng) * kp).a12.real();
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_LT(ks_two_sample(x, y), 0.01);
}

TEST(SphericalCompact, DegenerateRejected) {
    Stream rng(0);
    EXPECT_EQ(error_kind_of([&] { sample_spherical_compact({0.0}, rng); }), ErrorKind::DegenerateClass);
    EXPECT_EQ(error_kind_of([&] { sample_spherical_compact({1.0}, rng); }), ErrorKind::DegenerateClass);
}

TEST(SphericalNC, CartanParameterExact) {
    Stream rng(6);
    for (const Flavor f : {Flavor::Real, Flavor::Complex}) {
        for (int i = 0; i < 1000; ++i) EXPECT_NEAR(cartan_parameter(sample_spherical_nc({1.7, f}, rng)), 1.7, 1e-9);
    }
}

TEST(SphericalNC, RealTraceMoment) {
    Stream rng(7);
    const int n = 1000000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += sample_spherical_nc({1.0, Flavor::Real}, rng).trace_gg_star();
    EXPECT_NEAR(s / n, 2.0 * std::cosh(1.0), 5e-3);
}

TEST(SphericalNC, ComplexProductSupport) {
    Stream rng(8);
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 100000; ++i) {
        const auto g = sample_spherical_nc({0.5, Flavor::Complex}, rng) * sample_spherical_nc({0.5, Flavor::Complex}, rng);
        const double t = cartan_parameter(g);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LE(hi, 1.0 + 1e-9);
    EXPECT_LT(lo, 0.05);
    EXPECT_GT(hi, 0.95);
}

TEST(SphericalNC, DegenerateRejected) {
    Stream rng(0);
    EXPECT_EQ(error_kind_of([&] { sample_spherical_nc({0.0, Flavor::Real}, rng); }), ErrorKind::DegenerateClass);
}

TEST(Mass, Examples) {
    EXPECT_NEAR(class_mass(ConjugacyClass{pi / 2}).value, 4 * pi, 1e-12);
    EXPECT_NEAR(class_mass(SphericalClassCompact{0.5}).value, 4 * pi * pi, 1e-12);
    EXPECT_NEAR(class_mass(SphericalClassCompact{0.5}, MassConvention::Stated).value, 1.0, 1e-15);
    EXPECT_EQ(class_mass(SphericalClassCompact{0.5}, MassConvention::Stated).convention,
              MassConvention::Stated);
    const double s1 = std::sinh(1.0);
    EXPECT_NEAR(class_mass(SphericalClassNC{1.0, Flavor::Complex}).value, 16 * std::pow(pi, 4) * s1 * s1, 1e-9);
    EXPECT_NEAR(class_mass(SphericalClassNC{1.0, Flavor::Real}).value, 4 * pi * pi * s1, 1e-12);
}

TEST(Mass, WeylFactorIntegratesToGroupVolume) {
    auto f = [](double t) { return class_mass(ConjugacyClass{t}).value; };
    const double v = 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi);
    EXPECT_NEAR(v, 4 * pi * pi, 1e-10);
}

TEST(Mass, VariantDispatch) {
    const ClassDescriptor d = ConjugacyClass{pi / 2};
    EXPECT_NEAR(class_mass(d).value, 4 * pi, 1e-12);
}
