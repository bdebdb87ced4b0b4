#pragma once

// Elements of SU(2), SL(2,R) and SL(2,C), their invariants, the Euler-type
// chart on SU(2), the KAK decomposition and Haar sampling.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "error.hpp"
#include "random.hpp"

namespace orbprod {

using cplx = std::complex<double>;

/// Element of SU(2) stored by its first row; the matrix is
/// [[a11, a12], [-conj(a12), conj(a11)]].
struct Su2Element {
    cplx a11{1.0, 0.0};
    cplx a12{0.0, 0.0};

    static Su2Element identity() noexcept { return {}; }

    /// diag(e^{i angle}, e^{-i angle})
    static Su2Element torus(double angle) noexcept { return {std::polar(1.0, angle), 0.0}; }

    /// Rotation [[cos, -sin], [sin, cos]] in SO(2) ⊂ SU(2).
    static Su2Element rotation(double angle) noexcept {
        return {cplx(std::cos(angle), 0.0), cplx(-std::sin(angle), 0.0)};
    }

    cplx a21() const noexcept { return -std::conj(a12); }
    cplx a22() const noexcept { return std::conj(a11); }

    Su2Element inverse() const noexcept { return {std::conj(a11), -a12}; }

    double norm_sq() const noexcept { return std::norm(a11) + std::norm(a12); }

    /// Trace is always real: 2 Re(a11).
    double trace() const noexcept { return 2.0 * a11.real(); }

    friend Su2Element operator*(const Su2Element& x, const Su2Element& y) noexcept {
        return {x.a11 * y.a11 - x.a12 * std::conj(y.a12), x.a11 * y.a12 + x.a12 * std::conj(y.a11)};
    }
};

/// Coordinates (rho, phi, psi) ∈ [0,1] × [0,2π) × [0,2π) with
/// a11 = rho e^{i phi}, a12 = sqrt(1 - rho^2) e^{-i psi}. Haar density 2 rho.
struct ChartPoint {
    double rho = 1.0;
    double phi = 0.0;
    double psi = 0.0;
};

inline double wrap_angle(double x) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    x = std::fmod(x, two_pi);
    if (x < 0.0) x += two_pi;
    if (x >= two_pi) x = 0.0;
    return x;
}

inline Su2Element su2_from_chart(const ChartPoint& p) noexcept {
    const double s = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
    return {std::polar(p.rho, p.phi), std::polar(s, -p.psi)};
}

/// Inverse chart. phi is set to 0 when rho = 0 and psi to 0 when rho = 1.
inline ChartPoint chart_from_su2(const Su2Element& g) noexcept {
    ChartPoint p;
    p.rho = std::min(1.0, std::abs(g.a11));
    p.phi = p.rho > 0.0 ? wrap_angle(std::arg(g.a11)) : 0.0;
    p.psi = std::abs(g.a12) > 0.0 ? wrap_angle(-std::arg(g.a12)) : 0.0;
    return p;
}

/// Eigenvalue angle θ ∈ [0, π] of g (eigenvalues e^{±iθ}).
/// Evaluated as atan2(|Im quaternion part|, Re a11), which equals
/// arccos(clamp(Re a11, -1, 1)) but keeps full precision near θ ∈ {0, π}.
inline double class_angle(const Su2Element& g) noexcept {
    const double im = std::sqrt(g.a11.imag() * g.a11.imag() + std::norm(g.a12));
    return std::atan2(im, std::clamp(g.a11.real(), -1.0, 1.0));
}

/// |a11|, constant on double cosets of the diagonal torus.
inline double spherical_radius(const Su2Element& g) noexcept { return std::min(1.0, std::abs(g.a11)); }

/// Haar-uniform element: rho^2 ~ U[0,1], phi, psi ~ U[0,2π).
inline Su2Element haar_sample_su2(Stream& rng) noexcept {
    ChartPoint p;
    p.rho = std::sqrt(rng.uniform());
    p.phi = rng.angle();
    p.psi = rng.angle();
    return su2_from_chart(p);
}

// ---------------------------------------------------------------------------

enum class Flavor { Real, Complex };

/// SL(2,R) or SL(2,C) element, row-major entries. Real flavor keeps all
/// imaginary parts zero.
struct Sl2Element {
    std::array<cplx, 4> m{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
    Flavor flavor = Flavor::Complex;

    static Sl2Element identity(Flavor f) noexcept { return {{cplx(1.0), 0.0, 0.0, cplx(1.0)}, f}; }

    /// a_t = diag(e^{t/2}, e^{-t/2})
    static Sl2Element cartan(double t, Flavor f) noexcept {
        return {{cplx(std::exp(0.5 * t)), 0.0, 0.0, cplx(std::exp(-0.5 * t))}, f};
    }

    static Sl2Element from_compact(const Su2Element& k, Flavor f) noexcept {
        return {{k.a11, k.a12, k.a21(), k.a22()}, f};
    }

    cplx operator()(int i, int j) const noexcept { return m[static_cast<std::size_t>(2 * i + j)]; }

    cplx det() const noexcept { return m[0] * m[3] - m[1] * m[2]; }

    /// Tr(g g*) = squared Frobenius norm.
    double trace_gg_star() const noexcept {
        return std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]);
    }

    Sl2Element adjoint() const noexcept {
        return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}, flavor};
    }

    friend Sl2Element operator*(const Sl2Element& x, const Sl2Element& y) noexcept {
        const Flavor f = (x.flavor == Flavor::Real && y.flavor == Flavor::Real) ? Flavor::Real : Flavor::Complex;
        return {{x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
                 x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]},
                f};
    }

    friend Sl2Element operator*(const Su2Element& k, const Sl2Element& g) noexcept {
        return from_compact(k, g.flavor) * g;
    }
    friend Sl2Element operator*(const Sl2Element& g, const Su2Element& k) noexcept {
        return g * from_compact(k, g.flavor);
    }
};

inline constexpr double kDetTolerance = 1e-10;
inline constexpr double kTraceSlack = 1e-9;

/// Cartan parameter t ≥ 0 with g ∈ K a_t K, from 2 cosh t = Tr(g g*).
inline double cartan_parameter(const Sl2Element& g) {
    const double tr = g.trace_gg_star();
    if (tr < 2.0 - kTraceSlack) {
        throw Error(ErrorKind::TraceBelowTwo, "Tr(g g*) = " + std::to_string(tr) + " < 2");
    }
    return std::acosh(std::max(1.0, 0.5 * tr));
}

/// Haar sample from the maximal compact subgroup of the flavor: SO(2) for
/// SL(2,R), SU(2) for SL(2,C).
inline Su2Element haar_sample_compact(Flavor f, Stream& rng) noexcept {
    if (f == Flavor::Real) return Su2Element::rotation(rng.angle());
    return haar_sample_su2(rng);
}

/// g = k1 · a_t · k2 with k1, k2 compact (SO(2) or SU(2) per flavor).
struct KakFactors {
    Su2Element k1;
    double t = 0.0;
    Su2Element k2;
    Flavor flavor = Flavor::Complex;

    Sl2Element recompose() const noexcept { return k1 * Sl2Element::cartan(t, flavor) * k2; }
};

/// KAK decomposition from the singular value decomposition of g.
/// The gauge is fixed so that k1.a11 is real and nonnegative.
inline KakFactors kak_decompose(const Sl2Element& g) {
    if (std::abs(g.det() - 1.0) > kDetTolerance) {
        throw Error(ErrorKind::InvalidParams, "det g != 1");
    }
    const double t = cartan_parameter(g);

    // Largest eigenvector of H = g* g gives the first column of V in g = U Σ V*.
    const double p = std::norm(g.m[0]) + std::norm(g.m[2]);
    const double s = std::norm(g.m[1]) + std::norm(g.m[3]);
    const cplx q = std::conj(g.m[0]) * g.m[1] + std::conj(g.m[2]) * g.m[3];
    const double lambda = std::exp(t);

    cplx v1(1.0), v2(0.0);
    const cplx r1a = q, r1b = lambda - p;
    const cplx r2a = lambda - s, r2b = std::conj(q);
    const double n1 = std::norm(r1a) + std::norm(r1b);
    const double n2 = std::norm(r2a) + std::norm(r2b);
    if (std::max(n1, n2) > 1e-28) {
        if (n1 >= n2) {
            v1 = r1a / std::sqrt(n1);
            v2 = r1b / std::sqrt(n1);
        } else {
            v1 = r2a / std::sqrt(n2);
            v2 = r2b / std::sqrt(n2);
        }
    }
    if (g.flavor == Flavor::Real) {
        v1 = v1.real();
        v2 = v2.real();
        const double nv = std::hypot(v1.real(), v2.real());
        v1 /= nv;
        v2 /= nv;
    }
    // V = [[v1, -conj v2], [v2, conj v1]] is in SU(2) (SO(2) when real).
    Su2Element vmat{v1, -std::conj(v2)};

    // First row of U = g V Σ^{-1}; U is special unitary since det g = 1.
    const double inv_s1 = std::exp(-0.5 * t);
    const double inv_s2 = std::exp(0.5 * t);
    const Sl2Element gv = g * vmat;
    cplx u11 = 0.5 * (gv.m[0] * inv_s1 + std::conj(gv.m[3] * inv_s2));
    cplx u12 = 0.5 * (gv.m[1] * inv_s2 - std::conj(gv.m[2] * inv_s1));
    const double nu = std::sqrt(std::norm(u11) + std::norm(u12));
    u11 /= nu;
    u12 /= nu;
    Su2Element umat{u11, u12};

    // Torus gauge: U -> U D, V -> V D with D commuting with Σ.
    if (g.flavor == Flavor::Complex) {
        if (std::abs(umat.a11) > 0.0) {
            const Su2Element d = Su2Element::torus(-std::arg(umat.a11));
            umat = umat * d;
            vmat = vmat * d;
            umat.a11 = cplx(std::abs(umat.a11), 0.0);
        }
    } else if (umat.a11.real() < 0.0) {
        umat = {-umat.a11, -umat.a12};
        vmat = {-vmat.a11, -vmat.a12};
    }
    return {umat, t, vmat.inverse(), g.flavor};
}

} // namespace orbprod
