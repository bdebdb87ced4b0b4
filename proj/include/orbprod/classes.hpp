#pragma once

// Class descriptors, invariant-measure samplers, and class masses.

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "error.hpp"
#include "group.hpp"
#include "random.hpp"

namespace orbprod {

/// Conjugacy class C_alpha ⊂ SU(2), eigenvalues e^{±i alpha}.
struct ConjugacyClass {
    double alpha = std::numbers::pi / 2;
};

/// Spherical class K a K ⊂ SU(2) with K the diagonal torus, labelled by r = |a11|.
struct SphericalClassCompact {
    double r = 0.5;
};

/// Spherical class K a_t K in SL(2,R) (K = SO(2)) or SL(2,C) (K = SU(2)).
struct SphericalClassNC {
    double t = 1.0;
    Flavor flavor = Flavor::Complex;
};

using ClassDescriptor = std::variant<ConjugacyClass, SphericalClassCompact, SphericalClassNC>;

enum class MassConvention {
    Stated,          // total mass 2 r for compact spherical classes
    ProofConsistent, // vol = 8π² r, matching the Haar form 2ρ dρ dφ dψ
};

struct ClassMass {
    double value = 0.0;
    MassConvention convention = MassConvention::ProofConsistent;
};

inline void require_nondegenerate(const ConjugacyClass& c) {
    if (!(c.alpha > 0.0 && c.alpha < std::numbers::pi)) {
        throw Error(ErrorKind::DegenerateClass,
                    "conjugacy angle must lie in (0, pi), got " + std::to_string(c.alpha));
    }
}

inline void require_nondegenerate(const SphericalClassCompact& c) {
    if (!(c.r > 0.0 && c.r < 1.0)) {
        throw Error(ErrorKind::DegenerateClass, "spherical radius must lie in (0, 1), got " + std::to_string(c.r));
    }
}

inline void require_nondegenerate(const SphericalClassNC& c) {
    if (!(c.t > 0.0) || !std::isfinite(c.t)) {
        throw Error(ErrorKind::DegenerateClass, "Cartan parameter must be > 0, got " + std::to_string(c.t));
    }
}

inline void require_nondegenerate(const ClassDescriptor& d) {
    std::visit([](const auto& c) { require_nondegenerate(c); }, d);
}

/// h · diag(e^{iα}, e^{-iα}) · h⁻¹ with h Haar-random.
inline Su2Element sample_conjugacy(const ConjugacyClass& c, Stream& rng) {
    require_nondegenerate(c);
    const Su2Element h = haar_sample_su2(rng);
    return h * Su2Element::torus(c.alpha) * h.inverse();
}

inline Su2Element sample_spherical_compact(const SphericalClassCompact& c, Stream& rng) {
    require_nondegenerate(c);
    ChartPoint p;
    p.rho = c.r;
    p.phi = rng.angle();
    p.psi = rng.angle();
    return su2_from_chart(p);
}

inline Sl2Element sample_spherical_nc(const SphericalClassNC& c, Stream& rng) {
    require_nondegenerate(c);
    const Su2Element k1 = haar_sample_compact(c.flavor, rng);
    const Su2Element k2 = haar_sample_compact(c.flavor, rng);
    return k1 * Sl2Element::cartan(c.t, c.flavor) * k2;
}

/// Constant c in the KAK Haar formula, fixed so that the orbit volume
/// [4π² c sinh t]^ε reproduces vol(O_{a_t}) = c vol(SU(2))² sinh² t
/// = 16π⁴ sinh² t for SL(2,C), i.e. c = 1. SL(2,R) uses the same value.
inline constexpr double kCartanHaarConstant = 1.0;

inline ClassMass class_mass(const ConjugacyClass& c, MassConvention conv = MassConvention::ProofConsistent) {
    const double s = std::sin(c.alpha);
    return {4.0 * std::numbers::pi * s * s, conv};
}

inline ClassMass class_mass(const SphericalClassCompact& c, MassConvention conv = MassConvention::ProofConsistent) {
    if (conv == MassConvention::Stated) return {2.0 * c.r, conv};
    return {8.0 * std::numbers::pi * std::numbers::pi * c.r, conv};
}

inline ClassMass class_mass(const SphericalClassNC& c, MassConvention conv = MassConvention::ProofConsistent) {
    const double base = 4.0 * std::numbers::pi * std::numbers::pi * kCartanHaarConstant * std::sinh(c.t);
    return {c.flavor == Flavor::Real ? base : base * base, conv};
}

inline ClassMass class_mass(const ClassDescriptor& d, MassConvention conv = MassConvention::ProofConsistent) {
    return std::visit([conv](const auto& c) { return class_mass(c, conv); }, d);
}

} // namespace orbprod
