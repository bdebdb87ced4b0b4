#pragma once

// Clebsch-Gordan bookkeeping against continuous product supports.
//
// Label n ↦ conjugacy class C_n = exp(Σ_{n/4π}), i.e. class angle n/(4π) mod π.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "densities.hpp"
#include "error.hpp"

namespace orbprod {

/// Symmetric n-th power representation, dimension n + 1.
struct RepLabel {
    int n = 0;
    int dimension() const noexcept { return n + 1; }
    friend bool operator==(const RepLabel&, const RepLabel&) = default;
};

/// ρ_n ⊗ ρ_m = ⊕ ρ_k over |n − m| ≤ k ≤ n + m, k ≡ n + m (mod 2).
inline std::vector<RepLabel> clebsch_gordan_range(int n, int m) {
    if (n < 0 || m < 0) throw Error(ErrorKind::InvalidParams, "representation labels must be >= 0");
    std::vector<RepLabel> out;
    for (int k = std::abs(n - m); k <= n + m; k += 2) out.push_back({k});
    return out;
}

/// Minkowski sum of spheres of radii n and m (label units): |n − m| ≤ ‖ξ‖ ≤ n + m.
inline SupportInterval minkowski_support(int n, int m) {
    if (n < 0 || m < 0) throw Error(ErrorKind::InvalidParams, "representation labels must be >= 0");
    return {static_cast<double>(std::abs(n - m)), static_cast<double>(n + m)};
}

/// Class angle of label k under the exponential map, reduced mod π.
inline double label_angle(int k) noexcept { return std::fmod(k / (4.0 * std::numbers::pi), std::numbers::pi); }

/// Largest label whose angle k/(4π) is below π, i.e. reached without reduction.
inline int max_unreduced_label() noexcept {
    return static_cast<int>(std::ceil(4.0 * std::numbers::pi * std::numbers::pi)) - 1;
}

struct QuantizationReport {
    int n = 0;
    int m = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<int> cg_labels;
    SupportInterval support{}; // class-angle support of C_alpha · C_beta
    std::vector<int> support_labels;
    double ratio = 0.0; // |cg| / |support labels|
    bool cg_subset = false;
    bool folded = false; // alpha + beta >= π; comparison not meaningful
};

/// Compares CG labels with the integer labels k ≤ max_unreduced_label()
/// whose class angle lies in the continuous support of C_n · C_m.
inline QuantizationReport quantization_consistency(int n, int m) {
    QuantizationReport r;
    r.n = n;
    r.m = m;
    r.alpha = label_angle(n);
    r.beta = label_angle(m);
    if (!(r.alpha > 0.0 && r.beta > 0.0)) {
        throw Error(ErrorKind::DegenerateClass, "labels map to a central class angle");
    }
    for (const auto& l : clebsch_gordan_range(n, m)) r.cg_labels.push_back(l.n);
    r.folded = r.alpha + r.beta >= std::numbers::pi || n > max_unreduced_label() || m > max_unreduced_label();
    r.support = conj_support(r.alpha, r.beta);
    const double eps = 1e-12;
    for (int k = 0; k <= max_unreduced_label(); ++k) {
        if (r.support.contains(label_angle(k), eps)) r.support_labels.push_back(k);
    }
    r.cg_subset = true;
    for (const int k : r.cg_labels) {
        if (!std::binary_search(r.support_labels.begin(), r.support_labels.end(), k)) r.cg_subset = false;
    }
    r.ratio = r.support_labels.empty() ? 0.0
                                       : static_cast<double>(r.cg_labels.size()) / static_cast<double>(r.support_labels.size());
    return r;
}

} // namespace orbprod
