#pragma once

// Point sets on the unit sphere, their Riesz energies, and the product
// measures they induce on pairs of conjugacy classes.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "experiments.hpp"
#include "group.hpp"
#include "harmonic.hpp"
#include "random.hpp"

namespace orbprod {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) noexcept { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) noexcept {
    const double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

enum class PointSetMethod { Random, IcosaLattice, Polar, Minimized };

constexpr std::string_view to_string(PointSetMethod m) noexcept {
    switch (m) {
    case PointSetMethod::Random: return "random";
    case PointSetMethod::IcosaLattice: return "icosa";
    case PointSetMethod::Polar: return "polar";
    case PointSetMethod::Minimized: return "minimized";
    }
    return "unknown";
}

struct SpherePointSet {
    std::vector<Vec3> points;
    PointSetMethod method = PointSetMethod::Random;

    std::size_t size() const noexcept { return points.size(); }
};

/// Smallest pairwise distance (O(N²)).
inline double min_pair_distance(const SpherePointSet& ps) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const Vec3 d{ps.points[i][0] - ps.points[j][0], ps.points[i][1] - ps.points[j][1],
                         ps.points[i][2] - ps.points[j][2]};
            best = std::min(best, norm(d));
        }
    }
    return best;
}

inline Vec3 centroid(const SpherePointSet& ps) noexcept {
    Vec3 c{0.0, 0.0, 0.0};
    for (const auto& p : ps.points) {
        for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)];
    }
    for (double& x : c) x /= static_cast<double>(ps.size());
    return c;
}

// ---------------------------------------------------------------------------
// Icosahedral lattice

/// The 12 vertices (0, ±1, ±φ) and cyclic permutations, normalized.
inline std::vector<Vec3> icosahedron_vertices() {
    const double phi = std::numbers::phi;
    std::vector<Vec3> v;
    for (const double s1 : {-1.0, 1.0}) {
        for (const double s2 : {-1.0, 1.0}) {
            v.push_back(normalized({0.0, s1, s2 * phi}));
            v.push_back(normalized({s1, s2 * phi, 0.0}));
            v.push_back(normalized({s2 * phi, 0.0, s1}));
        }
    }
    return v;
}

/// The 20 faces, each listed counter-clockwise seen from outside.
inline std::vector<std::array<std::size_t, 3>> icosahedron_faces(const std::vector<Vec3>& v) {
    double edge = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < v.size(); ++i) {
        edge = std::min(edge, norm({v[0][0] - v[i][0], v[0][1] - v[i][1], v[0][2] - v[i][2]}));
    }
    auto adjacent = [&](std::size_t i, std::size_t j) {
        return std::abs(norm({v[i][0] - v[j][0], v[i][1] - v[j][1], v[i][2] - v[j][2]}) - edge) < 1e-9;
    };
    std::vector<std::array<std::size_t, 3>> faces;
    for (std::size_t a = 0; a < v.size(); ++a) {
        for (std::size_t b = a + 1; b < v.size(); ++b) {
            for (std::size_t c = b + 1; c < v.size(); ++c) {
                if (!adjacent(a, b) || !adjacent(b, c) || !adjacent(a, c)) continue;
                const Vec3 cross{v[b][1] * v[c][2] - v[b][2] * v[c][1], v[b][2] * v[c][0] - v[b][0] * v[c][2],
                                 v[b][0] * v[c][1] - v[b][1] * v[c][0]};
                if (dot(v[a], cross) > 0.0) faces.push_back({a, b, c});
                else faces.push_back({a, c, b});
            }
        }
    }
    return faces;
}

/// Geodesic subdivision of class (m, n): every face of the icosahedron is
/// overlaid with the triangular lattice whose face edge is the lattice
/// vector m e1 + n e2, lattice points in the closed face are mapped
/// barycentrically onto the flat face and projected radially.
/// Yields N = 10(m² + mn + n²) + 2 points.
inline SpherePointSet icosahedral_lattice(int m, int n) {
    if (m < 0 || n < 0 || (m == 0 && n == 0)) {
        throw Error(ErrorKind::InvalidParams, "lattice class (m, n) needs m, n >= 0, not both zero");
    }
    const auto verts = icosahedron_vertices();
    const auto faces = icosahedron_faces(verts);

    // Face corners in lattice coordinates: 0, P1 = (m, n), P2 = rot60(P1) = (−n, m + n).
    const double e1x = 1.0, e1y = 0.0, e2x = 0.5, e2y = std::sqrt(3.0) / 2.0;
    const double p1x = m * e1x + n * e2x, p1y = m * e1y + n * e2y;
    const double p2x = -n * e1x + (m + n) * e2x, p2y = -n * e1y + (m + n) * e2y;
    const double det = p1x * p2y - p2x * p1y;

    std::vector<std::array<double, 3>> bary;
    const int span = m + n;
    for (int i = -span; i <= span; ++i) {
        for (int j = 0; j <= span; ++j) {
            const double x = i * e1x + j * e2x, y = i * e1y + j * e2y;
            const double b1 = (x * p2y - p2x * y) / det;
            const double b2 = (p1x * y - x * p1y) / det;
            const double b0 = 1.0 - b1 - b2;
            if (b0 >= -1e-12 && b1 >= -1e-12 && b2 >= -1e-12) bary.push_back({b0, b1, b2});
        }
    }

    SpherePointSet ps;
    ps.method = PointSetMethod::IcosaLattice;
    // Points on shared edges and vertices appear once per incident face;
    // they are merged through a grid keyed at the merge tolerance.
    const double merge_tol = 1e-9;
    using Key = std::array<long long, 3>;
    std::map<Key, std::size_t> grid;
    auto key_of = [&](const Vec3& p) {
        return Key{std::llround(p[0] / merge_tol), std::llround(p[1] / merge_tol), std::llround(p[2] / merge_tol)};
    };
    auto seen = [&](const Key& k) {
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz)
                    if (grid.count({k[0] + dx, k[1] + dy, k[2] + dz})) return true;
        return false;
    };
    for (const auto& f : faces) {
        for (const auto& b : bary) {
            Vec3 p{};
            for (std::size_t k = 0; k < 3; ++k) p[k] = b[0] * verts[f[0]][k] + b[1] * verts[f[1]][k] + b[2] * verts[f[2]][k];
            p = normalized(p);
            const Key k = key_of(p);
            if (seen(k)) continue;
            grid.emplace(k, ps.points.size());
            ps.points.push_back(p);
        }
    }
    return ps;
}

inline std::size_t icosahedral_count(int m, int n) noexcept {
    return static_cast<std::size_t>(10 * (m * n + m * m + n * n) + 2);
}

// ---------------------------------------------------------------------------
// Equal-area polar layout

/// Polar caps of area 4π/N holding one point each, and latitude collars in
/// between. Collar counts follow each collar's area (rounded with carry),
/// collar boundaries are then moved so every point owns area 4π/N. Points sit
/// at the mid-area latitude of their collar, equally spaced in longitude,
/// with each collar's longitudes offset by half a spacing relative to the
/// previous one.
inline SpherePointSet polar_points(int count) {
    if (count < 2) throw Error(ErrorKind::InvalidParams, "polar layout needs N >= 2");
    constexpr double pi = std::numbers::pi;
    SpherePointSet ps;
    ps.method = PointSetMethod::Polar;
    ps.points.push_back({0.0, 0.0, 1.0});
    const auto n = static_cast<double>(count);
    if (count > 2) {
        const double region = 4.0 * pi / n;
        const double cap = 2.0 * std::asin(std::sqrt(1.0 / n));
        const double ideal_collar = std::sqrt(region);
        const int collars = std::max(1, static_cast<int>(std::lround((pi - 2.0 * cap) / ideal_collar)));
        const double fitted = (pi - 2.0 * cap) / collars;

        std::vector<int> per_collar;
        double carry = 0.0;
        int placed = 0;
        for (int k = 0; k < collars; ++k) {
            const double top = cap + k * fitted, bottom = top + fitted;
            const double ideal = 2.0 * pi * (std::cos(top) - std::cos(bottom)) / region + carry;
            int c = static_cast<int>(std::lround(ideal));
            if (k == collars - 1) c = count - 2 - placed;
            carry = ideal - c;
            per_collar.push_back(c);
            placed += c;
        }

        int above = 1; // points north of the current collar
        double offset = 0.0;
        for (const int c : per_collar) {
            if (c <= 0) continue;
            const double z_top = 1.0 - 2.0 * above / n;
            const double z_bottom = 1.0 - 2.0 * (above + c) / n;
            const double z = 0.5 * (z_top + z_bottom);
            const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double step = 2.0 * pi / c;
            for (int j = 0; j < c; ++j) {
                const double lon = offset + j * step;
                ps.points.push_back({rxy * std::cos(lon), rxy * std::sin(lon), z});
            }
            offset += 0.5 * step;
            above += c;
        }
    }
    ps.points.push_back({0.0, 0.0, -1.0});
    return ps;
}

/// N points uniform on the sphere: height z uniform on [−1, 1] and
/// longitude uniform (the area measure is uniform in z).
inline SpherePointSet random_points(int count, Stream& rng) {
    if (count < 1) throw Error(ErrorKind::InvalidParams, "need at least one point");
    SpherePointSet ps;
    ps.method = PointSetMethod::Random;
    ps.points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * rng.uniform();
        const double lon = rng.angle();
        const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
        ps.points.push_back({rxy * std::cos(lon), rxy * std::sin(lon), z});
    }
    return ps;
}

/// Rotates every point by the rotation attached to the unit quaternion q.
inline SpherePointSet rotated(const SpherePointSet& ps, const Su2Element& q) {
    // q = w + x i + y j + z k with a11 = w + i z, a12 = y + i x
    const double w = q.a11.real(), z = q.a11.imag(), y = q.a12.real(), x = q.a12.imag();
    const std::array<Vec3, 3> r{Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                                Vec3{2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                                Vec3{2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
    SpherePointSet out;
    out.method = ps.method;
    out.points.reserve(ps.size());
    for (const auto& p : ps.points) out.points.push_back(normalized({dot(r[0], p), dot(r[1], p), dot(r[2], p)}));
    return out;
}

inline SpherePointSet random_rotation(const SpherePointSet& ps, Stream& rng) { return rotated(ps, haar_sample_su2(rng)); }

// ---------------------------------------------------------------------------
// Riesz energy

struct EnergyReport {
    double s = 1.0;
    double energy = 0.0;
    double gradient_norm = 0.0; // max tangential gradient norm over points
};

namespace detail {

inline double riesz_kernel(double dist_sq, double s) noexcept {
    if (s == 1.0) return 1.0 / std::sqrt(dist_sq);
    return std::pow(dist_sq, -0.5 * s);
}

// Energy and (optionally) Euclidean gradient. Row sums are reduced pairwise.
inline double riesz_energy_and_gradient(const std::vector<Vec3>& pts, double s, std::vector<Vec3>* grad) {
    const std::size_t n = pts.size();
    std::vector<double> rows(n, 0.0);
    if (grad) grad->assign(n, Vec3{0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1], dz = pts[i][2] - pts[j][2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (!(d2 > 0.0)) throw Error(ErrorKind::CoincidentPoints, "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
            const double e = riesz_kernel(d2, s);
            row += e;
            if (grad) {
                const double coef = -s * e / d2; // ∂/∂z_i of |z_i − z_j|^{−s}
                (*grad)[i][0] += coef * dx;
                (*grad)[i][1] += coef * dy;
                (*grad)[i][2] += coef * dz;
                (*grad)[j][0] -= coef * dx;
                (*grad)[j][1] -= coef * dy;
                (*grad)[j][2] -= coef * dz;
            }
        }
        rows[i] = row;
    }
    return pairwise_sum(rows);
}

inline void project_tangent(const std::vector<Vec3>& pts, std::vector<Vec3>& grad) noexcept {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = dot(grad[i], pts[i]);
        for (std::size_t k = 0; k < 3; ++k) grad[i][k] -= r * pts[i][k];
    }
}

inline double max_norm(const std::vector<Vec3>& v) noexcept {
    double m = 0.0;
    for (const auto& g : v) m = std::max(m, norm(g));
    return m;
}

} // namespace detail

/// Σ_{i<j} |z_i − z_j|^{−s} and the largest tangential gradient norm.
inline EnergyReport riesz_energy(const SpherePointSet& ps, double s = 1.0) {
    if (!(s > 0.0)) throw Error(ErrorKind::InvalidParams, "Riesz exponent must be > 0");
    std::vector<Vec3> grad;
    EnergyReport r;
    r.s = s;
    r.energy = detail::riesz_energy_and_gradient(ps.points, s, &grad);
    detail::project_tangent(ps.points, grad);
    r.gradient_norm = detail::max_norm(grad);
    return r;
}

struct MinimizeResult {
    SpherePointSet points;
    EnergyReport report;
    int iterations = 0;
    bool converged = false;
};

/// Projected gradient descent with backtracking on the product of spheres:
/// u ← normalize(u − η (I − u uᵀ)∇E). The first trial step is 1/N; after an
/// accepted step the next trial doubles it, a rejected trial halves it.
/// A step is accepted on sufficient decrease E' ≤ E − 1e-4 η |∇E|², so
/// energy never increases.
inline MinimizeResult minimize_energy(const SpherePointSet& start, double s = 1.0, int max_iters = 1000,
                                      double tol = 1e-6) {
    if (!(s > 0.0)) throw Error(ErrorKind::InvalidParams, "Riesz exponent must be > 0");
    MinimizeResult res;
    res.points = start;
    std::vector<Vec3>& x = res.points.points;
    if (x.size() < 2) {
        res.report = {s, 0.0, 0.0};
        res.converged = true;
        return res;
    }
    std::vector<Vec3> grad, trial(x.size());
    double energy = detail::riesz_energy_and_gradient(x, s, &grad);
    detail::project_tangent(x, grad);
    double gnorm = detail::max_norm(grad);
    double eta = 1.0 / static_cast<double>(x.size());

    int it = 0;
    for (; it < max_iters && gnorm >= tol; ++it) {
        double gsq = 0.0;
        for (const auto& g : grad) gsq += dot(g, g);
        bool accepted = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                trial[i] = normalized({x[i][0] - eta * grad[i][0], x[i][1] - eta * grad[i][1], x[i][2] - eta * grad[i][2]});
            }
            double e_trial;
            try {
                e_trial = detail::riesz_energy_and_gradient(trial, s, nullptr);
            } catch (const Error&) {
                e_trial = std::numeric_limits<double>::infinity();
            }
            if (e_trial <= energy - 1e-4 * eta * gsq) {
                x.swap(trial);
                accepted = true;
                eta *= 2.0;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break; // step underflow: at a critical point to machine precision
        energy = detail::riesz_energy_and_gradient(x, s, &grad);
        detail::project_tangent(x, grad);
        gnorm = detail::max_norm(grad);
    }
    res.points.method = PointSetMethod::Minimized;
    res.report = {s, energy, gnorm};
    res.iterations = it;
    res.converged = gnorm < tol;
    return res;
}

// ---------------------------------------------------------------------------
// Point sets as conjugacy classes

/// u = (a, b, c) ↦ cos α · I + sin α · ξ(a, b, c), ξ = [[ic, a+ib], [−a+ib, −ic]].
inline Su2Element point_to_class(const Vec3& u, double alpha) noexcept {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return {cplx(c, s * u[2]), cplx(s * u[0], s * u[1])};
}

inline std::vector<Su2Element> pointset_to_class(const SpherePointSet& ps, double alpha) {
    require_open_angle(alpha, "alpha");
    std::vector<Su2Element> out;
    out.reserve(ps.size());
    for (const auto& u : ps.points) out.push_back(point_to_class(u, alpha));
    return out;
}

/// Class angles of all |A|·|B| products of the mapped points, sorted.
inline std::vector<double> deterministic_product_angles(const SpherePointSet& a, double alpha,
                                                        const SpherePointSet& b, double beta) {
    if (a.size() == 0 || b.size() == 0) throw Error(ErrorKind::InvalidParams, "point sets must be nonempty");
    const auto ga = pointset_to_class(a, alpha);
    const auto gb = pointset_to_class(b, beta);
    std::vector<double> out;
    out.reserve(ga.size() * gb.size());
    for (const auto& g : ga) {
        for (const auto& h : gb) out.push_back(class_angle(g * h));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Histogram deterministic_product_measure(const SpherePointSet& a, double alpha, const SpherePointSet& b,
                                               double beta, int bins = kDefaultBins) {
    const auto xs = deterministic_product_angles(a, alpha, b, beta);
    const SupportInterval s = conj_support(alpha, beta);
    Histogram h(s.lo, s.hi, bins);
    h.add(xs);
    return h;
}

/// KS distance of the deterministic product measure to the analytic law.
inline double discretization_ks(const SpherePointSet& a, double alpha, const SpherePointSet& b, double beta) {
    const auto xs = deterministic_product_angles(a, alpha, b, beta);
    return ks_distance(xs, [&](double x) { return conj_cdf(alpha, beta, x); });
}

} // namespace orbprod
