// Multiplies random elements of two SU(2) conjugacy classes and compares the
// class angles of the products with the closed-form density.

#include <cstdio>
#include <numbers>

#include <orbprod/orbprod.hpp>

using namespace orbprod;
using std::numbers::pi;

int main() {
    const ClassDescriptor a = ConjugacyClass{pi / 2}, b = ConjugacyClass{pi / 3};
    const auto d = density_for(a, b);
    const auto xs = product_experiment(a, b, 200000, 0);
    const auto h = histogram_over_support(d, xs, 12);

    std::printf("support [%.4f, %.4f], ks = %.5f\n", d.support().lo, d.support().hi,
                ks_distance(xs, [&](double x) { return d.cdf(x); }));
    std::printf("%10s %10s %10s\n", "theta", "empirical", "density");
    for (int i = 0; i < h.bins(); ++i) {
        const double emp = static_cast<double>(h.counts()[i]) / (static_cast<double>(h.n_total()) * h.bin_width());
        std::printf("%10.4f %10.4f %10.4f\n", h.bin_center(i), emp, d.pdf(h.bin_center(i)));
    }

    // the same law from the character series
    const double t = pi / 2;
    std::printf("series at pi/2 with 10^4 terms: %.6f, closed form: %.6f\n", nu_series(pi / 2, pi / 3, t, 10000).value,
                conj_density_raw(pi / 2, pi / 3, t));
}
