// orbprod command-line front end. CSV output starts with a "#" provenance
// line; JSON output carries the same data under "provenance".

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <orbprod/io.hpp>
#include <orbprod/orbprod.hpp>

using namespace orbprod;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::size_t n = 1000000;
    std::string out = "-";
    std::string format;
    int threads = 0;
    std::string command_line;
};

// "pi", "pi/3", "2pi/3", "2*pi/3", "-pi/4" or a plain number.
double parse_scalar(const std::string& text) {
    std::string s;
    for (const char c : text) {
        if (c != ' ' && c != '*') s += c;
    }
    const auto bad = [&] { return Error(ErrorKind::InvalidParams, "cannot parse number '" + text + "'"); };
    const auto to_double = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != t.size()) throw bad();
        return v;
    };
    const auto p = s.find("pi");
    if (p == std::string::npos) return to_double(s);
    double mult = 1.0;
    const std::string head = s.substr(0, p);
    if (head == "-") mult = -1.0;
    else if (!head.empty()) mult = to_double(head);
    std::string tail = s.substr(p + 2);
    double div = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/') throw bad();
        div = to_double(tail.substr(1));
        if (div == 0.0) throw bad();
    }
    return mult * std::numbers::pi / div;
}

DensityKind parse_kind(const std::string& s) {
    if (s == "conj") return DensityKind::ConjSu2;
    if (s == "sphA") return DensityKind::SphSu2;
    if (s == "sphB") return DensityKind::SphSl2R;
    if (s == "sphC") return DensityKind::SphSl2C;
    throw Error(ErrorKind::InvalidParams, "unknown kind '" + s + "' (expected conj, sphA, sphB or sphC)");
}

std::pair<ClassDescriptor, ClassDescriptor> classes_for(DensityKind k, double p1, double p2) {
    switch (k) {
    case DensityKind::ConjSu2: return {ConjugacyClass{p1}, ConjugacyClass{p2}};
    case DensityKind::SphSu2: return {SphericalClassCompact{p1}, SphericalClassCompact{p2}};
    case DensityKind::SphSl2R: return {SphericalClassNC{p1, Flavor::Real}, SphericalClassNC{p2, Flavor::Real}};
    case DensityKind::SphSl2C: return {SphericalClassNC{p1, Flavor::Complex}, SphericalClassNC{p2, Flavor::Complex}};
    }
    throw Error(ErrorKind::InvalidParams, "unknown density kind");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error(ErrorKind::InvalidParams, "cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string provenance_line(const Common& c) {
    return "orbprod " + std::string(kVersion) + " seed=" + std::to_string(c.seed) + " cmd: " + c.command_line;
}

Json provenance(const Common& c) {
    Json j;
    j["version"] = kVersion;
    j["seed"] = c.seed;
    j["command"] = c.command_line;
    return j;
}

void write_json(const Common& c, const Json& body) {
    Json j;
    j["provenance"] = provenance(c);
    if (body.is_object()) {
        for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    } else {
        j["result"] = body;
    }
    Output o(c.out);
    o.stream() << j.dump(2) << '\n';
}

int threads_for(const Common& c) {
    return c.threads > 0 ? c.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void cmd_density(const Common& c, const std::string& kind, const std::string& a, const std::string& b, int grid) {
    if (grid < 2) throw Error(ErrorKind::InvalidParams, "grid must have at least 2 points");
    const auto d = make_density(parse_kind(kind), parse_scalar(a), parse_scalar(b));
    const auto s = d.support();
    Output o(c.out);
    CsvWriter w(o.stream());
    w.comment(provenance_line(c));
    w.header({"point", "pdf", "cdf", "raw_paper_value"});
    for (int i = 0; i < grid; ++i) {
        const double x = i == grid - 1 ? s.hi : s.lo + (s.hi - s.lo) * i / (grid - 1);
        const auto v = d.at(x);
        const double raw = d.raw_value(x);
        w.row(x, v.singular ? std::string("inf") : format_double(v.value), d.cdf(x),
              raw == kSingularSentinel ? std::string("inf") : format_double(raw));
    }
}

void cmd_compare(const Common& c, const std::string& kind, const std::string& a, const std::string& b) {
    const auto k = parse_kind(kind);
    const auto [ca, cb] = classes_for(k, parse_scalar(a), parse_scalar(b));
    if (c.format == "csv") {
        const auto d = density_for(ca, cb);
        const auto xs = product_experiment(ca, cb, c.n, c.seed, threads_for(c));
        Output o(c.out);
        o.stream() << "# " << provenance_line(c) << '\n';
        write_histogram_csv(o.stream(), histogram_over_support(d, xs), d);
        return;
    }
    write_json(c, to_json(compare_with_density(ca, cb, c.n, c.seed, threads_for(c))));
}

void cmd_pointset(const Common& c, const std::string& method, const std::vector<int>& args) {
    const auto need = [&](std::size_t k) {
        if (args.size() != k) {
            throw Error(ErrorKind::InvalidParams, method + " expects " + std::to_string(k) + " integer argument(s)");
        }
    };
    SpherePointSet ps;
    if (method == "icosa") {
        need(2);
        ps = icosahedral_lattice(args[0], args[1]);
    } else if (method == "polar") {
        need(1);
        ps = polar_points(args[0]);
    } else if (method == "random") {
        need(1);
        Stream rng(c.seed);
        ps = random_points(args[0], rng);
    } else {
        throw Error(ErrorKind::InvalidParams, "unknown point-set method '" + method + "'");
    }
    if (c.format == "json") {
        write_json(c, to_json(ps));
        return;
    }
    Output o(c.out);
    o.stream() << "# " << provenance_line(c) << '\n';
    write_pointset_csv(o.stream(), ps);
}

void cmd_thomson(const Common& c, int count, const std::string& s_text, int restarts, int iters) {
    if (restarts < 1) throw Error(ErrorKind::InvalidParams, "restarts must be >= 1");
    const double s = parse_scalar(s_text);
    Stream rng(c.seed);
    MinimizeResult best;
    std::vector<double> energies;
    for (int r = 0; r < restarts; ++r) {
        auto res = minimize_energy(random_points(count, rng), s, iters);
        energies.push_back(res.report.energy);
        if (r == 0 || res.report.energy < best.report.energy) best = std::move(res);
    }
    if (c.format == "csv") {
        Output o(c.out);
        o.stream() << "# " << provenance_line(c) << " best_energy=" << format_double(best.report.energy) << '\n';
        write_pointset_csv(o.stream(), best.points);
        return;
    }
    Json j;
    j["n"] = count;
    j["s"] = s;
    j["restarts"] = restarts;
    j["best_energy"] = best.report.energy;
    j["gradient_norm"] = best.report.gradient_norm;
    j["energies"] = energies;
    j["points"] = to_json(best.points)["points"];
    write_json(c, j);
}

void cmd_series(const Common& c, const std::string& a, const std::string& b, const std::string& t, int terms) {
    if (terms < 1) throw Error(ErrorKind::InvalidParams, "K must be >= 1");
    std::vector<int> ks;
    for (int k = 1; k < terms; k *= 10) {
        for (const int m : {1, 2, 5}) {
            if (k * m < terms) ks.push_back(k * m);
        }
    }
    ks.push_back(terms);
    const auto rows = series_diagnostics(parse_scalar(a), parse_scalar(b), parse_scalar(t), ks);
    Output o(c.out);
    CsvWriter w(o.stream());
    w.comment(provenance_line(c));
    w.header({"terms", "partial", "cesaro", "reference"});
    for (const auto& r : rows) w.row(r.terms, r.partial, r.cesaro, r.reference);
}

void cmd_constants(const Common& c, const std::vector<std::string>& p) {
    if (p.size() != 6) throw Error(ErrorKind::InvalidParams, "constants expects alpha beta ra rb t1 t2");
    std::vector<double> v;
    for (const auto& s : p) v.push_back(parse_scalar(s));
    Json arr = Json::array();
    for (const auto& e : constants_report(v[0], v[1], v[2], v[3], v[4], v[5])) arr.push_back(to_json(e));
    Json j;
    j["entries"] = arr;
    write_json(c, j);
}

void cmd_convergence(const Common& c, const std::string& kind, const std::string& a, const std::string& b,
                     int seeds, std::vector<std::size_t> grid) {
    const auto [ca, cb] = classes_for(parse_kind(kind), parse_scalar(a), parse_scalar(b));
    const auto rows = convergence_study(ca, cb, grid, seeds, c.seed, threads_for(c));
    Output o(c.out);
    CsvWriter w(o.stream());
    w.comment(provenance_line(c));
    w.comment("loglog_slope=" + format_double(loglog_slope(rows)));
    w.header({"n", "mean_ks", "sd_ks"});
    for (const auto& r : rows) w.row(static_cast<unsigned long long>(r.n), r.mean_ks, r.sd_ks);
}

void cmd_discretize(const Common& c, const std::string& method, const std::string& a, const std::string& b, int count,
                    int m, int n, int iters) {
    const double alpha = parse_scalar(a), beta = parse_scalar(b);
    Stream rng(c.seed);
    double ks = 0;
    std::size_t size = 0;
    if (method == "random") {
        const auto p = random_points(count, rng);
        const auto q = random_points(count, rng);
        size = p.size();
        ks = discretization_ks(p, alpha, q, beta);
    } else {
        SpherePointSet base;
        if (method == "icosa") base = icosahedral_lattice(m, n);
        else if (method == "polar") base = polar_points(count);
        else if (method == "minimized") base = minimize_energy(polar_points(count), 1.0, iters).points;
        else throw Error(ErrorKind::InvalidParams, "unknown point-set method '" + method + "'");
        const auto r = random_rotation(base, rng);
        size = r.size();
        ks = discretization_ks(r, alpha, r, beta);
    }
    Json j;
    j["method"] = method;
    j["points"] = size;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["ks"] = ks;
    write_json(c, j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Products of random elements from conjugacy and spherical classes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    Common c;
    for (int i = 0; i < argc; ++i) c.command_line += (i ? " " : "") + std::string(i ? argv[i] : "orbprod");

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
        sub->add_option("--n", c.n, "sample size")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--out", c.out, "output file, - for stdout")->capture_default_str();
        sub->add_option("--format", c.format, "csv or json; each command has its own default")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", c.threads, "worker threads, 0 for all cores")->capture_default_str();
    };

    std::string kind, a, b, t, s_text = "1";
    int grid = 200, count = 0, restarts = 20, iters = 1000, terms = 10000, qn = 0, qm = 0, seeds = 10, lm = 13, ln = 3;
    std::vector<int> ints;
    std::vector<std::string> cparams{"pi/2", "pi/3", "0.70710678118654752", "0.6", "1", "1"};
    std::vector<std::size_t> ngrid{1000, 10000, 100000, 1000000};
    std::string method;

    auto* density = app.add_subcommand("density", "density curve on a grid over the support (CSV)");
    density->add_option("kind", kind, "conj, sphA, sphB or sphC")->required();
    density->add_option("p1", a)->required();
    density->add_option("p2", b)->required();
    density->add_option("--grid", grid, "grid points")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Monte Carlo products against the density (JSON, or histogram CSV)");
    compare->add_option("kind", kind)->required();
    compare->add_option("p1", a)->required();
    compare->add_option("p2", b)->required();

    auto* pointset = app.add_subcommand("pointset", "sphere point sets: icosa M N | polar N | random N");
    pointset->add_option("method", method)->required();
    pointset->add_option("args", ints)->required();

    auto* thomson = app.add_subcommand("thomson", "best-of-restarts Riesz energy minimization");
    thomson->add_option("points", count, "number of points")->required();
    thomson->add_option("exponent", s_text, "Riesz exponent s")->required();
    thomson->add_option("restarts", restarts, "random starts")->required();
    thomson->add_option("--iters", iters)->capture_default_str();

    auto* quantize = app.add_subcommand("quantize", "Clebsch-Gordan labels against the support labels (JSON)");
    quantize->add_option("label1", qn, "first representation label")->required();
    quantize->add_option("label2", qm, "second representation label")->required();

    auto* series = app.add_subcommand("series", "partial and Cesaro sums of the character series (CSV)");
    series->add_option("alpha", a)->required();
    series->add_option("beta", b)->required();
    series->add_option("theta", t)->required();
    series->add_option("K", terms)->required();

    auto* constants = app.add_subcommand("constants", "normalization constants report (JSON)");
    constants->add_option("params", cparams, "alpha beta ra rb t1 t2");

    auto* convergence = app.add_subcommand("convergence", "KS distance against sample size (CSV)");
    convergence->add_option("kind", kind)->required();
    convergence->add_option("p1", a)->required();
    convergence->add_option("p2", b)->required();
    convergence->add_option("--seeds", seeds)->capture_default_str();
    convergence->add_option("--grid", ngrid, "sample sizes")->capture_default_str();

    auto* discretize = app.add_subcommand("discretize", "KS of the deterministic product measure (JSON)");
    discretize->add_option("method", method, "icosa, polar, minimized or random")->required();
    discretize->add_option("alpha", a)->required();
    discretize->add_option("beta", b)->required();
    discretize->add_option("--points", count, "point count for polar, minimized and random")->default_val(2172);
    discretize->add_option("--m", lm)->capture_default_str();
    discretize->add_option("--lattice-n", ln)->capture_default_str();
    discretize->add_option("--iters", iters, "minimizer iterations")->default_val(150);

    add_common(density);
    add_common(compare);
    add_common(pointset);
    add_common(thomson);
    add_common(quantize);
    add_common(series);
    add_common(constants);
    add_common(convergence);
    add_common(discretize);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*density) cmd_density(c, kind, a, b, grid);
        else if (*compare) cmd_compare(c, kind, a, b);
        else if (*pointset) cmd_pointset(c, method, ints);
        else if (*thomson) cmd_thomson(c, count, s_text, restarts, iters);
        else if (*quantize) write_json(c, to_json(quantization_consistency(qn, qm)));
        else if (*series) cmd_series(c, a, b, t, terms);
        else if (*constants) cmd_constants(c, cparams);
        else if (*convergence) cmd_convergence(c, kind, a, b, seeds, ngrid);
        else if (*discretize) cmd_discretize(c, method, a, b, count, lm, ln, iters);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::NumericalFailure ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
