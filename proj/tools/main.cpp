// Command-line front end: every pipeline with machine-readable output.
//
// Exit codes: 0 success (all thresholds met), 2 bad input, 3 non-generic ell,
// 4 integration failure, 5 accuracy limit, 6 construction self-check,
// 7 residual threshold exceeded, 1 anything else.

#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "odeim/airy.hpp"
#include "odeim/io_json.hpp"

using namespace odeim;

namespace {

struct OutputSink {
    std::string path;  // empty = stdout
    std::string format = "json";

    void write(const Json& j) const { write_text(j.dump(2) + "\n"); }
    void write_text(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw DomainError("cannot open output file: " + path);
        f << text;
    }
};

Complex parse_complex(std::string s) {
    // forms: "1.5", "1.5+0.3i", "1.5-0.3i", "2i"
    if (s.empty()) throw DomainError("empty complex literal");
    if (s.back() == 'i') {
        s.pop_back();
        size_t split = s.find_last_of("+-");
        if (split == std::string::npos || split == 0) {
            // pure imaginary, possibly with sign
            if (s.empty() || s == "+" || s == "-") s += "1";
            return Complex(0.0, std::stod(s));
        }
        // avoid splitting exponents like 1e-3
        while (split != std::string::npos && split > 0 &&
               (s[split - 1] == 'e' || s[split - 1] == 'E'))
            split = s.find_last_of("+-", split - 1);
        if (split == std::string::npos || split == 0) return Complex(0.0, std::stod(s));
        std::string im = s.substr(split);
        if (im == "+" || im == "-") im += "1";
        return Complex(std::stod(s.substr(0, split)), std::stod(im));
    }
    return Complex(std::stod(s), 0.0);
}

Vector parse_ell(const std::string& s, int rank) {
    Vector ell = Vector::Zero(rank);
    if (s.empty()) return ell;
    std::stringstream ss(s);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= rank) throw DomainError("ell has more entries than the rank");
        ell[i++] = parse_complex(item);
    }
    if (i != rank) throw DomainError("ell needs exactly rank entries");
    return ell;
}

struct GridSpec {
    double lo = 0.2, hi = 2.0;
    int count = 16;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (s.empty()) return g;
    std::stringstream ss(s);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':'))
        throw DomainError("grid spec must be lo:hi[:count]");
    g.lo = std::stod(a);
    g.hi = std::stod(b);
    if (std::getline(ss, c, ':')) g.count = std::stoi(c);
    if (g.count < 1 || !(g.hi >= g.lo)) throw DomainError("bad grid spec");
    return g;
}

std::pair<double, double> parse_window(const std::string& s) {
    auto g = parse_grid(s + ":2");
    return {g.lo, g.hi};
}

Vector random_generic_ell(const CartanData& cd, double M, uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int attempt = 0; attempt < 10; ++attempt) {
        Vector ell(cd.rank());
        for (int i = 0; i < cd.rank(); ++i) ell[i] = Complex(u(rng), u(rng));
        try {
            build_spectral_pipeline(cd, M, ell, tol);
            return ell;
        } catch (const GenericityError&) {
        }
    }
    throw GenericityError("no generic ell found in 10 draws");
}

template <typename F>
void parallel_over(int n, int threads, F&& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

Json inputs_json(const std::string& algebra, Json extra = Json::object()) {
    Json j{{"algebra", algebra}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j;
}

// ---------------- commands ----------------

int cmd_masses(const std::string& algebra, const OutputSink& sink) {
    auto cd = cartan_data(parse_algebra(algebra));
    RealVector pf = pf_vector(cd);
    RealVector closed = pf_closed_form(cd);
    double max_dev = (pf - closed).lpNorm<Eigen::Infinity>();
    if (sink.format == "csv") {
        std::string out = "node,mass,closed_form,abs_err\n";
        char buf[128];
        for (int i = 0; i < cd.rank(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%.16e,%.16e,%.3e\n", i + 1, pf[i], closed[i],
                          std::abs(pf[i] - closed[i]));
            out += buf;
        }
        sink.write_text(out);
    } else {
        Json rows = Json::array();
        for (int i = 0; i < cd.rank(); ++i)
            rows.push_back(Json{{"node", i + 1},
                                {"mass", pf[i]},
                                {"closed_form", closed[i]},
                                {"abs_err", std::abs(pf[i] - closed[i])}});
        sink.write(make_report("masses", inputs_json(algebra),
                               Json{{"hvee", cd.hvee}, {"rows", rows}, {"max_deviation", max_dev}}));
    }
    return max_dev < 1e-12 ? 0 : 7;
}

int cmd_repcheck(const std::string& algebra, int node, const OutputSink& sink) {
    auto cd = cartan_data(parse_algebra(algebra));
    auto fs = build_fundamental_system(cd);
    const auto& nd = fs(node);
    Json rows = Json::array();
    double worst = 0;
    for (const MatrixRep* r : {&nd.V, &nd.wedge, &nd.tensor}) {
        double res = rep_residual(*r, cd);
        worst = std::max(worst, res);
        rows.push_back(Json{{"rep", r->label}, {"dim", r->dim}, {"relation_residual", res}});
    }
    double equi = intertwiner_residual(nd.m, nd.wedge, nd.tensor);
    sink.write(make_report(
        "repcheck", inputs_json(algebra, Json{{"node", node}}),
        Json{{"reps", rows},
             {"intertwiner_dim_w", nd.m.dim_w},
             {"intertwiner_equivariance", equi},
             {"wedge_normalization_residual", wedge_normalization_residual(fs)}}));
    return (worst < 1e-12 && equi < 1e-9) ? 0 : 7;
}

int cmd_solve(const std::string& algebra, int node, double M, Complex E, const std::string& ell_s,
              Complex k, const GridSpec& grid, double tol, const OutputSink& sink) {
    auto cd = cartan_data(parse_algebra(algebra));
    ConnectionParams p;
    p.cartan = cd;
    p.M = M;
    p.E = E;
    p.ell = parse_ell(ell_s, cd.rank());
    p.tol = tol;
    auto V = fundamental_rep(cd, node);
    std::vector<double> xs;
    for (int i = 0; i < grid.count; ++i)
        xs.push_back(grid.count == 1
                         ? grid.lo
                         : grid.lo * std::pow(grid.hi / grid.lo, double(i) / (grid.count - 1)));
    SolutionTrace tr = psi_k(V, p, k, xs);
    if (sink.format == "csv") sink.write_text(trace_csv(tr));
    else
        sink.write(make_report("solve",
                               inputs_json(algebra, Json{{"node", node},
                                                         {"M", M},
                                                         {"E", to_json(E)},
                                                         {"k", to_json(k)},
                                                         {"tol", tol}}),
                               to_json(tr)));
    return 0;
}

int cmd_psicheck(const std::string& algebra, double M, Complex E, const GridSpec& grid, double tol,
                 double threshold, int threads, const OutputSink& sink) {
    auto kind = parse_algebra(algebra);
    if (kind.family == Family::E) throw DomainError("psicheck: E-series representations unsupported");
    auto cd = cartan_data(kind);
    auto fs = build_fundamental_system(cd);
    ConnectionParams p;
    p.cartan = cd;
    p.M = M;
    p.E = E;
    p.ell = Vector::Zero(cd.rank());
    p.tol = tol;
    std::vector<double> xs;
    for (int i = 0; i < grid.count; ++i)
        xs.push_back(grid.count == 1
                         ? grid.lo
                         : grid.lo * std::pow(grid.hi / grid.lo, double(i) / (grid.count - 1)));
    std::vector<PsiSystemReport> reports(cd.rank());
    std::exception_ptr err;
    parallel_over(cd.rank(), threads, [&](int i) {
        try {
            reports[i] = psi_system_residual(fs, i + 1, p, xs);
        } catch (...) {
            err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    Json nodes = Json::array();
    double worst = 0;
    for (auto& r : reports) {
        nodes.push_back(to_json(r));
        worst = std::max(worst, r.max_residual);
    }
    sink.write(make_report(
        "psicheck",
        inputs_json(algebra, Json{{"M", M}, {"E", to_json(E)}, {"tol", tol}, {"grid", xs}}),
        Json{{"nodes", nodes}, {"max_residual", worst}, {"threshold", threshold}}));
    return worst < threshold ? 0 : 7;
}

int cmd_q(const std::string& algebra, int node, double M, const std::string& ell_s, bool ell_random,
          uint64_t seed, const GridSpec& egrid, const std::string& zero_window, double tol,
          int threads, const OutputSink& sink) {
    auto cd = cartan_data(parse_algebra(algebra));
    Vector ell = ell_random ? random_generic_ell(cd, M, seed, tol) : parse_ell(ell_s, cd.rank());
    auto sp = build_spectral_pipeline(cd, M, ell, tol);
    QEvaluator qe(sp);
    QTable table;
    table.node = node;
    std::vector<Complex> Es(egrid.count);
    for (int i = 0; i < egrid.count; ++i)
        Es[i] = egrid.count == 1 ? egrid.lo
                                 : egrid.lo + (egrid.hi - egrid.lo) * double(i) / (egrid.count - 1);
    std::vector<QPair> vals(Es.size());
    std::exception_ptr err;
    parallel_over(static_cast<int>(Es.size()), threads, [&](int i) {
        try {
            vals[i] = extract_QQ(sp, node, Es[i]);
        } catch (...) {
            err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    for (size_t i = 0; i < Es.size(); ++i) table.samples.emplace_back(Es[i], vals[i]);
    if (!zero_window.empty()) {
        auto [lo, hi] = parse_window(zero_window);
        table.zeros = find_q_zeros(qe, node, lo, hi, 16);
    }
    if (sink.format == "csv") sink.write_text(qtable_csv(table));
    else
        sink.write(make_report("q",
                               inputs_json(algebra, Json{{"node", node},
                                                         {"M", M},
                                                         {"ell", to_json(ell)},
                                                         {"tol", tol}}),
                               to_json(table)));
    return 0;
}

int cmd_bethe(const std::string& algebra, int node, double M, const std::string& ell_s,
              bool ell_random, uint64_t seed, const std::string& window, double tol,
              double threshold, const OutputSink& sink) {
    auto cd = cartan_data(parse_algebra(algebra));
    Vector ell = ell_random ? random_generic_ell(cd, M, seed, tol) : parse_ell(ell_s, cd.rank());
    auto sp = build_spectral_pipeline(cd, M, ell, tol);
    QEvaluator qe(sp);
    auto [lo, hi] = parse_window(window);
    QTable table;
    table.node = node;
    table.zeros = find_q_zeros(qe, node, lo, hi, 16);
    double worst = 0;
    for (Complex z : table.zeros) {
        double r = std::abs(bethe_residual(qe, node, z));
        table.bethe_residuals.push_back(r);
        worst = std::max(worst, r);
    }
    sink.write(make_report("bethe",
                           inputs_json(algebra, Json{{"node", node},
                                                     {"M", M},
                                                     {"ell", to_json(ell)},
                                                     {"window", window},
                                                     {"tol", tol}}),
                           Json{{"table", to_json(table)},
                                {"max_residual", worst},
                                {"threshold", threshold},
                                {"zeros_found", table.zeros.size()}}));
    if (table.zeros.empty()) return 7;
    return worst < threshold ? 0 : 7;
}

int cmd_airy(const std::string& family, int n, int rotation, const GridSpec& grid,
             const OutputSink& sink) {
    Family fam;
    if (family == "A" || family == "a") fam = Family::A;
    else if (family == "D" || family == "d") fam = Family::D;
    else throw DomainError("airy: family must be A or D");
    std::vector<double> xs;
    for (int i = 0; i < grid.count; ++i)
        xs.push_back(grid.count == 1 ? grid.lo
                                     : grid.lo + (grid.hi - grid.lo) * double(i) / (grid.count - 1));
    const int dim = fam == Family::A ? n : 2 * n;
    if (sink.format == "csv") {
        std::string out = "x";
        for (int j = 1; j <= dim; ++j)
            out += ",re_" + std::to_string(j) + ",im_" + std::to_string(j);
        out += "\n";
        char buf[64];
        for (double x : xs) {
            Vector v = rotated_airy(fam, n, rotation, x);
            std::snprintf(buf, sizeof buf, "%.16e", x);
            out += buf;
            for (int j = 0; j < dim; ++j) {
                std::snprintf(buf, sizeof buf, ",%.16e,%.16e", v[j].real(), v[j].imag());
                out += buf;
            }
            out += "\n";
        }
        sink.write_text(out);
    } else {
        Json rows = Json::array();
        for (double x : xs) {
            Vector v = rotated_airy(fam, n, rotation, x);
            rows.push_back(Json{{"x", x}, {"value", to_json(v)}});
        }
        sink.write(make_report(
            "airy", Json{{"family", family}, {"n", n}, {"rotation", rotation}},
            Json{{"components", dim}, {"rows", rows}}));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for affine connections, their subdominant solutions, "
                 "and generalized spectral determinants"};
    app.require_subcommand(1);

    std::string algebra = "A2", output, format = "json", ell_s, grid_s, egrid_s, window;
    std::string family = "A";
    int node = 1, threads = 1, n_airy = 3, rotation = 0;
    double M = 1.0, tol = 1e-10, threshold = 1e-6;
    std::string E_s = "0";
    std::string k_s = "0";
    bool ell_random = false;
    uint64_t seed = 1;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--output", output, "write to file instead of stdout");
        c->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* masses = app.add_subcommand("masses", "Perron-Frobenius mass vector vs closed forms");
    masses->add_option("--algebra", algebra)->required();
    add_common(masses);

    auto* repcheck = app.add_subcommand("repcheck", "representation relation residuals");
    repcheck->add_option("--algebra", algebra)->required();
    repcheck->add_option("--node", node);
    add_common(repcheck);

    auto* solve = app.add_subcommand("solve", "subdominant solution trace");
    solve->add_option("--algebra", algebra)->required();
    solve->add_option("--node", node);
    solve->add_option("--M", M);
    solve->add_option("--E", E_s);
    solve->add_option("--ell", ell_s, "comma-separated complex entries, e.g. 0.3+0.1i,0.2");
    solve->add_option("--k", k_s, "rotation index");
    solve->add_option("--xs", grid_s, "sample radii lo:hi:count (log-spaced)");
    solve->add_option("--tol", tol);
    add_common(solve);

    auto* psicheck = app.add_subcommand("psicheck", "quadratic solution-identity residuals");
    psicheck->add_option("--algebra", algebra)->required();
    psicheck->add_option("--M", M);
    psicheck->add_option("--E", E_s);
    psicheck->add_option("--grid", grid_s, "x grid lo:hi:count");
    psicheck->add_option("--tol", tol);
    psicheck->add_option("--threshold", threshold);
    psicheck->add_option("--threads", threads);
    add_common(psicheck);

    auto* qcmd = app.add_subcommand("q", "spectral determinant table");
    qcmd->add_option("--algebra", algebra)->required();
    qcmd->add_option("--node", node);
    qcmd->add_option("--M", M);
    qcmd->add_option("--ell", ell_s);
    qcmd->add_flag("--ell-random", ell_random, "draw a generic ell from the unit polydisc");
    qcmd->add_option("--seed", seed);
    qcmd->add_option("--E-grid", egrid_s, "lo:hi:count (real E)");
    qcmd->add_option("--zeros-window", window, "lo:hi window to search for zeros");
    qcmd->add_option("--tol", tol);
    qcmd->add_option("--threads", threads);
    add_common(qcmd);

    auto* bethe = app.add_subcommand("bethe", "product relation at zeros of Q");
    bethe->add_option("--algebra", algebra)->required();
    bethe->add_option("--node", node);
    bethe->add_option("--M", M);
    bethe->add_option("--ell", ell_s);
    bethe->add_flag("--ell-random", ell_random);
    bethe->add_option("--seed", seed);
    bethe->add_option("--window", window)->required();
    bethe->add_option("--tol", tol);
    bethe->add_option("--threshold", threshold);
    add_common(bethe);

    auto* airy = app.add_subcommand("airy", "contour-integral solution tables");
    airy->add_option("--family", family, "A or D");
    airy->add_option("--n", n_airy, "integral size parameter");
    airy->add_option("--rotation", rotation);
    airy->add_option("--xs", grid_s, "x grid lo:hi:count (linear)");
    add_common(airy);

    CLI11_PARSE(app, argc, argv);

    try {
        OutputSink sink{output, format};
        if (masses->parsed()) return cmd_masses(algebra, sink);
        if (repcheck->parsed()) return cmd_repcheck(algebra, node, sink);
        if (solve->parsed()) {
            GridSpec g = grid_s.empty() ? GridSpec{0.2, 2.0, 16} : parse_grid(grid_s);
            return cmd_solve(algebra, node, M, parse_complex(E_s), ell_s, parse_complex(k_s), g,
                             tol, sink);
        }
        if (psicheck->parsed()) {
            GridSpec g = grid_s.empty() ? GridSpec{0.2, 2.0, 16} : parse_grid(grid_s);
            return cmd_psicheck(algebra, M, parse_complex(E_s), g, tol, threshold, threads, sink);
        }
        if (qcmd->parsed()) {
            GridSpec g = egrid_s.empty() ? GridSpec{-10.0, 10.0, 21} : parse_grid(egrid_s);
            return cmd_q(algebra, node, M, ell_s, ell_random, seed, g, window, tol, threads, sink);
        }
        if (bethe->parsed())
            return cmd_bethe(algebra, node, M, ell_s, ell_random, seed, window, tol, threshold,
                             sink);
        if (airy->parsed()) {
            GridSpec g = grid_s.empty() ? GridSpec{0.5, 3.0, 6} : parse_grid(grid_s);
            return cmd_airy(family, n_airy, rotation, g, sink);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const GenericityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << " near x = " << e.where << "\n";
        return 4;
    } catch (const AccuracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
