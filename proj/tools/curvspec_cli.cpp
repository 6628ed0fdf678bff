// Command-line front end: analyze, table, dirac, schrodinger2d.
//
// Exit codes: 0 success, 1 input error, 2 a theorem-level inequality failed.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvspec/curvspec.hpp"

namespace {

using namespace curvspec;

struct RunConfig {
    std::size_t samples = 4096;
    int n0 = 32;
    int n_max = 512;
    std::string format = "json";
    std::optional<int> rho;
    bool enable_2d = false;
    std::string catalog;
};

void validate(const RunConfig& c) {
    if (c.samples < 64 || (c.samples & (c.samples - 1)) != 0) {
        throw DomainError("--samples must be a power of two >= 64");
    }
    if (c.n0 < 1 || c.n0 > c.n_max) throw DomainError("--n0 must satisfy 1 <= n0 <= nmax");
    if (2 * static_cast<std::size_t>(c.n_max) + 1 > c.samples / 2) {
        throw DomainError("2*nmax+1 must not exceed samples/2");
    }
    if (c.rho && *c.rho < 1) throw DomainError("--rho must be a positive integer");
    parse_format(c.format);
}

AnalysisOptions to_options(const RunConfig& c) {
    AnalysisOptions o;
    o.samples = c.samples;
    o.hill.initial_cutoff = c.n0;
    o.hill.max_cutoff = c.n_max;
    o.rho = c.rho;
    o.enable_2d = c.enable_2d;
    return o;
}

std::filesystem::path catalog_path(const RunConfig& c) {
    return c.catalog.empty() ? catalog_dir() : std::filesystem::path(c.catalog);
}

// A path to an existing file wins; otherwise the name is looked up in the catalog.
CurveDef resolve_curve(const std::string& source, const RunConfig& c) {
    if (std::filesystem::is_regular_file(source)) return load_curve_file(source);
    if (source.find('/') != std::string::npos || source.ends_with(".curve")) {
        throw Error("cannot open curve file " + source);
    }
    return load_catalog_curve(source, catalog_path(c));
}

void add_common(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--samples,-M", c.samples, "arc-length samples (power of two)");
    cmd->add_option("--n0", c.n0, "initial Fourier cutoff");
    cmd->add_option("--nmax", c.n_max, "maximum Fourier cutoff");
    cmd->add_option("--format,-f", c.format, "json | csv | text");
    cmd->add_option("--catalog-dir", c.catalog, "directory with bundled *.curve files");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature potentials, periodic Sturm-Liouville spectra and Hopf-torus Dirac bounds"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string curve_src;
    double L = 0.0, A = 0.0;
    int m = 1;

    auto* analyze = app.add_subcommand("analyze", "verify all inequalities for one curve");
    analyze->add_option("--curve,-c", curve_src, "curve file or catalog name")->required();
    add_common(analyze, cfg);
    analyze->add_option("--rho", cfg.rho, "generator count of the complement's fundamental group");
    analyze->add_flag("--enable-2d", cfg.enable_2d, "also compute mu1 of the 2D operator (spherical curves)");

    auto* table = app.add_subcommand("table", "reproduce the five-curve reference table");
    add_common(table, cfg);

    auto* dirac = app.add_subcommand("dirac", "minimize the Hopf-torus Dirac eigenvalues");
    dirac->add_option("--L", L, "curve length")->required();
    dirac->add_option("--A", A, "enclosed spherical area")->required();
    dirac->add_option("--m", m, "Chern class of the circle bundle");
    dirac->add_option("--format,-f", cfg.format, "json | csv | text");

    auto* s2d = app.add_subcommand("schrodinger2d", "first eigenvalue of the 2D operator for a spherical curve");
    s2d->add_option("--curve,-c", curve_src, "curve file or catalog name")->required();
    add_common(s2d, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*dirac) {
            const OutputFormat fmt = parse_format(cfg.format);
            if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("--L must be positive");
            if (!(A >= 0.0 && A <= 4.0 * std::numbers::pi)) throw DomainError("--A must lie in [0, 4pi]");
            if (m < 1) throw DomainError("--m must be at least 1");
            std::cout << format_dirac(make_dirac_report(L, A, m), fmt);
            return 0;
        }

        validate(cfg);
        const OutputFormat fmt = parse_format(cfg.format);

        if (*table) {
            const auto rows = reproduce_table(to_options(cfg), catalog_path(cfg));
            std::cout << format_table(rows, fmt);
            for (const auto& r : rows) {
                if (exit_status(r.report) != 0) return exit_status(r.report);
            }
            return 0;
        }

        const CurveDef curve = resolve_curve(curve_src, cfg);

        if (*analyze) {
            const InequalityReport report = analyze_curve(curve, to_options(cfg));
            std::cout << format_report(report, fmt);
            return exit_status(report);
        }

        if (*s2d) {
            const AnalysisOptions opt = to_options(cfg);
            const CurveGeometry g = reparametrize(curve, opt.samples);
            const double area = spherical_area(g, AreaOptions{false});
            const Operator2DSpec spec{g.L, area, curvature_potential(g)};
            const Mu2DResult res = mu1_2d(spec, opt.hill);
            const double bound = four_pi2_over(g.L);
            const bool ok = res.mu1 >= bound - kTheorem2Slack;
            nlohmann::json j = {
                {"curve", curve.name},
                {"L", round12(g.L)},
                {"A", round12(area)},
                {"simple", g.simple.value_or(false)},
                {"isoperimetric_admissible", spec.isoperimetric_admissible()},
                {"mu1_2d", round12(res.mu1)},
                {"mode", res.mode},
                {"N", res.cutoff},
                {"fourpi2_L2", round12(bound)},
                {"theorem2_ok", ok},
            };
            if (fmt == OutputFormat::Json) {
                std::cout << j.dump(2) << '\n';
            } else if (fmt == OutputFormat::Csv) {
                std::cout << "curve,L,A,simple,mu1_2d,mode,N,fourpi2_L2,theorem2_ok\n"
                          << curve.name << ',' << fmt12(g.L) << ',' << fmt12(area) << ','
                          << (g.simple.value_or(false) ? "true" : "false") << ',' << fmt12(res.mu1) << ','
                          << res.mode << ',' << res.cutoff << ',' << fmt12(bound) << ','
                          << (ok ? "true" : "false") << '\n';
            } else {
                for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ": " << it.value() << '\n';
            }
            return ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
