#pragma once

// Inequality checks for one curve, and the five-curve reference table.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "curvspec/curve_def.hpp"
#include "curvspec/dirac.hpp"
#include "curvspec/error.hpp"
#include "curvspec/geometry.hpp"
#include "curvspec/schrodinger2d.hpp"
#include "curvspec/sturm1d.hpp"

#ifndef CURVSPEC_DEFAULT_CATALOG_DIR
#define CURVSPEC_DEFAULT_CATALOG_DIR "data/curves"
#endif

namespace curvspec {

// Tolerances of the inequality flags.
inline constexpr double kTheorem1Slack = 1e-8;
inline constexpr double kTheorem2Slack = 1e-8;
inline constexpr double kUpperBoundSlack = 1e-9;
inline constexpr double kCauchySchwarzSlack = 1e-9;
inline constexpr double kFenchelSlack = 1e-6;
inline constexpr double kEqualityRelTol = 1e-6;

struct AnalysisOptions {
    std::size_t samples = 4096;
    HillOptions hill;
    std::size_t low_eigenvalues = 5;
    std::optional<int> rho;
    bool enable_2d = false;
    double simplicity_factor = 0.25;
};

struct InequalitySlacks {
    double fenchel = 0.0;          // ∮κ − 2π
    double cauchy_schwarz = 0.0;   // (1/L)∮κ² − 4π²/L²
    double theorem1 = 0.0;         // μ₁ − 4π²/L²
    double upper_bound = 0.0;      // (1/L)∮κ² − μ₁
    std::optional<double> theorem2;        // μ₁(P) − 4π²/L²
    std::optional<double> conjecture_rho;  // μ₁ − ρ²·4π²/L²
};

struct InequalityFlags {
    bool fenchel_ok = false;
    bool cauchy_schwarz_ok = false;
    bool theorem1_ok = false;
    bool upper_bound_ok = false;
    std::optional<bool> theorem2_ok;
    std::optional<bool> conjecture_rho_ok;  // informational
    bool equality_case = false;
    // Hypotheses under which the bounds are theorems rather than conjectures.
    bool theorem1_hypothesis = false;
    std::optional<bool> theorem2_hypothesis;
};

/// Informational higher-index comparison (4π²/L²)(2k−1)² against μ_k.
struct HigherBound {
    int k = 0;
    double lower = 0.0;
    double mu = 0.0;
    bool holds = false;
};

struct Provenance {
    std::size_t M = 0;
    int N = 0;
    std::optional<int> N_2d;
    double arc_length_tolerance = kArcLengthTolerance;
    double inversion_tolerance = 1e-12;
    double hill_tolerance = 1e-9;
    double sphere_tolerance = kSphereTolerance;
    double closure_tolerance = kClosureTolerance;
    std::string kappa_g_convention = kGeodesicSignConvention;
};

struct InequalityReport {
    std::string curve;
    std::string ambient;
    double L = 0.0;
    double four_pi2_over_L2 = 0.0;
    double mu1_1d = 0.0;
    std::vector<double> mu_low;
    double mean_sq_curvature = 0.0;
    double total_curvature = 0.0;
    std::optional<int> rotation_number;
    std::optional<bool> simple;
    std::optional<double> area;
    std::optional<double> area_complement;
    std::optional<double> mu1_2d;
    std::optional<int> mode_2d;
    std::optional<double> dirac_min;
    std::optional<long> dirac_k;
    std::optional<long> dirac_l;
    std::optional<int> rho;
    InequalityFlags flags;
    InequalitySlacks slacks;
    std::vector<HigherBound> higher_bounds;
    Provenance provenance;

    /// Theorem-level flags only; the ρ conjecture never counts.
    bool theorems_hold() const {
        return flags.fenchel_ok && flags.cauchy_schwarz_ok && flags.theorem1_ok && flags.upper_bound_ok &&
               flags.theorem2_ok.value_or(true);
    }
};

inline double four_pi2_over(double L) { return 4.0 * std::numbers::pi * std::numbers::pi / (L * L); }

/// Runs every applicable check on `curve`. Failures are rethrown as
/// AnalysisError tagged with the failing stage.
inline InequalityReport analyze_curve(const CurveDef& curve, const AnalysisOptions& opt = {}) {
    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const AnalysisError&) {
            throw;
        } catch (const std::exception& e) {
            throw AnalysisError(name, e.what());
        }
    };

    InequalityReport r;
    r.curve = curve.name;
    r.rho = opt.rho;
    r.provenance.M = opt.samples;
    r.provenance.hill_tolerance = opt.hill.tolerance;

    stage("validate", [&] {
        validate_curve(curve);
        return 0;
    });

    ReparamOptions ropt;
    ropt.simplicity_factor = opt.simplicity_factor;
    const CurveGeometry g = stage("geometry", [&] { return reparametrize(curve, opt.samples, ropt); });
    r.ambient = to_string(g.ambient.kind);
    r.L = g.L;
    r.four_pi2_over_L2 = four_pi2_over(g.L);
    r.total_curvature = total_curvature(g);
    r.mean_sq_curvature = mean_square_curvature(g);
    r.rotation_number = g.rotation_number;

    const Potential pot = curvature_potential(g);
    const Spectrum spec = stage("sturm1d", [&] { return eigenvalues_1d(pot, opt.low_eigenvalues, opt.hill); });
    r.mu1_1d = spec.front();
    r.mu_low = spec.eigenvalues;
    r.provenance.N = spec.cutoff.value_or(0);

    if (g.ambient.kind == Ambient::UnitSphere) {
        r.simple = g.simple;
        const double A = stage("geometry", [&] {
            return spherical_area(g, AreaOptions{false, opt.simplicity_factor});
        });
        r.area = A;
        r.area_complement = 4.0 * std::numbers::pi - A;

        const DiracMinimum dm = stage("dirac", [&] { return dirac_minimum(g.L, A, 1); });
        r.dirac_min = dm.value;
        r.dirac_k = dm.k;
        r.dirac_l = dm.l;

        if (opt.enable_2d) {
            const Mu2DResult res = stage("schrodinger2d", [&] {
                return mu1_2d(Operator2DSpec{g.L, A, pot}, opt.hill);
            });
            r.mu1_2d = res.mu1;
            r.mode_2d = res.mode;
            r.provenance.N_2d = res.cutoff;
        }
    }

    // Flags and slacks.
    auto& s = r.slacks;
    auto& f = r.flags;
    s.fenchel = r.total_curvature - 2.0 * std::numbers::pi;
    s.cauchy_schwarz = r.mean_sq_curvature - r.four_pi2_over_L2;
    s.theorem1 = r.mu1_1d - r.four_pi2_over_L2;
    s.upper_bound = r.mean_sq_curvature - r.mu1_1d;
    f.fenchel_ok = s.fenchel >= -kFenchelSlack;
    f.cauchy_schwarz_ok = s.cauchy_schwarz >= -kCauchySchwarzSlack;
    f.theorem1_ok = s.theorem1 >= -kTheorem1Slack;
    f.upper_bound_ok = s.upper_bound >= -kUpperBoundSlack;

    if (r.mu1_2d) {
        s.theorem2 = *r.mu1_2d - r.four_pi2_over_L2;
        f.theorem2_ok = *s.theorem2 >= -kTheorem2Slack;
        f.theorem2_hypothesis = r.simple.value_or(false);
    }
    if (r.rho) {
        s.conjecture_rho = r.mu1_1d - static_cast<double>(*r.rho) * *r.rho * r.four_pi2_over_L2;
        f.conjecture_rho_ok = *s.conjecture_rho >= -kTheorem1Slack;
    }

    // Plane curves need an odd rotation number; spherical curves qualify as is.
    if (g.ambient.kind == Ambient::Plane) {
        f.theorem1_hypothesis = std::abs(*g.rotation_number) % 2 == 1;
    } else {
        f.theorem1_hypothesis = g.ambient.kind == Ambient::UnitSphere;
    }

    double mean_k = 0.0;
    for (double k : g.kappa) mean_k += k;
    mean_k /= static_cast<double>(g.kappa.size());
    double dev = 0.0;
    for (double k : g.kappa) dev = std::max(dev, std::abs(k - mean_k));
    f.equality_case = dev <= kEqualityRelTol * mean_k;

    for (std::size_t k = 1; k <= r.mu_low.size(); ++k) {
        const double odd = 2.0 * static_cast<double>(k) - 1.0;
        HigherBound hb;
        hb.k = static_cast<int>(k);
        hb.lower = r.four_pi2_over_L2 * odd * odd;
        hb.mu = r.mu_low[k - 1];
        hb.holds = hb.lower <= hb.mu + kTheorem1Slack;
        r.higher_bounds.push_back(hb);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Catalog and reference table

inline std::filesystem::path catalog_dir() {
    if (const char* env = std::getenv("CURVSPEC_CATALOG_DIR"); env && *env) return env;
    return CURVSPEC_DEFAULT_CATALOG_DIR;
}

/// Loads `<dir>/<name>.curve`.
inline CurveDef load_catalog_curve(const std::string& name, const std::filesystem::path& dir = catalog_dir()) {
    const auto path = dir / (name + ".curve");
    if (!std::filesystem::exists(path)) throw Error("unknown catalog curve '" + name + "' (looked in " + dir.string() + ")");
    return load_curve_file(path);
}

struct TableReference {
    const char* curve;
    const char* label;
    double four_pi2_over_L2;
    double mu1;
    double mean_k2;
};

inline constexpr std::array<TableReference, 5> kReferenceTable = {{
    {"lemniscate", "a", 1.06193, 3.7315, 4.36004},
    {"trefoil", "b", 0.221, 5.21, 8.16},
    {"viviani", "c", 0.169071, 0.5335, 0.567803},
    {"torus-knot", "d", 0.00146034, 0.03232, 0.0333803},
    {"spherical-spiral", "e", 0.127036, 1.744, 4.93147},
}};

// Relative tolerances: 0.2% for the quantities printed to six digits, 1% for μ₁.
inline constexpr double kTableTolFourPi2 = 2e-3;
inline constexpr double kTableTolMu1 = 1e-2;
inline constexpr double kTableTolMeanK2 = 2e-3;

struct TableRow {
    TableReference reference;
    InequalityReport report;
    std::array<double, 3> computed{};
    std::array<double, 3> deviation{};  // relative, |computed − ref| / |ref|
    std::array<bool, 3> within{};

    bool all_within() const { return within[0] && within[1] && within[2]; }
};

inline TableRow make_table_row(const TableReference& ref, InequalityReport report) {
    TableRow row{ref, std::move(report), {}, {}, {}};
    row.computed = {row.report.four_pi2_over_L2, row.report.mu1_1d, row.report.mean_sq_curvature};
    const std::array<double, 3> refs = {ref.four_pi2_over_L2, ref.mu1, ref.mean_k2};
    const std::array<double, 3> tols = {kTableTolFourPi2, kTableTolMu1, kTableTolMeanK2};
    for (std::size_t i = 0; i < 3; ++i) {
        row.deviation[i] = std::abs(row.computed[i] - refs[i]) / std::abs(refs[i]);
        row.within[i] = row.deviation[i] <= tols[i];
    }
    return row;
}

/// Analyzes the five reference curves (rows run concurrently).
inline std::vector<TableRow> reproduce_table(const AnalysisOptions& opt = {},
                                             const std::filesystem::path& dir = catalog_dir()) {
    std::vector<std::future<InequalityReport>> jobs;
    for (const auto& ref : kReferenceTable) {
        CurveDef c = load_catalog_curve(ref.curve, dir);
        jobs.push_back(std::async(std::launch::async, [c = std::move(c), opt] { return analyze_curve(c, opt); }));
    }
    std::vector<TableRow> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) rows.push_back(make_table_row(kReferenceTable[i], jobs[i].get()));
    return rows;
}

} // namespace curvspec
