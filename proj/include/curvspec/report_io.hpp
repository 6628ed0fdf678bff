#pragma once

// JSON / CSV / text serialization of reports. Numbers carry 12 significant digits.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvspec/analysis.hpp"
#include "curvspec/dirac.hpp"
#include "curvspec/error.hpp"

namespace curvspec {

enum class OutputFormat { Json, Csv, Text };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "text") return OutputFormat::Text;
    throw DomainError("unknown output format '" + s + "' (expected json, csv or text)");
}

/// Rounds to 12 significant digits.
inline double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr) + 0.0;  // no negative zero
}

inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v + 0.0);
    return buf;
}

namespace detail {

using nlohmann::json;

template <class T>
json opt_json(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_floating_point_v<T>) {
        return round12(*v);
    } else {
        return *v;
    }
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

inline std::string opt_str(const std::optional<double>& v) { return v ? fmt12(*v) : ""; }
inline std::string opt_str(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }
template <class I>
inline std::string opt_str(const std::optional<I>& v) {
    return v ? std::to_string(*v) : "";
}
inline const char* b2s(bool b) { return b ? "true" : "false"; }

} // namespace detail

inline nlohmann::json to_json(const InequalityReport& r) {
    using detail::opt_json;
    nlohmann::json j;
    j["curve"] = r.curve;
    j["geometry"] = {
        {"ambient", r.ambient},
        {"L", round12(r.L)},
        {"rotation_number", opt_json(r.rotation_number)},
        {"simple", opt_json(r.simple)},
        {"area", opt_json(r.area)},
        {"area_complement", opt_json(r.area_complement)},
    };
    std::vector<double> low;
    for (double v : r.mu_low) low.push_back(round12(v));
    j["spectra"] = {
        {"mu1_1d", round12(r.mu1_1d)},
        {"mu_low", low},
        {"mu1_2d", opt_json(r.mu1_2d)},
        {"mode_2d", opt_json(r.mode_2d)},
        {"dirac_min", opt_json(r.dirac_min)},
        {"dirac_argmin", r.dirac_k ? nlohmann::json::array({*r.dirac_k, *r.dirac_l}) : nlohmann::json(nullptr)},
    };
    j["bounds"] = {
        {"fourpi2_L2", round12(r.four_pi2_over_L2)},
        {"mean_k2", round12(r.mean_sq_curvature)},
        {"total_curvature", round12(r.total_curvature)},
        {"rho", opt_json(r.rho)},
    };
    const auto& f = r.flags;
    j["flags"] = {
        {"fenchel_ok", f.fenchel_ok},
        {"cauchy_schwarz_ok", f.cauchy_schwarz_ok},
        {"theorem1_ok", f.theorem1_ok},
        {"upper_bound_ok", f.upper_bound_ok},
        {"theorem2_ok", opt_json(f.theorem2_ok)},
        {"conjecture_rho_ok", opt_json(f.conjecture_rho_ok)},
        {"equality_case", f.equality_case},
        {"theorem1_hypothesis", f.theorem1_hypothesis},
        {"theorem2_hypothesis", opt_json(f.theorem2_hypothesis)},
    };
    const auto& s = r.slacks;
    j["slacks"] = {
        {"fenchel", round12(s.fenchel)},
        {"cauchy_schwarz", round12(s.cauchy_schwarz)},
        {"theorem1", round12(s.theorem1)},
        {"upper_bound", round12(s.upper_bound)},
        {"theorem2", opt_json(s.theorem2)},
        {"conjecture_rho", opt_json(s.conjecture_rho)},
    };
    nlohmann::json hb = nlohmann::json::array();
    for (const auto& h : r.higher_bounds) {
        hb.push_back({{"k", h.k}, {"lower", round12(h.lower)}, {"mu", round12(h.mu)}, {"holds", h.holds}});
    }
    j["higher_bounds"] = hb;
    const auto& p = r.provenance;
    j["provenance"] = {
        {"M", p.M},
        {"N", p.N},
        {"N_2d", opt_json(p.N_2d)},
        {"tolerances",
         {{"arc_length", p.arc_length_tolerance},
          {"inversion", p.inversion_tolerance},
          {"hill", p.hill_tolerance},
          {"sphere", p.sphere_tolerance},
          {"closure", p.closure_tolerance}}},
        {"kappa_g_convention", p.kappa_g_convention},
    };
    return j;
}

inline InequalityReport report_from_json(const nlohmann::json& j) {
    using detail::opt_from;
    InequalityReport r;
    try {
        r.curve = j.at("curve").get<std::string>();
        const auto& g = j.at("geometry");
        r.ambient = g.at("ambient").get<std::string>();
        r.L = g.at("L").get<double>();
        r.rotation_number = opt_from<int>(g, "rotation_number");
        r.simple = opt_from<bool>(g, "simple");
        r.area = opt_from<double>(g, "area");
        r.area_complement = opt_from<double>(g, "area_complement");
        const auto& sp = j.at("spectra");
        r.mu1_1d = sp.at("mu1_1d").get<double>();
        r.mu_low = sp.at("mu_low").get<std::vector<double>>();
        r.mu1_2d = opt_from<double>(sp, "mu1_2d");
        r.mode_2d = opt_from<int>(sp, "mode_2d");
        r.dirac_min = opt_from<double>(sp, "dirac_min");
        if (sp.contains("dirac_argmin") && !sp.at("dirac_argmin").is_null()) {
            r.dirac_k = sp.at("dirac_argmin").at(0).get<long>();
            r.dirac_l = sp.at("dirac_argmin").at(1).get<long>();
        }
        const auto& b = j.at("bounds");
        r.four_pi2_over_L2 = b.at("fourpi2_L2").get<double>();
        r.mean_sq_curvature = b.at("mean_k2").get<double>();
        r.total_curvature = b.at("total_curvature").get<double>();
        r.rho = opt_from<int>(b, "rho");
        const auto& f = j.at("flags");
        r.flags.fenchel_ok = f.at("fenchel_ok").get<bool>();
        r.flags.cauchy_schwarz_ok = f.at("cauchy_schwarz_ok").get<bool>();
        r.flags.theorem1_ok = f.at("theorem1_ok").get<bool>();
        r.flags.upper_bound_ok = f.at("upper_bound_ok").get<bool>();
        r.flags.theorem2_ok = opt_from<bool>(f, "theorem2_ok");
        r.flags.conjecture_rho_ok = opt_from<bool>(f, "conjecture_rho_ok");
        r.flags.equality_case = f.at("equality_case").get<bool>();
        r.flags.theorem1_hypothesis = f.at("theorem1_hypothesis").get<bool>();
        r.flags.theorem2_hypothesis = opt_from<bool>(f, "theorem2_hypothesis");
        const auto& s = j.at("slacks");
        r.slacks.fenchel = s.at("fenchel").get<double>();
        r.slacks.cauchy_schwarz = s.at("cauchy_schwarz").get<double>();
        r.slacks.theorem1 = s.at("theorem1").get<double>();
        r.slacks.upper_bound = s.at("upper_bound").get<double>();
        r.slacks.theorem2 = opt_from<double>(s, "theorem2");
        r.slacks.conjecture_rho = opt_from<double>(s, "conjecture_rho");
        for (const auto& h : j.at("higher_bounds")) {
            r.higher_bounds.push_back(HigherBound{h.at("k").get<int>(), h.at("lower").get<double>(),
                                                  h.at("mu").get<double>(), h.at("holds").get<bool>()});
        }
        const auto& p = j.at("provenance");
        r.provenance.M = p.at("M").get<std::size_t>();
        r.provenance.N = p.at("N").get<int>();
        r.provenance.N_2d = opt_from<int>(p, "N_2d");
        const auto& t = p.at("tolerances");
        r.provenance.arc_length_tolerance = t.at("arc_length").get<double>();
        r.provenance.inversion_tolerance = t.at("inversion").get<double>();
        r.provenance.hill_tolerance = t.at("hill").get<double>();
        r.provenance.sphere_tolerance = t.at("sphere").get<double>();
        r.provenance.closure_tolerance = t.at("closure").get<double>();
        r.provenance.kappa_g_convention = p.at("kappa_g_convention").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed report JSON: ") + e.what(), 0);
    }
    return r;
}

/// Process exit status for a finished analysis: 0, or 2 when a theorem-level flag failed.
inline int exit_status(const InequalityReport& r) { return r.theorems_hold() ? 0 : 2; }

inline std::string format_report(const InequalityReport& r, OutputFormat fmt) {
    using detail::b2s;
    using detail::opt_str;
    std::ostringstream out;
    switch (fmt) {
    case OutputFormat::Json: out << to_json(r).dump(2) << '\n'; break;
    case OutputFormat::Csv:
        out << "curve,ambient,L,fourpi2_L2,mu1_1d,mean_k2,total_curvature,rotation_number,area,mu1_2d,dirac_min,"
               "fenchel_ok,cauchy_schwarz_ok,theorem1_ok,upper_bound_ok,theorem2_ok,conjecture_rho_ok,"
               "equality_case\n";
        out << r.curve << ',' << r.ambient << ',' << fmt12(r.L) << ',' << fmt12(r.four_pi2_over_L2) << ','
            << fmt12(r.mu1_1d) << ',' << fmt12(r.mean_sq_curvature) << ',' << fmt12(r.total_curvature) << ','
            << opt_str(r.rotation_number) << ',' << opt_str(r.area) << ',' << opt_str(r.mu1_2d) << ','
            << opt_str(r.dirac_min) << ',' << b2s(r.flags.fenchel_ok) << ',' << b2s(r.flags.cauchy_schwarz_ok)
            << ',' << b2s(r.flags.theorem1_ok) << ',' << b2s(r.flags.upper_bound_ok) << ','
            << opt_str(r.flags.theorem2_ok) << ',' << opt_str(r.flags.conjecture_rho_ok) << ','
            << b2s(r.flags.equality_case) << '\n';
        break;
    case OutputFormat::Text: {
        auto line = [&](const char* k, const std::string& v) {
            if (!v.empty()) out << k << ": " << v << '\n';
        };
        line("curve", r.curve);
        line("ambient", r.ambient);
        line("L", fmt12(r.L));
        line("4pi^2/L^2", fmt12(r.four_pi2_over_L2));
        line("mu1", fmt12(r.mu1_1d));
        std::string low;
        for (double v : r.mu_low) low += (low.empty() ? "" : " ") + fmt12(v);
        line("mu_1..k", low);
        line("mean kappa^2", fmt12(r.mean_sq_curvature));
        line("total curvature", fmt12(r.total_curvature));
        line("rotation number", opt_str(r.rotation_number));
        line("simple", opt_str(r.simple));
        line("area", opt_str(r.area));
        line("mu1 (2D)", opt_str(r.mu1_2d));
        line("dirac minimum", opt_str(r.dirac_min));
        line("rho", opt_str(r.rho));
        line("fenchel_ok", b2s(r.flags.fenchel_ok));
        line("cauchy_schwarz_ok", b2s(r.flags.cauchy_schwarz_ok));
        line("theorem1_ok", b2s(r.flags.theorem1_ok));
        line("upper_bound_ok", b2s(r.flags.upper_bound_ok));
        line("theorem2_ok", opt_str(r.flags.theorem2_ok));
        line("conjecture_rho_ok", opt_str(r.flags.conjecture_rho_ok));
        line("equality_case", b2s(r.flags.equality_case));
        line("theorem1_hypothesis", b2s(r.flags.theorem1_hypothesis));
        line("theorem2_hypothesis", opt_str(r.flags.theorem2_hypothesis));
        line("M", std::to_string(r.provenance.M));
        line("N", std::to_string(r.provenance.N));
        break;
    }
    }
    return out.str();
}

inline std::string format_table(const std::vector<TableRow>& rows, OutputFormat fmt) {
    std::ostringstream out;
    switch (fmt) {
    case OutputFormat::Csv:
        out << "curve,fourpi2_L2,mu1,mean_k2,ref_fourpi2_L2,ref_mu1,ref_mean_k2\n";
        for (const auto& r : rows) {
            out << r.reference.curve << ',' << fmt12(r.computed[0]) << ',' << fmt12(r.computed[1]) << ','
                << fmt12(r.computed[2]) << ',' << fmt12(r.reference.four_pi2_over_L2) << ','
                << fmt12(r.reference.mu1) << ',' << fmt12(r.reference.mean_k2) << '\n';
        }
        break;
    case OutputFormat::Json: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({
                {"curve", r.reference.curve},
                {"label", r.reference.label},
                {"computed",
                 {{"fourpi2_L2", round12(r.computed[0])}, {"mu1", round12(r.computed[1])},
                  {"mean_k2", round12(r.computed[2])}}},
                {"reference",
                 {{"fourpi2_L2", r.reference.four_pi2_over_L2}, {"mu1", r.reference.mu1},
                  {"mean_k2", r.reference.mean_k2}}},
                {"deviation",
                 {{"fourpi2_L2", round12(r.deviation[0])}, {"mu1", round12(r.deviation[1])},
                  {"mean_k2", round12(r.deviation[2])}}},
                {"within_tolerance", r.all_within()},
                {"theorems_hold", r.report.theorems_hold()},
            });
        }
        out << nlohmann::json{{"rows", arr},
                              {"tolerances", {{"fourpi2_L2", kTableTolFourPi2}, {"mu1", kTableTolMu1},
                                              {"mean_k2", kTableTolMeanK2}}}}
                   .dump(2)
            << '\n';
        break;
    }
    case OutputFormat::Text: {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-18s %14s %14s %14s   %10s %10s %10s  %s\n", "curve", "4pi^2/L^2", "mu1",
                      "mean k^2", "dev", "dev", "dev", "ok");
        out << buf;
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%-18s %14.9g %14.9g %14.9g   %10.3e %10.3e %10.3e  %s\n",
                          r.reference.curve, r.computed[0], r.computed[1], r.computed[2], r.deviation[0],
                          r.deviation[1], r.deviation[2], r.all_within() ? "yes" : "NO");
            out << buf;
            std::snprintf(buf, sizeof buf, "%-18s %14.9g %14.9g %14.9g\n", "  reference",
                          r.reference.four_pi2_over_L2, r.reference.mu1, r.reference.mean_k2);
            out << buf;
        }
        break;
    }
    }
    return out.str();
}

struct DiracReport {
    double L = 0.0;
    double A = 0.0;
    int m = 1;
    TorusLattice lattice;
    DiracMinimum minimum;
    double four_pi2_over_L2 = 0.0;
    bool admissible = false;  // 4πA − A² ≤ L²
};

inline DiracReport make_dirac_report(double L, double A, int m) {
    DiracReport d;
    d.L = L;
    d.A = A;
    d.m = m;
    d.lattice = hopf_lattice(L, A, m);
    d.minimum = dirac_minimum(L, A, m);
    d.four_pi2_over_L2 = four_pi2_over(L);
    d.admissible = 4.0 * std::numbers::pi * A - A * A <= L * L * (1.0 + 1e-9);
    return d;
}

inline std::string format_dirac(const DiracReport& d, OutputFormat fmt) {
    std::ostringstream out;
    const auto& lat = d.lattice;
    switch (fmt) {
    case OutputFormat::Json: {
        auto vec = [](Vec2 v) { return nlohmann::json::array({round12(v.x), round12(v.y)}); };
        nlohmann::json j = {
            {"L", round12(d.L)},
            {"A", round12(d.A)},
            {"m", d.m},
            {"lattice",
             {{"v1", vec(lat.v1)}, {"v2", vec(lat.v2)}, {"theta", round12(lat.theta)},
              {"dual1", vec(lat.dual1)}, {"dual2", vec(lat.dual2)},
              {"spin", nlohmann::json::array({lat.spin.eps1, lat.spin.eps2})}}},
            {"minimum", round12(d.minimum.value)},
            {"argmin", nlohmann::json::array({d.minimum.k, d.minimum.l})},
            {"fourpi2_L2", round12(d.four_pi2_over_L2)},
            {"admissible", d.admissible},
        };
        out << j.dump(2) << '\n';
        break;
    }
    case OutputFormat::Csv:
        out << "L,A,m,v1x,v1y,v2x,v2y,dual1x,dual1y,dual2x,dual2y,minimum,k,l,fourpi2_L2,admissible\n";
        out << fmt12(d.L) << ',' << fmt12(d.A) << ',' << d.m << ',' << fmt12(lat.v1.x) << ',' << fmt12(lat.v1.y)
            << ',' << fmt12(lat.v2.x) << ',' << fmt12(lat.v2.y) << ',' << fmt12(lat.dual1.x) << ','
            << fmt12(lat.dual1.y) << ',' << fmt12(lat.dual2.x) << ',' << fmt12(lat.dual2.y) << ','
            << fmt12(d.minimum.value) << ',' << d.minimum.k << ',' << d.minimum.l << ','
            << fmt12(d.four_pi2_over_L2) << ',' << (d.admissible ? "true" : "false") << '\n';
        break;
    case OutputFormat::Text:
        out << "L: " << fmt12(d.L) << "\nA: " << fmt12(d.A) << "\nm: " << d.m << '\n';
        out << "v1: (" << fmt12(lat.v1.x) << ", " << fmt12(lat.v1.y) << ")\n";
        out << "v2: (" << fmt12(lat.v2.x) << ", " << fmt12(lat.v2.y) << ")\n";
        out << "dual1: (" << fmt12(lat.dual1.x) << ", " << fmt12(lat.dual1.y) << ")\n";
        out << "dual2: (" << fmt12(lat.dual2.x) << ", " << fmt12(lat.dual2.y) << ")\n";
        out << "spin: (" << lat.spin.eps1 << ", " << lat.spin.eps2 << ")\n";
        out << "minimum: " << fmt12(d.minimum.value) << " at (k, l) = (" << d.minimum.k << ", " << d.minimum.l
            << ")\n";
        out << "4pi^2/L^2: " << fmt12(d.four_pi2_over_L2) << '\n';
        out << "admissible: " << (d.admissible ? "true" : "false") << '\n';
        break;
    }
    return out.str();
}

} // namespace curvspec
