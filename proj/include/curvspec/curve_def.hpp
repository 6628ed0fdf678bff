#pragma once

// Closed parametric curves given by coordinate expressions, and the plain-text
// curve file format:
//
//   # comment
//   name   = "lemniscate"
//   x      = "sin(t)"
//   y      = "cos(t)*sin(t)"
//   z      = "0"            (optional)
//   domain = "0 2*pi"
//
// Domain entries are constant expressions separated by whitespace.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "curvspec/error.hpp"
#include "curvspec/expr.hpp"

namespace curvspec {

struct CurveDef {
    std::string name;
    std::vector<Expr> coords;  // x, y[, z]
    double t0 = 0.0;
    double t1 = 2.0 * std::numbers::pi;

    std::size_t dimension() const noexcept { return coords.size(); }
    double period() const noexcept { return t1 - t0; }
};

inline constexpr double kClosureTolerance = 1e-9;
inline constexpr double kRegularityThreshold = 1e-8;
inline constexpr std::size_t kRegularitySamples = 8192;

/// Builds a curve from coordinate source strings. Does not validate closure.
inline CurveDef make_curve(std::string name, const std::vector<std::string>& coords, double t0,
                           double t1) {
    if (coords.size() != 2 && coords.size() != 3) {
        throw DomainError("a curve needs 2 or 3 coordinate functions");
    }
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw DomainError("curve domain must satisfy t0 < t1");
    }
    CurveDef c;
    c.name = std::move(name);
    for (const auto& src : coords) c.coords.push_back(parse_expr(src));
    c.t0 = t0;
    c.t1 = t1;
    return c;
}

/// Checks closure (values and first two derivatives agree at both ends) and
/// regularity (|γ'| ≥ 1e-8 on a dense sample). Throws GeometryError.
inline void validate_curve(const CurveDef& c) {
    if (c.dimension() != 2 && c.dimension() != 3) {
        throw GeometryError("curve '" + c.name + "' must have 2 or 3 coordinates");
    }
    if (!(c.t1 > c.t0)) throw GeometryError("curve '" + c.name + "' has an empty domain");

    static constexpr const char* axis = "xyz";
    std::vector<CompiledExpr> d1;
    for (std::size_t i = 0; i < c.dimension(); ++i) {
        Expr e = c.coords[i];
        for (int order = 0; order <= 2; ++order) {
            const double a = evaluate(e, c.t0);
            const double b = evaluate(e, c.t1);
            if (std::abs(a - b) > kClosureTolerance * std::max(1.0, std::abs(a))) {
                std::ostringstream msg;
                msg << "curve '" << c.name << "' is not closed: derivative " << order << " of "
                    << axis[i] << " differs by " << std::abs(a - b) << " between the domain ends";
                throw GeometryError(msg.str());
            }
            e = differentiate(e);
            if (order == 0) d1.emplace_back(e);
        }
    }
    const double h = c.period() / static_cast<double>(kRegularitySamples);
    for (std::size_t k = 0; k < kRegularitySamples; ++k) {
        const double t = c.t0 + h * static_cast<double>(k);
        double speed2 = 0.0;
        for (const auto& f : d1) {
            const double v = f(t);
            speed2 += v * v;
        }
        if (std::sqrt(speed2) < kRegularityThreshold) {
            std::ostringstream msg;
            msg << "curve '" << c.name << "' is not regular: |gamma'| < " << kRegularityThreshold
                << " at t = " << t;
            throw GeometryError(msg.str());
        }
    }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_constant(std::string_view src, std::size_t line) {
    Expr e;
    try {
        e = parse_expr(src);
    } catch (const ParseError& err) {
        throw ParseError(std::string("bad domain bound: ") + err.what(), line);
    }
    if (!is_constant_expr(e)) throw ParseError("domain bound must not depend on t", line);
    return evaluate(e, 0.0);
}

} // namespace detail

/// Parses the text of a curve file. ParseError positions are 1-based line numbers.
inline CurveDef parse_curve_file(std::string_view text) {
    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        // '#' outside quotes starts a comment.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = \"value\"", line_no);
        const std::string key(detail::trim(line.substr(0, eq)));
        std::string_view value = detail::trim(line.substr(eq + 1));
        if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
            throw ParseError("value for '" + key + "' must be double-quoted", line_no);
        }
        value = value.substr(1, value.size() - 2);
        if (key != "name" && key != "x" && key != "y" && key != "z" && key != "domain") {
            throw ParseError("unknown key '" + key + "'", line_no);
        }
        if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        kv[key] = {std::string(value), line_no};
    }

    for (const char* required : {"name", "x", "y", "domain"}) {
        if (!kv.count(required)) throw ParseError(std::string("missing key '") + required + "'", line_no);
    }

    CurveDef c;
    c.name = kv["name"].first;
    for (const char* axis : {"x", "y", "z"}) {
        auto it = kv.find(axis);
        if (it == kv.end()) continue;
        try {
            c.coords.push_back(parse_expr(it->second.first));
        } catch (const ParseError& err) {
            throw ParseError(std::string(axis) + ": " + err.what(), it->second.second);
        }
    }

    std::istringstream dom(kv["domain"].first);
    std::vector<std::string> parts;
    for (std::string p; dom >> p;) parts.push_back(p);
    const std::size_t dline = kv["domain"].second;
    if (parts.size() != 2) throw ParseError("domain must hold two bounds \"t0 t1\"", dline);
    c.t0 = detail::parse_constant(parts[0], dline);
    c.t1 = detail::parse_constant(parts[1], dline);
    if (!(c.t1 > c.t0)) throw ParseError("domain must satisfy t0 < t1", dline);
    return c;
}

inline CurveDef load_curve_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open curve file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_curve_file(ss.str());
    } catch (const ParseError& err) {
        throw ParseError(path.string() + ": " + err.what(), err.position());
    }
}

/// Serializes a curve back to the file format.
inline std::string format_curve_file(const CurveDef& c) {
    std::ostringstream out;
    out << "name = \"" << c.name << "\"\n";
    static constexpr const char* axis[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < c.coords.size(); ++i) {
        out << axis[i] << " = \"" << to_string(c.coords[i]) << "\"\n";
    }
    out << "domain = \"" << detail::format_number(c.t0) << ' ' << detail::format_number(c.t1) << "\"\n";
    return out.str();
}

} // namespace curvspec
