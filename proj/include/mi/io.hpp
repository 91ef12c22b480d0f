#pragma once
// Artifact serialization: CSV tables (RFC-4180-style, LF line endings,
// header row, floats printed in shortest round-trip decimal form so
// reruns are byte-identical and values parse back exactly), JSON
// reports, and a static SVG overlay plot. JSON support comes from
// the nlohmann single header, which the build supplies on the include
// path; only the command-line tool and the test suite consume this
// header.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <mi/analytic.hpp>
#include <mi/error.hpp>
#include <mi/hill.hpp>
#include <mi/stokes.hpp>
#include <mi/symbol.hpp>
#include <mi/verify.hpp>

namespace mi {

/// Shortest decimal form that round-trips to the same double; used for
/// every numeric CSV field so that reruns are byte-identical.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::ofstream open_artifact(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot open output file: " + p.string());
    return out;
}

inline std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------- CSV

/// Wave profile over one period: columns z, eta(a; z).
inline void write_wave_csv(const std::filesystem::path& path,
                           const StokesExpansion& ex, double a,
                           int samples = 256) {
    if (samples < 2)
        throw InvalidArgument("wave profile needs at least 2 samples");
    auto out = detail::open_artifact(path);
    const CosineSeries w = ex.wave(a);
    const double two_pi = 2.0 * 3.14159265358979323846;
    out << "z,eta\n";
    for (int i = 0; i < samples; ++i) {
        const double z = two_pi * double(i) / double(samples);
        out << fmt_double(z) << ',' << fmt_double(w(z)) << '\n';
    }
}

/// Closed-form eigenvalue branches per Floquet exponent.
inline void write_spectrum_csv(const std::filesystem::path& path,
                               const SpectralCurve& curve) {
    auto out = detail::open_artifact(path);
    out << "mu,re_plus,im_plus,re_minus,im_minus,re_zero,im_zero\n";
    for (const auto& s : curve.samples) {
        out << fmt_double(s.mu) << ',' << fmt_double(s.lambda_plus.real()) << ','
            << fmt_double(s.lambda_plus.imag()) << ','
            << fmt_double(s.lambda_minus.real()) << ','
            << fmt_double(s.lambda_minus.imag()) << ','
            << fmt_double(s.lambda0.real()) << ',' << fmt_double(s.lambda0.imag())
            << '\n';
    }
}

/// Closed-form figure-eight samples: q is the imaginary part, p the
/// (signed) real part, branch the sign of the chosen square root.
inline void write_lemniscate_csv(const std::filesystem::path& path,
                                 const Lemniscate& lem) {
    auto out = detail::open_artifact(path);
    out << "q,p,branch\n";
    for (const auto& s : lem.samples)
        out << fmt_double(s.q) << ',' << fmt_double(s.p) << ',' << s.branch << '\n';
}

/// Bloch eigenvalues: one row per eigenvalue per Floquet slice.
inline void write_hill_csv(const std::filesystem::path& path,
                           const HillSpectrum& spec) {
    auto out = detail::open_artifact(path);
    out << "mu,re,im\n";
    for (const auto& slice : spec.per_mu)
        for (const auto& lam : slice.eigenvalues)
            out << fmt_double(slice.mu) << ',' << fmt_double(lam.real()) << ','
                << fmt_double(lam.imag()) << '\n';
}

/// One stability verdict on a wavenumber grid.
struct SweepPoint {
    double rho = 0;
    double delta = std::numeric_limits<double>::quiet_NaN();
    std::string verdict; // "unstable" | "stable-at-this-order" | "resonant"
};

/// Verdict grid plus the refined sign-change locations of delta.
struct SweepResult {
    explicit SweepResult(WaveParams p, double amplitude)
        : params(std::move(p)), a(amplitude) {}
    WaveParams params;
    double a = 0;
    std::vector<SweepPoint> grid;
    std::vector<double> critical_rho;
};

inline void write_sweep_csv(const std::filesystem::path& path,
                            const SweepResult& sweep) {
    auto out = detail::open_artifact(path);
    out << "rho,delta,verdict\n";
    for (const auto& g : sweep.grid)
        out << fmt_double(g.rho) << ',' << fmt_double(g.delta) << ',' << g.verdict
            << '\n';
}

// --------------------------------------------------------------- JSON

inline nlohmann::json json_of(const WaveParams& p) {
    return {{"symbol", p.symbol.text()},
            {"N", p.N},
            {"alpha", p.alpha},
            {"rho", p.rho}};
}

inline nlohmann::json json_of(const HypothesisReport& rep) {
    nlohmann::json h3 = nlohmann::json::array();
    for (const auto& [n, gap] : rep.h3_resonances)
        h3.push_back({{"n", n}, {"gap", gap}});
    nlohmann::json j = {{"symbol", rep.symbol},
                        {"rho", rep.rho},
                        {"n_max", rep.n_max},
                        {"tolerance", rep.tolerance},
                        {"h1_even_ok", rep.h1_even_ok},
                        {"h1_normalized_ok", rep.h1_normalized_ok},
                        {"mean_mode_ok", rep.mean_mode_ok},
                        {"h3_resonances", std::move(h3)},
                        {"pass", rep.pass()}};
    if (rep.growth_sigma)
        j["growth_sigma"] = *rep.growth_sigma;
    else
        j["growth_sigma"] = nullptr;
    return j;
}

inline nlohmann::json json_of(const StokesExpansion& ex) {
    nlohmann::json eta = nlohmann::json::array();
    for (const auto& series : ex.eta) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (int n = 0; n <= series.max_mode(); ++n)
            coeffs.push_back(series.coeff(n));
        eta.push_back(std::move(coeffs));
    }
    nlohmann::json j = json_of(ex.params);
    j["order"] = ex.order();
    j["c"] = ex.c;
    j["eta"] = std::move(eta);
    return j;
}

inline nlohmann::json json_of(const StabilityReport& rep) {
    nlohmann::json j = json_of(rep.params);
    j["a"] = rep.a;
    j["parity"] = to_string(rep.parity);
    j["delta"] = rep.delta;
    j["verdict"] = rep.verdict;
    j["mu_star"] = rep.mu_star;
    j["q_max"] = rep.q_max;
    j["width"] = rep.width;
    return j;
}

inline nlohmann::json json_of(const ComparisonReport& rep) {
    nlohmann::json j = json_of(rep.params);
    j["a"] = rep.a;
    j["analytic_unstable"] = rep.analytic_unstable;
    j["hill_unstable"] = rep.hill_unstable;
    j["analytic_points"] = rep.analytic_points;
    j["hill_points"] = rep.hill_points;
    j["q_max"] = rep.q_max;
    j["hausdorff_abs"] = rep.hausdorff_abs;
    j["hausdorff_rel_to_qmax"] = rep.hausdorff_rel_to_qmax;
    j["growth_rate_analytic"] = rep.growth_rate_analytic;
    j["growth_rate_numeric"] = rep.growth_rate_numeric;
    j["growth_rate_rel_err"] = rep.growth_rate_rel_err;
    j["symmetry_residual"] = rep.symmetry_residual;
    j["shape_ok"] = rep.shape_ok;
    j["growth_ok"] = rep.growth_ok;
    j["symmetry_ok"] = rep.symmetry_ok;
    j["pass"] = rep.pass;
    return j;
}

inline nlohmann::json json_of(const SweepResult& sweep) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& g : sweep.grid)
        grid.push_back(
            {{"rho", g.rho}, {"delta", g.delta}, {"verdict", g.verdict}});
    nlohmann::json j = {{"symbol", sweep.params.symbol.text()},
                        {"N", sweep.params.N},
                        {"alpha", sweep.params.alpha},
                        {"a", sweep.a},
                        {"grid", std::move(grid)},
                        {"critical_rho", sweep.critical_rho}};
    return j;
}

inline void write_json(const std::filesystem::path& path,
                       const nlohmann::json& j) {
    auto out = detail::open_artifact(path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- SVG

/// One labeled polyline in data coordinates (x = Re, y = Im).
struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Static overlay plot: curves drawn as blue polylines, dots as red
/// circles. Pure presentation; no numeric artifact depends on it.
inline void write_overlay_svg(
    const std::filesystem::path& path, const std::vector<SvgSeries>& curves,
    const std::vector<std::pair<double, double>>& dots,
    const std::string& dots_label = "",
    const std::string& x_label = "Re lambda",
    const std::string& y_label = "Im lambda",
    const std::string& title = "") {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto grow = [&](const std::pair<double, double>& pt) {
        xmin = std::min(xmin, pt.first);
        xmax = std::max(xmax, pt.first);
        ymin = std::min(ymin, pt.second);
        ymax = std::max(ymax, pt.second);
    };
    for (const auto& c : curves)
        for (const auto& pt : c.points) grow(pt);
    for (const auto& pt : dots) grow(pt);
    if (!(xmin <= xmax)) {
        xmin = -1.0;
        xmax = 1.0;
        ymin = -1.0;
        ymax = 1.0;
    }
    if (xmax - xmin <= 0.0) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax - ymin <= 0.0) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const double xpad = 0.08 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    const double W = 640, H = 480;
    const double L = 72, R = 24, T = 30, B = 48;
    auto sx = [&](double x) {
        return L + (x - xmin) / (xmax - xmin) * (W - L - R);
    };
    auto sy = [&](double y) {
        return T + (ymax - y) / (ymax - ymin) * (H - T - B);
    };
    using detail::fmt2;
    using detail::xml_escape;

    auto out = detail::open_artifact(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"480\" viewBox=\"0 0 640 480\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" "
           "fill=\"white\"/>\n";
    out << "  <rect x=\"" << fmt2(L) << "\" y=\"" << fmt2(T) << "\" width=\""
        << fmt2(W - L - R) << "\" height=\"" << fmt2(H - T - B)
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    if (xmin < 0.0 && 0.0 < xmax)
        out << "  <line x1=\"" << fmt2(sx(0)) << "\" y1=\"" << fmt2(T)
            << "\" x2=\"" << fmt2(sx(0)) << "\" y2=\"" << fmt2(H - B)
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    if (ymin < 0.0 && 0.0 < ymax)
        out << "  <line x1=\"" << fmt2(L) << "\" y1=\"" << fmt2(sy(0))
            << "\" x2=\"" << fmt2(W - R) << "\" y2=\"" << fmt2(sy(0))
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

    for (const auto& c : curves) {
        out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" "
               "stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& pt : c.points) {
            if (!first) out << ' ';
            first = false;
            out << fmt2(sx(pt.first)) << ',' << fmt2(sy(pt.second));
        }
        out << "\"/>\n";
    }
    for (const auto& pt : dots)
        out << "  <circle cx=\"" << fmt2(sx(pt.first)) << "\" cy=\""
            << fmt2(sy(pt.second))
            << "\" r=\"2.5\" fill=\"#d62728\" fill-opacity=\"0.75\"/>\n";

    // annotations
    out << "  <text x=\"" << fmt2((L + W - R) / 2) << "\" y=\""
        << fmt2(H - 12)
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    out << "  <text x=\"18\" y=\"" << fmt2((T + H - B) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt2((T + H - B) / 2) << ")\">" << xml_escape(y_label)
        << "</text>\n";
    if (!title.empty())
        out << "  <text x=\"" << fmt2((L + W - R) / 2)
            << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
               "text-anchor=\"middle\">"
            << xml_escape(title) << "</text>\n";

    double legend_y = T + 16;
    for (const auto& c : curves) {
        if (c.label.empty()) continue;
        out << "  <line x1=\"" << fmt2(W - R - 150) << "\" y1=\""
            << fmt2(legend_y - 4) << "\" x2=\"" << fmt2(W - R - 126)
            << "\" y2=\"" << fmt2(legend_y - 4)
            << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << fmt2(W - R - 120) << "\" y=\""
            << fmt2(legend_y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << xml_escape(c.label) << "</text>\n";
        legend_y += 16;
    }
    if (!dots.empty() && !dots_label.empty()) {
        out << "  <circle cx=\"" << fmt2(W - R - 138) << "\" cy=\""
            << fmt2(legend_y - 4)
            << "\" r=\"2.5\" fill=\"#d62728\" fill-opacity=\"0.75\"/>\n";
        out << "  <text x=\"" << fmt2(W - R - 120) << "\" y=\""
            << fmt2(legend_y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << xml_escape(dots_label) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace mi
