// mi-spectra: command-line driver for the modulational-instability
// library. Reads a JSON run configuration, dispatches one subcommand
// (check / stokes / wb / spectrum / hill / compare / sweep), and writes
// CSV, JSON, and SVG artifacts into the output directory.
//
// Exit status 0 on success; nonzero with a single machine-readable
// JSON object {"error": {"type", "message"}} on standard output
// otherwise.

#include <CLI11.hpp>
#include <json.hpp>

#include <mi/analytic.hpp>
#include <mi/error.hpp>
#include <mi/hill.hpp>
#include <mi/io.hpp>
#include <mi/stokes.hpp>
#include <mi/symbol.hpp>
#include <mi/verify.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Error in configuration handling (missing file, bad JSON, missing
/// keys) as opposed to a failure inside the numerical modules.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string symbol;
    int N = 2;
    int alpha = 1;
    double rho = 1.0;
    double a = 0.0;
    int stokes_order = 9;
    mi::HillConfig hill;

    std::string outputs = ".";
    std::set<std::string> emit = {"csv", "json", "svg"};

    bool has_sweep = false;
    double sweep_rho_min = 0.0, sweep_rho_max = 0.0;
    int sweep_count = 0;

    std::vector<RunConfig> waves; // combo configurations
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON (" + path +
                          "): " + e.what());
    }
}

RunConfig parse_wave(const json& j) {
    RunConfig c;
    try {
        c.symbol = j.at("symbol").get<std::string>();
        c.N = j.at("N").get<int>();
        c.alpha = j.at("alpha").get<int>();
        c.rho = j.at("rho").get<double>();
        c.a = j.value("a", 0.0);
        c.stokes_order = j.value("stokes_order", 9);
        if (j.contains("hill")) {
            const json& h = j.at("hill");
            c.hill.fourier_modes = h.value("fourier_modes", 5);
            c.hill.mu_grid.min = h.value("mu_min", -0.5);
            c.hill.mu_grid.max = h.value("mu_max", 0.5);
            c.hill.mu_grid.count = h.value("mu_count", 201);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.hill.stokes_order = c.stokes_order;
    c.hill.amplitude = c.a;
    return c;
}

RunConfig parse_config(const json& j) {
    RunConfig c;
    if (j.contains("waves")) {
        if (!j.at("waves").is_array() || j.at("waves").empty())
            throw ConfigError("'waves' must be a nonempty array");
        for (const json& w : j.at("waves")) c.waves.push_back(parse_wave(w));
    } else {
        c = parse_wave(j);
    }
    try {
        c.outputs = j.value("outputs", ".");
        if (j.contains("emit")) {
            c.emit.clear();
            for (const json& e : j.at("emit"))
                c.emit.insert(e.get<std::string>());
        }
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            c.has_sweep = true;
            c.sweep_rho_min = s.at("rho_min").get<double>();
            c.sweep_rho_max = s.at("rho_max").get<double>();
            c.sweep_count = s.at("count").get<int>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    return c;
}

mi::WaveParams params_of(const RunConfig& c) {
    mi::WaveParams p{mi::DispersionSymbol::make(c.symbol), c.N, c.alpha,
                     c.rho};
    mi::validate(p);
    return p;
}

std::vector<double> floquet_grid(const mi::MuGrid& g) {
    std::vector<double> out;
    out.reserve(std::size_t(g.count));
    for (int i = 0; i < g.count; ++i) {
        if (g.count == 1)
            out.push_back(g.min);
        else if (i == g.count - 1)
            out.push_back(g.max);
        else
            out.push_back(g.min + (g.max - g.min) * double(i) /
                                      double(g.count - 1));
    }
    return out;
}

bool want(const RunConfig& c, const char* format) {
    return c.emit.count(format) > 0;
}

// ------------------------------------------------------- subcommands

void cmd_check(const RunConfig& c, const fs::path& out) {
    const mi::WaveParams p = params_of(c);
    const mi::HypothesisReport rep = mi::check_hypotheses(p.symbol, c.rho);
    if (want(c, "json"))
        mi::write_json(out / "hypotheses.json", mi::json_of(rep));
    if (!rep.pass()) {
        std::string msg = "hypotheses not satisfied:";
        if (!rep.h1_even_ok) msg += " H1 (symbol not even)";
        if (!rep.h1_normalized_ok) msg += " H1 (j(0) != 1)";
        if (!rep.mean_mode_ok) msg += " mean mode (j(rho) = 1)";
        if (!rep.h3_resonances.empty())
            msg += " H3 (" + std::to_string(rep.h3_resonances.size()) +
                   " resonant harmonics)";
        throw mi::HypothesisError(msg);
    }
    std::cout << "hypotheses: pass (symbol " << p.symbol.text() << ", rho "
              << c.rho << ")\n";
}

void cmd_stokes(const RunConfig& c, const fs::path& out) {
    const mi::WaveParams p = params_of(c);
    const mi::StokesExpansion ex = mi::expand_stokes(p, c.stokes_order);
    if (want(c, "json")) mi::write_json(out / "stokes.json", mi::json_of(ex));
    if (want(c, "csv")) mi::write_wave_csv(out / "wave.csv", ex, c.a);
    std::cout << "stokes expansion: order " << ex.order() << ", speed c("
              << c.a << ") = " << ex.speed(c.a) << "\n";
}

void cmd_wb(const RunConfig& c, const fs::path& out) {
    const mi::WaveParams p = params_of(c);
    const mi::StabilityReport rep = mi::stability_report(p, c.a);
    if (want(c, "json")) mi::write_json(out / "wb.json", mi::json_of(rep));
    std::cout << "verdict: " << rep.verdict << " (delta " << rep.delta
              << ")\n";
}

/// SVG series for the two signed branches of a figure-eight, drawn in
/// the (Re, Im) = (p, q) plane.
void append_lemniscate_series(std::vector<mi::SvgSeries>& curves,
                              const mi::Lemniscate& lem,
                              const std::string& label) {
    mi::SvgSeries upper{label, {}};
    mi::SvgSeries lower{"", {}};
    for (const auto& s : lem.samples) {
        if (s.branch > 0)
            upper.points.emplace_back(s.p, s.q);
        else
            lower.points.emplace_back(s.p, s.q);
    }
    curves.push_back(std::move(upper));
    curves.push_back(std::move(lower));
}

void cmd_spectrum_single(const RunConfig& c, const fs::path& out) {
    const mi::WaveParams p = params_of(c);
    const mi::SpectralCurve curve =
        mi::eigencurves(p, c.a, floquet_grid(c.hill.mu_grid));
    if (want(c, "csv")) mi::write_spectrum_csv(out / "spectrum.csv", curve);

    const mi::StabilityReport rep = mi::stability_report(p, c.a);
    if (rep.delta > 0.0 && c.a > 0.0) {
        const mi::Lemniscate lem = mi::lemniscate(p, c.a, 201);
        if (want(c, "csv"))
            mi::write_lemniscate_csv(out / "lemniscate.csv", lem);
        if (want(c, "svg")) {
            std::vector<mi::SvgSeries> curves;
            append_lemniscate_series(curves, lem, "analytic figure-eight");
            mi::write_overlay_svg(out / "overlay.svg", curves, {}, "",
                                  "Re lambda", "Im lambda",
                                  "unstable spectrum near the origin");
        }
        std::cout << "eigencurves: " << curve.samples.size()
                  << " samples; figure-eight q_max " << rep.q_max
                  << ", width " << rep.width << "\n";
    } else {
        std::cout << "eigencurves: " << curve.samples.size()
                  << " samples; no unstable window (" << rep.verdict
                  << ")\n";
    }
}

void cmd_spectrum_combo(const RunConfig& c, const fs::path& out) {
    std::vector<mi::SvgSeries> curves;
    std::set<std::string> used;
    for (std::size_t i = 0; i < c.waves.size(); ++i) {
        const RunConfig& wc = c.waves[i];
        const mi::WaveParams p = params_of(wc);
        const mi::Lemniscate lem = mi::lemniscate(p, wc.a, 201);
        std::string stem = "lemniscate_N" + std::to_string(wc.N);
        if (!used.insert(stem).second)
            stem += "_" + std::to_string(i + 1);
        if (want(c, "csv"))
            mi::write_lemniscate_csv(out / (stem + ".csv"), lem);
        append_lemniscate_series(curves, lem,
                                 "N=" + std::to_string(wc.N));
    }
    if (want(c, "svg"))
        mi::write_overlay_svg(out / "overlay.svg", curves, {}, "",
                              "Re lambda", "Im lambda",
                              "figure-eight family");
    std::cout << "combined lemniscates: " << c.waves.size() << " waves\n";
}

void cmd_hill(const RunConfig& c, const fs::path& out, int threads) {
    const mi::WaveParams p = params_of(c);
    const mi::StokesExpansion ex = mi::expand_stokes(p, c.stokes_order);
    const mi::HillSpectrum spec = mi::spectrum(ex, c.hill, threads);
    if (spec.truncation_warning)
        std::cerr << "warning: 2*fourier_modes < N*stokes_order; the "
                     "potential is truncated\n";
    if (want(c, "csv")) mi::write_hill_csv(out / "hill.csv", spec);
    std::cout << "hill spectrum: " << spec.per_mu.size() << " slices x "
              << (spec.per_mu.empty() ? 0
                                      : spec.per_mu.front().eigenvalues.size())
              << " eigenvalues\n";
}

void cmd_compare(const RunConfig& c, const fs::path& out, int threads) {
    const mi::WaveParams p = params_of(c);
    const mi::StokesExpansion ex = mi::expand_stokes(p, c.stokes_order);
    const mi::ComparisonReport rep = mi::compare(ex, c.hill, threads);
    if (want(c, "json"))
        mi::write_json(out / "compare.json", mi::json_of(rep));

    if (want(c, "svg")) {
        // overlay: closed-form branches as curves, Hill unstable points
        // as dots (recomputed with the same grid and filters)
        const mi::HillSpectrum spec = mi::spectrum(ex, c.hill, threads);
        const double radius = rep.q_max > 0.0 ? 10.0 * rep.q_max : 1.0;
        const auto cloud = mi::unstable_points(spec, 1e-12, radius);
        std::vector<double> grid;
        grid.reserve(spec.per_mu.size());
        for (const auto& s : spec.per_mu) grid.push_back(s.mu);
        const mi::SpectralCurve curve = mi::eigencurves(p, c.a, grid);
        mi::SvgSeries plus{"analytic", {}};
        mi::SvgSeries minus{"", {}};
        for (const auto& s : curve.samples) {
            plus.points.emplace_back(s.lambda_plus.real(),
                                     s.lambda_plus.imag());
            minus.points.emplace_back(s.lambda_minus.real(),
                                      s.lambda_minus.imag());
        }
        std::vector<std::pair<double, double>> dots;
        dots.reserve(cloud.size());
        for (const auto& lam : cloud)
            dots.emplace_back(lam.real(), lam.imag());
        mi::write_overlay_svg(out / "overlay.svg", {plus, minus}, dots,
                              "hill spectrum", "Re lambda", "Im lambda",
                              "closed form vs hill spectrum");
    }
    std::cout << "comparison: " << (rep.pass ? "PASS" : "FAIL")
              << " (hausdorff/q_max " << rep.hausdorff_rel_to_qmax
              << ", growth rel err " << rep.growth_rate_rel_err
              << ", symmetry " << rep.symmetry_residual << ")\n";
}

void cmd_sweep(const RunConfig& c, const fs::path& out) {
    if (!c.has_sweep)
        throw ConfigError("sweep subcommand needs a 'sweep' config block "
                          "with rho_min, rho_max, count");
    if (c.sweep_count < 2)
        throw ConfigError("sweep count must be at least 2");
    if (!(c.sweep_rho_min > 0.0) || !(c.sweep_rho_max > c.sweep_rho_min))
        throw ConfigError("sweep needs 0 < rho_min < rho_max");

    const mi::WaveParams base = params_of(c);
    mi::SweepResult sweep(base, c.a);
    sweep.grid.reserve(std::size_t(c.sweep_count));
    for (int i = 0; i < c.sweep_count; ++i) {
        const double rho =
            i == c.sweep_count - 1
                ? c.sweep_rho_max
                : c.sweep_rho_min + (c.sweep_rho_max - c.sweep_rho_min) *
                                        double(i) /
                                        double(c.sweep_count - 1);
        mi::SweepPoint pt;
        pt.rho = rho;
        try {
            mi::WaveParams p = base;
            p.rho = rho;
            const mi::AnalyticCoefficients coef = mi::coefficients(p);
            pt.delta = coef.delta;
            pt.verdict =
                coef.delta > 0.0 ? "unstable" : "stable-at-this-order";
        } catch (const mi::Error&) {
            pt.verdict = "resonant";
        }
        sweep.grid.push_back(std::move(pt));
    }
    for (std::size_t i = 0; i + 1 < sweep.grid.size(); ++i) {
        const auto& lo = sweep.grid[i];
        const auto& hi = sweep.grid[i + 1];
        if (!std::isfinite(lo.delta) || !std::isfinite(hi.delta)) continue;
        if (lo.delta == 0.0 || lo.delta * hi.delta >= 0.0) continue;
        try {
            sweep.critical_rho.push_back(
                mi::critical_rho(base, lo.rho, hi.rho));
        } catch (const mi::Error&) {
            sweep.critical_rho.push_back(0.5 * (lo.rho + hi.rho));
        }
    }
    if (want(c, "csv")) mi::write_sweep_csv(out / "sweep.csv", sweep);
    if (want(c, "json"))
        mi::write_json(out / "sweep.json", mi::json_of(sweep));
    std::cout << "sweep: " << sweep.grid.size() << " wavenumbers, "
              << sweep.critical_rho.size() << " sign change(s)";
    for (double r : sweep.critical_rho) std::cout << " rho_c=" << r;
    std::cout << "\n";
}

int emit_error(const std::string& type, const std::string& message) {
    const json j = {{"error", {{"type", type}, {"message", message}}}};
    std::cout << j.dump() << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modulational instability of small periodic waves of "
                 "generalized KdV equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    int threads = 1;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "JSON run configuration file")
            ->required();
        sub->add_option("--out", out_override,
                        "output directory (overrides the config)")
            ->envname("MI_SPECTRA_OUT");
        sub->add_option("--threads", threads,
                        "worker threads for Floquet slices")
            ->envname("MI_SPECTRA_THREADS");
    };

    CLI::App* c_check =
        app.add_subcommand("check", "sample the dispersion hypotheses");
    CLI::App* c_stokes =
        app.add_subcommand("stokes", "small-amplitude wave expansion");
    CLI::App* c_wb = app.add_subcommand(
        "wb", "modulational stability index and instability window");
    CLI::App* c_spectrum = app.add_subcommand(
        "spectrum", "closed-form eigenvalue curves and figure-eight");
    CLI::App* c_hill =
        app.add_subcommand("hill", "numerical Bloch-wave spectrum");
    CLI::App* c_compare = app.add_subcommand(
        "compare", "closed form versus Hill spectrum with overlay plot");
    CLI::App* c_sweep = app.add_subcommand(
        "sweep", "stability verdict over a wavenumber grid");
    for (CLI::App* sub :
         {c_check, c_stokes, c_wb, c_spectrum, c_hill, c_compare, c_sweep})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = parse_config(load_json_file(config_path));
        const fs::path out =
            out_override.empty() ? fs::path(cfg.outputs)
                                 : fs::path(out_override);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec)
            throw ConfigError("cannot create output directory: " +
                              out.string());
        if (threads < 1) threads = 1;

        if (!cfg.waves.empty() && !c_spectrum->parsed())
            throw ConfigError(
                "multi-wave configs are only supported by 'spectrum'");

        if (c_check->parsed())
            cmd_check(cfg, out);
        else if (c_stokes->parsed())
            cmd_stokes(cfg, out);
        else if (c_wb->parsed())
            cmd_wb(cfg, out);
        else if (c_spectrum->parsed())
            cfg.waves.empty() ? cmd_spectrum_single(cfg, out)
                              : cmd_spectrum_combo(cfg, out);
        else if (c_hill->parsed())
            cmd_hill(cfg, out, threads);
        else if (c_compare->parsed())
            cmd_compare(cfg, out, threads);
        else if (c_sweep->parsed())
            cmd_sweep(cfg, out);
        return 0;
    } catch (const ConfigError& e) {
        return emit_error("ConfigError", e.what());
    } catch (const mi::ParseError& e) {
        return emit_error("ParseError", e.what());
    } catch (const mi::DomainError& e) {
        return emit_error("DomainError", e.what());
    } catch (const mi::HypothesisError& e) {
        return emit_error("HypothesisError", e.what());
    } catch (const mi::ResonanceError& e) {
        return emit_error("ResonanceError", e.what());
    } catch (const mi::KernelError& e) {
        return emit_error("KernelError", e.what());
    } catch (const mi::ConvergenceError& e) {
        return emit_error("ConvergenceError", e.what());
    } catch (const mi::InvalidArgument& e) {
        return emit_error("InvalidArgument", e.what());
    } catch (const mi::Error& e) {
        return emit_error("Error", e.what());
    } catch (const std::exception& e) {
        return emit_error("InternalError", e.what());
    }
}
