#pragma once

#include <mi/error.hpp>
#include <mi/series.hpp>
#include <mi/stokes.hpp>
#include <mi/symbol.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mi {

struct MuGrid {
    double min = -0.5;
    double max = 0.5;
    int count = 1;
};

struct HillConfig {
    int fourier_modes = 5; // M: matrix dimension 2M+1
    MuGrid mu_grid;
    int stokes_order = 9;
    double amplitude = 0.0;
};

inline void validate(const HillConfig& c) {
    if (c.fourier_modes < 1)
        throw InvalidArgument("fourier_modes must be >= 1");
    if (c.mu_grid.count < 1)
        throw InvalidArgument("floquet grid count must be >= 1");
    if (!(c.mu_grid.min <= c.mu_grid.max))
        throw InvalidArgument("floquet grid needs min <= max");
    if (c.amplitude < 0.0) throw InvalidArgument("amplitude must be >= 0");
    if (c.stokes_order < 1)
        throw InvalidArgument("stokes_order must be >= 1");
}

/// Complex Fourier coefficients w_p, |p| <= max_mode, of eta(a)^(N-1),
/// obtained by exact convolution powers of the summed cosine series.
/// Real even waves give real, symmetric coefficients: w_{-p} = w_p, Im = 0.
struct Potential {
    int max_mode = 0;
    std::vector<std::complex<double>> w; // index p + max_mode
    double tail_fraction = 0.0;          // discarded / total mode energy
    bool tail_warning = false;           // tail_fraction > 1e-12

    std::complex<double> at(int p) const {
        return p >= -max_mode && p <= max_mode
                   ? w[std::size_t(p + max_mode)]
                   : std::complex<double>(0.0);
    }
};

inline Potential potential_coefficients(const StokesExpansion& exp, double a,
                                        int M) {
    if (M < 0) throw InvalidArgument("mode count must be >= 0");
    const CosineSeries pw = power(exp.wave(a), exp.params.N - 1);
    Potential pot;
    pot.max_mode = M;
    pot.w.assign(2 * std::size_t(M) + 1, std::complex<double>(0.0));
    double kept = 0.0, tail = 0.0;
    for (int n = 0; n <= pw.max_mode(); ++n) {
        const double b = pw.coeff(n);
        const double wp = n == 0 ? b : 0.5 * b;
        const double energy = (n == 0 ? 1.0 : 2.0) * wp * wp;
        if (n <= M) {
            kept += energy;
            pot.w[std::size_t(n + M)] = {wp, 0.0};
            if (n > 0) pot.w[std::size_t(M - n)] = {wp, 0.0};
        } else {
            tail += energy;
        }
    }
    const double total = kept + tail;
    pot.tail_fraction = total > 0.0 ? tail / total : 0.0;
    pot.tail_warning = pot.tail_fraction > 1e-12;
    return pot;
}

namespace detail {

inline Eigen::MatrixXcd assemble_bloch(const StokesExpansion& exp,
                                       const Potential& pot, double a,
                                       double mu, int M) {
    const WaveParams& p = exp.params;
    const double c = exp.speed(a);
    const double Na = double(p.N) * double(p.alpha);
    const int dim = 2 * M + 1;
    std::vector<double> jv(std::size_t(dim), 0.0);
    for (int n = -M; n <= M; ++n)
        jv[std::size_t(n + M)] = p.symbol.value(p.rho * (n + mu));
    Eigen::MatrixXcd Q(dim, dim);
    for (int m = -M; m <= M; ++m) {
        const std::complex<double> pref(0.0, m + mu);
        for (int n = -M; n <= M; ++n) {
            std::complex<double> val = -Na * pot.at(m - n);
            if (m == n) val += c - jv[std::size_t(n + M)];
            Q(m + M, n + M) = pref * val;
        }
    }
    return Q;
}

} // namespace detail

/// Truncated Bloch operator in the complex exponential basis, rows/columns
/// indexed -M..M ascending:
///   entry(m, n) = i(m+mu) [ (c(a) - j(rho(n+mu))) delta_mn - N alpha w_{m-n} ].
inline Eigen::MatrixXcd build_matrix(const StokesExpansion& exp, double a,
                                     double mu, int M) {
    if (M < 1) throw InvalidArgument("fourier_modes must be >= 1");
    const Potential pot = potential_coefficients(exp, a, 2 * M);
    return detail::assemble_bloch(exp, pot, a, mu, M);
}

struct HillSlice {
    double mu = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

struct HillSpectrum {
    HillSpectrum(WaveParams p, HillConfig c)
        : params(std::move(p)), config(c) {}

    WaveParams params; // provenance (symbol and wave parameters)
    HillConfig config;
    std::vector<HillSlice> per_mu; // ascending mu, endpoints inclusive
    bool truncation_warning = false;      // M < N * stokes_order / 2
    double potential_tail_fraction = 0.0; // discarded potential energy
};

/// Eigenvalues of the truncated Bloch operator over the Floquet grid.
/// Slices are independent and may be evaluated on `threads` workers; the
/// result is always merged in mu order and is identical to the serial run.
/// Within a slice eigenvalues carry no spectral order; they are sorted
/// lexicographically by (Re, Im) so reruns are reproducible.
inline HillSpectrum spectrum(const StokesExpansion& exp,
                             const HillConfig& cfg, int threads = 1) {
    validate(cfg);
    const int M = cfg.fourier_modes;
    const int count = cfg.mu_grid.count;
    HillSpectrum out(exp.params, cfg);
    const Potential pot = potential_coefficients(exp, cfg.amplitude, 2 * M);
    out.potential_tail_fraction = pot.tail_fraction;
    out.truncation_warning = 2 * M < exp.params.N * exp.order();
    out.per_mu.resize(std::size_t(count));

    auto work = [&](int i) {
        double mu = cfg.mu_grid.min;
        if (count > 1) {
            mu = i == count - 1
                     ? cfg.mu_grid.max
                     : cfg.mu_grid.min + (cfg.mu_grid.max - cfg.mu_grid.min) *
                                             double(i) / double(count - 1);
        }
        const Eigen::MatrixXcd Q =
            detail::assemble_bloch(exp, pot, cfg.amplitude, mu, M);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Q, false);
        if (es.info() != Eigen::Success)
            throw ConvergenceError("eigensolver failed at mu = " +
                                   std::to_string(mu));
        HillSlice s;
        s.mu = mu;
        s.eigenvalues.assign(es.eigenvalues().data(),
                             es.eigenvalues().data() + 2 * M + 1);
        std::sort(s.eigenvalues.begin(), s.eigenvalues.end(),
                  [](const std::complex<double>& x,
                     const std::complex<double>& y) {
                      if (x.real() != y.real()) return x.real() < y.real();
                      return x.imag() < y.imag();
                  });
        out.per_mu[std::size_t(i)] = std::move(s);
    };

    if (threads <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) work(i);
    } else {
        std::atomic<int> next{0};
        std::mutex err_mtx;
        std::exception_ptr err;
        auto runner = [&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    work(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> g(err_mtx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const int n = std::min(threads, count);
        pool.reserve(std::size_t(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(runner);
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    return out;
}

/// Eigenvalues with Re > re_threshold inside the disk |lambda| < radius:
/// the unstable cloud near the origin.
inline std::vector<std::complex<double>>
unstable_points(const HillSpectrum& spec, double re_threshold,
                double radius) {
    if (re_threshold < 0.0 || radius < 0.0)
        throw InvalidArgument("thresholds must be nonnegative");
    std::vector<std::complex<double>> out;
    for (const auto& slice : spec.per_mu)
        for (const auto& lam : slice.eigenvalues)
            if (lam.real() > re_threshold && std::abs(lam) < radius)
                out.push_back(lam);
    return out;
}

} // namespace mi
