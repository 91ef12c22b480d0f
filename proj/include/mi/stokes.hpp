#pragma once

#include <mi/error.hpp>
#include <mi/series.hpp>
#include <mi/symbol.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace mi {

/// Wave family parameters: u_t + (Ju + alpha u^N)_x = 0 with Fourier
/// multiplier symbol j(k), nonlinearity power N >= 2, sign alpha = +-1,
/// and fundamental wavenumber rho > 0. Even powers need alpha = +1 for
/// small periodic waves to exist on both sides of the bifurcation.
struct WaveParams {
    DispersionSymbol symbol;
    int N = 2;
    int alpha = 1;
    double rho = 1.0;
};

inline void validate(const WaveParams& p) {
    if (p.N < 2) throw InvalidArgument("nonlinearity power N must be >= 2");
    if (p.alpha != 1 && p.alpha != -1)
        throw InvalidArgument("alpha must be +1 or -1");
    if (p.N % 2 == 0 && p.alpha != 1)
        throw InvalidArgument("even nonlinearity powers require alpha = +1");
    if (!(p.rho > 0.0)) throw InvalidArgument("rho must be positive");
}

/// Small-amplitude expansion of a periodic traveling wave:
///   eta(a; z) = sum_{m >= 1} a^m eta_m(z),   eta_1 = cos z,
///   c(a)      = sum_{j >= 0} c_j a^j,        c_0 = j(rho),
/// normalized by <eta_m, cos z> = 0 for m >= 2 and zero integration
/// constant in the steady equation -c eta + J eta + alpha eta^N = 0.
struct StokesExpansion {
    WaveParams params;
    std::vector<CosineSeries> eta; // index = power of a; eta[0] = 0
    std::vector<double> c;         // index = power of a

    int order() const { return int(eta.size()) - 1; }

    double speed(double a) const {
        double s = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) s = s * a + c[j];
        return s;
    }

    CosineSeries wave(double a) const {
        CosineSeries w;
        for (std::size_t m = eta.size(); m-- > 1;) {
            w *= a;
            w += eta[m];
        }
        w *= a;
        return w;
    }
};

namespace detail {

/// Product of two polynomials in the amplitude with cosine-series
/// coefficients, truncated at a^cap.
inline std::vector<CosineSeries> amul(const std::vector<CosineSeries>& u,
                                      const std::vector<CosineSeries>& v,
                                      int cap) {
    std::vector<CosineSeries> out(std::size_t(cap) + 1);
    for (std::size_t i = 0; i < u.size() && int(i) <= cap; ++i) {
        for (std::size_t j = 0; j < v.size() && int(i + j) <= cap; ++j) {
            out[i + j] += u[i] * v[j];
        }
    }
    return out;
}

inline std::vector<CosineSeries> apow(const std::vector<CosineSeries>& u,
                                      int n, int cap) {
    std::vector<CosineSeries> acc(1);
    acc[0] = CosineSeries::constant(1.0);
    for (int i = 0; i < n; ++i) acc = amul(acc, u, cap);
    return acc;
}

} // namespace detail

inline StokesExpansion expand_stokes(const WaveParams& p, int order) {
    validate(p);
    if (order < 1) throw InvalidArgument("expansion order must be >= 1");

    StokesExpansion ex{p, {}, {}};
    ex.eta.resize(std::size_t(order) + 1);
    ex.c.assign(std::size_t(order), 0.0);
    ex.eta[1] = CosineSeries::harmonic(1);
    ex.c[0] = p.symbol.value(p.rho);

    const double alpha = p.alpha;
    for (int m = 2; m <= order; ++m) {
        // a^m coefficient of eta^N; only eta_1..eta_{m-1} contribute.
        std::vector<CosineSeries> known(ex.eta.begin(), ex.eta.begin() + m);
        CosineSeries S = detail::apow(known, p.N, m)[std::size_t(m)];

        double cm1 = alpha * S.coeff(1);
        ex.c[std::size_t(m) - 1] = cm1;

        CosineSeries rhs = alpha * S;
        for (int j = 1; j <= m - 2; ++j)
            rhs -= ex.c[std::size_t(j)] * ex.eta[std::size_t(m - j)];
        rhs.set_coeff(1, 0.0); // c_{m-1} was chosen to cancel this slot
        ex.eta[std::size_t(m)] = apply_D_inverse(rhs, p.symbol, p.rho);
    }
    return ex;
}

/// Norm of the steady-equation residual -c(a) w + J w + alpha w^N at
/// finite amplitude, with w and c(a) taken from the truncated expansion.
/// Decays like a^{M+1} (or faster when parity kills the next order).
inline double steady_defect(const StokesExpansion& ex, double a) {
    const WaveParams& p = ex.params;
    CosineSeries w = ex.wave(a);
    const double cval = ex.speed(a);
    CosineSeries r = apply_multiplier(
        w, [&](int n) { return p.symbol.value(p.rho * n) - cval; });
    r += double(p.alpha) * power(w, p.N);
    return std::sqrt(inner(r, r));
}

} // namespace mi
