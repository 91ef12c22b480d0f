#pragma once

#include <mi/error.hpp>
#include <mi/series.hpp>
#include <mi/stokes.hpp>
#include <mi/symbol.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace mi {

/// Polynomial in mu^2: c[0] + c[1] mu^2 + c[2] mu^4 + ...
class EvenPoly {
public:
    EvenPoly() = default;
    explicit EvenPoly(std::vector<double> c) : c_(std::move(c)) {}

    double operator()(double mu) const {
        const double m2 = mu * mu;
        double s = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) s = s * m2 + c_[i];
        return s;
    }

    const std::vector<double>& coeffs() const { return c_; }

private:
    std::vector<double> c_;
};

enum class Parity { Even, Odd };

inline Parity parity_of(int N) {
    return N % 2 == 0 ? Parity::Even : Parity::Odd;
}

inline const char* to_string(Parity p) {
    return p == Parity::Even ? "even" : "odd";
}

/// Coefficients of the reduced 3x3 interaction matrix that governs the
/// spectrum of the linearization near the origin, expanded in amplitude
/// (the ^a scalars, entering at a^kappa) and Floquet exponent (the
/// EvenPoly entries). delta is the modulational instability index:
/// delta > 0 means the spectrum leaves the imaginary axis near 0.
struct AnalyticCoefficients {
    explicit AnalyticCoefficients(WaveParams p) : params(std::move(p)) {}

    WaveParams params;
    double j_rho = 0, j_prime = 0, j_second = 0; // symbol jet at rho

    double lambda11_a = 0;
    EvenPoly lambda11_mu;
    EvenPoly lambda12;
    double lambda13 = 0;  // even N only, else 0
    double lambda33_a = 0;
    EvenPoly lambda33_mu;
    double lambda_tilde_b = 0; // -(rho j' + rho^2 j''/2)
    double lambda_tilde_d = 0; // rho j' + j(rho) - 1
    double lambda_f = 0;       // even N only, else 0
    Parity parity = Parity::Even;

    double delta = 0;     // instability index (even: b~ * Lf; odd: alpha b~)
    int kappa = 0;        // amplitude exponent: N-1 (odd), 2N-2 (even)
    double radicand0 = 0; // coefficient of a^kappa in the radicand at mu=0

    /// Curvature index as a function of mu; lambda_b(0) = lambda_tilde_b.
    double lambda_b(double mu) const {
        return -(lambda12(mu) + lambda11_mu(mu));
    }
};

namespace detail {

inline double ifact(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace detail

/// Evaluate the coefficient bundle. `cap` limits the number of terms kept
/// in each mu-polynomial; the parity-specific structural caps and the
/// available jet depth (4 derivatives) bound it further.
inline AnalyticCoefficients coefficients(const WaveParams& p, int cap = 2) {
    validate(p);
    if (cap < 1) throw InvalidArgument("mu-polynomial cap must be >= 1");

    AnalyticCoefficients C(p);
    const double rho = p.rho;
    const int N = p.N;
    Jet4 jr = p.symbol.jet(rho);
    Jet4 j0 = p.symbol.jet(0.0);
    C.j_rho = jr.derivative(0);
    C.j_prime = jr.derivative(1);
    C.j_second = jr.derivative(2);
    C.lambda_tilde_b = -(rho * C.j_prime + 0.5 * rho * rho * C.j_second);
    C.lambda_tilde_d = rho * C.j_prime + C.j_rho - 1.0;
    C.parity = parity_of(N);

    const CosineSeries pN = cosine_power(N);
    if (C.parity == Parity::Odd) {
        C.lambda11_a = (N - 1) * pN.coeff(1);
        C.lambda33_a =
            p.alpha * (pN.coeff(1) - N * cosine_power(N - 1).coeff(0));
        C.delta = p.alpha * C.lambda_tilde_b;
        C.kappa = N - 1;
        C.radicand0 = C.delta * C.lambda11_a;
    } else {
        const CosineSeries DpN = apply_D_inverse(pN, p.symbol, rho);
        const double ip = inner(pN, DpN);
        const double p0 = pN.coeff(0);
        const double d0 = C.j_rho - 1.0;
        C.lambda11_a = 2.0 * N * (1 - N) * ip + 2.0 * N * N * p0 * p0 / d0;
        C.lambda13 = -std::sqrt(2.0) * N * p0;

        const CosineSeries pNm1 = cosine_power(N - 1);
        CosineSeries q = pNm1;
        q.set_coeff(1, 0.0);
        const double ip33 = inner(pNm1, apply_D_inverse(q, p.symbol, rho));
        C.lambda33_a = N * ip -
                       0.5 * N * (N - 1) * inner(cosine_power(N - 2), DpN) -
                       0.5 * N * N * ip33;

        if (std::abs(C.lambda_tilde_d) <= 1e-10)
            throw ResonanceError(
                "mean-flow coupling rho j'(rho) + j(rho) - 1 vanishes; the "
                "quadratic reduction is singular at this rho");
        C.lambda_f =
            -C.lambda11_a + C.lambda13 * C.lambda13 / C.lambda_tilde_d;
        C.delta = C.lambda_tilde_b * C.lambda_f;
        C.kappa = 2 * N - 2;
        C.radicand0 = C.delta;
    }

    // mu-polynomials, truncated by the parity caps, the requested cap, and
    // the jet depth (derivatives at rho/0 up to order 4 only).
    const bool even = C.parity == Parity::Even;
    const int m11 = std::min({even ? N - 1 : (N - 1) / 2, cap, 2});
    const int m12 = std::min({even ? N - 1 : (N - 3) / 2, cap, 1});
    const int m33 = std::min({even ? N - 1 : (N - 1) / 2, cap, 2});
    {
        std::vector<double> c;
        for (int m = 1; m <= m11; ++m)
            c.push_back(std::pow(rho, 2 * m) * jr.derivative(2 * m) /
                        detail::ifact(2 * m));
        C.lambda11_mu = EvenPoly(std::move(c));
    }
    {
        std::vector<double> c{rho * C.j_prime};
        for (int m = 1; m <= m12; ++m)
            c.push_back(std::pow(rho, 2 * m + 1) * jr.derivative(2 * m + 1) /
                        detail::ifact(2 * m + 1));
        C.lambda12 = EvenPoly(std::move(c));
    }
    {
        std::vector<double> c{0.0};
        for (int m = 1; m <= m33; ++m)
            c.push_back(-std::pow(rho, 2 * m) * j0.derivative(2 * m) /
                        detail::ifact(2 * m));
        C.lambda33_mu = EvenPoly(std::move(c));
    }
    return C;
}

/// Modulational stability verdict, optionally with the finite-amplitude
/// window geometry (mu_star, q_max, width) when delta > 0 and a > 0.
struct StabilityReport {
    WaveParams params;
    double a = 0;
    Parity parity = Parity::Even;
    double delta = 0;
    std::string verdict; // "unstable" | "stable-at-this-order"
    double mu_star = 0;
    double q_max = 0;
    double width = 0;
};

/// Edge of the unstable Floquet window: the positive root of
/// radicand0 a^kappa = mu^2 Lambda_b(mu)^2, found by fixed-point
/// iteration seeded with the frozen curvature index.
inline double mu_star(const AnalyticCoefficients& C, double a) {
    if (!(C.delta > 0.0))
        throw InvalidArgument("no instability window: delta <= 0");
    if (a < 0.0) throw InvalidArgument("amplitude must be >= 0");
    const double s = std::sqrt(C.radicand0 * std::pow(a, C.kappa));
    double mu = s / std::abs(C.lambda_tilde_b);
    for (int it = 0; it < 100; ++it) {
        const double lb = C.lambda_b(mu);
        if (lb == 0.0)
            throw ConvergenceError(
                "curvature index vanished during the window iteration");
        const double next = s / std::abs(lb);
        if (std::abs(next - mu) < 1e-14) return next;
        mu = next;
    }
    throw ConvergenceError(
        "window-edge iteration did not converge in 100 steps");
}

inline double mu_star(const WaveParams& p, double a) {
    return mu_star(coefficients(p), a);
}

inline StabilityReport stability_report(const WaveParams& p, double a) {
    const AnalyticCoefficients C = coefficients(p);
    StabilityReport r{p, a, C.parity, C.delta,
                      C.delta > 0.0 ? "unstable" : "stable-at-this-order",
                      0.0, 0.0, 0.0};
    if (C.delta > 0.0 && a > 0.0) {
        r.mu_star = mu_star(C, a);
        const double scale = C.radicand0 * std::pow(a, C.kappa);
        const double b = std::abs(C.lambda_tilde_b);
        r.width = scale / b;
        r.q_max = std::abs(p.rho * C.j_prime) * std::sqrt(scale) / b;
    }
    return r;
}

/// Instability index and verdict only (no amplitude attached).
inline StabilityReport wb_coefficient(const WaveParams& p) {
    return stability_report(p, 0.0);
}

/// Bisection root of delta(rho) over [lo, hi] to within tol.
inline double critical_rho(const WaveParams& base, double lo, double hi,
                           double tol = 1e-6) {
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("bad rho bracket");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    auto delta_at = [&](double rho) {
        WaveParams p = base;
        p.rho = rho;
        return coefficients(p).delta;
    };
    double flo = delta_at(lo);
    double fhi = delta_at(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw InvalidArgument(
            "stability index does not change sign over the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = delta_at(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// The three spectral branches through the origin at Floquet exponent mu:
///   lambda_pm = -i mu Lambda12(mu) +- mu sqrt(radicand0 a^kappa - mu^2 Lambda_b(mu)^2)
///   lambda_0  =  i mu (j(rho) - 1 + Lambda33_a a^kappa + Lambda33_mu(mu))
/// A negative radicand contributes a purely imaginary pair instead.
inline std::array<std::complex<double>, 3>
eigenvalues_at(const AnalyticCoefficients& C, double a, double mu) {
    const double Da = C.radicand0 * std::pow(a, C.kappa);
    const double lb = C.lambda_b(mu);
    const double rad = Da - mu * mu * lb * lb;
    const std::complex<double> root =
        rad >= 0.0 ? std::complex<double>(std::sqrt(rad), 0.0)
                   : std::complex<double>(0.0, std::sqrt(-rad));
    const std::complex<double> drift(0.0, -mu * C.lambda12(mu));
    const std::complex<double> l0(
        0.0, mu * (C.j_rho - 1.0 + C.lambda33_a * std::pow(a, C.kappa) +
                   C.lambda33_mu(mu)));
    return {drift + mu * root, drift - mu * root, l0};
}

struct CurveSample {
    double mu = 0;
    std::complex<double> lambda_plus, lambda_minus, lambda0;
};

struct SpectralCurve {
    WaveParams params;
    double a = 0;
    std::vector<CurveSample> samples;
};

inline SpectralCurve eigencurves(const WaveParams& p, double a,
                                 const std::vector<double>& mu_grid) {
    const AnalyticCoefficients C = coefficients(p);
    SpectralCurve out{p, a, {}};
    out.samples.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        auto lam = eigenvalues_at(C, a, mu);
        out.samples.push_back({mu, lam[0], lam[1], lam[2]});
    }
    return out;
}

/// Closed-form figure-eight traced by the unstable pair near the origin,
/// in (q, p) = (Im lambda, Re lambda) coordinates:
///   p^2 = (q / rho j')^2 (radicand0 a^kappa - q^2 b~^2 / (rho j')^2).
struct LemniscatePoint {
    double q = 0, p = 0;
    int branch = 1;
};

struct Lemniscate {
    double q_max = 0, width = 0, p_max = 0;
    double group_slope = 0; // rho j'(rho)
    double scale = 0;       // radicand0 a^kappa
    double b = 0;           // |lambda_tilde_b|
    std::vector<LemniscatePoint> samples;

    double p_of_q(double q) const {
        const double t = q / group_slope;
        const double p2 = t * t * (scale - t * t * b * b);
        return p2 > 0.0 ? std::sqrt(p2) : 0.0;
    }
};

inline Lemniscate lemniscate(const WaveParams& par, double a,
                             int n_samples = 401) {
    const AnalyticCoefficients C = coefficients(par);
    if (!(C.delta > 0.0))
        throw InvalidArgument(
            "lemniscate undefined: delta <= 0 (stable at this order)");
    if (n_samples < 2) throw InvalidArgument("need at least 2 samples");
    const double rj = par.rho * C.j_prime;
    if (std::abs(rj) < 1e-12)
        throw InvalidArgument(
            "rho j'(rho) vanishes; the lemniscate parametrization "
            "degenerates");

    Lemniscate L;
    L.group_slope = rj;
    L.scale = C.radicand0 * std::pow(a, C.kappa);
    L.b = std::abs(C.lambda_tilde_b);
    L.q_max = std::abs(rj) * std::sqrt(L.scale) / L.b;
    L.width = L.scale / L.b;
    L.p_max = 0.5 * L.width;
    L.samples.reserve(2 * std::size_t(n_samples));
    for (int branch : {1, -1}) {
        for (int i = 0; i < n_samples; ++i) {
            const double q =
                -L.q_max + 2.0 * L.q_max * double(i) / double(n_samples - 1);
            L.samples.push_back({q, branch * L.p_of_q(q), branch});
        }
    }
    return L;
}

} // namespace mi
