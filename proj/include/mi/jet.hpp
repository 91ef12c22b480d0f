#pragma once

#include <mi/error.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mi {

/// Truncated Taylor jet: value plus the first `Order` derivatives of a
/// scalar function of one variable, propagated through arithmetic and a
/// fixed set of elementary functions. Coefficients are stored in Taylor
/// form (f^(j)/j!), which keeps products and quotients well conditioned.
template <std::size_t Order>
class Jet {
public:
    static constexpr std::size_t order = Order;
    using Coeffs = std::array<double, Order + 1>;

    constexpr Jet() : t_{} {}

    static constexpr Jet constant(double v) {
        Jet j;
        j.t_[0] = v;
        return j;
    }

    static constexpr Jet variable(double v) {
        Jet j;
        j.t_[0] = v;
        if constexpr (Order >= 1) j.t_[1] = 1.0;
        return j;
    }

    static constexpr Jet from_taylor(const Coeffs& c) {
        Jet j;
        j.t_ = c;
        return j;
    }

    double value() const { return t_[0]; }
    double taylor(std::size_t i) const { return t_[i]; }
    double derivative(std::size_t i) const { return t_[i] * factorial(i); }

    /// Zero every coefficient above `ord` (used to honor a requested
    /// lower derivative order without a second code path).
    Jet truncated(std::size_t ord) const {
        Jet j = *this;
        for (std::size_t i = ord + 1; i <= Order; ++i) j.t_[i] = 0.0;
        return j;
    }

    Jet operator-() const {
        Jet j;
        for (std::size_t i = 0; i <= Order; ++i) j.t_[i] = -t_[i];
        return j;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t i = 0; i <= Order; ++i) t_[i] += o.t_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t i = 0; i <= Order; ++i) t_[i] -= o.t_[i];
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double s) {
        a.t_[0] += s;
        return a;
    }
    friend Jet operator+(double s, Jet a) {
        a.t_[0] += s;
        return a;
    }
    friend Jet operator-(Jet a, double s) {
        a.t_[0] -= s;
        return a;
    }
    friend Jet operator-(double s, const Jet& a) { return constant(s) - a; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t j = 0; j <= Order; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i <= j; ++i) acc += a.t_[i] * b.t_[j - i];
            r.t_[j] = acc;
        }
        return r;
    }
    friend Jet operator*(Jet a, double s) {
        for (std::size_t i = 0; i <= Order; ++i) a.t_[i] *= s;
        return a;
    }
    friend Jet operator*(double s, Jet a) { return a * s; }

    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.t_[0] == 0.0)
            throw DomainError("jet division by a jet with zero value");
        Jet q;
        q.t_[0] = a.t_[0] / b.t_[0];
        for (std::size_t j = 1; j <= Order; ++j) {
            double acc = a.t_[j];
            for (std::size_t i = 1; i <= j; ++i) acc -= b.t_[i] * q.t_[j - i];
            q.t_[j] = acc / b.t_[0];
        }
        return q;
    }
    friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
    friend Jet operator/(double s, const Jet& a) { return constant(s) / a; }

    static constexpr double factorial(std::size_t n) {
        double f = 1.0;
        for (std::size_t i = 2; i <= n; ++i) f *= double(i);
        return f;
    }

private:
    Coeffs t_;
};

using Jet4 = Jet<4>;

namespace detail {

/// Compose g onto a jet, given the plain derivatives g^(j)(u0).
template <std::size_t N>
Jet<N> compose(const std::array<double, N + 1>& derivs, const Jet<N>& u) {
    std::array<double, N + 1> gt;
    for (std::size_t j = 0; j <= N; ++j)
        gt[j] = derivs[j] / Jet<N>::factorial(j);
    Jet<N> v = u - Jet<N>::constant(u.value());
    Jet<N> r = Jet<N>::constant(gt[N]);
    for (std::size_t j = N; j-- > 0;) r = r * v + Jet<N>::constant(gt[j]);
    return r;
}

/// Derivatives of any f satisfying f' = 1 - f^2 (tanh and coth alike),
/// via the polynomial recurrence P_{j+1}(t) = P_j'(t) (1 - t^2).
template <std::size_t N>
std::array<double, N + 1> hyperbolic_derivs(double t0) {
    std::array<double, N + 1> d{};
    d[0] = t0;
    std::vector<double> p = {0.0, 1.0};
    for (std::size_t j = 1; j <= N; ++j) {
        std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < p.size(); ++i)
            dp[i - 1] = p[i] * double(i);
        std::vector<double> np(dp.size() + 2, 0.0);
        for (std::size_t i = 0; i < dp.size(); ++i) {
            np[i] += dp[i];
            np[i + 2] -= dp[i];
        }
        p = std::move(np);
        double v = 0.0;
        for (std::size_t i = p.size(); i-- > 0;) v = v * t0 + p[i];
        d[j] = v;
    }
    return d;
}

} // namespace detail

template <std::size_t N>
Jet<N> exp(const Jet<N>& u) {
    std::array<double, N + 1> d;
    d.fill(std::exp(u.value()));
    return detail::compose<N>(d, u);
}

template <std::size_t N>
Jet<N> sin(const Jet<N>& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    std::array<double, N + 1> d;
    const double cycle[4] = {s, c, -s, -c};
    for (std::size_t j = 0; j <= N; ++j) d[j] = cycle[j % 4];
    return detail::compose<N>(d, u);
}

template <std::size_t N>
Jet<N> cos(const Jet<N>& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    std::array<double, N + 1> d;
    const double cycle[4] = {c, -s, -c, s};
    for (std::size_t j = 0; j <= N; ++j) d[j] = cycle[j % 4];
    return detail::compose<N>(d, u);
}

/// Real power with constant exponent; requires a positive base value.
template <std::size_t N>
Jet<N> pow(const Jet<N>& u, double p) {
    if (!(u.value() > 0.0))
        throw DomainError("jet of x^p with non-integer p requires x > 0");
    std::array<double, N + 1> d;
    double fall = 1.0;
    for (std::size_t j = 0; j <= N; ++j) {
        d[j] = fall * std::pow(u.value(), p - double(j));
        fall *= (p - double(j));
    }
    return detail::compose<N>(d, u);
}

template <std::size_t N>
Jet<N> pow(const Jet<N>& u, int n) {
    if (n < 0) return Jet<N>::constant(1.0) / pow(u, -n);
    Jet<N> r = Jet<N>::constant(1.0);
    Jet<N> base = u;
    unsigned e = unsigned(n);
    while (e) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& u) {
    if (!(u.value() > 0.0))
        throw DomainError("jet of sqrt requires a positive value");
    return pow(u, 0.5);
}

template <std::size_t N>
Jet<N> tanh(const Jet<N>& u) {
    return detail::compose<N>(
        detail::hyperbolic_derivs<N>(std::tanh(u.value())), u);
}

template <std::size_t N>
Jet<N> coth(const Jet<N>& u) {
    if (u.value() == 0.0) throw DomainError("coth is singular at 0");
    return detail::compose<N>(
        detail::hyperbolic_derivs<N>(1.0 / std::tanh(u.value())), u);
}

template <std::size_t N>
Jet<N> abs(const Jet<N>& u) {
    if (u.value() > 0.0) return u;
    throw DomainError("jet of abs requires a positive argument");
}

namespace detail {
// Even Maclaurin coefficients of tanh(k)/k through degree 12. The jet
// quotient tanh(u)/u loses a factor 1/k of precision per derivative
// order, so the series branch must extend far enough out that the
// quotient is accurate where it takes over; at 0.05 the quotient error
// in the fourth derivative is ~1e-9 and the degree-12 truncation ~1e-11.
inline constexpr double tanhc_series[7] = {
    1.0,           -1.0 / 3.0,       2.0 / 15.0,          -17.0 / 315.0,
    62.0 / 2835.0, -1382.0 / 155925.0, 21844.0 / 6081075.0};
inline constexpr double tanhc_branch = 0.05;
} // namespace detail

/// tanh(k)/k with a series branch near the origin so that jets stay
/// finite and accurate through the removable singularity.
template <std::size_t N>
Jet<N> tanhc(const Jet<N>& u) {
    if (std::abs(u.value()) < detail::tanhc_branch) {
        Jet<N> w = u * u;
        Jet<N> r = Jet<N>::constant(detail::tanhc_series[6]);
        for (int m = 5; m >= 0; --m)
            r = r * w + Jet<N>::constant(detail::tanhc_series[m]);
        return r;
    }
    return tanh(u) / u;
}

// Scalar counterparts used by plain-value evaluation of symbols. These
// enforce the same domains as the jet versions where NaNs could leak.

inline double exp(double x) { return std::exp(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double abs(double x) { return std::fabs(x); }

inline double coth(double x) {
    if (x == 0.0) throw DomainError("coth is singular at 0");
    return 1.0 / std::tanh(x);
}

inline double sqrt(double x) {
    if (x < 0.0) throw DomainError("sqrt of a negative value");
    return std::sqrt(x);
}

inline double tanhc(double x) {
    if (std::abs(x) < detail::tanhc_branch) {
        double w = x * x;
        double r = detail::tanhc_series[6];
        for (int m = 5; m >= 0; --m) r = r * w + detail::tanhc_series[m];
        return r;
    }
    return std::tanh(x) / x;
}

inline double pow(double x, int n) {
    if (n < 0) {
        if (x == 0.0) throw DomainError("zero raised to a negative power");
        return 1.0 / pow(x, -n);
    }
    double r = 1.0, base = x;
    unsigned e = unsigned(n);
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

inline double pow(double x, double p) {
    if (x > 0.0) return std::pow(x, p);
    bool integral = std::nearbyint(p) == p && std::abs(p) < 1e15;
    if (x == 0.0) {
        if (p > 0.0) return 0.0;
        if (p == 0.0) return 1.0;
        throw DomainError("zero raised to a negative power");
    }
    if (integral) return std::pow(x, p);
    throw DomainError("negative base with non-integer exponent");
}

} // namespace mi
