#pragma once

#include <mi/error.hpp>
#include <mi/symbol.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mi {

/// Finite cosine series f(z) = sum_{n >= 0} a_n cos(n z). Coefficient 0 is
/// the mean. The basis is orthogonal under the pairing
/// <f, g> = (1/pi) int_0^{2pi} f g dz, for which <1, 1> = 2 and
/// <cos nz, cos nz> = 1 for n >= 1.
class CosineSeries {
public:
    CosineSeries() : a_(1, 0.0) {}

    static CosineSeries constant(double c) {
        CosineSeries s;
        s.a_[0] = c;
        return s;
    }

    static CosineSeries harmonic(int n, double amp = 1.0) {
        CosineSeries s;
        s.set_coeff(n, amp);
        return s;
    }

    double coeff(int n) const {
        if (n < 0 || std::size_t(n) >= a_.size()) return 0.0;
        return a_[std::size_t(n)];
    }

    void set_coeff(int n, double v) {
        if (n < 0) throw InvalidArgument("cosine mode index must be >= 0");
        if (std::size_t(n) >= a_.size()) a_.resize(std::size_t(n) + 1, 0.0);
        a_[std::size_t(n)] = v;
    }

    /// Highest stored mode index (trailing zeros are not trimmed).
    int max_mode() const { return int(a_.size()) - 1; }

    double operator()(double z) const {
        double s = a_[0];
        for (std::size_t n = 1; n < a_.size(); ++n)
            s += a_[n] * std::cos(double(n) * z);
        return s;
    }

    CosineSeries& operator+=(const CosineSeries& o) {
        if (o.a_.size() > a_.size()) a_.resize(o.a_.size(), 0.0);
        for (std::size_t n = 0; n < o.a_.size(); ++n) a_[n] += o.a_[n];
        return *this;
    }

    CosineSeries& operator-=(const CosineSeries& o) {
        if (o.a_.size() > a_.size()) a_.resize(o.a_.size(), 0.0);
        for (std::size_t n = 0; n < o.a_.size(); ++n) a_[n] -= o.a_[n];
        return *this;
    }

    CosineSeries& operator*=(double c) {
        for (double& v : a_) v *= c;
        return *this;
    }

    CosineSeries operator-() const {
        CosineSeries s = *this;
        for (double& v : s.a_) v = -v;
        return s;
    }

    friend CosineSeries operator+(CosineSeries a, const CosineSeries& b) {
        a += b;
        return a;
    }
    friend CosineSeries operator-(CosineSeries a, const CosineSeries& b) {
        a -= b;
        return a;
    }
    friend CosineSeries operator*(CosineSeries a, double c) {
        a *= c;
        return a;
    }
    friend CosineSeries operator*(double c, CosineSeries a) {
        a *= c;
        return a;
    }

    /// Product via cos(pz)cos(qz) = (cos(|p-q|z) + cos((p+q)z)) / 2.
    friend CosineSeries operator*(const CosineSeries& a,
                                  const CosineSeries& b) {
        CosineSeries out;
        out.a_.assign(a.a_.size() + b.a_.size() - 1, 0.0);
        for (std::size_t p = 0; p < a.a_.size(); ++p) {
            if (a.a_[p] == 0.0) continue;
            for (std::size_t q = 0; q < b.a_.size(); ++q) {
                if (b.a_[q] == 0.0) continue;
                double half = 0.5 * a.a_[p] * b.a_[q];
                out.a_[p >= q ? p - q : q - p] += half;
                out.a_[p + q] += half;
            }
        }
        return out;
    }

private:
    std::vector<double> a_;
};

/// <f, g> = 2 f_0 g_0 + sum_{n >= 1} f_n g_n.
inline double inner(const CosineSeries& f, const CosineSeries& g) {
    int m = std::min(f.max_mode(), g.max_mode());
    double s = 2.0 * f.coeff(0) * g.coeff(0);
    for (int n = 1; n <= m; ++n) s += f.coeff(n) * g.coeff(n);
    return s;
}

/// cos^q z expanded over the cosine basis:
/// cos^q z = 2^{-q} sum_{j=0}^{q} C(q, j) cos((q - 2j) z).
inline CosineSeries cosine_power(int q) {
    if (q < 0) throw InvalidArgument("cosine power must be >= 0");
    CosineSeries out;
    double binom = 1.0; // C(q, 0)
    const double scale = std::ldexp(1.0, -q);
    for (int j = 0; j <= q; ++j) {
        int mode = std::abs(q - 2 * j);
        out.set_coeff(mode, out.coeff(mode) + binom * scale);
        binom = binom * (q - j) / (j + 1);
    }
    return out;
}

/// Pointwise n-th power by repeated multiplication.
inline CosineSeries power(const CosineSeries& s, int n) {
    if (n < 0) throw InvalidArgument("series power must be >= 0");
    CosineSeries out = CosineSeries::constant(1.0);
    for (int i = 0; i < n; ++i) out = out * s;
    return out;
}

/// Diagonal action: mode n is scaled by lambda(n).
template <class F>
CosineSeries apply_multiplier(const CosineSeries& s, F&& lambda) {
    CosineSeries out;
    for (int n = 0; n <= s.max_mode(); ++n)
        out.set_coeff(n, lambda(n) * s.coeff(n));
    return out;
}

/// Invert the linearized steady operator on the cosine basis: mode n is
/// divided by d_n = j(rho) - j(rho n). Mode 1 spans the kernel, so the
/// input must not carry it beyond roundoff, and the output has it zeroed
/// exactly. A vanishing gap on an occupied mode means the expansion
/// hypotheses fail at this rho.
inline CosineSeries apply_D_inverse(const CosineSeries& f,
                                    const DispersionSymbol& sym, double rho) {
    if (std::abs(f.coeff(1)) > 1e-12)
        throw KernelError(
            "right-hand side has a cos(z) component of size " +
            std::to_string(std::abs(f.coeff(1))) +
            "; it lies in the kernel of the linearized operator");
    const double jr = sym.value(rho);
    CosineSeries out;
    for (int n = 0; n <= f.max_mode(); ++n) {
        if (n == 1) continue;
        double c = f.coeff(n);
        if (c == 0.0) continue;
        double dn = jr - sym.value(rho * n);
        if (std::abs(dn) < 1e-12)
            throw ResonanceError("symbol gap j(rho) - j(" +
                                 std::to_string(n) +
                                 " rho) vanishes on an occupied mode");
        out.set_coeff(n, c / dn);
    }
    out.set_coeff(1, 0.0);
    return out;
}

} // namespace mi
