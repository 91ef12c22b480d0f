#include <catch2/catch_amalgamated.hpp>

#include <mi/jet.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

using mi::Jet4;

namespace {

// Independent oracle #1: dense polynomial arithmetic with exact
// coefficient operations (integer coefficients stay exact in doubles).
using Poly = std::vector<double>;

Poly padd(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Poly psub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

Poly pmul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly pdiff(const Poly& a) {
    if (a.size() <= 1) return {0.0};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * double(i);
    return r;
}

double peval(const Poly& a, double x) {
    double r = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

Jet4 jeval(const Poly& a, const Jet4& x) {
    Jet4 r = Jet4::constant(0.0);
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + Jet4::constant(a[i]);
    return r;
}

// Magnitude polynomial: coefficient-wise absolute values accumulated
// without cancellation, giving an honest conditioning bound for the
// relative-error checks below.
Poly pmag_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += std::abs(a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += std::abs(b[i]);
    return r;
}

Poly pmag_mul(const Poly& a, const Poly& b) {
    Poly aa(a.size()), bb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) aa[i] = std::abs(a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) bb[i] = std::abs(b[i]);
    return pmul(aa, bb);
}

// Independent oracle #2: Richardson-extrapolated central differences.
std::array<double, 5> fd_derivs(const std::function<double(double)>& f,
                                double x, double h = 0.02) {
    auto d1 = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
    auto d2 = [&](double s) {
        return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s);
    };
    auto d3 = [&](double s) {
        return (f(x + 2 * s) - 2 * f(x + s) + 2 * f(x - s) - f(x - 2 * s)) /
               (2 * s * s * s);
    };
    auto d4 = [&](double s) {
        return (f(x + 2 * s) - 4 * f(x + s) + 6 * f(x) - 4 * f(x - s) +
                f(x - 2 * s)) /
               (s * s * s * s);
    };
    auto rich = [&](auto d) { return (4.0 * d(h / 2) - d(h)) / 3.0; };
    return {f(x), rich(d1), rich(d2), rich(d3), rich(d4)};
}

void check_against(const Jet4& j, const std::array<double, 5>& expect,
                   double rel) {
    for (std::size_t i = 0; i <= 4; ++i) {
        double scale = std::max(1.0, std::abs(expect[i]));
        INFO("derivative order " << i);
        REQUIRE(std::abs(j.derivative(i) - expect[i]) <= rel * scale);
    }
}

} // namespace

TEST_CASE("jet of a monomial carries exact derivatives") {
    Jet4 k = Jet4::variable(2.0);
    Jet4 j = k * k * k;
    std::array<double, 5> expect = {8.0, 12.0, 12.0, 6.0, 0.0};
    for (std::size_t i = 0; i <= 4; ++i)
        REQUIRE(j.derivative(i) == Catch::Approx(expect[i]).margin(1e-14).epsilon(0.0));
}

TEST_CASE("random polynomial compositions match exact coefficients") {
    std::mt19937 rng(20240817u);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> op(0, 3);

    struct Node {
        Poly exact;
        Poly mag; // cancellation-free coefficient magnitudes
        std::function<Jet4(const Jet4&)> eval;
    };

    auto leaf = [&]() {
        Poly p = {double(coeff(rng)), double(coeff(rng)), double(coeff(rng))};
        return Node{p, p, [p](const Jet4& k) { return jeval(p, k); }};
    };

    std::function<Node(int)> build = [&](int depth) -> Node {
        if (depth == 0) return leaf();
        Node a = build(depth - 1);
        switch (op(rng)) {
        case 0: {
            Node b = build(depth - 1);
            return {padd(a.exact, b.exact), pmag_add(a.mag, b.mag),
                    [a, b](const Jet4& k) { return a.eval(k) + b.eval(k); }};
        }
        case 1: {
            Node b = build(depth - 1);
            return {psub(a.exact, b.exact), pmag_add(a.mag, b.mag),
                    [a, b](const Jet4& k) { return a.eval(k) - b.eval(k); }};
        }
        case 2: {
            Node b = build(depth - 1);
            return {pmul(a.exact, b.exact), pmag_mul(a.mag, b.mag),
                    [a, b](const Jet4& k) { return a.eval(k) * b.eval(k); }};
        }
        default:
            return {pmul(a.exact, a.exact), pmag_mul(a.mag, a.mag),
                    [a](const Jet4& k) { return mi::pow(a.eval(k), 2); }};
        }
    };

    const double pts[] = {-1.3, 0.37, 2.1};
    for (int trial = 0; trial < 40; ++trial) {
        Node n = build(3);
        for (double x : pts) {
            Jet4 j = n.eval(Jet4::variable(x));
            Poly cur = n.exact;
            Poly curm = n.mag;
            for (std::size_t ord = 0; ord <= 4; ++ord) {
                double expect = peval(cur, x);
                double scale = std::max(1.0, peval(curm, std::abs(x)));
                REQUIRE(std::abs(j.derivative(ord) - expect) <= 1e-12 * scale);
                cur = pdiff(cur);
                curm = pdiff(curm);
            }
        }
    }
}

TEST_CASE("jet division satisfies (a/b)*b == a") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        Poly a = {u(rng), u(rng), u(rng), u(rng)};
        Poly b = {u(rng), u(rng), u(rng)};
        double x = u(rng);
        if (std::abs(peval(b, x)) < 0.2) continue;
        Jet4 ja = jeval(a, Jet4::variable(x));
        Jet4 jb = jeval(b, Jet4::variable(x));
        Jet4 q = ja / jb;
        Jet4 back = q * jb;
        for (std::size_t i = 0; i <= 4; ++i) {
            double scale = std::max(1.0, std::abs(ja.derivative(i)));
            REQUIRE(std::abs(back.derivative(i) - ja.derivative(i)) <=
                    1e-11 * scale);
        }
    }
}

TEST_CASE("transcendental jets agree with finite differences") {
    auto check = [](const std::function<double(double)>& f, const Jet4& j,
                    double x, double rel = 1e-6, double h = 0.02) {
        check_against(j, fd_derivs(f, x, h), rel);
    };

    check([](double x) { return std::exp(x); }, mi::exp(Jet4::variable(0.4)),
          0.4);
    check([](double x) { return std::sin(x); }, mi::sin(Jet4::variable(1.1)),
          1.1);
    check([](double x) { return std::cos(x); }, mi::cos(Jet4::variable(-0.6)),
          -0.6);
    check([](double x) { return std::tanh(x); }, mi::tanh(Jet4::variable(0.7)),
          0.7);
    check([](double x) { return 1.0 / std::tanh(x); },
          mi::coth(Jet4::variable(2.0)), 2.0);
    check([](double x) { return std::sqrt(x); }, mi::sqrt(Jet4::variable(1.3)),
          1.3, 1e-6, 0.02);
    check([](double x) { return std::pow(x, 1.5); },
          mi::pow(Jet4::variable(2.2), 1.5), 2.2);
    check([](double x) { return std::tanh(x) / x; },
          mi::tanhc(Jet4::variable(0.5)), 0.5);
    // Benjamin-Ono style |k|^beta away from the origin.
    check([](double x) { return std::pow(std::abs(x), 1.5); },
          mi::pow(mi::abs(Jet4::variable(1.7)), 1.5), 1.7);
    // Intermediate long wave style k*coth(k) via the regular form.
    check([](double x) { return x / std::tanh(x); },
          Jet4::constant(1.0) / mi::tanhc(Jet4::variable(2.0)), 2.0);
    // Whitham symbol, full composition.
    check([](double x) { return std::sqrt(std::tanh(x) / x); },
          mi::sqrt(mi::tanhc(Jet4::variable(1.5))), 1.5, 1e-6, 0.02);
}

TEST_CASE("tanhc near the origin matches its Maclaurin series") {
    // tanh(k)/k = 1 - k^2/3 + 2k^4/15 - 17k^6/315 + 62k^8/2835
    //             - 1382k^10/155925 + 21844k^12/6081075 - ...
    const double s[] = {1.0,           -1.0 / 3.0,         2.0 / 15.0,
                        -17.0 / 315.0, 62.0 / 2835.0,      -1382.0 / 155925.0,
                        21844.0 / 6081075.0};
    for (double x : {5e-4, 0.03}) {
        Jet4 j = mi::tanhc(Jet4::variable(x));
        for (std::size_t ord = 0; ord <= 4; ++ord) {
            double expect = 0.0;
            for (int m = 0; m < 7; ++m) {
                int e = 2 * m;
                if (e < int(ord)) continue;
                double term = s[m];
                for (int i = 0; i < int(ord); ++i) term *= double(e - i);
                expect += term * std::pow(x, double(e - int(ord)));
            }
            double scale = std::max(1.0, std::abs(expect));
            REQUIRE(std::abs(j.derivative(ord) - expect) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("tanhc and sqrt(tanhc) are continuous across the branch switch") {
    const double k0 = mi::detail::tanhc_branch;
    const double eps = 1e-9;
    for (double sgn : {1.0, -1.0}) {
        Jet4 lo = mi::tanhc(Jet4::variable(sgn * (k0 - eps)));
        Jet4 hi = mi::tanhc(Jet4::variable(sgn * (k0 + eps)));
        for (std::size_t i = 0; i <= 4; ++i)
            REQUIRE(std::abs(hi.derivative(i) - lo.derivative(i)) <= 1e-8);

        Jet4 slo = mi::sqrt(mi::tanhc(Jet4::variable(sgn * (k0 - eps))));
        Jet4 shi = mi::sqrt(mi::tanhc(Jet4::variable(sgn * (k0 + eps))));
        for (std::size_t i = 0; i <= 4; ++i)
            REQUIRE(std::abs(shi.derivative(i) - slo.derivative(i)) <= 1e-8);
    }
}

TEST_CASE("domain violations throw") {
    REQUIRE_THROWS_AS(mi::sqrt(Jet4::variable(-1.0)), mi::DomainError);
    REQUIRE_THROWS_AS(mi::sqrt(Jet4::variable(0.0)), mi::DomainError);
    REQUIRE_THROWS_AS(mi::coth(Jet4::variable(0.0)), mi::DomainError);
    REQUIRE_THROWS_AS(mi::abs(Jet4::variable(0.0)), mi::DomainError);
    REQUIRE_THROWS_AS(mi::abs(Jet4::variable(-2.0)), mi::DomainError);
    REQUIRE_THROWS_AS(mi::pow(Jet4::variable(-1.5), 0.5), mi::DomainError);
    REQUIRE_THROWS_AS(Jet4::constant(1.0) / Jet4::constant(0.0),
                      mi::DomainError);
    REQUIRE_THROWS_AS(mi::coth(0.0), mi::DomainError);
    REQUIRE_THROWS_AS(mi::sqrt(-2.0), mi::DomainError);
    REQUIRE_THROWS_AS(mi::pow(-1.0, 0.5), mi::DomainError);
}

TEST_CASE("scalar helpers match std counterparts on their domain") {
    REQUIRE(mi::tanhc(0.0) == 1.0);
    REQUIRE(mi::tanhc(2.0) == Catch::Approx(std::tanh(2.0) / 2.0).epsilon(1e-15));
    REQUIRE(mi::tanhc(-2.0) == Catch::Approx(std::tanh(2.0) / 2.0).epsilon(1e-15));
    REQUIRE(mi::coth(1.3) == Catch::Approx(1.0 / std::tanh(1.3)).epsilon(1e-15));
    REQUIRE(mi::abs(-3.5) == 3.5);
    REQUIRE(mi::pow(2.0, 10) == 1024.0);
    REQUIRE(mi::pow(-2.0, 3) == -8.0);
    REQUIRE(mi::pow(2.0, -2) == 0.25);
    REQUIRE(mi::pow(3.0, 0.5) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("integer powers of jets, including negative exponents") {
    Jet4 k = Jet4::variable(1.0);
    Jet4 j = mi::pow(Jet4::constant(1.0) + k * k, -1);
    // d/dk (1+k^2)^-1 = -2k/(1+k^2)^2 -> -0.5 at k=1
    REQUIRE(j.value() == Catch::Approx(0.5).epsilon(1e-14));
    REQUIRE(j.derivative(1) == Catch::Approx(-0.5).epsilon(1e-13));
    auto fd = fd_derivs([](double x) { return 1.0 / (1.0 + x * x); }, 1.0);
    check_against(j, fd, 1e-6);

    REQUIRE(mi::pow(k, 0).value() == 1.0);
    REQUIRE(mi::pow(k, 0).derivative(1) == 0.0);
}
