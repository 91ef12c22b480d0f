#include <catch2/catch_amalgamated.hpp>

#include <mi/series.hpp>
#include <mi/symbol.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace {

constexpr double kPi = 3.14159265358979323846;

// (1/pi) integral over [0, 2pi] by trapezoid; spectrally exact for
// band-limited integrands once the sample count beats the bandwidth.
template <class F>
double quad_over_pi(F&& f, int samples = 1024) {
    double s = 0.0;
    for (int i = 0; i < samples; ++i) s += f(2.0 * kPi * i / samples);
    return s * (2.0 * kPi / samples) / kPi;
}

mi::CosineSeries random_series(std::mt19937& rng, int max_mode) {
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    mi::CosineSeries s;
    for (int n = 0; n <= max_mode; ++n) s.set_coeff(n, amp(rng));
    return s;
}

} // namespace

TEST_CASE("cosine series stores coefficients and evaluates") {
    mi::CosineSeries s;
    CHECK(s.max_mode() == 0);
    CHECK(s.coeff(0) == 0.0);
    CHECK(s.coeff(7) == 0.0);

    s.set_coeff(0, 1.5);
    s.set_coeff(3, -0.25);
    CHECK(s.max_mode() == 3);
    CHECK(s.coeff(3) == -0.25);
    CHECK(s.coeff(2) == 0.0);

    const double z = 0.8341;
    CHECK(s(z) == Catch::Approx(1.5 - 0.25 * std::cos(3 * z)).margin(1e-15).epsilon(0.0));

    auto h = mi::CosineSeries::harmonic(2, 0.5);
    CHECK(h.coeff(2) == 0.5);
    CHECK(h(z) == Catch::Approx(0.5 * std::cos(2 * z)).margin(1e-15).epsilon(0.0));

    auto c = mi::CosineSeries::constant(-3.0);
    CHECK(c.coeff(0) == -3.0);
    CHECK(c.max_mode() == 0);
}

TEST_CASE("linear operations match pointwise arithmetic") {
    std::mt19937 rng(71);
    auto a = random_series(rng, 5);
    auto b = random_series(rng, 3);

    auto sum = a + b;
    auto diff = a - b;
    auto scaled = 2.5 * a;
    auto scaled2 = a * 2.5;

    for (double z : {0.0, 0.3, 1.7, 2.9, 4.4, 6.0}) {
        CHECK(sum(z) == Catch::Approx(a(z) + b(z)).margin(1e-13).epsilon(0.0));
        CHECK(diff(z) == Catch::Approx(a(z) - b(z)).margin(1e-13).epsilon(0.0));
        CHECK(scaled(z) == Catch::Approx(2.5 * a(z)).margin(1e-13).epsilon(0.0));
        CHECK(scaled2(z) == Catch::Approx(2.5 * a(z)).margin(1e-13).epsilon(0.0));
    }

    auto acc = a;
    acc += b;
    acc -= a;
    for (int n = 0; n <= 5; ++n)
        CHECK(acc.coeff(n) == Catch::Approx(b.coeff(n)).margin(1e-15).epsilon(0.0));

    auto neg = -a;
    CHECK(neg.coeff(2) == -a.coeff(2));
}

TEST_CASE("products obey the cosine product rule") {
    SECTION("single harmonics") {
        for (int p = 0; p <= 4; ++p) {
            for (int q = 0; q <= 4; ++q) {
                auto prod = mi::CosineSeries::harmonic(p) *
                            mi::CosineSeries::harmonic(q);
                // cos(pz)cos(qz) = (cos(|p-q|z) + cos((p+q)z)) / 2,
                // valid for all p, q >= 0 including coincident modes.
                mi::CosineSeries want;
                int lo = std::abs(p - q), hi = p + q;
                want.set_coeff(lo, want.coeff(lo) + 0.5);
                want.set_coeff(hi, want.coeff(hi) + 0.5);
                for (int n = 0; n <= 8; ++n)
                    CHECK(prod.coeff(n) ==
                          Catch::Approx(want.coeff(n)).margin(1e-15).epsilon(0.0));
            }
        }
    }

    SECTION("random series, pointwise oracle") {
        std::mt19937 rng(1223);
        for (int trial = 0; trial < 20; ++trial) {
            auto a = random_series(rng, 4);
            auto b = random_series(rng, 5);
            auto prod = a * b;
            CHECK(prod.max_mode() <= 9);
            for (double z : {0.1, 0.9, 2.2, 3.3, 5.1}) {
                CHECK(prod(z) == Catch::Approx(a(z) * b(z)).margin(1e-12).epsilon(0.0));
            }
        }
    }
}

TEST_CASE("inner product matches (1/pi) L2 pairing on [0, 2pi]") {
    auto one = mi::CosineSeries::constant(1.0);
    CHECK(mi::inner(one, one) == Catch::Approx(2.0).margin(1e-15).epsilon(0.0));
    for (int n = 1; n <= 4; ++n) {
        auto h = mi::CosineSeries::harmonic(n);
        CHECK(mi::inner(h, h) == Catch::Approx(1.0).margin(1e-15).epsilon(0.0));
        CHECK(mi::inner(h, one) == Catch::Approx(0.0).margin(1e-15).epsilon(0.0));
    }

    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_series(rng, 6);
        auto b = random_series(rng, 4);
        double want = quad_over_pi([&](double z) { return a(z) * b(z); });
        CHECK(mi::inner(a, b) == Catch::Approx(want).margin(1e-12).epsilon(0.0));
        CHECK(mi::inner(a, b) == Catch::Approx(mi::inner(b, a)).margin(1e-15).epsilon(0.0));
    }
}

TEST_CASE("cosine powers expand exactly") {
    // Hand values.
    auto p2 = mi::cosine_power(2); // 1/2 + cos(2z)/2
    CHECK(p2.coeff(0) == Catch::Approx(0.5).margin(1e-15).epsilon(0.0));
    CHECK(p2.coeff(2) == Catch::Approx(0.5).margin(1e-15).epsilon(0.0));
    CHECK(p2.coeff(1) == 0.0);

    auto p3 = mi::cosine_power(3); // 3cos(z)/4 + cos(3z)/4
    CHECK(p3.coeff(1) == Catch::Approx(0.75).margin(1e-15).epsilon(0.0));
    CHECK(p3.coeff(3) == Catch::Approx(0.25).margin(1e-15).epsilon(0.0));
    CHECK(p3.coeff(0) == 0.0);

    auto p4 = mi::cosine_power(4); // 3/8 + cos(2z)/2 + cos(4z)/8
    CHECK(p4.coeff(0) == Catch::Approx(3.0 / 8).margin(1e-15).epsilon(0.0));
    CHECK(p4.coeff(2) == Catch::Approx(0.5).margin(1e-15).epsilon(0.0));
    CHECK(p4.coeff(4) == Catch::Approx(1.0 / 8).margin(1e-15).epsilon(0.0));

    CHECK(mi::cosine_power(0).coeff(0) == 1.0);
    CHECK(mi::cosine_power(1).coeff(1) == 1.0);

    // Quadrature oracle for q up to 8.
    for (int q = 0; q <= 8; ++q) {
        auto pq = mi::cosine_power(q);
        CHECK(pq.max_mode() <= q);
        double a0 = 0.5 * quad_over_pi(
                              [&](double z) { return std::pow(std::cos(z), q); });
        CHECK(pq.coeff(0) == Catch::Approx(a0).margin(1e-13).epsilon(0.0));
        for (int n = 1; n <= q; ++n) {
            double an = quad_over_pi([&](double z) {
                return std::pow(std::cos(z), q) * std::cos(n * z);
            });
            CHECK(pq.coeff(n) == Catch::Approx(an).margin(1e-13).epsilon(0.0));
        }
    }
}

TEST_CASE("integer powers of a series match pointwise powers") {
    std::mt19937 rng(7);
    auto s = random_series(rng, 3);
    for (int n : {0, 1, 2, 3, 5}) {
        auto pw = mi::power(s, n);
        CHECK(pw.max_mode() <= 3 * n);
        for (double z : {0.2, 1.1, 2.8, 4.9}) {
            CHECK(pw(z) ==
                  Catch::Approx(std::pow(s(z), n)).epsilon(1e-11).margin(1e-11));
        }
    }
    CHECK(mi::power(s, 0).coeff(0) == 1.0);
}

TEST_CASE("mode multipliers act diagonally") {
    mi::CosineSeries s;
    s.set_coeff(0, 2.0);
    s.set_coeff(1, -1.0);
    s.set_coeff(4, 3.0);
    auto out = mi::apply_multiplier(s, [](int n) { return double(n * n); });
    CHECK(out.coeff(0) == 0.0);
    CHECK(out.coeff(1) == -1.0);
    CHECK(out.coeff(4) == 48.0);
    CHECK(out.coeff(2) == 0.0);
}

TEST_CASE("inverting the linearized operator divides by symbol gaps") {
    auto sym = mi::DispersionSymbol::make("1 + k^2");
    const double rho = 1.5;
    // d_n = j(rho) - j(rho n) = rho^2 (1 - n^2)
    auto d = [&](int n) { return rho * rho * (1.0 - double(n) * n); };

    mi::CosineSeries f;
    f.set_coeff(0, 5.0);
    f.set_coeff(2, 2.0);
    f.set_coeff(3, 1.0);
    auto out = mi::apply_D_inverse(f, sym, rho);
    CHECK(out.coeff(0) == Catch::Approx(5.0 / d(0)).margin(1e-15).epsilon(0.0));
    CHECK(out.coeff(2) == Catch::Approx(2.0 / d(2)).margin(1e-15).epsilon(0.0));
    CHECK(out.coeff(3) == Catch::Approx(1.0 / d(3)).margin(1e-15).epsilon(0.0));
    CHECK(out.coeff(1) == 0.0);

    SECTION("kernel component is rejected") {
        mi::CosineSeries g;
        g.set_coeff(1, 1e-6);
        CHECK_THROWS_AS(mi::apply_D_inverse(g, sym, rho), mi::KernelError);
    }

    SECTION("roundoff-size kernel residue is zeroed") {
        mi::CosineSeries g;
        g.set_coeff(1, 1e-14);
        g.set_coeff(2, 1.0);
        auto h = mi::apply_D_inverse(g, sym, rho);
        CHECK(h.coeff(1) == 0.0);
        CHECK(h.coeff(2) == Catch::Approx(1.0 / d(2)).margin(1e-15).epsilon(0.0));
    }

    SECTION("vanishing gap on an occupied mode is a resonance") {
        // cos(k) at rho = 2pi/3: j(2 rho) = j(rho) so mode 2 resonates.
        auto trig = mi::DispersionSymbol::make("cos(k)");
        const double r = 2.0 * kPi / 3.0;
        mi::CosineSeries g2 = mi::CosineSeries::harmonic(2);
        CHECK_THROWS_AS(mi::apply_D_inverse(g2, trig, r), mi::ResonanceError);

        // Unoccupied resonant mode is harmless.
        mi::CosineSeries g3 = mi::CosineSeries::harmonic(3);
        CHECK_NOTHROW(mi::apply_D_inverse(g3, trig, r));
    }
}
