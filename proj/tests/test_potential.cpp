#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "adsqnm/potential.hpp"

using namespace adsqnm;

namespace {

std::vector<double> log_grid(double a, double b, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(a * std::pow(b / a, double(i) / (n - 1)));
    return out;
}

// golden-section maximization, the oracle for the barrier position
template <class F>
double golden_max(F&& g, double a, double b)
{
    const double phi = 0.5 * (std::sqrt(5.0) - 1);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        if (g(c) > g(d))
            b = d;
        else
            a = c;
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    return 0.5 * (a + b);
}

} // namespace

TEST_CASE("semiclassical scaling")
{
    const auto s = semiclassical(3, 3);
    CHECK(s.h == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
    CHECK(s.p_scale * s.h == 1.0);
    CHECK(semiclassical(0, 4).h == 1.0);
    CHECK_THROWS(semiclassical(-1, 3));
}

TEST_CASE("potential near the boundary")
{
    const BlackHoleParams p{3, 0.1, 1.5};
    const auto map = build_coordinate_map(p, 3.0);
    const double h = 2.0 / 7.0;
    const double k = p.nu * p.nu - 0.25;
    const double limit = 1 + h * h * (p.nu * p.nu - 1) / 3;
    for (double z : {1e-4, 1e-3, 5e-3}) {
        const auto parts = decompose_potential(p, map, h, z);
        CHECK(parts.W == doctest::Approx(limit).epsilon(2 * z));
    }
    // W continuous across the series handoff
    const double za = map.z_anchor();
    const double below = decompose_potential(p, map, h, za * (1 - 1e-9)).W;
    const double above = decompose_potential(p, map, h, za * (1 + 1e-9)).W;
    CHECK(below == doctest::Approx(above).epsilon(1e-10));

    // sum identity on a random grid
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uz(0.02, 2.9);
    for (int i = 0; i < 50; ++i) {
        const double z = uz(rng);
        const auto parts = decompose_potential(p, map, h, z);
        const double V = effective_potential(p, map, h, z);
        CHECK(parts.Vm1 + parts.V0 + h * h * parts.V1 == doctest::Approx(V).epsilon(1e-12));
        // the Taylor branch is more accurate than the tabulated map here
        CHECK(parts.W + h * h * k / (z * z) == doctest::Approx(V).epsilon(1e-11));
        CHECK(potential_of_s(p, h, 1 / map.r(z)) == doctest::Approx(V).epsilon(1e-12));
    }

    // conformal coupling: no singular term
    const BlackHoleParams c{3, 0.1, 0.5};
    const auto cmap = build_coordinate_map(c, 1.0);
    // the first correction is h^2 mu z for d = 3
    CHECK(std::abs(effective_potential(c, cmap, h, 1e-5) - (1 + h * h * (0.25 - 1) / 3)) < 1e-6);

    CHECK(decompose_potential(p, map, h, 1e-6).V0 == doctest::Approx(1).epsilon(1e-10));
    CHECK_THROWS(effective_potential(p, map, 1.5, 0.1));
    CHECK_THROWS(effective_potential(p, map, h, 3.5));
}

TEST_CASE("exponential tail of the potential")
{
    const BlackHoleParams p{3, 0.1, 1.5};
    const auto tp = turning_points(p, 3.0);
    const auto map = build_coordinate_map(p, tp.z_B + 10);
    const double gamma = map.horizon().gamma;
    const double h = 0.1;
    const double z1 = tp.z_B + 2, z2 = tp.z_B + 8;
    const double rate = -std::log(effective_potential(p, map, h, z2) / effective_potential(p, map, h, z1)) / (z2 - z1);
    CHECK(rate == doctest::Approx(gamma).epsilon(0.1));
    // first and second finite-difference derivatives decay at the same rate
    auto dV = [&](double z) {
        const double s = 1e-3;
        return (effective_potential(p, map, h, z + s) - effective_potential(p, map, h, z - s)) / (2 * s);
    };
    auto d2V = [&](double z) {
        const double s = 1e-3;
        return (effective_potential(p, map, h, z + s) - 2 * effective_potential(p, map, h, z) +
                effective_potential(p, map, h, z - s)) / (s * s);
    };
    CHECK(-std::log(std::abs(dV(z2) / dV(z1))) / (z2 - z1) == doctest::Approx(gamma).epsilon(0.1));
    CHECK(-std::log(std::abs(d2V(z2) / d2V(z1))) / (z2 - z1) == doctest::Approx(gamma).epsilon(0.1));

    // W decays too when nu = 1/2
    const BlackHoleParams c{3, 0.1, 0.5};
    const auto cmap = build_coordinate_map(c, tp.z_B + 10);
    CHECK(decompose_potential(c, cmap, h, z2).W < 1e-20);
    CHECK(decompose_potential(p, map, h, z2).V0 < 1e-20);

    // V0 + h^2 V1 > 0 all the way out
    for (double hh : {1.0, 0.5, 0.1, 0.01})
        for (double z : log_grid(1e-4, tp.z_B + 10, 400)) {
            const auto parts = decompose_potential(p, map, hh, z);
            CHECK(parts.V0 + hh * hh * parts.V1 > 0);
        }
}

TEST_CASE("barrier top")
{
    const auto b4 = barrier_top({4, 0.5, 1.0});
    CHECK(b4.r_max == doctest::Approx(1).epsilon(1e-15));
    CHECK(b4.V0max == doctest::Approx(1.5).epsilon(1e-15));

    const BlackHoleParams p{3, 0.1, 1.5};
    const auto b3 = barrier_top(p);
    CHECK(b3.r_max == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(b3.V0max == doctest::Approx(1 + std::pow(20.0 / 3.0, 2) / 3).epsilon(1e-14));
    CHECK(b3.z_max == doctest::Approx(z_of_r(p, 0.15)).epsilon(1e-15));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> umu(0.05, 3.0);
    std::uniform_int_distribution<int> ud(3, 7);
    for (int i = 0; i < 5; ++i) {
        const BlackHoleParams q{ud(rng), umu(rng), 1.0};
        const auto b = barrier_top(q);
        const auto map = build_coordinate_map(q, 2 * b.z_max);
        auto v0 = [&](double z) { return decompose_potential(q, map, 0.5, z).V0; };
        // grid oracle for the value, golden section for the position
        double vbest = 0;
        for (double z : log_grid(1e-3, 2 * b.z_max, 2000))
            vbest = std::max(vbest, v0(z));
        CHECK(vbest <= b.V0max * (1 + 1e-14));
        CHECK(vbest == doctest::Approx(b.V0max).epsilon(1e-4));
        const double zg = golden_max(v0, 0.5 * b.z_max, 1.5 * b.z_max);
        // a quadratic maximum pins the argmax only to about sqrt(machine eps)
        CHECK(std::abs(zg - b.z_max) <= 1e-7 * (1 + b.z_max));
        // the exact stationarity condition, through the radius
        const double r = map.r(b.z_max);
        CHECK(-2 / std::pow(r, 3) + q.d * q.mu / std::pow(r, q.d + 1) == doctest::Approx(0).epsilon(1e-9));
    }
}

TEST_CASE("turning points")
{
    const BlackHoleParams p{3, 0.1, 1.5};
    const auto b = barrier_top(p);
    const auto t = turning_points(p, 5.0);
    CHECK(t.z_A < b.z_max);
    CHECK(t.z_B > b.z_max);
    const auto map = build_coordinate_map(p, t.z_B + 1);
    CHECK(decompose_potential(p, map, 0.5, t.z_A).V0 == doctest::Approx(5).epsilon(1e-9));
    CHECK(decompose_potential(p, map, 0.5, t.z_B).V0 == doctest::Approx(5).epsilon(1e-9));

    const auto near = turning_points(p, b.V0max * (1 - 1e-8));
    CHECK(near.z_A == doctest::Approx(b.z_max).epsilon(1e-3));
    CHECK(near.z_B == doctest::Approx(b.z_max).epsilon(1e-3));

    // z_A(1 + T h) ~ sqrt(T h) and z_B(1 + T h) -> z(mu^(1/(d-2)))
    const double T = 2.0;
    double prev = 1;
    for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const auto tp = turning_points(p, 1 + T * h);
        const double ratio = tp.z_A / std::sqrt(T * h);
        CHECK(std::abs(ratio - 1) < prev);
        prev = std::abs(ratio - 1);
        CHECK(tp.z_B == doctest::Approx(z_of_r(p, std::pow(p.mu, 1.0 / (p.d - 2)))).epsilon(10 * h));
    }
    CHECK(prev < 1e-3);

    CHECK_THROWS(turning_points(p, 0.5));
    CHECK_THROWS(turning_points(p, b.V0max + 1));
}

TEST_CASE("bivariate Taylor table")
{
    const BlackHoleParams p{3, 0.1, 1.5};
    const auto t = v_bivariate_coeffs(p, 8, 2);
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(1, 0) == 0);
    CHECK(t.at(2, 0) == 1);
    CHECK(t.at(3, 0) == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(t.at(0, 1) == doctest::Approx((p.nu * p.nu - 1) / 3).epsilon(1e-15));
    for (int a = 0; a <= 8; ++a)
        CHECK(t.at(a, 2) == 0);
    CHECK_THROWS(t.at(9, 0));

    for (int d : {4, 5, 6})
        CHECK(v_bivariate_coeffs({d, 0.3, 1.0}, 4, 1).at(3, 0) == 0);

    // against the direct potential at small z
    const auto full = v_bivariate_coeffs(p, kMaxTaylorZOrder, 1);
    const auto map = build_coordinate_map(p, 1.0);
    const double h = 0.3;
    for (double z : {0.02, 0.05, 0.1}) {
        double sum = 0;
        for (int a = 0; a <= kMaxTaylorZOrder; ++a)
            sum += (full.at(a, 0) + h * h * full.at(a, 1)) * std::pow(z, a);
        CHECK(sum == doctest::Approx(decompose_potential(p, map, h, z).W).epsilon(1e-10));
    }
    CHECK_THROWS(v_bivariate_coeffs(p, kMaxTaylorZOrder + 1, 1));
}

TEST_CASE("Hardy and domination inequalities")
{
    for (const BlackHoleParams& p : {BlackHoleParams{3, 0.1, 1.5}, BlackHoleParams{4, 2.0, 1.0}, BlackHoleParams{6, 0.5, 0.3}}) {
        const auto hz = horizon_radius(p);
        for (double e : log_grid(1e-10, 1e3, 300))
            CHECK(hardy_margin(p, hz, hz.r_plus + e) >= 0);
        // check against the direct formula where it is well conditioned
        const double r = 2 * hz.r_plus + 1;
        CHECK(hardy_margin(p, hz, r) == doctest::Approx(metric_f(p, r) - std::pow(r - hz.r_plus, 2)).epsilon(1e-12));

        const auto b = barrier_top(p);
        const auto map = build_coordinate_map(p, b.z_max);
        for (double h : {0.2, 0.05, 0.01})
            for (double z : log_grid(1e-4 * b.z_max, b.z_max, 400))
                CHECK(decompose_potential(p, map, h, z).W > -1e-12);
    }
}

TEST_CASE("W switches between Taylor and direct forms consistently")
{
    // sparse series (d = 4, 6) have zero trailing coefficients; the switch must
    // not mistake that for convergence
    for (const BlackHoleParams& p : {BlackHoleParams{4, 2.0, 1.0}, BlackHoleParams{6, 0.5, 0.3}, BlackHoleParams{3, 0.1, 1.5}}) {
        const auto b = barrier_top(p);
        const auto map = build_coordinate_map(p, b.z_max);
        for (double h : {2.0 / 7, 0.1, 0.01})
            for (double z : log_grid(0.05, b.z_max, 40)) {
                const double V = effective_potential(p, map, h, z);
                const double direct = V - h * h * (p.nu * p.nu - 0.25) / (z * z);
                CHECK(decompose_potential(p, map, h, z).W == doctest::Approx(direct).epsilon(1e-9));
            }
    }
}
