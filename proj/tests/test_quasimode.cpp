#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "adsqnm/quasimode.hpp"

using namespace adsqnm;

namespace {

const BlackHoleParams kRef{3, 0.1, 1.5};

// r with z_of_r(r) = z
double radius_at(const BlackHoleParams& p, double z)
{
    const auto hz = horizon_radius(p);
    auto g = [&](double r) { return z_of_r(p, r) - z; };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::bracket_and_solve_root(g, hz.r_plus + 1.0, 2.0, false, tol, it);
    return 0.5 * (r.first + r.second);
}

} // namespace

TEST_CASE("cutoff profiles")
{
    for (auto prof : {CutoffProfile::Smooth, CutoffProfile::Poly5}) {
        const Cutoff chi({0.5, 1.3, prof});
        CHECK(chi(0.25)[0] == 1.0);
        CHECK(chi(1.3)[0] == 0.0);
        CHECK(chi(2.0)[0] == 0.0);
        // monotone, with finite-difference derivatives
        double total = 0;
        for (int i = 1; i < 400; ++i) {
            const double z = 0.5 + 0.8 * i / 400.0;
            const auto c = chi(z);
            CHECK(c[1] <= 0);
            total += -c[1] * 0.8 / 400;
            const double e = 1e-5;
            CHECK(c[1] == doctest::Approx((chi(z + e)[0] - chi(z - e)[0]) / (2 * e)).epsilon(1e-6).scale(1.0));
            CHECK(c[2] == doctest::Approx((chi(z + e)[1] - chi(z - e)[1]) / (2 * e)).epsilon(1e-5).scale(1.0));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK_THROWS_AS(Cutoff({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Cutoff({0.0, 0.5}), std::invalid_argument);
}

TEST_CASE("default cutoff sits between the window turning point and the barrier top")
{
    const auto spec = default_cutoff(kRef);
    const auto bar = barrier_top(kRef);
    const double S = default_window(kRef);
    CHECK(S == doctest::Approx(0.5 * (bar.V0max - 1)));
    const double zA = turning_points(kRef, 1 + S).z_A;
    CHECK(spec.A > zA);
    CHECK(spec.A == doctest::Approx(0.5 * (zA + bar.z_max)));
    CHECK(spec.B == bar.z_max);
    CHECK_THROWS(default_cutoff(kRef, bar.V0max));
}

TEST_CASE("quasimode residual: commutator identity and trivial cases")
{
    const auto sc = semiclassical(6, 3);
    auto prob = make_reference_problem(kRef, sc.h);
    const auto spec = default_cutoff(kRef);
    prob.max_sample_step = (spec.B - spec.A) / 200;
    const auto ep = eigenvalue(prob, 0);
    const Cutoff chi(spec);
    const double res = quasimode_residual(ep, chi, sc.h);
    CHECK(res > 0);

    // direct quadrature of (-h^2 d^2 + V - E)(chi u) with V from the coordinate map
    const auto map = build_coordinate_map(kRef, spec.B);
    const double h = sc.h;
    auto direct = [&](double z) {
        const auto u = ep.eval(z);
        const auto c = chi(z);
        const double V = effective_potential(kRef, map, h, z);
        const double chiu2 = c[2] * u[0] + 2 * c[1] * u[1] + c[0] * (V - ep.E) * u[0] / (h * h);
        const double r = -h * h * chiu2 + (V - ep.E) * c[0] * u[0];
        return r * r;
    };
    const double dsq = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(direct, spec.A, spec.B, 12, 1e-12);
    CHECK(std::sqrt(dsq) == doctest::Approx(res).epsilon(1e-8));

    // chi = 1 on the whole support
    CHECK(quasimode_residual(ep, Cutoff({spec.B, spec.B + 1}), h) == 0.0);
    // too few samples on the transition
    CHECK_THROWS_AS(quasimode_residual(ep, Cutoff({spec.B - 1e-6, spec.B}), h), std::runtime_error);
}

TEST_CASE("residual and overlap decay exponentially in ell")
{
    std::vector<std::pair<double, double>> res, ov;
    double prev = std::numeric_limits<double>::infinity();
    for (int ell = 10; ell <= 60; ell += 5) {
        const auto r = quasimode_report(kRef, ell, 0);
        CHECK(r.residual < prev);
        prev = r.residual;
        CHECK(r.barrier_mass < 1);
        // Cauchy-Schwarz: the complement integral is bounded by the barrier masses
        CHECK(r.overlap_defect <= 2 * r.barrier_mass);
        CHECK(r.omega == doctest::Approx(semiclassical(ell, 3).p_scale * std::sqrt(r.E)));
        res.push_back({double(ell), r.residual});
        ov.push_back({double(ell), r.overlap_defect});
    }
    const auto fr = exp_decay_fit(res), fo = exp_decay_fit(ov);
    CHECK(fr.decaying);
    CHECK(fr.r_squared >= 0.99);
    CHECK(fo.decaying);
    CHECK(fo.r_squared >= 0.98);

    // the rate follows the Agmon distance int_0^A sqrt(V0 - 1) dz (E -> 1)
    const double A = default_cutoff(kRef).A;
    const double sA = 1 / radius_at(kRef, A);
    const double agmon = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double s) {
            const double v0 = potential_v0_of_s(kRef, s);
            return std::sqrt(std::max(0.0, v0 - 1)) / v0;
        },
        0.0, sA, 10, 1e-12);
    CHECK(-fr.slope == doctest::Approx(agmon).epsilon(0.1));
}

TEST_CASE("overlap defect for exact eigenpairs")
{
    const auto sc = semiclassical(8, 3);
    const auto prob = make_reference_problem(kRef, sc.h);
    std::vector<Eigenpair> pairs;
    for (int n = 0; n < 3; ++n)
        pairs.push_back(eigenvalue(prob, n));
    const double top = prob.model->z_top();
    // chi = 1 everywhere: zero by construction
    CHECK(overlap_defect(pairs, Cutoff({top, top + 1})) == 0.0);
    // direct orthonormality of the solver output
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            const auto& a = pairs[i];
            const auto& b = pairs[j];
            const double ip = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double z) { return a.eval(z)[0] * b.eval(z)[0]; }, a.grid.front(), top, 15, 1e-13);
            const double head = a.u.front() * b.u.front() * a.grid.front() / (2 * kRef.nu + 2);
            CHECK(std::abs(ip + head - (i == j ? 1.0 : 0.0)) < 1e-9);
        }
    CHECK_THROWS_AS(overlap_defect({pairs[0]}, Cutoff({1.0, 1.5})), std::invalid_argument);
}

TEST_CASE("barrier mass")
{
    const auto sc = semiclassical(200, 3);
    const auto ep = eigenvalue(make_reference_problem(kRef, sc.h), 0);
    // Gaussian regime near the origin against the model eigenfunction
    const double t = 2.0, b = std::sqrt(sc.h) * t;
    const auto me = model_eigen(kRef.nu, sc.h, 0);
    const double model = std::sqrt(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double z) { return me.u(z) * me.u(z); }, 0.0, b, 10, 1e-12));
    const double mass = barrier_mass(ep, ep.grid.front(), b);
    CHECK(mass == doctest::Approx(model).epsilon(0.2));
    CHECK(barrier_mass(ep, ep.grid.front(), ep.grid.back()) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(barrier_mass(ep, 0.0, 1.0), std::out_of_range);
}

TEST_CASE("exponential decay fit")
{
    std::vector<std::pair<double, double>> pts, flat;
    for (int l = 5; l <= 40; l += 5) {
        pts.push_back({double(l), 7 * std::exp(-l / 3.0)});
        flat.push_back({double(l), 2.5});
    }
    const auto f = exp_decay_fit(pts);
    CHECK(f.C_est == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.points_used == 6);
    CHECK(exp_decay_fit(pts, 0).points_used == 8);
    const auto g = exp_decay_fit(flat);
    CHECK_FALSE(g.decaying);
    CHECK(g.slope == doctest::Approx(0.0).scale(1.0));
    CHECK(std::isinf(g.C_est));
    pts[3].second = -1;
    CHECK_THROWS_AS(exp_decay_fit(pts), std::invalid_argument);
    CHECK_THROWS_AS(exp_decay_fit({{1, 1}, {2, 1}, {3, 1}}), std::invalid_argument);
}
