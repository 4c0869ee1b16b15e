#include "adsqnm/potential.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace adsqnm {

namespace {

using Rational = boost::multiprecision::cpp_rational;

double root_in(const std::function<double(double)>& g, double a, double b)
{
    std::uintmax_t iters = 200;
    const auto res = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (res.first + res.second);
}

} // namespace

SemiclassicalParams semiclassical(int ell, int d)
{
    if (ell < 0)
        throw std::invalid_argument("semiclassical: ell must be non-negative");
    if (2 * ell + d - 2 <= 0)
        throw std::invalid_argument("semiclassical: 2 ell + d - 2 must be positive");
    SemiclassicalParams s;
    s.ell = ell;
    s.d = d;
    s.p_scale = ell - 1 + 0.5 * d;
    s.h = 1.0 / s.p_scale;
    return s;
}

double potential_v0_of_s(const BlackHoleParams& p, double s) { return 1.0 + s * s - p.mu * std::pow(s, p.d); }

double potential_of_s(const BlackHoleParams& p, double h, double s)
{
    const double s2 = s * s;
    const double sd = std::pow(s, p.d);
    const double F = 1.0 / s2 + 1.0 - p.mu * sd / s2;
    const double h2 = h * h;
    const double dm1 = p.d - 1;
    return F * ((1.0 - 0.25 * h2) * s2 + h2 * (p.nu * p.nu - 0.25) + 0.25 * h2 * p.mu * dm1 * dm1 * sd);
}

double effective_potential(const BlackHoleParams& p, const CoordinateMap& map, double h, double z)
{
    if (!(h > 0 && h <= 1))
        throw std::invalid_argument("effective_potential: h must lie in (0, 1]");
    const double r = map.r(z);
    const double F = map.f(z);
    const double h2 = h * h;
    const double dm1 = p.d - 1;
    return F * ((1.0 - 0.25 * h2) / (r * r) + h2 * (p.nu * p.nu - 0.25) + 0.25 * h2 * p.mu * dm1 * dm1 * std::pow(r, -p.d));
}

PotentialParts decompose_potential(const BlackHoleParams& p, const CoordinateMap& map, double h, double z)
{
    if (!(h > 0 && h <= 1))
        throw std::invalid_argument("decompose_potential: h must lie in (0, 1]");
    const double r = map.r(z);
    const double F = map.f(z);
    const double h2 = h * h;
    const double k = p.nu * p.nu - 0.25;
    const double dm1 = p.d - 1;
    const double rd = std::pow(r, -p.d);

    PotentialParts out;
    out.Vm1 = h2 * k * F;
    // F / r^2 keeps full relative accuracy near the horizon
    out.V0 = F / (r * r);
    out.V1 = (-0.25 / (r * r) + 0.25 * p.mu * dm1 * dm1 * rd) * F;

    // F - 1/z^2 cancels: a relative error ~1e-12 in r(z) costs about
    // 2e-12 h^2 |k| / z^2 in W. The Taylor form costs its truncation tail.
    // Take whichever is smaller.
    const auto& ts = map.taylor();
    const double tail = ts.v0.last_term(z) + h2 * (ts.v1.last_term(z) + std::abs(k) * ts.f_regular.last_term(z));
    const double cancel = 1e-15 + 4e-12 * h2 * std::abs(k) / (z * z);
    if (tail < cancel)
        out.W = ts.v0.eval(z) + h2 * ts.v1.eval(z) + h2 * k * ts.f_regular.eval(z);
    else
        out.W = out.V0 + h2 * out.V1 + h2 * k * (F - 1.0 / (z * z));
    return out;
}

BarrierData barrier_top(const BlackHoleParams& p)
{
    p.validate();
    const double d = p.d;
    BarrierData b;
    b.r_max = std::pow(0.5 * p.mu * d, 1.0 / (d - 2));
    b.V0max = 1.0 + std::pow(2.0 / (p.mu * d), 2.0 / (d - 2)) * (d - 2) / d;
    b.z_max = z_of_r(p, b.r_max);
    return b;
}

BarrierData barrier_top(const BlackHoleParams& p, const CoordinateMap& map)
{
    auto b = barrier_top(p);
    if (b.z_max > map.z_hi())
        throw std::out_of_range("barrier_top: coordinate map does not reach the barrier");
    return b;
}

TurningPoints turning_points(const BlackHoleParams& p, double E)
{
    const auto b = barrier_top(p);
    if (!(E > 1 && E < b.V0max))
        throw std::domain_error("turning_points: E must lie in (1, V0max) = (1, " + std::to_string(b.V0max) + ")");
    const auto hz = horizon_radius(p);
    // V0 as a function of s = 1/r rises from 1 to V0max on (0, s_max), then
    // falls to 0 at s = 1/r_+
    const double s_max = 1.0 / b.r_max;
    const std::function<double(double)> g = [&](double s) { return potential_v0_of_s(p, s) - E; };
    const double s_A = root_in(g, 0.0, s_max);
    const double s_B = root_in(g, s_max, 1.0 / hz.r_plus);
    TurningPoints t;
    t.E = E;
    t.z_A = z_of_eps(p, hz, 1.0 / s_A - hz.r_plus);
    t.z_B = z_of_eps(p, hz, 1.0 / s_B - hz.r_plus);
    return t;
}

TurningPoints turning_points(const BlackHoleParams& p, const CoordinateMap& map, double E)
{
    auto t = turning_points(p, E);
    if (t.z_B > map.z_hi())
        throw std::out_of_range("turning_points: coordinate map does not reach z_B");
    return t;
}

double BivariateTable::at(int a, int b) const
{
    if (a < 0 || a > z_order || b < 0 || b > h_order)
        throw std::out_of_range("BivariateTable: index outside the table");
    return c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

BivariateTable v_bivariate_coeffs(const BlackHoleParams& p, int z_order, int h_order)
{
    p.validate();
    if (z_order < 0 || z_order > kMaxTaylorZOrder)
        throw std::invalid_argument("v_bivariate_coeffs: z_order must be in [0, " + std::to_string(kMaxTaylorZOrder) + "]");
    if (h_order < 0)
        throw std::invalid_argument("v_bivariate_coeffs: h_order must be non-negative");

    // exact arithmetic in the binary value of mu
    const Rational mu(p.mu);
    // s to z^(z_order + 5) fixes every coefficient up to z^z_order
    const auto ps = potential_series<Rational>(p.d, mu, std::min(kMaxSeriesOrder + 1, std::max(3, z_order + 5)));
    const double k = p.nu * p.nu - 0.25;

    BivariateTable t{z_order, h_order, {}};
    t.c.assign(static_cast<std::size_t>(z_order + 1), std::vector<double>(static_cast<std::size_t>(h_order + 1), 0.0));
    for (int a = 0; a <= z_order; ++a) {
        t.c[a][0] = static_cast<double>(ps.v0.coeff(a));
        if (h_order >= 1)
            t.c[a][1] = static_cast<double>(ps.v1.coeff(a)) + k * static_cast<double>(ps.f_regular.coeff(a));
    }
    return t;
}

double hardy_margin(const BlackHoleParams& p, const HorizonData& hz, double r)
{
    const double eps = r - hz.r_plus;
    if (!(eps > 0))
        throw std::domain_error("hardy_margin: radius must lie outside the horizon");
    const double rp = hz.r_plus;
    const double shell = p.mu * std::pow(rp, 2 - p.d);
    // f(r_+ + eps) - eps^2 without forming the two small terms separately
    return 2 * rp * eps - shell * std::expm1((2 - p.d) * std::log1p(eps / rp));
}

} // namespace adsqnm
