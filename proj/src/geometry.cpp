#include "adsqnm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "adsqnm/detail/hermite.hpp"
#include "adsqnm/detail/ode.hpp"

namespace adsqnm {

namespace {

constexpr int kTailOrder = kMaxSeriesOrder + 1;

double big_radius(const HorizonData& hz) { return std::max(10.0, 10.0 * hz.r_plus); }

} // namespace

double metric_f(const BlackHoleParams& p, double r, int order)
{
    if (!(r > 0))
        throw std::domain_error("metric_f: radius must be positive");
    const double rd2 = std::pow(r, -(p.d - 2));
    if (order == 0)
        return r * r + 1.0 - p.mu * rd2;
    if (order == 1)
        return 2.0 * r + (p.d - 2) * p.mu * rd2 / r;
    throw std::invalid_argument("metric_f: order must be 0 or 1");
}

HorizonData horizon_radius(const BlackHoleParams& p)
{
    p.validate();
    double hi = 1.0 + std::pow(p.mu, 1.0 / (p.d - 2));
    double lo = 0.5 * hi;
    while (metric_f(p, lo) >= 0)
        lo *= 0.5;
    // f is increasing on (0, inf), so the bracket holds a single root
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (metric_f(p, mid) < 0 ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const double step = metric_f(p, r) / metric_f(p, r, 1);
        r -= step;
        if (std::abs(step) <= 1e-16 * r)
            break;
    }
    if (std::abs(metric_f(p, r)) > 1e-13 * (1 + r * r))
        throw std::runtime_error("horizon_radius: Newton polish did not converge");
    return {r, metric_f(p, r, 1)};
}

double metric_f_near_horizon(const BlackHoleParams& p, const HorizonData& hz, double eps)
{
    const double rp = hz.r_plus;
    const double shell = p.mu * std::pow(rp, 2 - p.d);
    return 2 * rp * eps + eps * eps - shell * std::expm1((2 - p.d) * std::log1p(eps / rp));
}

double z_of_eps(const BlackHoleParams& p, const HorizonData& hz, double eps)
{
    if (!(eps > 0))
        throw std::domain_error("z_of_r: radius must lie outside the horizon");
    const double r_big = big_radius(hz);
    const double r = hz.r_plus + eps;
    const auto tail = regge_wheeler_series<double>(p.d, p.mu, kTailOrder);
    if (r >= r_big)
        return tail.eval(1.0 / r);

    // t = r_+ + e^s; near the horizon the integrand tends to 1/gamma
    auto integrand = [&](double s) {
        const double e = std::exp(s);
        return e / metric_f_near_horizon(p, hz, e);
    };
    const double s0 = std::log(eps);
    const double s1 = std::log(r_big - hz.r_plus);
    double err = 0;
    const double body =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, s0, s1, 12, 1e-12, &err);
    return body + tail.eval(1.0 / r_big);
}

double z_of_r(const BlackHoleParams& p, double r)
{
    const auto hz = horizon_radius(p);
    if (!(r > hz.r_plus))
        throw std::domain_error("z_of_r: radius must lie outside the horizon");
    return z_of_eps(p, hz, r - hz.r_plus);
}

CoordinateMap build_coordinate_map(const BlackHoleParams& p, double z_hi, double tol)
{
    p.validate();
    if (!(z_hi > 0))
        throw std::invalid_argument("build_coordinate_map: z_hi must be positive");
    if (!(tol > 0))
        throw std::invalid_argument("build_coordinate_map: tol must be positive");

    CoordinateMap m;
    m.params_ = p;
    m.horizon_ = horizon_radius(p);
    m.s_series_ = inverse_radius_series<double>(p.d, p.mu, kTailOrder);
    m.taylor_ = potential_series_from<double>(m.s_series_, p.d, p.mu);

    const auto trunc = [&](double z) { return m.s_series_.last_term(z) / m.s_series_.eval(z); };
    double za = std::min(1e-2, 0.5 * z_hi);
    while (trunc(za) > tol && za > 1e-5)
        za *= 0.5;
    if (trunc(za) > tol)
        throw std::invalid_argument("build_coordinate_map: tolerance " + std::to_string(tol) +
                                    " not reachable with the series; achievable about " +
                                    std::to_string(trunc(za)));
    m.z_anchor_ = za;

    const double rp = m.horizon_.r_plus;
    const double gamma = m.horizon_.gamma;
    auto rhs_parts = [&](double y) {
        const double e = std::exp(y);
        const double f = metric_f_near_horizon(p, m.horizon_, e);
        const double g = -f / e;
        const double fp = metric_f(p, rp + e, 1);
        return std::array<double, 2>{g, (-fp - g) * g};
    };

    const double eps0 = 1.0 / m.s_series_.eval(za) - rp;
    std::array<double, 1> y{std::log(eps0)};
    auto push = [&](double z, double yv) {
        const auto g = rhs_parts(yv);
        m.nodes_.push_back({z, yv, g[0], g[1]});
    };
    push(za, y[0]);
    if (z_hi > za) {
        auto sys = [&](const std::array<double, 1>& x, std::array<double, 1>& dx, double) {
            dx[0] = rhs_parts(x[0])[0];
        };
        auto cap = [&](double z, const std::array<double, 1>&) {
            return std::min(0.03 * z, 0.15 / gamma);
        };
        auto obs = [&](double z, std::array<double, 1>& x) { push(z, x[0]); };
        const double itol = std::min(1e-13, 0.1 * tol);
        detail::integrate_capped<1>(sys, y, za, z_hi, itol, itol, cap, obs);
    }
    return m;
}

double CoordinateMap::y_of_z(double z) const
{
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), z,
                               [](double v, const Node& n) { return v < n.z; });
    if (it == nodes_.end())
        --it;
    if (it == nodes_.begin())
        return it->y;
    const Node& b = *it;
    const Node& a = *(it - 1);
    const double dz = b.z - a.z;
    return detail::quintic_hermite({a.y, a.dy, a.d2y}, {b.y, b.dy, b.d2y}, dz, (z - a.z) / dz)[0];
}

double CoordinateMap::eps(double z) const
{
    if (!(z > 0) || z > z_hi() * (1 + 1e-14))
        throw std::out_of_range("CoordinateMap: z outside the covered range (0, " + std::to_string(z_hi()) + "]");
    if (z < z_anchor_)
        return 1.0 / s_series_.eval(z) - horizon_.r_plus;
    return std::exp(y_of_z(z));
}

double CoordinateMap::r(double z, int order) const
{
    if (order == 0) {
        if (z > 0 && z < z_anchor_)
            return 1.0 / s_series_.eval(z);
        return horizon_.r_plus + eps(z);
    }
    if (order == 1)
        return -f(z);
    throw std::invalid_argument("CoordinateMap::r: order must be 0 or 1");
}

double CoordinateMap::f(double z) const
{
    if (z > 0 && z < z_anchor_)
        return metric_f(params_, 1.0 / s_series_.eval(z));
    return metric_f_near_horizon(params_, horizon_, eps(z));
}

double r_of_z(const CoordinateMap& map, double z, int order) { return map.r(z, order); }

} // namespace adsqnm
