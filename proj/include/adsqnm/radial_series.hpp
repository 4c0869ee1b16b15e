#pragma once

/// \file radial_series.hpp
/// Small-z expansions of the Regge-Wheeler coordinate and of the potential
/// pieces, built from FormalSeries arithmetic. With u = 1/r,
///
///     z(u) = integral_0^u dv / (1 + v^2 - mu v^d),
///
/// and s(z) = 1/r(z) is its compositional inverse.

#include "adsqnm/params.hpp"
#include "adsqnm/series.hpp"

namespace adsqnm {

/// Largest truncation order accepted for the radial expansions.
inline constexpr int kMaxSeriesOrder = 16;

/// z as a series in u = 1/r, known modulo u^order.
template <class T>
FormalSeries<T> regge_wheeler_series(int d, const T& mu, int order)
{
    if (order < 3 || order > kMaxSeriesOrder + 1)
        throw std::invalid_argument("regge_wheeler_series: unsupported order");
    std::vector<T> g(static_cast<std::size_t>(order), T(0));
    g[0] = T(1);
    if (order > 2)
        g[2] = T(1);
    if (d < order)
        g[static_cast<std::size_t>(d)] -= mu;
    const FormalSeries<T> denom(0, std::move(g), order - 1);
    return denom.reciprocal().integrated();
}

/// s(z) = 1/r(z), known modulo z^order.
template <class T>
FormalSeries<T> inverse_radius_series(int d, const T& mu, int order)
{
    return series_reverse(regge_wheeler_series<T>(d, mu, order));
}

/// Laurent series of r(z) = 1/z + a_1 z + ..., from the reversion above.
template <class T>
FormalSeries<T> radius_series(int d, const T& mu, int order)
{
    return inverse_radius_series<T>(d, mu, order).reciprocal();
}

/// Series pieces of the effective potential near z = 0 (coefficients in z).
///   v0:        V0 = 1 + s^2 - mu s^d
///   v1:        V1 = (-s^2/4 + mu (d-1)^2 s^d / 4) F
///   f_regular: F - 1/z^2, F = f(r(z)) = 1/s^2 + 1 - mu s^(d-2)
template <class T>
struct PotentialSeries {
    FormalSeries<T> v0;
    FormalSeries<T> v1;
    FormalSeries<T> f_regular;
};

/// Same, starting from an already computed s(z).
template <class T>
PotentialSeries<T> potential_series_from(const FormalSeries<T>& s, int d, const T& mu)
{
    const int order = s.order();
    const auto s2 = s * s;
    const auto sd = s.pow(d);
    const auto one = FormalSeries<T>::constant(T(1), order + 4);
    const auto v0 = one + s2 - mu * sd;
    const auto inv_s2 = s2.reciprocal();
    const auto f = inv_s2 + one - mu * s.pow(d - 2);
    const auto pole = FormalSeries<T>::monomial(T(1), -2, f.order());
    const auto f_regular = f - pole;
    const T dm1 = T(d - 1);
    const auto v1 = (T(-1) / T(4) * s2 + (mu * dm1 * dm1 / T(4)) * sd) * f;
    return {v0, v1, f_regular};
}

template <class T>
PotentialSeries<T> potential_series(int d, const T& mu, int order)
{
    return potential_series_from<T>(inverse_radius_series<T>(d, mu, order), d, mu);
}

/// Double-precision r(z) expansion for the given black hole.
inline FormalSeries<double> r_series(const BlackHoleParams& p, int order)
{
    p.validate();
    if (order > kMaxSeriesOrder)
        throw std::invalid_argument("r_series: order above supported maximum");
    return radius_series<double>(p.d, p.mu, order);
}

} // namespace adsqnm
