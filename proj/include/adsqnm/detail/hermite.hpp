#pragma once

#include <array>

namespace adsqnm::detail {

/// Value, first and second derivative of the quintic Hermite interpolant on
/// [x0, x0 + dx] matching (p, p', p'') at both ends.
struct QuinticNode {
    double p, d1, d2;
};

inline std::array<double, 3> quintic_hermite(const QuinticNode& a, const QuinticNode& b, double dx, double t)
{
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h3 = 0.5 * t3 - t4 + 0.5 * t5;
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h5 = 10 * t3 - 15 * t4 + 6 * t5;

    const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    const double g3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g5 = -g0;

    const double k0 = -60 * t + 180 * t2 - 120 * t3;
    const double k1 = -36 * t + 96 * t2 - 60 * t3;
    const double k2 = 1 - 9 * t + 18 * t2 - 10 * t3;
    const double k3 = 3 * t - 12 * t2 + 10 * t3;
    const double k4 = -24 * t + 84 * t2 - 60 * t3;
    const double k5 = -k0;

    const double dx2 = dx * dx;
    const double v = h0 * a.p + dx * h1 * a.d1 + dx2 * h2 * a.d2 + dx2 * h3 * b.d2 + dx * h4 * b.d1 + h5 * b.p;
    const double dv = (g0 * a.p + g5 * b.p) / dx + g1 * a.d1 + g4 * b.d1 + dx * (g2 * a.d2 + g3 * b.d2);
    const double d2v = (k0 * a.p + k5 * b.p) / dx2 + (k1 * a.d1 + k4 * b.d1) / dx + k2 * a.d2 + k3 * b.d2;
    return {v, dv, d2v};
}

/// 8-point Gauss-Legendre nodes and weights on [0, 1].
inline constexpr std::array<double, 8> kGaussNodes01 = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.4082826787521751,
    0.5917173212478249,   0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
inline constexpr std::array<double, 8> kGaussWeights01 = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894363, 0.18134189168918100,
    0.18134189168918100, 0.15685332293894363, 0.11119051722668724, 0.05061426814518813};

} // namespace adsqnm::detail
