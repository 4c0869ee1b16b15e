#pragma once

/// \file potential.hpp
/// Effective potential of the rescaled radial equation
///     (-h^2 d^2/dz^2 + V(z;h) - E) u = 0,   h = 2 / (2 l + d - 2),
/// with V = f [ (1 - h^2/4) / r^2 + h^2 (nu^2 - 1/4) + h^2 mu (d-1)^2 / (4 r^d) ].

#include <vector>

#include "adsqnm/geometry.hpp"

namespace adsqnm {

struct SemiclassicalParams {
    int ell = 0;
    int d = 3;
    double h = 0;       ///< 2 / (2 ell + d - 2)
    double p_scale = 0; ///< ell - 1 + d/2 = 1/h
};

SemiclassicalParams semiclassical(int ell, int d);

struct PotentialParts {
    double Vm1; ///< h^2 (nu^2 - 1/4) f
    double V0;  ///< 1 + 1/r^2 - mu / r^d
    double V1;  ///< (-1/(4 r^2) + mu (d-1)^2 / (4 r^d)) f
    double W;   ///< V - h^2 (nu^2 - 1/4) / z^2
};

/// The pieces as functions of s = 1/r (no coordinate map needed).
double potential_v0_of_s(const BlackHoleParams& p, double s);
double potential_of_s(const BlackHoleParams& p, double h, double s);

double effective_potential(const BlackHoleParams& p, const CoordinateMap& map, double h, double z);

/// Decomposition at z. Near z = 0, W comes from the Taylor data, where the
/// direct difference would cancel.
PotentialParts decompose_potential(const BlackHoleParams& p, const CoordinateMap& map, double h, double z);

struct BarrierData {
    double r_max;
    double z_max;
    double V0max;
};

BarrierData barrier_top(const BlackHoleParams& p);
BarrierData barrier_top(const BlackHoleParams& p, const CoordinateMap& map);

struct TurningPoints {
    double E;
    double z_A;
    double z_B;
};

/// Solutions of V0(z) = E on either side of the barrier, 1 < E < V0max.
TurningPoints turning_points(const BlackHoleParams& p, double E);
TurningPoints turning_points(const BlackHoleParams& p, const CoordinateMap& map, double E);

/// Taylor table of V near z = 0:
///     V(z;h) = h^2 (nu^2 - 1/4) / z^2 + sum_{a,b} c[a][b] z^a h^(2b).
/// Only b = 0, 1 can be nonzero; rows for b > 1 are returned as zeros.
struct BivariateTable {
    int z_order;
    int h_order;
    std::vector<std::vector<double>> c; ///< c[a][b], 0 <= a <= z_order, 0 <= b <= h_order

    double at(int a, int b) const;
};

/// Largest z exponent available from the radial series.
inline constexpr int kMaxTaylorZOrder = 12;

BivariateTable v_bivariate_coeffs(const BlackHoleParams& p, int z_order, int h_order);

/// Hardy factorization margin in the radial variable, scaled by 1/h^2:
///     f - (r - r_+)^2 >= 0,
/// which is f^2 Y^2 - h f d/dr(f Y) <= -h^2 f / 4 with Y = h (r - r_+) / (2 f).
double hardy_margin(const BlackHoleParams& p, const HorizonData& hz, double r);

} // namespace adsqnm
