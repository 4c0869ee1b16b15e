#pragma once

/// \file geometry.hpp
/// Metric function, horizon and the Regge-Wheeler coordinate
///     z(r) = integral_r^inf dt / f(t),   f(r) = r^2 + 1 - mu / r^(d-2),
/// which maps (r_+, inf) onto (0, inf).

#include <vector>

#include "adsqnm/params.hpp"
#include "adsqnm/radial_series.hpp"

namespace adsqnm {

struct HorizonData {
    double r_plus = 0;
    double gamma = 0; ///< f'(r_+)
};

/// f(r) for order 0, f'(r) for order 1.
double metric_f(const BlackHoleParams& p, double r, int order = 0);

HorizonData horizon_radius(const BlackHoleParams& p);

/// f(r_+ + eps) without the cancellation of the direct formula near the horizon.
double metric_f_near_horizon(const BlackHoleParams& p, const HorizonData& hz, double eps);

/// Regge-Wheeler coordinate of a radius r > r_+.
double z_of_r(const BlackHoleParams& p, double r);

/// Same, parameterized by the distance eps = r - r_+ so that points deep in the
/// exponential tail keep full relative accuracy.
double z_of_eps(const BlackHoleParams& p, const HorizonData& hz, double eps);

/// Evaluator for r(z) on (0, z_hi]: the s = 1/r series below z_anchor and a
/// tabulated solution of the defining ODE above it. Immutable once built.
class CoordinateMap {
public:
    struct Node {
        double z;
        double y;   ///< ln(r - r_+)
        double dy;  ///< dy/dz = -f / (r - r_+)
        double d2y;
    };

    const BlackHoleParams& params() const { return params_; }
    const HorizonData& horizon() const { return horizon_; }
    double z_anchor() const { return z_anchor_; }
    double z_hi() const { return nodes_.back().z; }
    const FormalSeries<double>& inverse_radius() const { return s_series_; }
    /// Taylor data of V0, V1 and F - 1/z^2 about z = 0.
    const PotentialSeries<double>& taylor() const { return taylor_; }
    const std::vector<Node>& nodes() const { return nodes_; }

    /// r(z) for order 0, dr/dz = -f(r(z)) for order 1.
    double r(double z, int order = 0) const;
    /// r(z) - r_+, accurate in the tail.
    double eps(double z) const;
    /// f(r(z)).
    double f(double z) const;

private:
    friend CoordinateMap build_coordinate_map(const BlackHoleParams&, double, double);

    double y_of_z(double z) const;

    BlackHoleParams params_;
    HorizonData horizon_;
    double z_anchor_ = 0;
    FormalSeries<double> s_series_;
    PotentialSeries<double> taylor_;
    std::vector<Node> nodes_;
};

/// Build the map on (0, z_hi]. tol bounds the series truncation error at the
/// handoff point and drives the integrator tolerance.
CoordinateMap build_coordinate_map(const BlackHoleParams& p, double z_hi, double tol = 1e-12);

double r_of_z(const CoordinateMap& map, double z, int order = 0);

} // namespace adsqnm
