#pragma once

/// \file spectral.hpp
/// Shooting solver for singular Sturm-Liouville problems of the form
///     -h^2 u'' + (h^2 (nu^2 - 1/4) / z^2 + W(z) - E) u = 0  on (0, z_top],
/// with the Friedrichs condition z^(nu - 1/2) u -> 0 at 0 and u(z_top) = 0.
/// The left end is started from the Frobenius series of the z^(nu + 1/2)
/// solution. Eigenvalues are indexed by the number of interior zeros.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "adsqnm/geometry.hpp"
#include "adsqnm/potential.hpp"

namespace adsqnm {

/// Potential along a shot. A model may carry one auxiliary scalar that is
/// integrated together with u (the black hole uses s = 1/r, s' = V0(s)) so that
/// the potential never has to be interpolated.
class PotentialModel {
public:
    virtual ~PotentialModel() = default;

    virtual double nu() const = 0;
    virtual double h() const = 0;
    virtual double z_top() const = 0;
    /// Taylor coefficients of W = V - h^2 (nu^2 - 1/4)/z^2 about z = 0.
    virtual std::vector<double> taylor_w(int count) const = 0;
    /// Full potential V at z given the auxiliary value there.
    virtual double potential(double z, double aux) const = 0;
    virtual double aux_at_start(double z0) const = 0;
    virtual double aux_at_top() const = 0;
    virtual double aux_rhs(double z, double aux) const = 0;
    /// Where left and right shots meet for energies near E.
    virtual double match_point(double E) const = 0;
    /// Rough location of the n-th eigenvalue, NaN when unknown.
    virtual double energy_hint(int n) const;
};

/// Angular part of the potential. Exact carries (p^2 - 1/4)/r^2; Shifted uses
/// p^2/r^2, i.e. adds (h^2/4) V0. The shifted operator is what the reference
/// solver column corresponds to.
enum class AngularTerm { Exact, Shifted };

/// Reference problem of the black hole: V(z;h) on (0, z_max].
std::shared_ptr<const PotentialModel> black_hole_model(const BlackHoleParams& p, double h,
                                                       AngularTerm angular = AngularTerm::Exact);

/// V = h^2 (nu^2 - 1/4)/z^2 + sum_j w_j z^j on (0, z_top]. With w = {1, 0, 1}
/// this is the spiked harmonic oscillator; with w empty, the Bessel problem.
std::shared_ptr<const PotentialModel> polynomial_model(double nu, double h, double z_top, std::vector<double> w);

struct EigenProblem {
    std::shared_ptr<const PotentialModel> model;
    double z0 = 0;              ///< series start; 0 selects 1e-2 h
    int frobenius_order = 8;
    double tol_E = 1e-12;       ///< relative tolerance on E
    double rtol = 1e-12;        ///< integrator tolerance for refinement shots
    double E_cap = 0;           ///< bracket search limit; 0 means unlimited
    double max_sample_step = 0; ///< extra bound on the eigenfunction grid spacing; 0 means none

    double start() const;
};

EigenProblem make_reference_problem(const BlackHoleParams& p, double h, AngularTerm angular = AngularTerm::Exact);

struct FrobeniusStart {
    double u;
    double du;
    double truncation_error; ///< relative size of the last retained term
};

FrobeniusStart frobenius_initial(const EigenProblem& prob, double E);

struct ShotResult {
    double endpoint; ///< u / |(u, h u')| at z_top, a Dirichlet defect in [-1, 1]
    int zeros;       ///< sign changes on (z0, z_top)
};

ShotResult shoot(const EigenProblem& prob, double E);

/// Number of eigenvalues below E (Sturm count of the forward solution).
int eigenvalue_count(const EigenProblem& prob, double E);

struct Eigenpair {
    int n = 0;
    double E = 0;
    std::vector<double> grid;
    std::vector<double> u, du, d2u;
    double norm_defect = 0;  ///< | integral u^2 - 1 | by independent quadrature
    double match_defect = 0; ///< normalized Wronskian at the match point

    /// (u, u', u'') at z by quintic Hermite interpolation; zero outside the grid.
    std::array<double, 3> eval(double z) const;
    /// Integral of g(z) u(z)^2 over [a, b] (clipped to the grid).
    double integrate_sq(double a, double b, const std::function<double(double)>& g = {}) const;
    int interior_zeros() const;
};

Eigenpair eigenvalue(const EigenProblem& prob, int n);
std::vector<Eigenpair> eigenvalues_below(const EigenProblem& prob, double E_cap);

/// Spiked harmonic oscillator: E = 1 + 2 (2n + 1 + nu) h with the normalized
/// Laguerre eigenfunction h^(-1/4) u_n(z / sqrt(h); 1).
struct ModelEigen {
    double E;
    std::function<double(double)> u;
};

ModelEigen model_eigen(double nu, double h, int n);

/// n-th positive zero of J_nu (n >= 1).
double bessel_zero(double nu, int n);

/// #{n >= 1 : (h / z_top)^2 j_{nu,n}^2 <= L}.
int weyl_count(double nu, double h, double z_top, double L);

} // namespace adsqnm
