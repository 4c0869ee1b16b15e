#pragma once

/// \file perturbation.hpp
/// Rayleigh-Schroedinger expansion of the low-lying eigenvalues about the spiked
/// oscillator Q0 = -d^2/dx^2 + (nu^2 - 1/4)/x^2 + x^2, after z = h^(1/2) x:
///     E_n(h) ~ 1 + sum_k E_{n,k} h^(1 + k/2).

#include <vector>

#include "adsqnm/params.hpp"

namespace adsqnm {

/// Largest expansion order supported by the Taylor data.
inline constexpr int kMaxExpansionOrder = 6;

/// Polynomial coefficients, entry j multiplies x^j.
using Polynomial = std::vector<double>;

/// Q_k for k = 0..K. Entry 0 is the x^2 part of Q0 only (the constant and the
/// singular term are handled analytically).
std::vector<Polynomial> qk_polynomials(const BlackHoleParams& p, int K);

/// x^(nu + 1/2) exp(-x^2/2) sum_j q_j x^j.
class WeightedPolynomial {
public:
    WeightedPolynomial(double nu, Polynomial q);

    double nu() const { return nu_; }
    const Polynomial& coeffs() const { return q_; }
    int degree() const { return static_cast<int>(q_.size()) - 1; }

    double operator()(double x) const;
    /// Exact inner product through Gamma moments.
    double inner(const WeightedPolynomial& o) const;
    double norm() const;

    WeightedPolynomial operator+(const WeightedPolynomial& o) const;
    WeightedPolynomial operator*(double s) const;
    WeightedPolynomial times(const Polynomial& poly) const;

    /// (Q0 - shift) applied exactly. Throws std::domain_error when the result
    /// has an x^(-1) component, i.e. leaves the space.
    WeightedPolynomial apply_q0(double shift) const;

private:
    double nu_;
    Polynomial q_;
};

/// <x^i w, x^j w> with w the bare weight: Gamma(nu + 1 + (i + j)/2) / 2.
double gamma_moment(double nu, int i_plus_j);

/// Normalized n-th eigenfunction of Q0 (positive at the origin).
WeightedPolynomial oscillator_eigenpoly(double nu, int n);

/// <x^alpha u_n, u_n> from the Laguerre connection sum.
double matrix_element_diag(double nu, int alpha, int n);

/// <x^alpha u_m, u_n> by Gamma moments of the explicit polynomials.
double matrix_element(double nu, int alpha, int m, int n);

struct RSExpansion {
    int n = 0;
    int K = 0;
    std::vector<double> E;                        ///< E_{n,0..K}
    std::vector<double> c;                        ///< c[0] = E_{n,0}/2, c[k] for k = 1..K
    std::vector<std::vector<double>> correctors;  ///< v_{n,k} in the oscillator eigenbasis
    int basis_size = 0;
    double truncation_residual = 0; ///< largest part of a right-hand side outside the basis
};

/// Galerkin solve in the oscillator eigenbasis. Exact when all Q_k are even;
/// odd Q_k (d odd) couple to the whole basis and the result is truncated.
RSExpansion rs_expansion(const BlackHoleParams& p, int n, int K, int basis_size = 240);

struct MonomialExpansion {
    int n = 0;
    std::vector<double> E;
    std::vector<WeightedPolynomial> correctors;
    double residual = 0;     ///< largest |(Q0 - E0) v_k - rhs_k| coefficient
    double consistency = 0;  ///< largest Fredholm mismatch at x^(2n)
};

/// Exact descending back-substitution in the weighted-polynomial space.
/// Throws std::domain_error when an odd correction leaves the space.
MonomialExpansion rs_expansion_monomial(const BlackHoleParams& p, int n, int K);

/// Coefficients of omega h = sqrt(1 + sum_k E_k h^(1 + k/2)) in powers of h^(1/2):
/// omega = 1/h + c0 + c1 h^(1/2) + c2 h + ...; c[0] = E_0/2.
std::vector<double> omega_coeffs(const std::vector<double>& E);

/// p_scale * sqrt(1 + sum_{k <= K} E_{n,k} h^(1 + k/2)).
double omega_expansion(const BlackHoleParams& p, int ell, int n, int K);
double omega_expansion(const RSExpansion& ex, int ell, int d);

} // namespace adsqnm
