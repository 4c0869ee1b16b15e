#pragma once

/// \file quasimode.hpp
/// Quasimodes chi u from eigenpairs of the reference problem. Since V is a
/// multiplication operator, (P - E)(chi u) = -h^2 (chi'' u + 2 chi' u').

#include <array>
#include <utility>
#include <vector>

#include "adsqnm/spectral.hpp"

namespace adsqnm {

enum class CutoffProfile { Smooth, Poly5 };

struct CutoffSpec {
    double A = 0; ///< chi = 1 on (0, A]
    double B = 0; ///< chi = 0 on [B, inf)
    CutoffProfile profile = CutoffProfile::Smooth;
};

class Cutoff {
public:
    explicit Cutoff(const CutoffSpec& spec);

    const CutoffSpec& spec() const { return spec_; }
    /// (chi, chi', chi'') at z.
    std::array<double, 3> operator()(double z) const;

private:
    CutoffSpec spec_;
};

Cutoff build_cutoff(const CutoffSpec& spec);

/// Default energy window S = (V0max - 1)/2.
double default_window(const BlackHoleParams& p);

/// A = midpoint of (z_A(1 + S), z_max), B = z_max. S <= 0 selects the default.
CutoffSpec default_cutoff(const BlackHoleParams& p, double S = 0, CutoffProfile profile = CutoffProfile::Smooth);

/// || h^2 (chi'' u + 2 chi' u') || over the transition region.
double quasimode_residual(const Eigenpair& pair, const Cutoff& chi, double h);

/// max_{i != j} |<chi u_i, chi u_j>| + max_i | ||chi u_i|| - 1 |, evaluated
/// through the complement 1 - chi^2 so that tiny defects are not lost to
/// rounding against 1.
double overlap_defect(const std::vector<Eigenpair>& pairs, const Cutoff& chi);

/// ||u||_{L^2(a, b)}.
double barrier_mass(const Eigenpair& pair, double a, double b);

struct DecayFit {
    double slope = 0;
    double intercept = 0;
    double C_est = 0;  ///< -1/slope, infinite when not decaying
    double r_squared = 0;
    bool decaying = false;
    int points_used = 0;
};

/// Least squares of log(value) against ell after dropping the smallest
/// exclude_smallest ell values.
DecayFit exp_decay_fit(std::vector<std::pair<double, double>> points, int exclude_smallest = 2);

struct QuasimodeOptions {
    double S = 0; ///< energy window, <= 0 for the default
    CutoffProfile profile = CutoffProfile::Smooth;
    double A = 0; ///< overrides when positive
    double B = 0;
    int overlap_pairs = 2; ///< pairs 0..max(n, overlap_pairs - 1) enter the overlap defect
    double tol_E = 1e-12;
    AngularTerm angular = AngularTerm::Exact;
};

struct QuasimodeReport {
    int ell = 0;
    int n = 0;
    double h = 0;
    double E = 0;
    double omega = 0;
    double residual = 0;
    double overlap_defect = 0;
    double barrier_mass = 0; ///< mass of u_n on [A, z_max]
    double A = 0;
    double B = 0;
};

QuasimodeReport quasimode_report(const BlackHoleParams& p, int ell, int n, const QuasimodeOptions& opt = {});

} // namespace adsqnm
