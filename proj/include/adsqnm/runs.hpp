#pragma once

/// \file runs.hpp
/// Batch drivers behind the command-line tool: the comparison table at
/// l = 3..5, convergence sweeps in l, quasimode sweeps and potential dumps.
/// Rows are computed concurrently and returned in input order. A failure in
/// one row is recorded in that row's error field and the others still run.

#include <string>
#include <vector>

#include "adsqnm/perturbation.hpp"
#include "adsqnm/quasimode.hpp"
#include "adsqnm/spectral.hpp"

namespace adsqnm {

/// Literature values for d=3, mu=1/10, nu=3/2, kept for display only.
struct ExternalTable1Row {
    int ell = 0;
    int n = 0;
    double wkb = 0;
    double breit_wigner = 0;
};

const std::vector<ExternalTable1Row>& external_table1();

struct Table1Options {
    int K = 1;              ///< expansion order, K = 1 gives the three-term formula
    double tol_E = 1e-12;
    bool shifted_column = true; ///< also solve with the p^2/r^2 angular term
    bool parallel = true;
};

struct Table1Row {
    int ell = 0;
    int n = 0;
    double h = 0;
    double omega_expansion = 0;
    double E_solver = 0;
    double omega_solver = 0;
    double omega_shifted = 0; ///< NaN when not requested
    double wkb = 0;           ///< NaN unless the reference parameters are used
    double breit_wigner = 0;
    std::string error;        ///< empty on success
};

std::vector<Table1Row> run_table1(const BlackHoleParams& p, const Table1Options& opt = {});

/// log(y) against log(x) by least squares.
struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    int points = 0;
};

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

/// count integers spread geometrically over [lo, hi], deduplicated.
std::vector<int> log_spaced_ells(int lo, int hi, int count);

struct ConvergenceRow {
    int ell = 0;
    double h = 0;
    double E = 0;
    double E_model = 0;   ///< 1 + E_{n,0} h
    double err_two = 0;   ///< |E - E_model|
    double err_three = 0; ///< |E - E_model - E_{n,1} h^(3/2)|
    std::string error;
};

struct ConvergenceResult {
    int n = 0;
    std::vector<double> E_coeffs; ///< E_{n,0}, E_{n,1}
    std::vector<ConvergenceRow> rows;
    SlopeFit two;   ///< slope of log err_two against log(1/h), negated
    SlopeFit three;
};

ConvergenceResult run_convergence(const BlackHoleParams& p, int n, const std::vector<int>& ells, double tol_E = 1e-12,
                                  bool parallel = true);

struct SpectrumResult {
    int ell = 0;
    double h = 0;
    double p_scale = 0;
    std::vector<Eigenpair> pairs;
};

/// Either the first n_max + 1 eigenvalues or, when n_max < 0, all below 1 + S
/// (S <= 0 selects the default window).
SpectrumResult run_spectrum(const BlackHoleParams& p, int ell, int n_max, double S = 0, double tol_E = 1e-12,
                            AngularTerm angular = AngularTerm::Exact);

struct QuasimodeSweep {
    std::vector<QuasimodeReport> reports;
    std::vector<std::string> errors; ///< per ell, empty on success
    DecayFit residual_fit;
    DecayFit overlap_fit;
    std::string fit_error;
};

QuasimodeSweep run_quasimodes(const BlackHoleParams& p, int n, const std::vector<int>& ells,
                              const QuasimodeOptions& opt = {}, bool parallel = true);

struct PotentialRow {
    double z;
    double V;
    PotentialParts parts;
};

/// count points log-spaced on (1e-4 z_max, z_max].
std::vector<PotentialRow> run_potential(const BlackHoleParams& p, double h, int count = 400);

} // namespace adsqnm
