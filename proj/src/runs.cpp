#include "adsqnm/runs.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "table1_external.hpp"

namespace adsqnm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// f(i) for i < count, concurrently when asked; results keep index order
template <class F>
auto ordered_map(std::size_t count, F f, bool parallel)
{
    using R = decltype(f(std::size_t{0}));
    std::vector<R> out;
    out.reserve(count);
    if (!parallel) {
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(f(i));
        return out;
    }
    std::vector<std::future<R>> jobs;
    jobs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        jobs.push_back(std::async(std::launch::async, f, i));
    for (auto& j : jobs)
        out.push_back(j.get());
    return out;
}

void append_error(std::string& dst, const std::string& what, const std::exception& e)
{
    if (!dst.empty())
        dst += "; ";
    dst += what + ": " + e.what();
}

bool is_reference(const BlackHoleParams& p)
{
    return p.d == 3 && std::abs(p.mu - 0.1) < 1e-15 && std::abs(p.nu - 1.5) < 1e-15;
}

} // namespace

const std::vector<ExternalTable1Row>& external_table1()
{
    static const std::vector<ExternalTable1Row> rows = [] {
        std::vector<ExternalTable1Row> out;
        std::istringstream in(detail::kTable1ExternalCsv);
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            if (header) {
                header = false;
                continue;
            }
            std::istringstream ls(line);
            std::string f[4];
            for (auto& s : f)
                if (!std::getline(ls, s, ','))
                    throw std::runtime_error("external_table1: malformed row '" + line + "'");
            out.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stod(f[2]), std::stod(f[3])});
        }
        return out;
    }();
    return rows;
}

std::vector<Table1Row> run_table1(const BlackHoleParams& p, const Table1Options& opt)
{
    p.validate();
    std::vector<std::pair<int, int>> cells;
    for (int ell = 3; ell <= 5; ++ell)
        for (int n = 0; n <= 2; ++n)
            cells.push_back({ell, n});

    // one expansion per n serves all three ell
    std::map<int, RSExpansion> expansions;
    std::map<int, std::string> expansion_errors;
    for (int n = 0; n <= 2; ++n) {
        try {
            expansions.emplace(n, rs_expansion(p, n, opt.K));
        } catch (const std::exception& e) {
            append_error(expansion_errors[n], "expansion", e);
        }
    }

    std::map<std::pair<int, int>, ExternalTable1Row> external;
    if (is_reference(p))
        for (const auto& r : external_table1())
            external[{r.ell, r.n}] = r;

    auto solve = [&](double h, int n, AngularTerm angular) {
        auto prob = make_reference_problem(p, h, angular);
        prob.tol_E = opt.tol_E;
        return eigenvalue(prob, n).E;
    };

    return ordered_map(
        cells.size(),
        [&](std::size_t i) {
            const auto [ell, n] = cells[i];
            const auto sc = semiclassical(ell, p.d);
            Table1Row row;
            row.ell = ell;
            row.n = n;
            row.h = sc.h;
            row.omega_expansion = row.E_solver = row.omega_solver = row.omega_shifted = kNaN;
            row.wkb = row.breit_wigner = kNaN;
            if (auto it = expansions.find(n); it != expansions.end()) {
                try {
                    row.omega_expansion = omega_expansion(it->second, ell, p.d);
                } catch (const std::exception& e) {
                    append_error(row.error, "expansion", e);
                }
            } else {
                row.error = expansion_errors[n];
            }
            try {
                row.E_solver = solve(sc.h, n, AngularTerm::Exact);
                row.omega_solver = sc.p_scale * std::sqrt(row.E_solver);
            } catch (const std::exception& e) {
                append_error(row.error, "solver", e);
            }
            if (opt.shifted_column) {
                try {
                    row.omega_shifted = sc.p_scale * std::sqrt(solve(sc.h, n, AngularTerm::Shifted));
                } catch (const std::exception& e) {
                    append_error(row.error, "shifted solver", e);
                }
            }
            if (auto it = external.find({ell, n}); it != external.end()) {
                row.wkb = it->second.wkb;
                row.breit_wigner = it->second.breit_wigner;
            }
            return row;
        },
        opt.parallel);
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("loglog_fit: size mismatch");
    if (x.size() < 2)
        throw std::invalid_argument("loglog_fit: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            throw std::invalid_argument("loglog_fit: values must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0))
        throw std::invalid_argument("loglog_fit: x values must not all coincide");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0 ? 1 - std::max(0.0, syy - fit.slope * sxy) / syy : 1.0;
    fit.points = static_cast<int>(x.size());
    return fit;
}

std::vector<int> log_spaced_ells(int lo, int hi, int count)
{
    if (lo < 1 || hi < lo || count < 1)
        throw std::invalid_argument("log_spaced_ells: need 1 <= lo <= hi and count >= 1");
    std::set<int> out;
    if (count == 1)
        out.insert(lo);
    for (int i = 0; i < count && count > 1; ++i)
        out.insert(static_cast<int>(std::lround(lo * std::pow(double(hi) / lo, double(i) / (count - 1)))));
    return {out.begin(), out.end()};
}

ConvergenceResult run_convergence(const BlackHoleParams& p, int n, const std::vector<int>& ells, double tol_E,
                                  bool parallel)
{
    p.validate();
    if (ells.empty())
        throw std::invalid_argument("run_convergence: empty ell range");
    ConvergenceResult res;
    res.n = n;
    const auto ex = rs_expansion(p, n, 1);
    res.E_coeffs = {ex.E[0], ex.E[1]};

    res.rows = ordered_map(
        ells.size(),
        [&](std::size_t i) {
            ConvergenceRow row;
            row.ell = ells[i];
            row.E = row.E_model = row.err_two = row.err_three = kNaN;
            try {
                const auto sc = semiclassical(row.ell, p.d);
                row.h = sc.h;
                auto prob = make_reference_problem(p, sc.h);
                prob.tol_E = tol_E;
                row.E = eigenvalue(prob, n).E;
                row.E_model = 1 + ex.E[0] * sc.h;
                row.err_two = std::abs(row.E - row.E_model);
                row.err_three = std::abs(row.E - row.E_model - ex.E[1] * std::pow(sc.h, 1.5));
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            return row;
        },
        parallel);

    auto fit = [&](double ConvergenceRow::*err) {
        std::vector<double> x, y;
        for (const auto& r : res.rows)
            if (r.error.empty() && r.*err > 0) {
                x.push_back(1 / r.h);
                y.push_back(r.*err);
            }
        if (x.size() < 2)
            return SlopeFit{kNaN, kNaN, kNaN, static_cast<int>(x.size())};
        auto f = loglog_fit(x, y);
        f.slope = -f.slope;
        return f;
    };
    res.two = fit(&ConvergenceRow::err_two);
    res.three = fit(&ConvergenceRow::err_three);
    return res;
}

SpectrumResult run_spectrum(const BlackHoleParams& p, int ell, int n_max, double S, double tol_E, AngularTerm angular)
{
    p.validate();
    const auto sc = semiclassical(ell, p.d);
    auto prob = make_reference_problem(p, sc.h, angular);
    prob.tol_E = tol_E;
    SpectrumResult res{ell, sc.h, sc.p_scale, {}};
    if (n_max >= 0) {
        for (int n = 0; n <= n_max; ++n)
            res.pairs.push_back(eigenvalue(prob, n));
    } else {
        if (S <= 0)
            S = default_window(p);
        res.pairs = eigenvalues_below(prob, 1 + S);
    }
    return res;
}

QuasimodeSweep run_quasimodes(const BlackHoleParams& p, int n, const std::vector<int>& ells,
                              const QuasimodeOptions& opt, bool parallel)
{
    p.validate();
    if (ells.empty())
        throw std::invalid_argument("run_quasimodes: empty ell range");
    QuasimodeSweep sweep;
    auto out = ordered_map(
        ells.size(),
        [&](std::size_t i) -> std::pair<QuasimodeReport, std::string> {
            try {
                return {quasimode_report(p, ells[i], n, opt), {}};
            } catch (const std::exception& e) {
                QuasimodeReport r;
                r.ell = ells[i];
                r.n = n;
                r.E = r.omega = r.residual = r.overlap_defect = r.barrier_mass = kNaN;
                return {r, e.what()};
            }
        },
        parallel);
    std::vector<std::pair<double, double>> res_pts, ov_pts;
    for (auto& [r, err] : out) {
        if (err.empty()) {
            res_pts.push_back({double(r.ell), r.residual});
            ov_pts.push_back({double(r.ell), r.overlap_defect});
        }
        sweep.reports.push_back(r);
        sweep.errors.push_back(err);
    }
    try {
        sweep.residual_fit = exp_decay_fit(res_pts);
        sweep.overlap_fit = exp_decay_fit(ov_pts);
    } catch (const std::exception& e) {
        sweep.fit_error = e.what();
    }
    return sweep;
}

std::vector<PotentialRow> run_potential(const BlackHoleParams& p, double h, int count)
{
    p.validate();
    if (count < 2)
        throw std::invalid_argument("run_potential: need at least two points");
    const auto bar = barrier_top(p);
    const auto map = build_coordinate_map(p, bar.z_max);
    const double a = 1e-4 * bar.z_max;
    std::vector<PotentialRow> rows;
    rows.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double z = i == count - 1 ? bar.z_max : a * std::pow(bar.z_max / a, double(i) / (count - 1));
        rows.push_back({z, effective_potential(p, map, h, z), decompose_potential(p, map, h, z)});
    }
    return rows;
}

} // namespace adsqnm
