// adsqnm: tables, spectra, expansions and quasimode sweeps for scalar fields on
// Schwarzschild-AdS. Output is CSV or JSON; see --help of each subcommand.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "adsqnm/runs.hpp"

using namespace adsqnm;
using nlohmann::ordered_json;

namespace {

std::string fmt(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0)
        x = 0; // no "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

// rounded to the same 9 digits as the CSV; non-finite becomes null
ordered_json num(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return std::stod(fmt(x));
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) { row(std::move(header)); }
    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << csv_field(cells[i]);
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

struct Common {
    BlackHoleParams p;
    std::string format = "csv";
    std::string out;
    std::string summary;
    double tol_e = 1e-12;
    bool serial = false;
};

void emit(const Common& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open output file " + c.out);
    f << text;
}

// CSV runs that also produce fitted numbers send them here
void emit_summary(const Common& c, const ordered_json& j)
{
    const std::string text = j.dump(2) + "\n";
    if (c.summary.empty()) {
        std::cerr << text;
        return;
    }
    std::ofstream f(c.summary, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open summary file " + c.summary);
    f << text;
}

ordered_json base_config(const Common& c, const std::string& mode)
{
    ordered_json j;
    j["mode"] = mode;
    j["d"] = c.p.d;
    j["mu"] = num(c.p.mu);
    j["nu"] = num(c.p.nu);
    j["tol_e"] = num(c.tol_e);
    return j;
}

std::string document(const ordered_json& config, const ordered_json& results)
{
    ordered_json j;
    j["config"] = config;
    j["results"] = results;
    return j.dump(2) + "\n";
}

int report_row_errors(const std::vector<std::string>& labels, const std::vector<std::string>& errors)
{
    int bad = 0;
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) {
            std::cerr << "row " << labels[i] << " failed: " << errors[i] << "\n";
            ++bad;
        }
    return bad;
}

ordered_json fit_json(const DecayFit& f)
{
    return {{"slope", num(f.slope)},     {"intercept", num(f.intercept)}, {"C_est", num(f.C_est)},
            {"r_squared", num(f.r_squared)}, {"decaying", f.decaying},     {"points_used", f.points_used}};
}

ordered_json fit_json(const SlopeFit& f)
{
    return {{"order", num(f.slope)}, {"intercept", num(f.intercept)}, {"r_squared", num(f.r_squared)},
            {"points", f.points}};
}

AngularTerm parse_angular(const std::string& s) { return s == "shifted" ? AngularTerm::Shifted : AngularTerm::Exact; }

// ---- subcommands ----

int cmd_table1(const Common& c, int K, bool shifted)
{
    Table1Options opt;
    opt.K = K;
    opt.tol_E = c.tol_e;
    opt.shifted_column = shifted;
    opt.parallel = !c.serial;
    const auto rows = run_table1(c.p, opt);

    std::vector<std::string> labels, errors;
    for (const auto& r : rows) {
        labels.push_back("ell=" + std::to_string(r.ell) + " n=" + std::to_string(r.n));
        errors.push_back(r.error);
    }
    const int bad = report_row_errors(labels, errors);

    if (c.format == "csv") {
        Csv csv({"ell", "n", "h", "omega_expansion", "omega_solver", "omega_solver_shifted", "external_wkb",
                 "external_breit_wigner", "error"});
        for (const auto& r : rows)
            csv.row({std::to_string(r.ell), std::to_string(r.n), fmt(r.h), fmt(r.omega_expansion),
                     fmt(r.omega_solver), fmt(r.omega_shifted), fmt(r.wkb), fmt(r.breit_wigner), r.error});
        emit(c, csv.str());
    } else {
        auto cfg = base_config(c, "table1");
        cfg["order"] = K;
        cfg["shifted_column"] = shifted;
        ordered_json res = ordered_json::array();
        for (const auto& r : rows)
            res.push_back({{"ell", r.ell},
                           {"n", r.n},
                           {"h", num(r.h)},
                           {"omega_expansion", num(r.omega_expansion)},
                           {"omega_solver", num(r.omega_solver)},
                           {"omega_solver_shifted", num(r.omega_shifted)},
                           {"external", {{"wkb", num(r.wkb)}, {"breit_wigner", num(r.breit_wigner)}}},
                           {"error", r.error.empty() ? ordered_json(nullptr) : ordered_json(r.error)}});
        emit(c, document(cfg, res));
    }
    return bad ? 3 : 0;
}

int cmd_spectrum(const Common& c, int ell, int n_max, double below_S, const std::string& angular)
{
    const auto res = run_spectrum(c.p, ell, n_max, below_S, c.tol_e, parse_angular(angular));
    if (c.format == "csv") {
        Csv csv({"ell", "h", "n", "E", "omega"});
        for (const auto& e : res.pairs)
            csv.row({std::to_string(ell), fmt(res.h), std::to_string(e.n), fmt(e.E), fmt(res.p_scale * std::sqrt(e.E))});
        emit(c, csv.str());
    } else {
        auto cfg = base_config(c, "spectrum");
        cfg["ell"] = ell;
        cfg["n_max"] = n_max >= 0 ? ordered_json(n_max) : ordered_json(nullptr);
        cfg["below_S"] = n_max < 0 ? num(below_S > 0 ? below_S : default_window(c.p)) : ordered_json(nullptr);
        cfg["angular_term"] = angular;
        ordered_json eig = ordered_json::array();
        for (const auto& e : res.pairs)
            eig.push_back({{"n", e.n}, {"E", num(e.E)}, {"omega", num(res.p_scale * std::sqrt(e.E))}});
        emit(c, document(cfg, {{"ell", ell}, {"h", num(res.h)}, {"eigenvalues", eig}}));
    }
    return 0;
}

int cmd_expand(const Common& c, int n, int K)
{
    const auto ex = rs_expansion(c.p, n, K);
    std::vector<bool> vanishing;
    for (std::size_t k = 0; k < ex.c.size(); ++k)
        vanishing.push_back(k > 0 && std::abs(ex.c[k]) <= 1e-10);
    if (c.format == "csv") {
        Csv csv({"k", "E_k", "c_k", "vanishing"});
        for (std::size_t k = 0; k < ex.E.size(); ++k)
            csv.row({std::to_string(k), fmt(ex.E[k]), fmt(ex.c[k]), vanishing[k] ? "true" : "false"});
        emit(c, csv.str());
    } else {
        auto cfg = base_config(c, "expand");
        cfg["n"] = n;
        cfg["order"] = K;
        ordered_json E = ordered_json::array(), cc = ordered_json::array(), v = ordered_json::array();
        for (std::size_t k = 0; k < ex.E.size(); ++k) {
            E.push_back(num(ex.E[k]));
            cc.push_back(num(ex.c[k]));
            v.push_back(static_cast<bool>(vanishing[k]));
        }
        emit(c, document(cfg, {{"E_coeffs", E},
                               {"c_coeffs", cc},
                               {"vanishing_flags", v},
                               {"truncation_residual", num(ex.truncation_residual)}}));
    }
    return 0;
}

int cmd_convergence(const Common& c, int n, int ell_min, int ell_max, int count)
{
    const auto ells = log_spaced_ells(ell_min, ell_max, count);
    const auto res = run_convergence(c.p, n, ells, c.tol_e, !c.serial);
    std::vector<std::string> labels, errors;
    for (const auto& r : res.rows) {
        labels.push_back("ell=" + std::to_string(r.ell));
        errors.push_back(r.error);
    }
    const int bad = report_row_errors(labels, errors);

    auto cfg = base_config(c, "convergence");
    cfg["n"] = n;
    cfg["ell_min"] = ell_min;
    cfg["ell_max"] = ell_max;
    cfg["count"] = count;
    ordered_json fits = {{"E_coeffs", {num(res.E_coeffs[0]), num(res.E_coeffs[1])}},
                         {"two_term", fit_json(res.two)},
                         {"three_term", fit_json(res.three)}};
    if (c.format == "csv") {
        Csv csv({"ell", "h", "E", "E_model", "err_two", "err_three", "error"});
        for (const auto& r : res.rows)
            csv.row({std::to_string(r.ell), fmt(r.h), fmt(r.E), fmt(r.E_model), fmt(r.err_two), fmt(r.err_three),
                     r.error});
        emit(c, csv.str());
        emit_summary(c, {{"config", cfg}, {"fits", fits}});
    } else {
        ordered_json rows = ordered_json::array();
        for (const auto& r : res.rows)
            rows.push_back({{"ell", r.ell},
                            {"h", num(r.h)},
                            {"E", num(r.E)},
                            {"E_model", num(r.E_model)},
                            {"err_two", num(r.err_two)},
                            {"err_three", num(r.err_three)},
                            {"error", r.error.empty() ? ordered_json(nullptr) : ordered_json(r.error)}});
        fits["rows"] = rows;
        emit(c, document(cfg, fits));
    }
    return bad ? 3 : 0;
}

int cmd_quasimodes(const Common& c, int n, int ell_min, int ell_max, int step, const QuasimodeOptions& opt,
                   const std::string& profile, const std::string& angular)
{
    if (step < 1 || ell_max < ell_min)
        throw std::invalid_argument("quasimodes: need ell-min <= ell-max and ell-step >= 1");
    std::vector<int> ells;
    for (int l = ell_min; l <= ell_max; l += step)
        ells.push_back(l);
    const auto sw = run_quasimodes(c.p, n, ells, opt, !c.serial);
    std::vector<std::string> labels;
    for (int l : ells)
        labels.push_back("ell=" + std::to_string(l));
    const int bad = report_row_errors(labels, sw.errors);
    if (!sw.fit_error.empty())
        std::cerr << "fit failed: " << sw.fit_error << "\n";

    auto cfg = base_config(c, "quasimodes");
    cfg["n"] = n;
    cfg["ell_min"] = ell_min;
    cfg["ell_max"] = ell_max;
    cfg["ell_step"] = step;
    cfg["profile"] = profile;
    cfg["angular_term"] = angular;
    const double A = sw.reports.empty() ? 0 : sw.reports.front().A;
    const double B = sw.reports.empty() ? 0 : sw.reports.front().B;
    cfg["A"] = num(A);
    cfg["B"] = num(B);
    ordered_json fits = {{"residual", fit_json(sw.residual_fit)},
                         {"overlap_defect", fit_json(sw.overlap_fit)},
                         {"fit_error", sw.fit_error.empty() ? ordered_json(nullptr) : ordered_json(sw.fit_error)}};
    if (c.format == "csv") {
        Csv csv({"ell", "E", "omega", "residual", "overlap_defect", "barrier_mass", "error"});
        for (std::size_t i = 0; i < sw.reports.size(); ++i) {
            const auto& r = sw.reports[i];
            csv.row({std::to_string(r.ell), fmt(r.E), fmt(r.omega), fmt(r.residual), fmt(r.overlap_defect),
                     fmt(r.barrier_mass), sw.errors[i]});
        }
        emit(c, csv.str());
        emit_summary(c, {{"config", cfg}, {"fit", fits}});
    } else {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < sw.reports.size(); ++i) {
            const auto& r = sw.reports[i];
            rows.push_back({{"ell", r.ell},
                            {"E", num(r.E)},
                            {"omega", num(r.omega)},
                            {"residual", num(r.residual)},
                            {"overlap_defect", num(r.overlap_defect)},
                            {"barrier_mass", num(r.barrier_mass)},
                            {"error", sw.errors[i].empty() ? ordered_json(nullptr) : ordered_json(sw.errors[i])}});
        }
        emit(c, document(cfg, {{"rows", rows}, {"fit", fits}}));
    }
    return bad ? 3 : 0;
}

int cmd_potential(const Common& c, int ell, double h, int points)
{
    if (!(h > 0))
        h = semiclassical(ell, c.p.d).h;
    const auto rows = run_potential(c.p, h, points);
    if (c.format == "csv") {
        Csv csv({"z", "V", "V0", "Vm1", "V1", "W"});
        for (const auto& r : rows)
            csv.row({fmt(r.z), fmt(r.V), fmt(r.parts.V0), fmt(r.parts.Vm1), fmt(r.parts.V1), fmt(r.parts.W)});
        emit(c, csv.str());
    } else {
        auto cfg = base_config(c, "potential");
        cfg["h"] = num(h);
        cfg["points"] = points;
        ordered_json res = ordered_json::array();
        for (const auto& r : rows)
            res.push_back({{"z", num(r.z)},
                           {"V", num(r.V)},
                           {"V0", num(r.parts.V0)},
                           {"Vm1", num(r.parts.Vm1)},
                           {"V1", num(r.parts.V1)},
                           {"W", num(r.parts.W)}});
        emit(c, document(cfg, res));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quasinormal-mode real parts for Schwarzschild-AdS"};
    app.require_subcommand(1);
    app.fallthrough();

    Common c;
    app.add_option("--d", c.p.d, "boundary dimension")->capture_default_str();
    app.add_option("--mu", c.p.mu, "mass parameter")->capture_default_str();
    app.add_option("--nu", c.p.nu, "sqrt(m^2 + d^2/4)")->capture_default_str();
    app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--out", c.out, "output file (stdout when absent)");
    app.add_option("--summary", c.summary, "fit summary JSON for CSV runs (stderr when absent)");
    app.add_option("--tol-e", c.tol_e, "relative eigenvalue tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--serial", c.serial, "compute rows one at a time");

    int K = 1, n = 0, ell = 10, n_max = 3, ell_min = 10, ell_max = 60, step = 5, count = 16, points = 400;
    double below_S = 0, h = 0;
    bool no_shifted = false;
    std::string angular = "exact", profile = "smooth";
    QuasimodeOptions qopt;

    auto* t1 = app.add_subcommand("table1", "expansion and solver columns for l = 3..5, n = 0..2");
    t1->add_option("--order", K, "expansion order K")->capture_default_str();
    t1->add_flag("--no-shifted", no_shifted, "skip the p^2/r^2 solver column");

    auto* sp = app.add_subcommand("spectrum", "eigenvalues of the reference problem");
    sp->add_option("--ell", ell)->required();
    auto* o_nmax = sp->add_option("--n-max", n_max, "compute n = 0..n-max");
    auto* o_below = sp->add_option("--below-S", below_S, "all eigenvalues below 1 + S (S <= 0: default window)");
    o_nmax->excludes(o_below);
    sp->add_option("--angular-term", angular)->check(CLI::IsMember({"exact", "shifted"}))->capture_default_str();

    auto* ex = app.add_subcommand("expand", "Rayleigh-Schrodinger coefficients");
    ex->add_option("--n", n)->capture_default_str();
    ex->add_option("--order", K)->check(CLI::Range(0, kMaxExpansionOrder))->capture_default_str();

    auto* qm = app.add_subcommand("quasimodes", "cutoff quasimodes and their decay in l");
    qm->add_option("--n", n)->capture_default_str();
    qm->add_option("--ell-min", ell_min)->capture_default_str();
    qm->add_option("--ell-max", ell_max)->capture_default_str();
    qm->add_option("--ell-step", step)->capture_default_str();
    qm->add_option("--S", qopt.S, "energy window (<= 0: default)");
    qm->add_option("--A", qopt.A, "cutoff start (<= 0: default)");
    qm->add_option("--B", qopt.B, "cutoff end (<= 0: z_max)");
    qm->add_option("--profile", profile)->check(CLI::IsMember({"smooth", "poly5"}))->capture_default_str();
    qm->add_option("--angular-term", angular)->check(CLI::IsMember({"exact", "shifted"}))->capture_default_str();

    auto* cv = app.add_subcommand("convergence", "solver against the two- and three-term expansion");
    cv->add_option("--n", n)->capture_default_str();
    int cv_min = 20, cv_max = 2000;
    cv->add_option("--ell-min", cv_min)->capture_default_str();
    cv->add_option("--ell-max", cv_max)->capture_default_str();
    cv->add_option("--count", count, "number of log-spaced l values")->capture_default_str();

    auto* po = app.add_subcommand("potential", "V and its pieces on a log grid");
    po->add_option("--ell", ell)->capture_default_str();
    po->set_help_flag("--help", "Print this help message and exit");
    po->add_option("--h", h, "semiclassical parameter (overrides --ell)");
    po->add_option("--points", points)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        c.p.validate();
        if (*t1)
            return cmd_table1(c, K, !no_shifted);
        if (*sp)
            return cmd_spectrum(c, ell, o_below->count() ? -1 : n_max, below_S, angular);
        if (*ex)
            return cmd_expand(c, n, K);
        if (*qm) {
            qopt.profile = profile == "poly5" ? CutoffProfile::Poly5 : CutoffProfile::Smooth;
            qopt.angular = parse_angular(angular);
            qopt.tol_E = c.tol_e;
            return cmd_quasimodes(c, n, ell_min, ell_max, step, qopt, profile, angular);
        }
        if (*cv)
            return cmd_convergence(c, n, cv_min, cv_max, count);
        if (*po)
            return cmd_potential(c, ell, h, points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
