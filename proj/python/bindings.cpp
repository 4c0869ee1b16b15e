#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "adsqnm/runs.hpp"

namespace py = pybind11;
using namespace adsqnm;

namespace {

BlackHoleParams params(int d, double mu, double nu)
{
    BlackHoleParams p{d, mu, nu};
    p.validate();
    return p;
}

py::dict table1_row(const Table1Row& r)
{
    py::dict d;
    d["ell"] = r.ell;
    d["n"] = r.n;
    d["h"] = r.h;
    d["omega_expansion"] = r.omega_expansion;
    d["E_solver"] = r.E_solver;
    d["omega_solver"] = r.omega_solver;
    d["omega_solver_shifted"] = r.omega_shifted;
    d["external_wkb"] = r.wkb;
    d["external_breit_wigner"] = r.breit_wigner;
    d["error"] = r.error;
    return d;
}

} // namespace

PYBIND11_MODULE(adsqnm, m)
{
    m.doc() = "Schwarzschild-AdS scalar quasinormal-mode real parts: shooting solver, "
              "Rayleigh-Schrodinger expansion and quasimode diagnostics.";

    py::class_<BlackHoleParams>(m, "BlackHoleParams")
        .def(py::init(&params), py::arg("d") = 3, py::arg("mu") = 0.1, py::arg("nu") = 1.5)
        .def_readonly("d", &BlackHoleParams::d)
        .def_readonly("mu", &BlackHoleParams::mu)
        .def_readonly("nu", &BlackHoleParams::nu)
        .def("__repr__", [](const BlackHoleParams& p) {
            return "BlackHoleParams(d=" + std::to_string(p.d) + ", mu=" + py::repr(py::float_(p.mu)).cast<std::string>() +
                   ", nu=" + py::repr(py::float_(p.nu)).cast<std::string>() + ")";
        });

    py::enum_<AngularTerm>(m, "AngularTerm").value("Exact", AngularTerm::Exact).value("Shifted", AngularTerm::Shifted);
    py::enum_<CutoffProfile>(m, "CutoffProfile")
        .value("Smooth", CutoffProfile::Smooth)
        .value("Poly5", CutoffProfile::Poly5);

    // geometry and potential
    m.def("semiclassical_h", [](int ell, int d) { return semiclassical(ell, d).h; }, py::arg("ell"), py::arg("d"));
    m.def("horizon_radius", [](const BlackHoleParams& p) { return horizon_radius(p).r_plus; });
    m.def("z_of_r", &z_of_r, py::arg("p"), py::arg("r"));
    m.def("r_of_z", [](const BlackHoleParams& p, const std::vector<double>& z) {
        double top = 0;
        for (double x : z)
            top = std::max(top, x);
        const auto map = build_coordinate_map(p, top);
        std::vector<double> out;
        for (double x : z)
            out.push_back(r_of_z(map, x));
        return out;
    });
    m.def("barrier_top", [](const BlackHoleParams& p) {
        const auto b = barrier_top(p);
        return py::dict(py::arg("r_max") = b.r_max, py::arg("z_max") = b.z_max, py::arg("V0max") = b.V0max);
    });
    m.def("turning_points", [](const BlackHoleParams& p, double E) {
        const auto t = turning_points(p, E);
        return py::make_tuple(t.z_A, t.z_B);
    });
    m.def("potential_v0_of_s", &potential_v0_of_s, py::arg("p"), py::arg("s"));
    m.def("potential_of_s", &potential_of_s, py::arg("p"), py::arg("h"), py::arg("s"));
    m.def(
        "potential_grid",
        [](const BlackHoleParams& p, double h, int count) {
            py::dict out;
            std::vector<double> z, V, V0, Vm1, V1, W;
            for (const auto& r : run_potential(p, h, count)) {
                z.push_back(r.z);
                V.push_back(r.V);
                V0.push_back(r.parts.V0);
                Vm1.push_back(r.parts.Vm1);
                V1.push_back(r.parts.V1);
                W.push_back(r.parts.W);
            }
            out["z"] = z;
            out["V"] = V;
            out["V0"] = V0;
            out["Vm1"] = Vm1;
            out["V1"] = V1;
            out["W"] = W;
            return out;
        },
        py::arg("p"), py::arg("h"), py::arg("count") = 400);

    // spectral
    py::class_<Eigenpair>(m, "Eigenpair")
        .def_readonly("n", &Eigenpair::n)
        .def_readonly("E", &Eigenpair::E)
        .def_readonly("grid", &Eigenpair::grid)
        .def_readonly("u", &Eigenpair::u)
        .def_readonly("norm_defect", &Eigenpair::norm_defect)
        .def_readonly("match_defect", &Eigenpair::match_defect)
        .def("eval", &Eigenpair::eval, py::arg("z"))
        .def("interior_zeros", &Eigenpair::interior_zeros);

    m.def(
        "eigenpair",
        [](const BlackHoleParams& p, int ell, int n, AngularTerm angular, double tol_E) {
            auto prob = make_reference_problem(p, semiclassical(ell, p.d).h, angular);
            prob.tol_E = tol_E;
            py::gil_scoped_release release;
            return eigenvalue(prob, n);
        },
        py::arg("p"), py::arg("ell"), py::arg("n"), py::arg("angular") = AngularTerm::Exact, py::arg("tol_E") = 1e-12);
    m.def(
        "solver_omega",
        [](const BlackHoleParams& p, int ell, int n, AngularTerm angular) {
            const auto sc = semiclassical(ell, p.d);
            py::gil_scoped_release release;
            return sc.p_scale * std::sqrt(eigenvalue(make_reference_problem(p, sc.h, angular), n).E);
        },
        py::arg("p"), py::arg("ell"), py::arg("n"), py::arg("angular") = AngularTerm::Exact);
    m.def(
        "model_eigenvalue", [](double nu, double h, int n) { return model_eigen(nu, h, n).E; }, py::arg("nu"),
        py::arg("h"), py::arg("n"));
    m.def(
        "spiked_oscillator_eigenvalue",
        [](double nu, double h, int n, double z_top) {
            EigenProblem prob;
            prob.model = polynomial_model(nu, h, z_top, {1, 0, 1});
            py::gil_scoped_release release;
            return eigenvalue(prob, n).E;
        },
        py::arg("nu"), py::arg("h"), py::arg("n"), py::arg("z_top") = 4.0);
    m.def("bessel_zero", &bessel_zero, py::arg("nu"), py::arg("n"));
    m.def("weyl_count", &weyl_count, py::arg("nu"), py::arg("h"), py::arg("z_top"), py::arg("L"));

    // perturbation
    m.def("qk_polynomials", &qk_polynomials, py::arg("p"), py::arg("K"));
    m.def("matrix_element", &matrix_element, py::arg("nu"), py::arg("alpha"), py::arg("m"), py::arg("n"));
    m.def("matrix_element_diag", &matrix_element_diag, py::arg("nu"), py::arg("alpha"), py::arg("n"));
    m.def(
        "rs_expansion",
        [](const BlackHoleParams& p, int n, int K) {
            const auto ex = rs_expansion(p, n, K);
            return py::dict(py::arg("E") = ex.E, py::arg("c") = ex.c,
                            py::arg("truncation_residual") = ex.truncation_residual);
        },
        py::arg("p"), py::arg("n"), py::arg("K"));
    m.def("omega_coeffs", &omega_coeffs, py::arg("E"));
    m.def("omega_expansion", py::overload_cast<const BlackHoleParams&, int, int, int>(&omega_expansion), py::arg("p"),
          py::arg("ell"), py::arg("n"), py::arg("K") = 1);

    // quasimodes
    m.def(
        "quasimode_report",
        [](const BlackHoleParams& p, int ell, int n, double A, double B, CutoffProfile profile) {
            QuasimodeOptions opt;
            opt.A = A;
            opt.B = B;
            opt.profile = profile;
            QuasimodeReport r;
            {
                py::gil_scoped_release release;
                r = quasimode_report(p, ell, n, opt);
            }
            py::dict d;
            d["ell"] = r.ell;
            d["n"] = r.n;
            d["h"] = r.h;
            d["E"] = r.E;
            d["omega"] = r.omega;
            d["residual"] = r.residual;
            d["overlap_defect"] = r.overlap_defect;
            d["barrier_mass"] = r.barrier_mass;
            d["A"] = r.A;
            d["B"] = r.B;
            return d;
        },
        py::arg("p"), py::arg("ell"), py::arg("n") = 0, py::arg("A") = 0.0, py::arg("B") = 0.0,
        py::arg("profile") = CutoffProfile::Smooth);
    m.def(
        "exp_decay_fit",
        [](const std::vector<std::pair<double, double>>& pts, int exclude_smallest) {
            const auto f = exp_decay_fit(pts, exclude_smallest);
            return py::dict(py::arg("slope") = f.slope, py::arg("intercept") = f.intercept,
                            py::arg("C_est") = f.C_est, py::arg("r_squared") = f.r_squared,
                            py::arg("decaying") = f.decaying, py::arg("points_used") = f.points_used);
        },
        py::arg("points"), py::arg("exclude_smallest") = 2);

    // drivers
    m.def(
        "run_table1",
        [](const BlackHoleParams& p, int K, bool shifted) {
            Table1Options opt;
            opt.K = K;
            opt.shifted_column = shifted;
            std::vector<Table1Row> rows;
            {
                py::gil_scoped_release release;
                rows = run_table1(p, opt);
            }
            py::list out;
            for (const auto& r : rows)
                out.append(table1_row(r));
            return out;
        },
        py::arg("p") = BlackHoleParams{}, py::arg("K") = 1, py::arg("shifted") = true);
    m.def(
        "run_convergence",
        [](const BlackHoleParams& p, int n, const std::vector<int>& ells) {
            ConvergenceResult res;
            {
                py::gil_scoped_release release;
                res = run_convergence(p, n, ells);
            }
            py::list rows;
            for (const auto& r : res.rows)
                rows.append(py::dict(py::arg("ell") = r.ell, py::arg("h") = r.h, py::arg("E") = r.E,
                                     py::arg("err_two") = r.err_two, py::arg("err_three") = r.err_three,
                                     py::arg("error") = r.error));
            return py::dict(py::arg("E_coeffs") = res.E_coeffs, py::arg("rows") = rows,
                            py::arg("order_two") = res.two.slope, py::arg("order_three") = res.three.slope,
                            py::arg("r_squared_three") = res.three.r_squared);
        },
        py::arg("p"), py::arg("n"), py::arg("ells"));
    m.def("log_spaced_ells", &log_spaced_ells, py::arg("lo"), py::arg("hi"), py::arg("count"));
    m.def("external_table1", [] {
        py::list out;
        for (const auto& r : external_table1())
            out.append(py::dict(py::arg("ell") = r.ell, py::arg("n") = r.n, py::arg("wkb") = r.wkb,
                                py::arg("breit_wigner") = r.breit_wigner));
        return out;
    });
}
