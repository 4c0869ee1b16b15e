#include "adsqnm/quasimode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "adsqnm/detail/hermite.hpp"
#include "adsqnm/potential.hpp"

namespace adsqnm {

namespace {

// smoothstep on [0, 1] with its first two derivatives
std::array<double, 3> smooth_step(double t)
{
    if (t <= 0)
        return {0, 0, 0};
    if (t >= 1)
        return {1, 0, 0};
    auto psi = [](double x) -> std::array<double, 3> {
        const double e = std::exp(-1 / x);
        return {e, e / (x * x), e * (1 - 2 * x) / (x * x * x * x)};
    };
    const auto a = psi(t), b0 = psi(1 - t);
    const std::array<double, 3> b{b0[0], -b0[1], b0[2]};
    const double g = a[0] + b[0], g1 = a[1] + b[1], g2 = a[2] + b[2];
    const double s = a[0] / g;
    const double s1 = (a[1] - s * g1) / g;
    const double s2 = (a[2] - 2 * s1 * g1 - s * g2) / g;
    return {s, s1, s2};
}

std::array<double, 3> poly5_step(double t)
{
    if (t <= 0)
        return {0, 0, 0};
    if (t >= 1)
        return {1, 0, 0};
    const double t2 = t * t;
    return {t2 * t * (10 - 15 * t + 6 * t2), 30 * t2 * (1 - t) * (1 - t), 60 * t * (1 - t) * (1 - 2 * t)};
}

// Gauss panels on the merged grids, clipped to [a, b]
double panel_integrate(std::vector<double> nodes, double a, double b, const std::function<double(double)>& f)
{
    nodes.push_back(a);
    nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    double acc = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double lo = nodes[i - 1], hi = nodes[i];
        if (lo < a || hi > b)
            continue;
        for (std::size_t q = 0; q < detail::kGaussNodes01.size(); ++q)
            acc += (hi - lo) * detail::kGaussWeights01[q] * f(lo + (hi - lo) * detail::kGaussNodes01[q]);
    }
    return acc;
}

std::vector<double> grid_in(const Eigenpair& p, double a, double b)
{
    std::vector<double> out;
    for (double z : p.grid)
        if (z >= a && z <= b)
            out.push_back(z);
    return out;
}

} // namespace

Cutoff::Cutoff(const CutoffSpec& spec) : spec_(spec)
{
    if (!(spec.A > 0) || !(spec.B > spec.A))
        throw std::invalid_argument("Cutoff: need 0 < A < B");
}

std::array<double, 3> Cutoff::operator()(double z) const
{
    const double L = spec_.B - spec_.A;
    const double t = (z - spec_.A) / L;
    const auto s = spec_.profile == CutoffProfile::Smooth ? smooth_step(t) : poly5_step(t);
    return {1 - s[0], -s[1] / L, -s[2] / (L * L)};
}

Cutoff build_cutoff(const CutoffSpec& spec) { return Cutoff(spec); }

double default_window(const BlackHoleParams& p) { return 0.5 * (barrier_top(p).V0max - 1); }

CutoffSpec default_cutoff(const BlackHoleParams& p, double S, CutoffProfile profile)
{
    const auto bar = barrier_top(p);
    if (S <= 0)
        S = default_window(p);
    if (!(S < bar.V0max - 1))
        throw std::invalid_argument("default_cutoff: window must satisfy 1 + S < V0max");
    const double zA = turning_points(p, 1 + S).z_A;
    return {0.5 * (zA + bar.z_max), bar.z_max, profile};
}

double quasimode_residual(const Eigenpair& pair, const Cutoff& chi, double h)
{
    const double a = chi.spec().A, b = std::min(chi.spec().B, pair.grid.back());
    if (pair.grid.empty() || pair.grid.back() <= chi.spec().A)
        return 0; // chi = 1 wherever u lives
    const auto nodes = grid_in(pair, a, b);
    if (nodes.size() < 50)
        throw std::runtime_error("quasimode_residual: only " + std::to_string(nodes.size()) +
                                 " grid points on the cutoff transition; refine the eigenfunction grid");
    const double sq = panel_integrate(nodes, a, b, [&](double z) {
        const auto u = pair.eval(z);
        const auto c = chi(z);
        const double r = h * h * (c[2] * u[0] + 2 * c[1] * u[1]);
        return r * r;
    });
    return std::sqrt(sq);
}

double overlap_defect(const std::vector<Eigenpair>& pairs, const Cutoff& chi)
{
    if (pairs.size() < 2)
        throw std::invalid_argument("overlap_defect: need at least two eigenpairs");
    const double a = chi.spec().A;
    double off = 0, diag = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i; j < pairs.size(); ++j) {
            const double b = std::min(pairs[i].grid.back(), pairs[j].grid.back());
            if (b <= a)
                continue;
            auto nodes = grid_in(pairs[i], a, b);
            const auto more = grid_in(pairs[j], a, b);
            nodes.insert(nodes.end(), more.begin(), more.end());
            const double m = panel_integrate(nodes, a, b, [&](double z) {
                const double c = chi(z)[0];
                return (1 - c * c) * pairs[i].eval(z)[0] * pairs[j].eval(z)[0];
            });
            if (i == j)
                diag = std::max(diag, std::abs(m) / (1 + std::sqrt(std::max(0.0, 1 - m))));
            else
                off = std::max(off, std::abs(m));
        }
    return off + diag;
}

double barrier_mass(const Eigenpair& pair, double a, double b)
{
    if (pair.grid.empty() || !(a < b) || a < pair.grid.front() || b > pair.grid.back() * (1 + 1e-12))
        throw std::out_of_range("barrier_mass: interval outside the eigenfunction grid");
    b = std::min(b, pair.grid.back());
    auto nodes = grid_in(pair, a, b);
    return std::sqrt(panel_integrate(nodes, a, b, [&](double z) {
        const double u = pair.eval(z)[0];
        return u * u;
    }));
}

DecayFit exp_decay_fit(std::vector<std::pair<double, double>> points, int exclude_smallest)
{
    if (points.size() < 5)
        throw std::invalid_argument("exp_decay_fit: need at least 5 points");
    for (const auto& [x, y] : points)
        if (!(y > 0))
            throw std::invalid_argument("exp_decay_fit: values must be positive");
    std::sort(points.begin(), points.end());
    const auto skip = static_cast<std::size_t>(std::max(0, exclude_smallest));
    if (points.size() < skip + 3)
        throw std::invalid_argument("exp_decay_fit: fewer than 3 points after exclusion");
    points.erase(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(skip));

    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        const double dx = x - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit fit;
    fit.points_used = static_cast<int>(points.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = std::max(0.0, syy - fit.slope * sxy);
    fit.r_squared = syy > 0 ? 1 - ss_res / syy : 1.0;
    fit.decaying = fit.slope < -1e-12 * (1 + std::abs(my));
    fit.C_est = fit.decaying ? -1 / fit.slope : std::numeric_limits<double>::infinity();
    return fit;
}

QuasimodeReport quasimode_report(const BlackHoleParams& p, int ell, int n, const QuasimodeOptions& opt)
{
    if (n < 0)
        throw std::invalid_argument("quasimode_report: n must be non-negative");
    const auto sc = semiclassical(ell, p.d);
    auto spec = default_cutoff(p, opt.S, opt.profile);
    if (opt.A > 0)
        spec.A = opt.A;
    if (opt.B > 0)
        spec.B = opt.B;
    const Cutoff chi(spec);

    auto prob = make_reference_problem(p, sc.h, opt.angular);
    prob.tol_E = opt.tol_E;
    prob.max_sample_step = (spec.B - spec.A) / 200;
    const int top = std::max(n, opt.overlap_pairs - 1);
    std::vector<Eigenpair> pairs;
    for (int k = 0; k <= top; ++k)
        pairs.push_back(eigenvalue(prob, k));

    QuasimodeReport rep;
    rep.ell = ell;
    rep.n = n;
    rep.h = sc.h;
    rep.E = pairs[n].E;
    rep.omega = sc.p_scale * std::sqrt(rep.E);
    rep.residual = quasimode_residual(pairs[n], chi, sc.h);
    rep.overlap_defect = pairs.size() >= 2 ? overlap_defect(pairs, chi) : 0.0;
    rep.barrier_mass = barrier_mass(pairs[n], spec.A, prob.model->z_top());
    rep.A = spec.A;
    rep.B = spec.B;
    return rep;
}

} // namespace adsqnm
