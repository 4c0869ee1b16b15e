#include "adsqnm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "adsqnm/detail/hermite.hpp"
#include "adsqnm/detail/ode.hpp"

namespace adsqnm {

double PotentialModel::energy_hint(int) const { return std::numeric_limits<double>::quiet_NaN(); }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class BlackHoleModel final : public PotentialModel {
public:
    BlackHoleModel(const BlackHoleParams& p, double h, AngularTerm angular)
        : p_(p), h_(h), shift_(angular == AngularTerm::Shifted ? 0.25 * h * h : 0.0)
    {
        p.validate();
        if (!(h > 0 && h <= 1))
            throw std::invalid_argument("black_hole_model: h must lie in (0, 1]");
        barrier_ = barrier_top(p);
        s_series_ = inverse_radius_series<double>(p.d, p.mu, kMaxSeriesOrder + 1);
        taylor_ = potential_series_from<double>(s_series_, p.d, p.mu);
    }

    double nu() const override { return p_.nu; }
    double h() const override { return h_; }
    double z_top() const override { return barrier_.z_max; }

    std::vector<double> taylor_w(int count) const override
    {
        const double k = p_.nu * p_.nu - 0.25;
        const double h2 = h_ * h_;
        std::vector<double> w(static_cast<std::size_t>(count), 0.0);
        for (int j = 0; j < count; ++j) {
            if (j > kMaxTaylorZOrder)
                throw std::invalid_argument("black_hole_model: Taylor order beyond the radial series");
            w[j] = (1 + shift_) * taylor_.v0.coeff(j) + h2 * (taylor_.v1.coeff(j) + k * taylor_.f_regular.coeff(j));
        }
        return w;
    }

    double potential(double, double s) const override
    {
        const double V = potential_of_s(p_, h_, s);
        return shift_ == 0 ? V : V + shift_ * potential_v0_of_s(p_, s);
    }
    double aux_at_start(double z0) const override
    {
        if (s_series_.last_term(z0) > 1e-14 * s_series_.eval(z0))
            throw std::invalid_argument("black_hole_model: start point outside the series range");
        return s_series_.eval(z0);
    }
    double aux_at_top() const override { return 1.0 / barrier_.r_max; }
    double aux_rhs(double, double s) const override { return potential_v0_of_s(p_, s); }

    double match_point(double E) const override
    {
        const double top = barrier_.z_max;
        if (E > 1 && E < barrier_.V0max * (1 - 1e-6)) {
            const double zA = turning_points(p_, E).z_A;
            return std::clamp(zA, 0.05 * top, 0.95 * top);
        }
        return 0.5 * top;
    }

    double energy_hint(int n) const override { return 1 + 2 * (2 * n + 1 + p_.nu) * h_; }

private:
    BlackHoleParams p_;
    double h_;
    double shift_;
    BarrierData barrier_;
    FormalSeries<double> s_series_;
    PotentialSeries<double> taylor_;
};

class PolynomialModel final : public PotentialModel {
public:
    PolynomialModel(double nu, double h, double z_top, std::vector<double> w)
        : nu_(nu), h_(h), z_top_(z_top), w_(std::move(w))
    {
        if (!(nu > 0) || !(h > 0) || !(z_top > 0))
            throw std::invalid_argument("polynomial_model: nu, h and z_top must be positive");
    }

    double nu() const override { return nu_; }
    double h() const override { return h_; }
    double z_top() const override { return z_top_; }
    std::vector<double> taylor_w(int count) const override
    {
        std::vector<double> w(static_cast<std::size_t>(count), 0.0);
        for (int j = 0; j < count && j < static_cast<int>(w_.size()); ++j)
            w[j] = w_[j];
        return w;
    }
    double regular(double z) const
    {
        double acc = 0;
        for (auto it = w_.rbegin(); it != w_.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }
    double potential(double z, double) const override
    {
        return h_ * h_ * (nu_ * nu_ - 0.25) / (z * z) + regular(z);
    }
    double aux_at_start(double) const override { return 0; }
    double aux_at_top() const override { return 0; }
    double aux_rhs(double, double) const override { return 0; }
    double match_point(double E) const override
    {
        // first point where the regular part climbs above E
        const int m = 400;
        for (int i = 1; i <= m; ++i) {
            const double z = z_top_ * i / m;
            if (regular(z) >= E && regular(z_top_ * (i - 1) / m) < E)
                return std::clamp(z, 0.05 * z_top_, 0.95 * z_top_);
        }
        return 0.5 * z_top_;
    }
    double energy_hint(int n) const override
    {
        if (w_.size() == 3 && w_[0] == 1 && w_[1] == 0 && w_[2] == 1)
            return 1 + 2 * (2 * n + 1 + nu_) * h_;
        return kNaN;
    }

private:
    double nu_, h_, z_top_;
    std::vector<double> w_;
};

using State = std::array<double, 4>; // u, u', aux, integral of u^2

enum class Mode { Count, Refine, Sample };

struct Sample {
    double z, u, du, d2u, log_scale;
};

struct Piece {
    State x{};
    double log_scale = 0; ///< true u = stored u * exp(log_scale)
    int zeros = 0;
    std::vector<Sample> samples;
};

Piece integrate_piece(const EigenProblem& prob, double E, double z_from, double z_to, State x, double log_scale,
                      Mode mode)
{
    const auto& model = *prob.model;
    const double h = model.h();
    const double h2 = h * h;
    const double span = std::abs(z_to - z_from);
    const double osc = mode == Mode::Sample ? 0.1 : 0.5;
    const double barrier = mode == Mode::Sample ? 0.2 : 3.0;
    const double rtol = mode == Mode::Count ? std::max(1e-9, prob.rtol) : prob.rtol;

    Piece out;
    out.x = x;
    out.log_scale = log_scale;

    auto sys = [&](const State& s, State& ds, double z) {
        const double V = model.potential(z, s[2]);
        ds[0] = s[1];
        ds[1] = (V - E) / h2 * s[0];
        ds[2] = model.aux_rhs(z, s[2]);
        ds[3] = s[0] * s[0];
    };
    auto cap = [&](double z, const State& s) {
        const double k = std::abs(model.potential(z, s[2]) - E) / h2;
        const double local = model.potential(z, s[2]) < E ? osc / std::sqrt(k) : barrier / std::sqrt(k + 1e-300);
        const double fine = mode == Mode::Sample && prob.max_sample_step > 0 ? prob.max_sample_step : span;
        return std::min({local, 0.05 * z, span / 50, fine});
    };
    auto record = [&](double z, const State& s, double lam) {
        const double V = model.potential(z, s[2]);
        out.samples.push_back({z, s[0], s[1], (V - E) / h2 * s[0], lam});
    };
    if (mode == Mode::Sample)
        record(z_from, x, log_scale);

    double prev_sign = x[0] > 0 ? 1 : (x[0] < 0 ? -1 : 0);
    auto observe = [&](double z, State& s) {
        const double sg = s[0] > 0 ? 1 : (s[0] < 0 ? -1 : 0);
        if (sg != 0) {
            if (prev_sign != 0 && sg != prev_sign && z != z_to)
                ++out.zeros;
            prev_sign = sg;
        }
        const double m = std::max(std::abs(s[0]), h * std::abs(s[1]));
        if (m > 1e8 || (m < 1e-8 && m > 0)) {
            const double c = 1.0 / m;
            s[0] *= c;
            s[1] *= c;
            s[3] *= c * c;
            out.log_scale -= std::log(c);
        }
        if (mode == Mode::Sample)
            record(z, s, out.log_scale);
    };
    detail::integrate_capped<4>(sys, x, z_from, z_to, rtol, 1e-30, cap, observe);
    out.x = x;
    return out;
}

/// Left piece starting values at z0, scaled so that |(u, h u')| = 1.
Piece left_start(const EigenProblem& prob, double E, double& z0, double& log_scale)
{
    const auto& model = *prob.model;
    z0 = prob.start();
    const auto fs = frobenius_initial(prob, E);
    const double h = model.h();
    const double m = std::hypot(fs.u, h * fs.du);
    Piece p;
    p.x = {fs.u / m, fs.du / m, model.aux_at_start(z0), 0.0};
    // integral of z^(2 nu + 1) from 0 to z0, in the scaled units
    p.x[3] = p.x[0] * p.x[0] * z0 / (2 * model.nu() + 2);
    log_scale = std::log(m);
    return p;
}

Piece shoot_left(const EigenProblem& prob, double E, double z_to, Mode mode)
{
    double z0 = 0, lam = 0;
    const Piece start = left_start(prob, E, z0, lam);
    if (!(z_to > z0))
        throw std::invalid_argument("shoot: end point must lie above the series start");
    return integrate_piece(prob, E, z0, z_to, start.x, lam, mode);
}

Piece shoot_right(const EigenProblem& prob, double E, double z_to, Mode mode)
{
    const auto& model = *prob.model;
    const State x{0.0, -1.0 / model.h(), model.aux_at_top(), 0.0};
    return integrate_piece(prob, E, model.z_top(), z_to, x, 0.0, mode);
}

/// Normalized Wronskian of the two pieces at the match point.
double mismatch(const EigenProblem& prob, double E, double zm)
{
    const double h = prob.model->h();
    const auto L = shoot_left(prob, E, zm, Mode::Refine);
    const auto R = shoot_right(prob, E, zm, Mode::Refine);
    const double nl = std::hypot(L.x[0], h * L.x[1]);
    const double nr = std::hypot(R.x[0], h * R.x[1]);
    return (L.x[0] * h * R.x[1] - h * L.x[1] * R.x[0]) / (nl * nr);
}

Eigenpair assemble(const EigenProblem& prob, int n, double E, double zm)
{
    const double h = prob.model->h();
    const auto L = shoot_left(prob, E, zm, Mode::Sample);
    const auto R = shoot_right(prob, E, zm, Mode::Sample);

    // scale everything to the units at the match point
    const double uL = L.x[0], dL = L.x[1], uR = R.x[0], dR = R.x[1];
    const double rho = (uL * uR + h * h * dL * dR) / (uR * uR + h * h * dR * dR);
    const double nl = std::hypot(uL, h * dL), nr = std::hypot(uR, h * dR);
    const double total = L.x[3] + rho * rho * std::abs(R.x[3]);
    const double norm = std::sqrt(total);

    Eigenpair ep;
    ep.n = n;
    ep.E = E;
    ep.match_defect = std::abs(uL * h * dR - h * dL * uR) / (nl * nr);
    auto push = [&](const Sample& s, double lam_end, double factor) {
        const double c = factor * std::exp(s.log_scale - lam_end) / norm;
        ep.grid.push_back(s.z);
        ep.u.push_back(c * s.u);
        ep.du.push_back(c * s.du);
        ep.d2u.push_back(c * s.d2u);
    };
    for (const auto& s : L.samples)
        push(s, L.log_scale, 1.0);
    for (auto it = R.samples.rbegin() + 1; it != R.samples.rend(); ++it)
        push(*it, R.log_scale, rho);

    // positive near the origin
    if (ep.u.front() < 0) {
        for (auto* v : {&ep.u, &ep.du, &ep.d2u})
            for (auto& x : *v)
                x = -x;
    }
    // the piece below z0 follows the leading Frobenius power
    const double head = ep.u.front() * ep.u.front() * ep.grid.front() / (2 * prob.model->nu() + 2);
    ep.norm_defect = std::abs(head + ep.integrate_sq(ep.grid.front(), ep.grid.back()) - 1.0);
    return ep;
}

} // namespace

std::shared_ptr<const PotentialModel> black_hole_model(const BlackHoleParams& p, double h, AngularTerm angular)
{
    return std::make_shared<BlackHoleModel>(p, h, angular);
}

std::shared_ptr<const PotentialModel> polynomial_model(double nu, double h, double z_top, std::vector<double> w)
{
    return std::make_shared<PolynomialModel>(nu, h, z_top, std::move(w));
}

double EigenProblem::start() const
{
    if (!model)
        throw std::invalid_argument("EigenProblem: no potential model");
    return z0 > 0 ? z0 : 1e-2 * model->h();
}

EigenProblem make_reference_problem(const BlackHoleParams& p, double h, AngularTerm angular)
{
    EigenProblem prob;
    prob.model = black_hole_model(p, h, angular);
    return prob;
}

FrobeniusStart frobenius_initial(const EigenProblem& prob, double E)
{
    const auto& model = *prob.model;
    const double z0 = prob.start();
    const double nu = model.nu();
    const double h2 = model.h() * model.h();
    const int K = prob.frobenius_order;
    if (K < 2)
        throw std::invalid_argument("frobenius_initial: order must be at least 2");
    const auto w = model.taylor_w(K - 1);

    // h^2 k (k + 2 nu) a_k = sum_j (w_j - E delta_j0) a_(k-2-j)
    std::vector<double> a(static_cast<std::size_t>(K + 1), 0.0);
    a[0] = 1;
    for (int k = 2; k <= K; ++k) {
        double acc = 0;
        for (int j = 0; j <= k - 2; ++j)
            acc += (w[j] - (j == 0 ? E : 0.0)) * a[k - 2 - j];
        a[k] = acc / (h2 * k * (k + 2 * nu));
    }
    double sum = 0, dsum = 0, last = 0, prev = 0;
    for (int k = 0; k <= K; ++k) {
        const double t = a[k] * std::pow(z0, k);
        sum += t;
        dsum += (k + nu + 0.5) * t;
        if (t != 0 && k > 0) {
            prev = last;
            last = std::abs(t);
        }
    }
    const double err = last / std::abs(sum);
    if (!(err < 1e-6) || (prev > 0 && last > prev && last > 1e-12))
        throw std::runtime_error("frobenius_initial: series diverges at z0 = " + std::to_string(z0) +
                                 "; choose a smaller start point");
    const double lead = std::pow(z0, nu + 0.5);
    return {lead * sum, lead * dsum / z0, err};
}

ShotResult shoot(const EigenProblem& prob, double E)
{
    const auto P = shoot_left(prob, E, prob.model->z_top(), Mode::Refine);
    const double h = prob.model->h();
    return {P.x[0] / std::hypot(P.x[0], h * P.x[1]), P.zeros};
}

int eigenvalue_count(const EigenProblem& prob, double E)
{
    return shoot_left(prob, E, prob.model->z_top(), Mode::Count).zeros;
}

Eigenpair eigenvalue(const EigenProblem& prob, int n)
{
    if (n < 0)
        throw std::invalid_argument("eigenvalue: index must be non-negative");
    const auto& model = *prob.model;
    const double cap = prob.E_cap > 0 ? prob.E_cap : std::numeric_limits<double>::infinity();
    auto count = [&](double E) { return eigenvalue_count(prob, E); };

    // bracket: count(lo) <= n < count(hi)
    const double hint = model.energy_hint(n);
    double step = 2 * model.h();
    double lo, hi;
    if (std::isfinite(hint)) {
        lo = hint - step;
        hi = hint + step;
    } else {
        lo = 0;
        hi = 1;
        step = 1;
    }
    for (double s = step; count(lo) > n; s *= 2)
        lo -= s;
    for (double s = step; count(hi) <= n; s *= 2) {
        lo = std::max(lo, hi);
        hi += s;
        if (hi > cap)
            throw std::runtime_error("eigenvalue: no bracket for n = " + std::to_string(n) + " below E_cap = " +
                                     std::to_string(cap));
    }
    // isolate the single eigenvalue
    int clo = count(lo), chi = count(hi);
    while (!(clo == n && chi == n + 1)) {
        if (hi - lo < 1e-14 * std::max(1.0, std::abs(hi)))
            throw std::runtime_error("eigenvalue: could not isolate eigenvalue " + std::to_string(n));
        const double mid = 0.5 * (lo + hi);
        const int c = count(mid);
        if (c <= n) {
            lo = mid;
            clo = c;
        } else {
            hi = mid;
            chi = c;
        }
    }

    const double tol = prob.tol_E;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double zm = model.match_point(0.5 * (lo + hi));
        auto D = [&](double E) { return mismatch(prob, E, zm); };
        const double Dlo = D(lo), Dhi = D(hi);
        if (Dlo * Dhi < 0) {
            std::uintmax_t iters = 100;
            auto stop = [&](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, std::abs(a)); };
            const auto r = boost::math::tools::toms748_solve(D, lo, hi, Dlo, Dhi, stop, iters);
            const double E = 0.5 * (r.first + r.second);
            auto ep = assemble(prob, n, E, zm);
            if (ep.interior_zeros() != n)
                throw std::runtime_error("eigenvalue: eigenfunction " + std::to_string(n) + " has " +
                                         std::to_string(ep.interior_zeros()) + " interior zeros");
            return ep;
        }
        // the match point sits badly for this bracket; shrink it and retry
        const double mid = 0.5 * (lo + hi);
        (count(mid) <= n ? lo : hi) = mid;
    }
    throw std::runtime_error("eigenvalue: mismatch function does not change sign for n = " + std::to_string(n));
}

std::vector<Eigenpair> eigenvalues_below(const EigenProblem& prob, double E_cap)
{
    EigenProblem capped = prob;
    capped.E_cap = E_cap;
    const int m = eigenvalue_count(capped, E_cap);
    std::vector<Eigenpair> out;
    for (int n = 0; n < m; ++n)
        out.push_back(eigenvalue(capped, n));
    return out;
}

std::array<double, 3> Eigenpair::eval(double z) const
{
    if (grid.empty() || z < grid.front() || z > grid.back())
        return {0, 0, 0};
    auto it = std::upper_bound(grid.begin(), grid.end(), z);
    std::size_t i = it == grid.end() ? grid.size() - 1 : static_cast<std::size_t>(it - grid.begin());
    if (i == 0)
        i = 1;
    const double dz = grid[i] - grid[i - 1];
    return detail::quintic_hermite({u[i - 1], du[i - 1], d2u[i - 1]}, {u[i], du[i], d2u[i]}, dz, (z - grid[i - 1]) / dz);
}

double Eigenpair::integrate_sq(double a, double b, const std::function<double(double)>& g) const
{
    if (grid.size() < 2)
        return 0;
    a = std::max(a, grid.front());
    b = std::min(b, grid.back());
    double acc = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double lo = std::max(a, grid[i - 1]), hi = std::min(b, grid[i]);
        if (!(hi > lo))
            continue;
        const double dz = grid[i] - grid[i - 1];
        const detail::QuinticNode na{u[i - 1], du[i - 1], d2u[i - 1]}, nb{u[i], du[i], d2u[i]};
        for (std::size_t q = 0; q < detail::kGaussNodes01.size(); ++q) {
            const double z = lo + (hi - lo) * detail::kGaussNodes01[q];
            const double v = detail::quintic_hermite(na, nb, dz, (z - grid[i - 1]) / dz)[0];
            acc += (hi - lo) * detail::kGaussWeights01[q] * v * v * (g ? g(z) : 1.0);
        }
    }
    return acc;
}

int Eigenpair::interior_zeros() const
{
    int zeros = 0;
    double prev = 0;
    // the Dirichlet end point is not interior
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        if (u[i] == 0)
            continue;
        const double s = u[i] > 0 ? 1 : -1;
        if (prev != 0 && s != prev)
            ++zeros;
        prev = s;
    }
    return zeros;
}

ModelEigen model_eigen(double nu, double h, int n)
{
    if (!(nu > 0) || !(h > 0) || n < 0)
        throw std::invalid_argument("model_eigen: need nu > 0, h > 0, n >= 0");
    const double E = 1 + 2 * (2 * n + 1 + nu) * h;
    // sqrt(2 n! / Gamma(n + nu + 1)) in logs
    const double logc = 0.5 * (std::log(2.0) + std::lgamma(n + 1.0) - std::lgamma(n + nu + 1.0));
    auto u = [=](double z) {
        if (z <= 0)
            return 0.0;
        const double x = z / std::sqrt(h);
        const double t = x * x;
        // generalized Laguerre L_n^nu(t) by the three-term recurrence
        double lm1 = 1, l = 1 + nu - t;
        if (n == 0)
            l = 1;
        for (int k = 1; k < n; ++k) {
            const double next = ((2 * k + 1 + nu - t) * l - (k + nu) * lm1) / (k + 1);
            lm1 = l;
            l = next;
        }
        return std::exp(logc + (nu + 0.5) * std::log(x) - 0.5 * t - 0.25 * std::log(h)) * l;
    };
    return {E, u};
}

double bessel_zero(double nu, int n)
{
    if (n < 1)
        throw std::invalid_argument("bessel_zero: n must be at least 1");
    if (nu < 0)
        throw std::invalid_argument("bessel_zero: nu must be non-negative");
    double x;
    if (n == 1 && nu > 1) {
        // large-order form for the first zero
        const double c = std::cbrt(nu);
        x = nu + 1.8557571 * c + 1.033150 / c - 0.00397 / nu - 0.0908 / (c * c * c * c * c);
    } else {
        // McMahon
        const double m = 4 * nu * nu;
        const double b = (n + 0.5 * nu - 0.25) * M_PI;
        const double e = 8 * b;
        x = b - (m - 1) / e - 4 * (m - 1) * (7 * m - 31) / (3 * e * e * e);
    }
    for (int it = 0; it < 100; ++it) {
        const double j = boost::math::cyl_bessel_j(nu, x);
        const double dj = 0.5 * (boost::math::cyl_bessel_j(nu - 1, x) - boost::math::cyl_bessel_j(nu + 1, x));
        const double step = j / dj;
        x -= step;
        if (std::abs(step) < 1e-15 * x)
            break;
    }
    return x;
}

int weyl_count(double nu, double h, double z_top, double L)
{
    if (!(L >= 1))
        throw std::invalid_argument("weyl_count: L must be at least 1");
    const double bound = std::sqrt(L) * z_top / h;
    int n = 0;
    while (bessel_zero(nu, n + 1) <= bound)
        ++n;
    return n;
}

} // namespace adsqnm
