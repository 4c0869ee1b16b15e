#include "adsqnm/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "adsqnm/potential.hpp"

namespace adsqnm {

namespace {

void check_order(int K, const char* who)
{
    if (K < 0 || K > kMaxExpansionOrder)
        throw std::invalid_argument(std::string(who) + ": order must be in [0, " +
                                    std::to_string(kMaxExpansionOrder) + "]");
}

bool is_odd_poly(const Polynomial& q)
{
    for (std::size_t j = 1; j < q.size(); j += 2)
        if (q[j] != 0)
            return true;
    return false;
}

// dense x^a operators in the oscillator eigenbasis, built from the Jacobi
// matrix of t = x^2 and the half-power matrix of x
class LaguerreOperators {
public:
    LaguerreOperators(double nu, int size, int max_power) : nu_(nu), size_(size)
    {
        const int M = size;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(M, M);
        for (int m = 0; m < M; ++m) {
            T(m, m) = 2 * m + nu + 1;
            if (m + 1 < M)
                T(m, m + 1) = T(m + 1, m) = -std::sqrt((m + 1.0) * (m + 1 + nu));
        }
        powers_.push_back(Eigen::MatrixXd::Identity(M, M));
        if (max_power >= 1)
            powers_.push_back(half_power(nu, M));
        for (int a = 2; a <= max_power; ++a)
            powers_.push_back(powers_[a - 2] * T);
    }

    int size() const { return size_; }
    const Eigen::MatrixXd& x_power(int a) const { return powers_.at(static_cast<std::size_t>(a)); }

    Eigen::MatrixXd op(const Polynomial& q) const
    {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size_, size_);
        for (std::size_t a = 0; a < q.size(); ++a)
            if (q[a] != 0)
                out += q[a] * x_power(static_cast<int>(a));
        return out;
    }

private:
    // <x u_m, u_k>: connection of L^nu to L^(nu + 1/2), all terms one sign
    static Eigen::MatrixXd half_power(double nu, int M)
    {
        std::vector<double> c(static_cast<std::size_t>(M), 1.0), norm(static_cast<std::size_t>(M)),
            g(static_cast<std::size_t>(M));
        for (int r = 1; r < M; ++r)
            c[r] = c[r - 1] * (r - 1.5) / r;
        for (int m = 0; m < M; ++m) {
            norm[m] = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(m + nu + 1)));
            g[m] = std::exp(std::lgamma(m + nu + 1.5) - std::lgamma(m + 1.0));
        }
        Eigen::MatrixXd S(M, M);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k <= m; ++k) {
                double acc = 0;
                for (int j = 0; j <= k; ++j)
                    acc += c[m - j] * c[k - j] * g[j];
                S(m, k) = S(k, m) = norm[m] * norm[k] * acc;
            }
        return S;
    }

    double nu_;
    int size_;
    std::vector<Eigen::MatrixXd> powers_;
};

} // namespace

std::vector<Polynomial> qk_polynomials(const BlackHoleParams& p, int K)
{
    check_order(K, "qk_polynomials");
    const auto tab = v_bivariate_coeffs(p, K + 2, 1);
    // z^a h^(2b) -> h^(a/2 + 2b) x^a, order h^(1 + k/2) means k = a + 4b - 2
    std::vector<Polynomial> Q(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) {
        Q[k].assign(static_cast<std::size_t>(k + 3), 0.0);
        for (int b = 0; b <= 1; ++b) {
            const int a = k + 2 - 4 * b;
            if (a >= 0)
                Q[k][a] += tab.at(a, b);
        }
        while (Q[k].size() > 1 && Q[k].back() == 0)
            Q[k].pop_back();
    }
    return Q;
}

// WeightedPolynomial

WeightedPolynomial::WeightedPolynomial(double nu, Polynomial q) : nu_(nu), q_(std::move(q))
{
    if (!(nu > 0))
        throw std::invalid_argument("WeightedPolynomial: nu must be positive");
    if (q_.empty())
        q_.push_back(0.0);
}

double WeightedPolynomial::operator()(double x) const
{
    if (x <= 0)
        return 0;
    double acc = 0;
    for (auto it = q_.rbegin(); it != q_.rend(); ++it)
        acc = acc * x + *it;
    return acc * std::exp((nu_ + 0.5) * std::log(x) - 0.5 * x * x);
}

double gamma_moment(double nu, int i_plus_j)
{
    return 0.5 * std::tgamma(nu + 1 + 0.5 * i_plus_j);
}

double WeightedPolynomial::inner(const WeightedPolynomial& o) const
{
    if (o.nu_ != nu_)
        throw std::invalid_argument("WeightedPolynomial::inner: weights differ");
    // extended precision: the alternating Laguerre coefficients cancel heavily
    std::vector<long double> mom(q_.size() + o.q_.size());
    for (std::size_t k = 0; k < mom.size(); ++k)
        mom[k] = 0.5L * std::tgamma(static_cast<long double>(nu_) + 1 + 0.5L * k);
    long double acc = 0;
    for (std::size_t i = 0; i < q_.size(); ++i)
        for (std::size_t j = 0; j < o.q_.size(); ++j)
            acc += static_cast<long double>(q_[i]) * o.q_[j] * mom[i + j];
    return static_cast<double>(acc);
}

double WeightedPolynomial::norm() const { return std::sqrt(inner(*this)); }

WeightedPolynomial WeightedPolynomial::operator+(const WeightedPolynomial& o) const
{
    Polynomial q(std::max(q_.size(), o.q_.size()), 0.0);
    for (std::size_t j = 0; j < q_.size(); ++j)
        q[j] += q_[j];
    for (std::size_t j = 0; j < o.q_.size(); ++j)
        q[j] += o.q_[j];
    return {nu_, q};
}

WeightedPolynomial WeightedPolynomial::operator*(double s) const
{
    Polynomial q = q_;
    for (auto& v : q)
        v *= s;
    return {nu_, q};
}

WeightedPolynomial WeightedPolynomial::times(const Polynomial& poly) const
{
    Polynomial q(q_.size() + poly.size() - 1, 0.0);
    for (std::size_t i = 0; i < q_.size(); ++i)
        for (std::size_t j = 0; j < poly.size(); ++j)
            q[i + j] += q_[i] * poly[j];
    return {nu_, q};
}

WeightedPolynomial WeightedPolynomial::apply_q0(double shift) const
{
    // Q0 x^j w = (2j + 2 nu + 2) x^j w - j (j + 2 nu) x^(j-2) w
    if (q_.size() > 1 && q_[1] != 0)
        throw std::domain_error("apply_q0: x^1 term maps outside the weighted-polynomial space");
    Polynomial g(q_.size(), 0.0);
    for (std::size_t j = 0; j < q_.size(); ++j) {
        g[j] += (2.0 * j + 2 * nu_ + 2 - shift) * q_[j];
        if (j >= 2)
            g[j - 2] -= j * (j + 2 * nu_) * q_[j];
    }
    return {nu_, g};
}

WeightedPolynomial oscillator_eigenpoly(double nu, int n)
{
    if (n < 0)
        throw std::invalid_argument("oscillator_eigenpoly: n must be non-negative");
    // sqrt(2 n!/Gamma(n+nu+1)) L_n^nu(x^2); consecutive coefficients by their exact ratio
    Polynomial q(static_cast<std::size_t>(2 * n + 1), 0.0);
    q[0] = std::sqrt(2 * std::exp(std::lgamma(n + nu + 1) - std::lgamma(n + 1.0))) / std::tgamma(nu + 1);
    for (int i = 1; i <= n; ++i)
        q[2 * i] = -q[2 * i - 2] * (n - i + 1) / ((nu + i) * i);
    return {nu, q};
}

double matrix_element_diag(double nu, int alpha, int n)
{
    if (alpha < 0 || n < 0)
        throw std::invalid_argument("matrix_element_diag: alpha and n must be non-negative");
    // L_n^nu = sum_j (-alpha/2)_(n-j)/(n-j)! L_j^beta with beta = nu + alpha/2
    const double beta = nu + 0.5 * alpha;
    std::vector<double> d(static_cast<std::size_t>(n + 1), 1.0);
    for (int r = 1; r <= n; ++r)
        d[r] = d[r - 1] * (r - 1 - 0.5 * alpha) / r;
    const double lpre = std::lgamma(n + 1.0) - std::lgamma(n + nu + 1);
    double acc = 0;
    for (int j = 0; j <= n; ++j) {
        const double dj = d[n - j];
        if (dj != 0)
            acc += dj * dj * std::exp(lpre + std::lgamma(j + beta + 1) - std::lgamma(j + 1.0));
    }
    return acc;
}

double matrix_element(double nu, int alpha, int m, int n)
{
    if (alpha < 0)
        throw std::invalid_argument("matrix_element: alpha must be non-negative");
    Polynomial xa(static_cast<std::size_t>(alpha + 1), 0.0);
    xa.back() = 1;
    return oscillator_eigenpoly(nu, m).times(xa).inner(oscillator_eigenpoly(nu, n));
}

RSExpansion rs_expansion(const BlackHoleParams& p, int n, int K, int basis_size)
{
    p.validate();
    check_order(K, "rs_expansion");
    if (n < 0)
        throw std::invalid_argument("rs_expansion: n must be non-negative");
    const auto Q = qk_polynomials(p, K);

    // even Q's keep everything inside a finite block
    bool odd = false;
    int degree = 0;
    for (int k = 1; k <= K; ++k) {
        odd = odd || is_odd_poly(Q[k]);
        degree += static_cast<int>(Q[k].size()) - 1;
    }
    const int M = odd ? std::max(basis_size, n + degree + 8) : n + degree / 2 + 4;
    const int max_power = K + 2;
    const int Mx = M + max_power / 2 + 2;
    const LaguerreOperators ops(p.nu, Mx, max_power);

    std::vector<Eigen::MatrixXd> Qm;
    for (int k = 0; k <= K; ++k)
        Qm.push_back(k == 0 ? Eigen::MatrixXd::Zero(Mx, Mx) : ops.op(Q[k]));

    RSExpansion ex;
    ex.n = n;
    ex.K = K;
    ex.basis_size = M;
    ex.E.assign(static_cast<std::size_t>(K + 1), 0.0);
    ex.E[0] = 2 * (2 * n + 1 + p.nu);

    std::vector<Eigen::VectorXd> v;
    v.push_back(Eigen::VectorXd::Zero(Mx));
    v[0](n) = 1;
    for (int k = 1; k <= K; ++k) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Mx);
        for (int r = 0; r < k; ++r)
            rhs -= Qm[k - r] * v[r];
        // Fredholm condition with intermediate normalization
        ex.E[k] = -rhs(n);
        for (int r = 1; r < k; ++r)
            rhs += ex.E[k - r] * v[r];
        rhs(n) += ex.E[k];
        ex.truncation_residual = std::max(ex.truncation_residual, rhs.tail(Mx - M).cwiseAbs().maxCoeff());
        Eigen::VectorXd vk = Eigen::VectorXd::Zero(Mx);
        for (int m = 0; m < M; ++m)
            if (m != n)
                vk(m) = rhs(m) / (4.0 * (m - n));
        v.push_back(vk);
    }
    for (int k = 1; k <= K; ++k)
        ex.correctors.emplace_back(v[k].data(), v[k].data() + M);
    ex.c = omega_coeffs(ex.E);
    return ex;
}

MonomialExpansion rs_expansion_monomial(const BlackHoleParams& p, int n, int K)
{
    p.validate();
    check_order(K, "rs_expansion_monomial");
    if (n < 0)
        throw std::invalid_argument("rs_expansion_monomial: n must be non-negative");
    const auto Q = qk_polynomials(p, K);
    const double nu = p.nu;
    const double E0 = 2 * (2 * n + 1 + nu);

    MonomialExpansion ex;
    ex.n = n;
    ex.E.assign(static_cast<std::size_t>(K + 1), 0.0);
    ex.E[0] = E0;
    const auto v0 = oscillator_eigenpoly(nu, n);
    ex.correctors.push_back(v0);

    for (int k = 1; k <= K; ++k) {
        WeightedPolynomial rhs(nu, {0.0});
        for (int r = 0; r < k; ++r)
            rhs = rhs + ex.correctors[r].times(Q[k - r]) * -1.0;
        ex.E[k] = -rhs.inner(v0);
        for (int r = 1; r < k; ++r)
            rhs = rhs + ex.correctors[r] * ex.E[k - r];
        rhs = rhs + v0 * ex.E[k];

        // descending back-substitution; the diagonal 2(j - 2n) vanishes at j = 2n
        const auto& f = rhs.coeffs();
        const int top = static_cast<int>(f.size()) - 1;
        Polynomial q(f.size() + 2, 0.0);
        double scale = 0;
        for (double x : f)
            scale = std::max(scale, std::abs(x));
        for (int j = top; j >= 0; --j) {
            const double carry = (j + 2.0) * (j + 2 + 2 * nu) * q[j + 2];
            if (j == 2 * n) {
                ex.consistency = std::max(ex.consistency, std::abs(f[j] + carry) / std::max(scale, 1e-300));
                continue;
            }
            q[j] = (f[j] + carry) / (2.0 * (j - 2 * n));
        }
        if (q.size() > 1 && std::abs(q[1]) > 1e-14 * std::max(scale, 1e-300))
            throw std::domain_error("rs_expansion_monomial: order " + std::to_string(k) +
                                    " has an odd part that leaves the weighted-polynomial space");
        q[1] = 0;
        while (q.size() > 1 && q.back() == 0)
            q.pop_back();
        WeightedPolynomial vk(nu, q);
        // free multiple of v0 fixed by <v_k, v_0> = 0
        vk = vk + v0 * -vk.inner(v0);

        const auto lhs = vk.apply_q0(E0);
        for (int j = 0; j <= std::max(lhs.degree(), rhs.degree()); ++j) {
            const double a = j <= lhs.degree() ? lhs.coeffs()[j] : 0.0;
            const double b = j <= rhs.degree() ? rhs.coeffs()[j] : 0.0;
            ex.residual = std::max(ex.residual, std::abs(a - b) / std::max(scale, 1e-300));
        }
        ex.correctors.push_back(vk);
    }
    ex.correctors.erase(ex.correctors.begin());
    return ex;
}

std::vector<double> omega_coeffs(const std::vector<double>& E)
{
    if (E.empty())
        throw std::invalid_argument("omega_coeffs: no coefficients");
    // y = sum_k E_k eps^(k+2), s = sqrt(1 + y) with s_0 = 1
    const std::size_t m = E.size() + 2;
    std::vector<double> y(m, 0.0), s(m, 0.0);
    for (std::size_t k = 0; k < E.size(); ++k)
        y[k + 2] = E[k];
    s[0] = 1;
    for (std::size_t i = 1; i < m; ++i) {
        double acc = y[i];
        for (std::size_t j = 1; j < i; ++j)
            acc -= s[j] * s[i - j];
        s[i] = 0.5 * acc;
    }
    return std::vector<double>(s.begin() + 2, s.end());
}

double omega_expansion(const RSExpansion& ex, int ell, int d)
{
    const auto sc = semiclassical(ell, d);
    double rad = 1;
    for (std::size_t k = 0; k < ex.E.size(); ++k)
        rad += ex.E[k] * std::pow(sc.h, 1 + 0.5 * k);
    if (!(rad > 0))
        throw std::domain_error("omega_expansion: truncated sum is negative at ell = " + std::to_string(ell));
    return sc.p_scale * std::sqrt(rad);
}

double omega_expansion(const BlackHoleParams& p, int ell, int n, int K)
{
    return omega_expansion(rs_expansion(p, n, K), ell, p.d);
}

} // namespace adsqnm
