#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "adsqnm/perturbation.hpp"
#include "adsqnm/spectral.hpp"

using namespace adsqnm;

namespace {

double poly_at(const Polynomial& q, std::size_t j) { return j < q.size() ? q[j] : 0.0; }

double diag_of(const Polynomial& q, double nu, int n)
{
    double acc = 0;
    for (std::size_t a = 0; a < q.size(); ++a)
        acc += q[a] * matrix_element_diag(nu, static_cast<int>(a), n);
    return acc;
}

} // namespace

TEST_CASE("Q_k polynomials by dimension")
{
    const double mu = 0.1, nu = 1.5;
    const auto Q3 = qk_polynomials({3, mu, nu}, 4);
    CHECK(poly_at(Q3[0], 2) == 1.0);
    CHECK(poly_at(Q3[1], 3) == doctest::Approx(-mu).epsilon(1e-15));
    CHECK(poly_at(Q3[1], 0) == 0.0);
    for (int k = 1; k <= 4; ++k)
        CHECK(static_cast<int>(Q3[k].size()) - 1 <= k + 2);

    const auto Q4 = qk_polynomials({4, mu, nu}, 2);
    CHECK(Q4[1].size() == 1);
    CHECK(Q4[1][0] == 0.0);
    CHECK(poly_at(Q4[2], 0) == doctest::Approx((nu * nu - 1) / 3).epsilon(1e-14));
    CHECK(poly_at(Q4[2], 4) == doctest::Approx(2.0 / 3 - mu).epsilon(1e-14));

    for (int d : {5, 6, 7}) {
        const auto Q = qk_polynomials({d, mu, nu}, 2);
        CHECK(Q[1] == Polynomial{0.0});
        CHECK(poly_at(Q[2], 0) == doctest::Approx((nu * nu - 1) / 3).epsilon(1e-14));
        CHECK(poly_at(Q[2], 4) == doctest::Approx(2.0 / 3).epsilon(1e-14));
        CHECK(poly_at(Q[2], 2) == 0.0);
    }
    CHECK_THROWS_AS(qk_polynomials({3, mu, nu}, kMaxExpansionOrder + 1), std::invalid_argument);
}

TEST_CASE("oscillator eigenpolynomials")
{
    // n = 1, nu = 1: 1F1(-1, 2, x^2) = 1 - x^2/2
    const auto u1 = oscillator_eigenpoly(1.0, 1);
    CHECK(u1.coeffs()[2] / u1.coeffs()[0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(u1.coeffs()[0] > 0);

    for (double nu : {0.3, 1.0, 2.5}) {
        for (int m = 0; m <= 8; ++m)
            for (int n = 0; n <= 8; ++n) {
                const double ip = oscillator_eigenpoly(nu, m).inner(oscillator_eigenpoly(nu, n));
                CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-12);
            }
        // unit norm by plain quadrature as well
        for (int n : {0, 3}) {
            const auto u = oscillator_eigenpoly(nu, n);
            const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double x) { return u(x) * u(x); }, 0.0, 12.0, 15, 1e-14);
            CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
            // same function as the model eigenfunction at h = 1
            const auto me = model_eigen(nu, 1.0, n);
            for (double x : {0.4, 1.3, 2.7})
                CHECK(u(x) == doctest::Approx(me.u(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Q0 acts on the weighted monomials exactly")
{
    // compare with a finite-difference second derivative
    const WeightedPolynomial f(1.5, {0.3, 0.0, -1.2, 0.0, 0.5});
    const auto g = f.apply_q0(0.0);
    const double k = 1.5 * 1.5 - 0.25;
    for (double x : {0.5, 1.1, 2.0}) {
        auto fd = [&](double e) { return (f(x + e) - 2 * f(x) + f(x - e)) / (e * e); };
        const double d2 = (4 * fd(1e-3) - fd(2e-3)) / 3;
        CHECK(g(x) == doctest::Approx(-d2 + (k / (x * x) + x * x) * f(x)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(WeightedPolynomial(1.5, {0.0, 1.0}).apply_q0(0.0), std::domain_error);
}

TEST_CASE("diagonal matrix elements")
{
    for (double nu : {0.3, 1.0, 2.5})
        for (int alpha = 0; alpha <= 6; ++alpha)
            for (int n = 0; n <= 6; ++n) {
                const double closed = matrix_element_diag(nu, alpha, n);
                const double moments = matrix_element(nu, alpha, n, n);
                CHECK(closed == doctest::Approx(moments).epsilon(1e-10));
            }
    for (double nu : {0.3, 1.5})
        for (int n = 0; n <= 5; ++n)
            CHECK(matrix_element_diag(nu, 4, n) ==
                  doctest::Approx(2 + 6 * n * (1 + n) + 3 * nu + 6 * n * nu + nu * nu).epsilon(1e-12));
    CHECK(matrix_element_diag(1.0, 4, 0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(matrix_element_diag(1.5, 3, 0) == doctest::Approx(6.0 / std::tgamma(2.5)).epsilon(1e-14));
    CHECK(matrix_element_diag(1.5, 3, 0) == doctest::Approx(4.513517).epsilon(1e-6));
    // hermiticity
    for (int a = 1; a <= 5; ++a)
        CHECK(matrix_element(0.7, a, 2, 5) == doctest::Approx(matrix_element(0.7, a, 5, 2)).epsilon(1e-12));
}

TEST_CASE("first orders of the expansion")
{
    const double nu = 1.5, mu = 0.1;
    for (int n = 0; n <= 3; ++n) {
        const auto ex = rs_expansion({3, mu, nu}, n, 1);
        CHECK(ex.E[0] == doctest::Approx(2 * (2 * n + 1 + nu)));
        CHECK(ex.E[1] == doctest::Approx(-mu * matrix_element_diag(nu, 3, n)).epsilon(1e-12));
        CHECK(ex.E[1] != 0.0);
        CHECK(ex.c[1] == doctest::Approx(ex.E[1] / 2).epsilon(1e-14));
    }
    // hand chain: h = 2/7, E00 = 5, E01 = -0.1 Gamma(4)/Gamma(5/2)
    const auto ex = rs_expansion({3, mu, nu}, 0, 1);
    CHECK(ex.E[1] == doctest::Approx(-0.1 * 6 / std::tgamma(2.5)).epsilon(1e-13));
    for (int d : {4, 5, 6}) {
        const BlackHoleParams p{d, mu, nu};
        const auto Q = qk_polynomials(p, 2);
        for (int n = 0; n <= 3; ++n) {
            const auto e = rs_expansion(p, n, 2);
            CHECK(e.E[1] == 0.0);
            CHECK(e.E[2] == doctest::Approx(diag_of(Q[2], nu, n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("monomial and Galerkin routes agree in the even sector")
{
    for (int d : {4, 6})
        for (double nu : {0.3, 1.5})
            for (int n = 0; n <= 3; ++n) {
                const BlackHoleParams p{d, 0.2, nu};
                const auto g = rs_expansion(p, n, kMaxExpansionOrder);
                const auto m = rs_expansion_monomial(p, n, kMaxExpansionOrder);
                CHECK(m.residual < 1e-10);
                CHECK(m.consistency < 1e-10);
                CHECK(g.truncation_residual == 0.0);
                for (int k = 0; k <= kMaxExpansionOrder; ++k)
                    CHECK(g.E[k] == doctest::Approx(m.E[k]).epsilon(1e-10).scale(1.0));
                // intermediate normalization
                for (const auto& v : m.correctors)
                    CHECK(std::abs(v.inner(oscillator_eigenpoly(nu, n))) < 1e-10);
            }
    // d = 3 leaves the space at the first corrector
    CHECK_THROWS_AS(rs_expansion_monomial({3, 0.1, 1.5}, 0, 2), std::domain_error);
    CHECK_NOTHROW(rs_expansion_monomial({5, 0.1, 1.5}, 0, 2));
}

TEST_CASE("odd sector: Galerkin converges and matches a numerical second derivative")
{
    const BlackHoleParams p{3, 0.1, 1.5};
    const auto small = rs_expansion(p, 0, 4, 120), large = rs_expansion(p, 0, 4, 480);
    for (int k = 0; k <= 4; ++k)
        CHECK(small.E[k] == doctest::Approx(large.E[k]).epsilon(1e-10).scale(1.0));

    // E(lambda) of Q0 + lambda x^3 at h = 1: the lambda^2 coefficient is the
    // second-order sum that the x^3 part contributes to E_{n,2}
    for (int n : {0, 1}) {
        auto E = [&](double lam) {
            EigenProblem prob;
            prob.model = polynomial_model(p.nu, 1.0, 9.0, {1, 0, 1, lam});
            return eigenvalue(prob, n).E;
        };
        const double E0 = E(0);
        auto second = [&](double lam) { return (E(lam) + E(-lam) - 2 * E0) / (2 * lam * lam); };
        const double rich = (4 * second(0.005) - second(0.01)) / 3;
        const auto Q = qk_polynomials(p, 2);
        const auto ex = rs_expansion(p, n, 2);
        const double from_x3 = (ex.E[2] - diag_of(Q[2], p.nu, n)) / (p.mu * p.mu);
        CHECK(from_x3 == doctest::Approx(rich).epsilon(1e-6));
    }
}

TEST_CASE("omega coefficients")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<double> E{U(rng) + 5, U(rng), U(rng), U(rng), U(rng)};
    const auto c = omega_coeffs(E);
    CHECK(c[0] == doctest::Approx(E[0] / 2));
    CHECK(c[1] == doctest::Approx(E[1] / 2));
    CHECK(c[2] == doctest::Approx(E[2] / 2 - E[0] * E[0] / 8));
    // truncation error of the re-expansion shrinks like eps^(K+3)
    auto defect = [&](double eps) {
        double y = 0, s = 1 + c[0] * eps * eps;
        for (std::size_t k = 0; k < E.size(); ++k)
            y += E[k] * std::pow(eps, k + 2.0);
        for (std::size_t k = 1; k < c.size(); ++k)
            s += c[k] * std::pow(eps, k + 2.0);
        return std::abs(std::sqrt(1 + y) - s);
    };
    const double slope = std::log(defect(0.02) / defect(0.01)) / std::log(2.0);
    CHECK(slope == doctest::Approx(7.0).epsilon(0.05));
}

TEST_CASE("vanishing of the omega coefficients by dimension")
{
    for (double nu : {0.3, 1.5, 2.5})
        for (int n = 0; n <= 3; ++n) {
            for (int d : {5, 6, 7}) {
                const auto ex = rs_expansion({d, 0.1, nu}, n, 2);
                CHECK(std::abs(ex.c[1]) < 1e-10);
                CHECK(std::abs(ex.c[2]) < 1e-10);
            }
            const double mu = 0.1;
            const auto ex4 = rs_expansion({4, mu, nu}, n, 2);
            CHECK(std::abs(ex4.c[1]) < 1e-10);
            CHECK(ex4.c[2] ==
                  doctest::Approx(-(mu / 2) * (2 + 6 * n * (1 + n) + 3 * nu + 6 * n * nu + nu * nu)).epsilon(1e-10));
            const auto ex3 = rs_expansion({3, mu, nu}, n, 1);
            CHECK(std::abs(ex3.c[1]) > 1e-3);
        }
}

TEST_CASE("omega expansion: reference column and leading behavior")
{
    const BlackHoleParams p{3, 0.1, 1.5};
    const double table[3][3] = {{5.37639, 6.45283, 7.35226}, {6.46471, 7.63913, 8.63488}, {7.52937, 8.78087, 9.8549}};
    for (int ell = 3; ell <= 5; ++ell)
        for (int n = 0; n < 3; ++n)
            CHECK(std::abs(omega_expansion(p, ell, n, 1) - table[ell - 3][n]) < 1e-4);
    CHECK(std::abs(3.5 * std::sqrt(1 + 5 * (2.0 / 7) + rs_expansion(p, 0, 1).E[1] * std::pow(2.0 / 7, 1.5)) -
                   5.37640) < 1e-5);
    for (int n = 0; n < 2; ++n) {
        const double lead = 2 * n + p.nu + 1.5;
        const double gap1 = omega_expansion(p, 1000, n, 1) - 1000 - lead;
        const double gap2 = omega_expansion(p, 100000, n, 1) - 100000 - lead;
        CHECK(std::abs(gap2) < std::abs(gap1) / 5);
        CHECK(std::abs(gap2) < 1e-2);
    }
    CHECK_THROWS_AS(omega_expansion(BlackHoleParams{3, 5.0, 1.5}, 1, 0, 1), std::domain_error);
}

TEST_CASE("expansion against the eigen solver")
{
    // |E - truncated sum| = O(h^((K+3)/2))
    const BlackHoleParams p{3, 0.1, 1.5};
    const auto ex = rs_expansion(p, 0, 1);
    for (int K : {0, 1}) {
        std::vector<double> lx, ly;
        for (int ell : {100, 200, 400}) {
            const auto sc = semiclassical(ell, 3);
            const double E = eigenvalue(make_reference_problem(p, sc.h), 0).E;
            double sum = 1;
            for (int k = 0; k <= K; ++k)
                sum += ex.E[k] * std::pow(sc.h, 1 + 0.5 * k);
            lx.push_back(std::log(sc.h));
            ly.push_back(std::log(std::abs(E - sum)));
        }
        const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
        CHECK(slope == doctest::Approx((K + 3) / 2.0).epsilon(0.1));
    }
}
