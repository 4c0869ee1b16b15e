#pragma once

/// \file series.hpp
/// Truncated formal Laurent series over an arbitrary field type.
///
/// A FormalSeries<T> stores the terms x^lead, ..., x^(order-1); everything from
/// x^order upward is unknown. Arithmetic tracks the truncation order so that
/// results are never reported beyond what the inputs determine. T is either
/// `double` or an exact rational (boost::multiprecision::cpp_rational).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adsqnm {

template <class T>
class FormalSeries {
public:
    FormalSeries() = default;

    /// Terms coeffs[i] * x^(lead + i), known modulo x^order.
    FormalSeries(int lead, std::vector<T> coeffs, int order)
        : lead_(lead), coeffs_(std::move(coeffs)), order_(order)
    {
        if (order_ < lead_)
            throw std::invalid_argument("FormalSeries: order below leading exponent");
        coeffs_.resize(static_cast<std::size_t>(order_ - lead_), T(0));
        normalize();
    }

    static FormalSeries monomial(const T& c, int exponent, int order)
    {
        if (order <= exponent)
            return FormalSeries(order, {}, order);
        std::vector<T> cs(static_cast<std::size_t>(order - exponent), T(0));
        cs[0] = c;
        return FormalSeries(exponent, std::move(cs), order);
    }

    static FormalSeries constant(const T& c, int order) { return monomial(c, 0, order); }

    int lead() const { return lead_; }
    int order() const { return order_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<T>& coeffs() const { return coeffs_; }

    /// Coefficient of x^k; zero below lead. Throws past the truncation order.
    T coeff(int k) const
    {
        if (k >= order_)
            throw std::out_of_range("FormalSeries: coefficient beyond truncation order");
        if (k < lead_)
            return T(0);
        return coeffs_[static_cast<std::size_t>(k - lead_)];
    }

    /// Drop every term at or above `order`.
    FormalSeries truncated(int order) const
    {
        order = std::min(order, order_);
        if (order <= lead_)
            return FormalSeries(order, {}, order);
        std::vector<T> cs(coeffs_.begin(), coeffs_.begin() + (order - lead_));
        return FormalSeries(lead_, std::move(cs), order);
    }

    /// Multiply by x^k.
    FormalSeries shifted(int k) const
    {
        if (is_zero())
            return FormalSeries(order_ + k, {}, order_ + k);
        return FormalSeries(lead_ + k, coeffs_, order_ + k);
    }

    FormalSeries operator-() const
    {
        std::vector<T> cs(coeffs_);
        for (auto& c : cs)
            c = -c;
        return FormalSeries(is_zero() ? order_ : lead_, std::move(cs), order_);
    }

    friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b)
    {
        const int order = std::min(a.order_, b.order_);
        const int lead = std::min(a.is_zero() ? order : a.lead_, b.is_zero() ? order : b.lead_);
        if (lead >= order)
            return FormalSeries(order, {}, order);
        std::vector<T> cs(static_cast<std::size_t>(order - lead), T(0));
        for (int k = lead; k < order; ++k)
            cs[static_cast<std::size_t>(k - lead)] = a.coeff(k) + b.coeff(k);
        return FormalSeries(lead, std::move(cs), order);
    }

    friend FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) { return a + (-b); }

    /// Cauchy product truncated to the order both factors determine.
    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b)
    {
        if (a.is_zero() || b.is_zero()) {
            const int la = a.is_zero() ? a.order_ : a.lead_;
            const int lb = b.is_zero() ? b.order_ : b.lead_;
            const int order = std::min(a.order_ + lb, b.order_ + la);
            return FormalSeries(order, {}, order);
        }
        const int lead = a.lead_ + b.lead_;
        const int order = std::min(a.order_ + b.lead_, b.order_ + a.lead_);
        if (order <= lead)
            return FormalSeries(order, {}, order);
        const int n = order - lead;
        std::vector<T> cs(static_cast<std::size_t>(n), T(0));
        for (int i = 0; i < n && i < static_cast<int>(a.coeffs_.size()); ++i) {
            if (a.coeffs_[static_cast<std::size_t>(i)] == T(0))
                continue;
            for (int j = 0; i + j < n && j < static_cast<int>(b.coeffs_.size()); ++j)
                cs[static_cast<std::size_t>(i + j)] +=
                    a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j)];
        }
        return FormalSeries(lead, std::move(cs), order);
    }

    friend FormalSeries operator*(const T& s, const FormalSeries& a)
    {
        std::vector<T> cs(a.coeffs_);
        for (auto& c : cs)
            c = s * c;
        return FormalSeries(a.is_zero() ? a.order_ : a.lead_, std::move(cs), a.order_);
    }

    /// Multiplicative inverse; relative precision is preserved.
    FormalSeries reciprocal() const
    {
        if (is_zero())
            throw std::domain_error("FormalSeries: reciprocal of zero series");
        const int n = order_ - lead_;
        std::vector<T> b(static_cast<std::size_t>(n), T(0));
        const T a0 = coeffs_[0];
        b[0] = T(1) / a0;
        for (int k = 1; k < n; ++k) {
            T acc(0);
            for (int j = 1; j <= k; ++j)
                acc += coeffs_[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
            b[static_cast<std::size_t>(k)] = -acc / a0;
        }
        return FormalSeries(-lead_, std::move(b), -lead_ + n);
    }

    FormalSeries pow(int k) const
    {
        if (k < 0)
            return reciprocal().pow(-k);
        if (is_zero()) {
            if (k == 0)
                throw std::domain_error("FormalSeries: zero series to the power 0");
            return FormalSeries(k * order_, {}, k * order_);
        }
        FormalSeries result(0, {T(1)}, order_ - lead_);
        FormalSeries base = *this;
        while (k > 0) {
            if (k & 1)
                result = result * base;
            k >>= 1;
            if (k > 0)
                base = base * base;
        }
        return result;
    }

    /// Termwise antiderivative with zero constant; requires no x^-1 term.
    FormalSeries integrated() const
    {
        if (is_zero())
            return FormalSeries(order_ + 1, {}, order_ + 1);
        std::vector<T> cs(coeffs_.size(), T(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const int e = lead_ + static_cast<int>(i);
            if (e == -1) {
                if (coeffs_[i] != T(0))
                    throw std::domain_error("FormalSeries: cannot integrate x^-1");
                continue;
            }
            cs[i] = coeffs_[i] / T(e + 1);
        }
        return FormalSeries(lead_ + 1, std::move(cs), order_ + 1);
    }

    FormalSeries derivative() const
    {
        if (is_zero())
            return FormalSeries(order_ - 1, {}, order_ - 1);
        std::vector<T> cs(coeffs_.size(), T(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            cs[i] = coeffs_[i] * T(lead_ + static_cast<int>(i));
        return FormalSeries(lead_ - 1, std::move(cs), order_ - 1);
    }

    /// Horner evaluation of the known terms at a real point.
    double eval(double x) const
    {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * x + static_cast<double>(*it);
        return acc * std::pow(x, lead_);
    }

    /// Largest of the last `window` known terms at x, a cheap truncation
    /// estimate. Looking at several terms matters for sparse series (the
    /// black-hole ones skip powers), where the very last coefficient may be 0.
    double last_term(double x, int window = 8) const
    {
        double worst = 0.0;
        const int n = static_cast<int>(coeffs_.size());
        for (int i = std::max(0, n - window); i < n; ++i)
            worst = std::max(worst, std::abs(static_cast<double>(coeffs_[static_cast<std::size_t>(i)])) *
                                        std::pow(std::abs(x), lead_ + i));
        return worst;
    }

    template <class U>
    FormalSeries<U> cast() const
    {
        std::vector<U> cs;
        cs.reserve(coeffs_.size());
        for (const auto& c : coeffs_)
            cs.push_back(static_cast<U>(c));
        return FormalSeries<U>(is_zero() ? order_ : lead_, std::move(cs), order_);
    }

private:
    void normalize()
    {
        std::size_t k = 0;
        while (k < coeffs_.size() && coeffs_[k] == T(0))
            ++k;
        if (k == coeffs_.size()) {
            coeffs_.clear();
            lead_ = order_;
            return;
        }
        if (k > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(k));
            lead_ += static_cast<int>(k);
        }
    }

    int lead_ = 0;
    std::vector<T> coeffs_;
    int order_ = 0;
};

template <class T>
FormalSeries<T> series_mul(const FormalSeries<T>& a, const FormalSeries<T>& b)
{
    return a * b;
}

template <class T>
FormalSeries<T> series_reciprocal(const FormalSeries<T>& a)
{
    return a.reciprocal();
}

/// a(b(x)) for b with positive valuation; a may carry a finite principal part.
template <class T>
FormalSeries<T> series_compose(const FormalSeries<T>& a, const FormalSeries<T>& b)
{
    if (b.is_zero() || b.lead() < 1)
        throw std::domain_error("series_compose: inner series needs a zero constant term");
    // b^k is known to relative order (b.order - b.lead); the unknown tail of a
    // contributes from x^(a.order * b.lead).
    const int rel = b.order() - b.lead();
    int order = (a.order()) * b.lead();
    if (!a.is_zero())
        order = std::min(order, a.lead() * b.lead() + rel);
    if (a.is_zero())
        return FormalSeries<T>(order, {}, order);

    FormalSeries<T> acc(order, {}, order);
    FormalSeries<T> bn = b.pow(a.lead());
    for (int k = a.lead(); k < a.order(); ++k) {
        const T c = a.coeff(k);
        if (k * b.lead() >= order)
            break;
        if (c != T(0))
            acc = acc + c * bn.truncated(order);
        bn = bn * b;
    }
    return acc.truncated(order);
}

/// Compositional inverse of a = a1 x + a2 x^2 + ..., a1 != 0.
template <class T>
FormalSeries<T> series_reverse(const FormalSeries<T>& a)
{
    if (a.is_zero() || a.lead() != 1)
        throw std::domain_error("series_reverse: series must start at x^1 with nonzero coefficient");
    const int order = a.order();
    const T a1 = a.coeff(1);
    std::vector<T> b(static_cast<std::size_t>(order - 1), T(0));
    b[0] = T(1) / a1;
    for (int k = 2; k < order; ++k) {
        FormalSeries<T> trial(1, b, order);
        const T ck = series_compose(a, trial).coeff(k);
        b[static_cast<std::size_t>(k - 1)] = -ck / a1;
    }
    return FormalSeries<T>(1, std::move(b), order);
}

} // namespace adsqnm
