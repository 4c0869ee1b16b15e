#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace adsqnm::detail {

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration from t0 to t1 (either
/// direction) with a caller-supplied step cap. The observer sees every accepted
/// step and may rescale the state in place.
template <std::size_t N, class System, class Cap, class Observer>
void integrate_capped(System&& system, std::array<double, N>& x, double t0, double t1, double rtol,
                      double atol, Cap&& cap, Observer&& observe)
{
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, N>;
    auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_fehlberg78<State>());

    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    double dt = dir * std::min(cap(t, x), span);
    const double tiny = 1e-15 * std::max(std::abs(t0), std::abs(t1));
    int failures = 0;
    while (dir * (t1 - t) > 0) {
        const double remaining = std::abs(t1 - t);
        double step = std::min({std::abs(dt), cap(t, x), remaining});
        // avoid leaving a sliver at the end
        if (remaining - step < 1e-9 * remaining)
            step = remaining;
        dt = dir * step;
        auto wrapped = [&system](const State& s, State& ds, double tt) { system(s, ds, tt); };
        if (stepper.try_step(wrapped, x, t, dt) == odeint::success) {
            failures = 0;
            if (dir * (t1 - t) < 0 || std::abs(t1 - t) < 1e-13 * span)
                t = t1;
            observe(t, x);
        } else {
            if (++failures > 200 || std::abs(dt) < tiny)
                throw std::runtime_error("integrate_capped: step size underflow");
        }
    }
}

} // namespace adsqnm::detail
