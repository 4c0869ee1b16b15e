#pragma once

#include <stdexcept>
#include <string>

namespace adsqnm {

/// Physical inputs: boundary dimension d, mass parameter mu and the effective
/// scalar mass nu (nu^2 = m^2 + d^2/4).
struct BlackHoleParams {
    int d = 3;
    double mu = 0.1;
    double nu = 1.5;

    void validate() const
    {
        if (d < 3)
            throw std::invalid_argument("BlackHoleParams: d must be at least 3, got " + std::to_string(d));
        if (!(mu > 0))
            throw std::invalid_argument("BlackHoleParams: mu must be positive");
        if (!(nu > 0))
            throw std::invalid_argument("BlackHoleParams: nu must be positive");
    }
};

} // namespace adsqnm
