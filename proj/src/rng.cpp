#include "rail/rng.hpp"

#include <cmath>
#include <numbers>

namespace rail {

double Rng::normal(double mean, double stddev) {
    if (stddev == 0.0) {
        return mean;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rail
