#include "pdafusion/rng.hpp"

#include <algorithm>
#include <cmath>

namespace pdaf {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (spare_normal_) {
        const double v = *spare_normal_;
        spare_normal_.reset();
        return v;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * scale;
    return u * scale;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) {
        return 0;
    }
    // Sum of independent Poisson chunks keeps exp(-chunk) well above underflow.
    constexpr double kChunk = 30.0;
    std::uint64_t count = 0;
    while (mean > 0.0) {
        const double lambda = std::min(mean, kChunk);
        mean -= lambda;
        // Knuth's multiplication method.
        const double limit = std::exp(-lambda);
        double product = uniform();
        while (product > limit) {
            ++count;
            product *= uniform();
        }
    }
    return count;
}

}  // namespace pdaf
