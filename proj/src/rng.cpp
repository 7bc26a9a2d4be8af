#include "forage/rng.hpp"

#include <cmath>

namespace forage {

int RngStream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    // Knuth's product method; fine for the per-step rates used here.
    const double limit = std::exp(-mean);
    int count = 0;
    double product = 1.0;
    do {
        ++count;
        product *= uniform01();
    } while (product > limit);
    return count - 1;
}

} // namespace forage
