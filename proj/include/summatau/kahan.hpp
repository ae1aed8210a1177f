#pragma once

#include <cmath>

namespace summatau {

// Kahan-Babuska-Neumaier compensated accumulator. The correction term is
// folded in only when the value is read, which keeps += branch-light.
struct KbnSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

} // namespace summatau
