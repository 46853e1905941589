#include <cmath>
#include <string>

#include "harper/circuit.hpp"
#include "harper/errors.hpp"

namespace harper {

namespace {

double j1_series(double x) {
    double q = 0.25 * x * x;
    double term = 0.5 * x;
    double sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (double(k) * double(k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Miller backward recurrence normalised by J0 + 2 sum J_2k = 1
double j1_miller(double x) {
    int start = 2 * ((static_cast<int>(x) + 40) / 2);
    double jp1 = 0.0, j = 1e-30, j1 = 0.0, norm = 0.0;
    for (int n = start; n > 0; --n) {
        double jm1 = 2.0 * n / x * j - jp1;
        jp1 = j;
        j = jm1;
        if (n - 1 == 1) j1 = j;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            j1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j;  // J0
    return j1 / norm;
}

}  // namespace

double bessel_j1(double x) {
    if (!std::isfinite(x) || std::abs(x) > 50.0)
        throw DomainError("bessel_j1: argument " + std::to_string(x) + " outside |x| <= 50");
    double ax = std::abs(x);
    double v = ax < 8.0 ? j1_series(ax) : j1_miller(ax);
    return x < 0 ? -v : v;
}

}  // namespace harper
