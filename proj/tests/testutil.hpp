#ifndef MODPI_TESTS_TESTUTIL_HPP
#define MODPI_TESTS_TESTUTIL_HPP

// Shared helpers for the test suites: deterministic random points and a few
// distance measures. Seeds are fixed so every run exercises identical inputs.

#include <modpi/numeric.hpp>

#include <random>

namespace tu {

using modpi::BigComplex;
using modpi::BigReal;

inline BigComplex cplx(double re, double im, long prec) {
    return BigComplex(BigReal::of(re, prec), BigReal::of(im, prec));
}

// |a - b| as a double exponent under-estimate is fine for assertions.
inline double abs_diff(const BigComplex& a, const BigComplex& b) {
    return modpi::abs_c(a - b).to_double();
}

inline double rel_diff(const BigComplex& a, const BigComplex& b) {
    double scale = modpi::abs_c(b).to_double();
    if (scale < 1.0) scale = 1.0;
    return abs_diff(a, b) / scale;
}

// log2 of |a - b| / max(1, |b|); -inf when equal.
inline double log2_rel_diff(const BigComplex& a, const BigComplex& b) {
    BigReal d = modpi::abs_c(a - b);
    BigReal s = modpi::max_r(BigReal::of(1, b.prec()), modpi::abs_c(b));
    return (d / s).log2_abs();
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(unsigned long seed) : eng(seed) {}

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(eng);
    }
    // point in the closed unit disc
    void unit_disc(double& re, double& im) {
        for (;;) {
            double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
            if (x * x + y * y <= 1.0) { re = x; im = y; return; }
        }
    }
};

}  // namespace tu

#endif  // MODPI_TESTS_TESTUTIL_HPP
