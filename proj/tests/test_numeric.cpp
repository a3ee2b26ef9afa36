// Scalar layer: reference pi, principal branches, elementary functions, and
// cross-precision consistency of every exported operation.

#include <catch2/catch_amalgamated.hpp>

#include <modpi/numeric.hpp>

#include "testutil.hpp"

using namespace modpi;

namespace {
// 35 digits computed from a regular 2^62-gon, published 1621; frozen here as
// the independent anchor for every pi-producing path in the library.
const char* kPi35 = "3.14159265358979323846264338327950288";
}  // namespace

TEST_CASE("reference pi reproduces the classical 35-digit value", "[numeric]") {
    PrecisionCtx ctx(256);
    BigReal pi = ref_pi(ctx);
    REQUIRE(pi.to_decimal(35) == kPi35);
}

TEST_CASE("reference pi is consistent across precisions", "[numeric]") {
    PrecisionCtx lo(128), hi(1024);
    BigReal a = ref_pi(lo), b = ref_pi(hi);
    BigReal diff = abs_r(a - b);
    REQUIRE(diff <= ldexp_r(b, -120));
}

TEST_CASE("rationals are canonical and integers exact", "[numeric]") {
    Rat q = rat_of(6, -8);
    REQUIRE(q.get_num() == -3);
    REQUIRE(q.get_den() == 4);
    Rat s = rat_of(1, 3) + rat_of(1, 6);
    REQUIRE(s == rat_of(1, 2));
    Int f;
    mpz_fac_ui(f.get_mpz_t(), 20);
    REQUIRE(f == Int("2432902008176640000"));
}

TEST_CASE("principal square root squares back and lands on the right branch", "[numeric]") {
    const long prec = 256;
    tu::Rng rng(20260822u);
    for (int i = 0; i < 1000; ++i) {
        double re, im;
        rng.unit_disc(re, im);
        BigComplex x = tu::cplx(re * 8.0, im * 8.0, prec);
        BigComplex w = principal_sqrt(x);
        // branch contract
        if (w.re.sign() == 0) {
            REQUIRE(w.im.sign() >= 0);
        } else {
            REQUIRE(w.re.sign() > 0);
        }
        // w*w = x within 4 ulp relative at working precision
        BigComplex ww = w * w;
        BigReal err = abs_c(ww - x);
        BigReal tol = ldexp_r(abs_c(x) + BigReal::of(1, prec), -prec + 2);
        REQUIRE(err <= tol);
    }
    // exact negative real axis: principal root is +i*sqrt(|x|)
    BigComplex m = principal_sqrt(tu::cplx(-4.0, 0.0, prec));
    REQUIRE(m.re.is_zero());
    REQUIRE(tu::abs_diff(m, tu::cplx(0.0, 2.0, prec)) < 1e-70);
}

TEST_CASE("elementary function identities", "[numeric]") {
    PrecisionCtx ctx(256);
    const long p = ctx.work();

    // exp(i*pi) = -1 against the independent pi
    BigComplex ipi(BigReal::of(0, p), ref_pi(ctx));
    REQUIRE(tu::abs_diff(exp_c(ipi), tu::cplx(-1.0, 0.0, p)) < 1e-70);

    // exp(ln x) = x on the positive axis
    BigReal x = BigReal::of(137, p) / 100;
    REQUIRE(abs_r(exp_r(ln_r(x)) - x).to_double() < 1e-70);

    // sin^2 + cos^2 = 1 at a complex point
    BigComplex z = tu::cplx(0.7, -0.4, p);
    BigComplex one = sin_c(z) * sin_c(z) + cos_c(z) * cos_c(z);
    REQUIRE(tu::abs_diff(one, tu::cplx(1.0, 0.0, p)) < 1e-70);

    // principal_pow on the cut: (-5)^(1/2) = i*sqrt(5)
    BigComplex r = principal_pow(tu::cplx(-5.0, 0.0, p), rat_of(1, 2));
    REQUIRE(tu::abs_diff(r, BigComplex(BigReal::of(0, p), sqrt_r(BigReal::of(5, p)))) < 1e-70);
}

TEST_CASE("domain errors are thrown, not absorbed", "[numeric]") {
    REQUIRE_THROWS_AS(ln_r(BigReal::of(0, 128)), std::domain_error);
    REQUIRE_THROWS_AS(ln_r(BigReal::of(-3, 128)), std::domain_error);
    REQUIRE_THROWS_AS(sqrt_r(BigReal::of(-1, 128)), std::domain_error);
    REQUIRE_THROWS_AS(PrecisionCtx(32), std::invalid_argument);
}

// Every exported operation, evaluated at a low and a high context on the same
// input, must agree to within 2^(4-b) relative: the low-precision value is a
// faithful rounding of the function, not an approximation with drift.
TEST_CASE("cross-precision agreement of exported operations", "[numeric]") {
    const long b = 128, B = 320;
    tu::Rng rng(777u);
    for (int i = 0; i < 100; ++i) {
        double re, im;
        rng.unit_disc(re, im);

        BigComplex zb = tu::cplx(re, im, b), zB = tu::cplx(re, im, B);
        auto check = [&](const BigComplex& lo, const BigComplex& hi) {
            BigReal err = abs_c(BigComplex(BigReal(lo.re), BigReal(lo.im)) - hi);
            BigReal tol = ldexp_r(abs_c(hi) + two_pow(-b, B), -b + 4);
            REQUIRE(err <= tol);
        };

        check(exp_c(zb), exp_c(zB));
        check(sin_c(zb), sin_c(zB));
        check(cos_c(zb), cos_c(zB));
        check(principal_sqrt(zb), principal_sqrt(zB));

        double xr = 0.1 + (re + 1.0);  // positive reals in [0.1, 2.1]
        BigReal lb = ln_r(BigReal::of(xr, b)), lB = ln_r(BigReal::of(xr, B));
        REQUIRE(abs_r(lb - lB) <= ldexp_r(abs_r(lB) + two_pow(-b, B), -b + 4));
    }
}

TEST_CASE("decimal rendering", "[numeric]") {
    PrecisionCtx ctx(128);
    BigReal x = BigReal::of(rat_of(1, 8), ctx.work());
    REQUIRE(x.to_decimal(5) == "0.12500");
    REQUIRE(BigReal::of(-15625, ctx.work()).to_decimal(0) == "-15625");
}
