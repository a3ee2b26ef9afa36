// Eisenstein layer: divisor sums, certified tails, modular invariants, the
// quadratic approximants, and the Im(tau) > 1.25 inequality suite.
//
// Independent oracles used here:
//  * row-reorganized lattice sums: sum over one row of the lattice has a
//    closed trigonometric form (derivatives of the cotangent identity), rows
//    decay geometrically -- no divisor sums, no q-expansion;
//  * a raw rectangular lattice cutoff at |m|,|n| <= 2000 in doubles, compared
//    at its own certified cutoff error;
//  * exact integer divisor tables.

#include <catch2/catch_amalgamated.hpp>

#include <modpi/qseries.hpp>

#include <complex>
#include <cstdio>

#include "testutil.hpp"

using namespace modpi;

namespace {

QPoint qp(double re, double im, const PrecisionCtx& ctx) {
    return make_qpoint(tu::cplx(re, im, ctx.work()), ctx);
}

// tau_N on the half-plane: i*sqrt(N)/2 for N = 0 mod 4, (1+i*sqrt(N))/2 else.
QPoint qp_tauN(int N, const PrecisionCtx& ctx) {
    const long p = ctx.work();
    BigReal rootN = sqrt_r(BigReal::of(N, p));
    if (N % 4 == 0)
        return make_qpoint(BigComplex(BigReal::of(0, p), ldexp_r(rootN, -1)), ctx);
    return make_qpoint(BigComplex(BigReal::of(rat_of(1, 2), p), ldexp_r(rootN, -1)), ctx);
}

// Row sums S_k(w) = sum_{n in Z} (w+n)^-k via derivatives of the cotangent
// identity; valid for non-real w (and real non-integer w).
BigComplex row_sum4(const BigComplex& w, const BigReal& pi) {
    BigComplex s = sin_c(BigComplex(pi * w.re, pi * w.im));
    BigComplex s2 = s * s, s4 = s2 * s2;
    BigReal pi4 = pow_si(pi, 4);
    return (BigComplex(BigReal::of(3, w.prec()), BigReal::of(0, w.prec())) - s2 * 2) * pi4 / (s4 * 3);
}
BigComplex row_sum6(const BigComplex& w, const BigReal& pi) {
    BigComplex s = sin_c(BigComplex(pi * w.re, pi * w.im));
    BigComplex s2 = s * s, s4 = s2 * s2, s6 = s4 * s2;
    BigReal pi6 = pow_si(pi, 6);
    BigComplex num = BigComplex(BigReal::of(15, w.prec()), BigReal::of(0, w.prec())) - s2 * 15 + s4 * 2;
    return num * pi6 / (s6 * 15);
}

// E_k via row-reorganized lattice sum: G_k = 2 zeta(k) E_k, row m = 0 summed
// exactly (2 zeta(k)), rows |m| >= 1 via the closed forms above.
BigComplex lattice_E(int k, const BigComplex& tau, const PrecisionCtx& ctx, int rows) {
    const long p = ctx.work();
    BigReal pi = ref_pi(ctx);
    BigComplex acc(p);
    for (int m = 1; m <= rows; ++m) {
        BigComplex w = tau * m;
        acc = acc + (k == 4 ? row_sum4(w, pi) : row_sum6(w, pi));
    }
    // G_k = 2 zeta(k) + 2 * acc;  E_k = G_k / (2 zeta(k))
    // zeta(4) = pi^4/90, zeta(6) = pi^6/945
    BigReal two_zeta = (k == 4) ? pow_si(pi, 4) / 45 : ldexp_r(pow_si(pi, 6), 1) / 945;
    return (acc * 2) / two_zeta + BigReal::of(1, p);
}

}  // namespace

TEST_CASE("divisor sums match the exact tables", "[qseries]") {
    const long s1[] = {1, 3, 4, 7, 6, 12, 8, 15};
    const long s3[] = {1, 9, 28, 73, 126, 252, 344, 585};
    const long s5[] = {1, 33, 244, 1057, 3126, 8052, 16808, 33825};
    for (unsigned long n = 1; n <= 8; ++n) {
        REQUIRE(divisor_sigma(1, n) == s1[n - 1]);
        REQUIRE(divisor_sigma(3, n) == s3[n - 1]);
        REQUIRE(divisor_sigma(5, n) == s5[n - 1]);
    }
    REQUIRE_THROWS_AS(divisor_sigma(2, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(divisor_sigma(1, 0), std::invalid_argument);
}

TEST_CASE("nome at the CM points: q_N = (-1)^N exp(-pi sqrt(N))", "[qseries]") {
    PrecisionCtx ctx(256);
    const long p = ctx.work();
    for (int N : {7, 8, 163}) {
        QPoint q = qp_tauN(N, ctx);
        BigReal mag = exp_r(-(ref_pi(ctx) * sqrt_r(BigReal::of(N, p))));
        BigReal want_re = (N % 2 == 0) ? mag : -mag;
        REQUIRE(abs_r(q.q.re - want_re).to_double() < 1e-80);
        REQUIRE(abs_r(q.q.im).to_double() < 1e-80);
        REQUIRE(q.abs_q_bound >= abs_c(q.q));
    }
}

TEST_CASE("E4 and E6 match the row-reorganized lattice sums", "[qseries]") {
    PrecisionCtx ctx(256);
    QPoint p2i = qp(0.0, 2.0, ctx);
    BigComplex e4 = eisenstein(4, p2i, 40, ctx).value;
    BigComplex e4_lattice = lattice_E(4, p2i.tau, ctx, 30);
    REQUIRE(tu::abs_diff(e4, e4_lattice) < 1e-20);

    BigComplex e6 = eisenstein(6, p2i, 40, ctx).value;
    BigComplex e6_lattice = lattice_E(6, p2i.tau, ctx, 30);
    REQUIRE(tu::abs_diff(e6, e6_lattice) < 1e-20);

    // generic point as well
    QPoint pg = qp(0.31, 1.62, ctx);
    REQUIRE(tu::abs_diff(eisenstein(4, pg, ctx).value, lattice_E(4, pg.tau, ctx, 40)) < 1e-20);
    REQUIRE(tu::abs_diff(eisenstein(6, pg, ctx).value, lattice_E(6, pg.tau, ctx, 40)) < 1e-20);
}

TEST_CASE("row-sum closed forms agree with direct summation", "[qseries]") {
    // validates the oracle itself at double precision
    std::complex<double> w(0.3, 0.2);
    std::complex<double> direct4(0, 0), direct6(0, 0);
    for (long n = -20000; n <= 20000; ++n) {
        std::complex<double> t = w + static_cast<double>(n);
        std::complex<double> t2 = t * t, t4 = t2 * t2;
        direct4 += 1.0 / t4;
        direct6 += 1.0 / (t4 * t2);
    }
    PrecisionCtx ctx(128);
    BigComplex c4 = row_sum4(tu::cplx(0.3, 0.2, ctx.work()), ref_pi(ctx));
    BigComplex c6 = row_sum6(tu::cplx(0.3, 0.2, ctx.work()), ref_pi(ctx));
    REQUIRE(std::abs(std::complex<double>(c4.re.to_double(), c4.im.to_double()) - direct4) < 1e-8);
    REQUIRE(std::abs(std::complex<double>(c6.re.to_double(), c6.im.to_double()) - direct6) < 1e-10);
}

TEST_CASE("E4 matches the raw rectangular lattice cutoff at its own error", "[qseries]") {
    // |m|,|n| <= 2000 in doubles; certified cutoff error ~ 4/R^2 on G4.
    const double R = 2000;
    std::complex<double> tau(0.0, 2.0);
    std::complex<double> acc(0, 0);
    for (long m = -2000; m <= 2000; ++m) {
        for (long n = -2000; n <= 2000; ++n) {
            if (m == 0 && n == 0) continue;
            std::complex<double> w = tau * static_cast<double>(m) + static_cast<double>(n);
            std::complex<double> w2 = w * w;
            acc += 1.0 / (w2 * w2);
        }
    }
    const double pi = 3.14159265358979323846;
    double two_zeta4 = std::pow(pi, 4) / 45.0;
    std::complex<double> e4_raw = acc / two_zeta4;
    PrecisionCtx ctx(128);
    BigComplex e4 = eisenstein(4, qp(0.0, 2.0, ctx), ctx).value;
    double cutoff = (4.0 / (R * R)) / two_zeta4 + 1e-9;
    REQUIRE(std::abs(std::complex<double>(e4.re.to_double(), e4.im.to_double()) - e4_raw) < cutoff);
}

TEST_CASE("tail certificates are honest", "[qseries]") {
    PrecisionCtx ctx(192);
    for (auto& p : {qp(0.21, 1.31, ctx), qp_tauN(7, ctx)}) {
        for (int k : {2, 4, 6}) {
            EisValue low = eisenstein(k, p, 5, ctx);
            EisValue high = eisenstein(k, p, 60, ctx);
            REQUIRE(abs_c(low.value - high.value) <= low.tail_bound);
            REQUIRE(high.tail_bound < low.tail_bound);
        }
    }
    // certificate refused when the geometric comparison fails
    PrecisionCtx tight(64);
    QPoint hot = qp(0.0, 0.01, tight);
    REQUIRE_THROWS_AS(eisenstein(2, hot, 2, tight), BoundUnavailable);
}

TEST_CASE("modular invariants at distinguished points", "[qseries]") {
    PrecisionCtx ctx(256);

    // 1728 J at tau_8 is within 0.2 of 8000
    BigComplex J8 = modular_J(qp_tauN(8, ctx), ctx);
    REQUIRE(abs_r(J8.re * 1728 - BigReal::of(8000, ctx.work())).to_double() < 0.2);
    REQUIRE(abs_r(J8.im).to_double() < 1e-60);

    // J(i) = 1 (E6 vanishes), J at the hexagonal point = 0 (E4 vanishes)
    BigComplex Ji = modular_J(qp(0.0, 1.0, ctx), ctx);
    REQUIRE(tu::abs_diff(Ji, tu::cplx(1.0, 0.0, ctx.work())) < 1e-70);
    BigComplex hex(BigReal::of(rat_of(1, 2), ctx.work()),
                   ldexp_r(sqrt_r(BigReal::of(3, ctx.work())), -1));
    BigComplex Jw = modular_J(make_qpoint(hex, ctx), ctx);
    REQUIRE(abs_c(Jw).to_double() < 1e-70);

    // s2 at tau_4 = i hits the E6 zero
    REQUIRE_THROWS_AS(modular_s2(qp(0.0, 1.0, ctx), ctx), SingularDenominator);

    // leading behavior: 1728 J q -> 1 and eta24 / q -> 1 as Im tau grows
    QPoint far = qp(0.0, 10.0, ctx);
    BigComplex lead = modular_J(far, ctx) * far.q * 1728;
    REQUIRE(tu::abs_diff(lead, tu::cplx(1.0, 0.0, ctx.work())) < 1e-20);
    BigComplex unit = eta24(far, ctx) / far.q;
    REQUIRE(tu::abs_diff(unit, tu::cplx(1.0, 0.0, ctx.work())) < 1e-20);

    // eta24 is real and positive at tau_8, real and negative at tau_7
    BigComplex d8 = eta24(qp_tauN(8, ctx), ctx);
    REQUIRE(abs_r(d8.im).to_double() < 1e-70);
    REQUIRE(d8.re.sign() > 0);
    BigComplex d7 = eta24(qp_tauN(7, ctx), ctx);
    REQUIRE(abs_r(d7.im).to_double() < 1e-70);
    REQUIRE(d7.re.sign() < 0);
}

TEST_CASE("J is 1-periodic and precision-consistent", "[qseries]") {
    PrecisionCtx ctx(256);
    BigComplex tau = tu::cplx(0.3, 1.7, ctx.work());
    BigComplex a = modular_J(make_qpoint(tau, ctx), ctx);
    BigComplex b = modular_J(make_qpoint(tau + 1, ctx), ctx);
    REQUIRE(tu::rel_diff(a, b) < 1e-70);

    PrecisionCtx lo(128), hi(320);
    BigComplex jlo = modular_J(qp(0.37, 1.55, lo), lo);
    BigComplex jhi = modular_J(qp(0.37, 1.55, hi), hi);
    REQUIRE(abs_c(jlo - jhi) <= ldexp_r(abs_c(jhi), -128 + 16));

    BigComplex slo = modular_s2(qp(0.37, 1.55, lo), lo);
    BigComplex shi = modular_s2(qp(0.37, 1.55, hi), hi);
    REQUIRE(abs_c(slo - shi) <= ldexp_r(max_r(abs_c(shi), BigReal::of(1, hi.work())), -128 + 16));
}

TEST_CASE("printed approximant values at the CM points", "[qseries]") {
    // 5-decimal renderings of 1728*J~ and 20-decimal renderings of s2~,
    // frozen from the reference listing.
    PrecisionCtx ctx(256);
    struct Row { int N; const char* j1728; const char* s2; };
    const Row rows[] = {
        {7,   "-3375.00107",             "0.23809564791495822417"},
        {8,   "7999.99959",              "0.35714272614825257875"},
        {11,  "-32768.00002",            "0.41558441699505054414"},
        {12,  "53999.99999",             "0.45454545415223844453"},
        {16,  "287496.00000",            "0.52380952380664189452"},
        {19,  "-884736.00000",           "0.56140350877203450431"},
        {27,  "-12288000.00000",         "0.63241106719367593347"},
        {28,  "16581375.00000",          "0.63909774436090223748"},
        {43,  "-884736000.00000",        "0.70874861572535991141"},
        {67,  "-147197952000.00000",     "0.76667354471880230185"},
        {163, "-262537412640768000.00000", "0.85040827318723886141"},
    };
    for (const Row& r : rows) {
        QPoint p = qp_tauN(r.N, ctx);
        BigComplex jt = approx_J(p, ctx);
        REQUIRE((jt.re * 1728).to_decimal(5) == r.j1728);
        REQUIRE(abs_r(jt.im * 1728).to_double() < 1e-50);
        BigComplex st = approx_s2(p, ctx);
        REQUIRE(st.re.to_decimal(20) == r.s2);
        REQUIRE(abs_r(st.im).to_double() < 1e-50);
    }
}

TEST_CASE("region inequality suite holds on samples and CM points", "[qseries]") {
    PrecisionCtx ctx(256);
    std::vector<QPoint> samples;
    tu::Rng rng(424242u);
    for (int i = 0; i < 5; ++i)
        samples.push_back(qp(rng.uniform(-0.55, 0.55), rng.uniform(1.26, 4.0), ctx));
    for (int N : {7, 8}) samples.push_back(qp_tauN(N, ctx));

    BoundReport rep = bound_suite(samples, ctx);
    REQUIRE(rep.sigma_growth_ok);
    for (const BoundRecord& r : rep.records) {
        INFO(r.check << " at Im tau = " << r.im_tau << ", margin " << r.margin);
        REQUIRE(r.pass);
    }
    REQUIRE(rep.all_pass);

    std::vector<QPoint> bad = {qp(0.0, 1.2, ctx)};
    REQUIRE_THROWS_AS(bound_suite(bad, ctx), std::invalid_argument);
}
