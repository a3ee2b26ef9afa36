#ifndef MODPI_QSERIES_HPP
#define MODPI_QSERIES_HPP

////////////////////////////////////////////////////////////////////////////////
//  qseries.hpp
//
//  Eisenstein q-expansions with certified truncation tails, the modular
//  invariant J, the quasi-modular combination s2 = (E4/E6)*(E2 - 3/(pi*Im tau)),
//  quadratic approximants for both, and a suite of region inequalities on
//  Im(tau) > 1.25 that the recognition pipeline relies on.
//
//  Normalizations (q = exp(2*pi*i*tau), |q| = exp(-2*pi*Im tau)):
//      E2 = 1 -  24 * sum_{n>=1} sigma_1(n) q^n
//      E4 = 1 + 240 * sum_{n>=1} sigma_3(n) q^n
//      E6 = 1 - 504 * sum_{n>=1} sigma_5(n) q^n
//      J  = E4^3 / (E4^3 - E6^2),   eta24 = (E4^3 - E6^2) / 1728
//
//  Tail certificate for the truncated series (truncation order l means the
//  terms n < l were summed): with sigma_{k-1}(n) <= n^k,
//      | sum_{n>=l} sigma_{k-1}(n) q^n |  <=  l^k |q|^l / (1 - (1+1/l)^k |q|)
//  whenever (1+1/l)^k |q| < 1; EisValue.tail_bound carries this times the
//  series coefficient |c_k| (24, 240, or 504), so it bounds the error of
//  EisValue.value directly.
////////////////////////////////////////////////////////////////////////////////

#include <modpi/numeric.hpp>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace modpi {

// Requested truncation order admits no geometric tail certificate here.
struct BoundUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// A denominator (E4^3 - E6^2, or E6) is not certified away from zero.
struct SingularDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

////////////////////////////////////////////////////////////////////////////////
//  Points on the upper half-plane
////////////////////////////////////////////////////////////////////////////////

struct QPoint {
    BigComplex tau;
    BigComplex q;          // exp(2*pi*i*tau)
    BigReal abs_q_bound;   // certified upper bound on |q|
};

inline QPoint make_qpoint(const BigComplex& tau, const PrecisionCtx& ctx) {
    if (tau.im.sign() <= 0)
        throw std::invalid_argument("make_qpoint: Im(tau) must be positive");
    const long p = ctx.work();
    BigReal pi = ref_pi(ctx);
    BigReal two_pi = ldexp_r(pi, 1);
    BigComplex tau_p(BigReal(tau.re), BigReal(tau.im));
    BigComplex w(-(two_pi * tau.im), two_pi * tau.re);
    BigComplex q = exp_c(w);
    // |q| = exp(-2*pi*Im tau); exp_r is correct to ~1 ulp at working precision,
    // a 2^(8-p) relative cushion makes the bound safe.
    BigReal bound = exp_r(-(two_pi * tau.im)) * (BigReal::of(1, p) + two_pow(-p + 8, p));
    return QPoint{tau_p, q, bound};
}

////////////////////////////////////////////////////////////////////////////////
//  Divisor sums
////////////////////////////////////////////////////////////////////////////////

// sigma_k(n) = sum of d^k over divisors d of n; k in {1,3,5}.
inline Int divisor_sigma(int k, unsigned long n) {
    if (k != 1 && k != 3 && k != 5) throw std::invalid_argument("divisor_sigma: k must be 1, 3, or 5");
    if (n == 0) throw std::invalid_argument("divisor_sigma: n must be >= 1");
    Int acc = 0, dk;
    for (unsigned long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_ui_pow_ui(dk.get_mpz_t(), d, static_cast<unsigned long>(k));
        acc += dk;
        unsigned long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(dk.get_mpz_t(), e, static_cast<unsigned long>(k));
            acc += dk;
        }
    }
    return acc;
}

namespace detail {

// sieve of sigma_k(n) for n in [1, limit)
inline std::vector<Int> sigma_sieve(int k, unsigned long limit) {
    std::vector<Int> tab(limit, Int(0));
    Int dk;
    for (unsigned long d = 1; d < limit; ++d) {
        mpz_ui_pow_ui(dk.get_mpz_t(), d, static_cast<unsigned long>(k));
        for (unsigned long m = d; m < limit; m += d) tab[m] += dk;
    }
    return tab;
}

inline int eis_coeff(int k) {
    switch (k) {
        case 2: return -24;
        case 4: return 240;
        case 6: return -504;
        default: throw std::invalid_argument("eisenstein: weight must be 2, 4, or 6");
    }
}

// Tail certificate (including the |c_k| factor) for truncation order l.
// Throws BoundUnavailable when the geometric comparison fails.
inline BigReal eis_tail(int k, const QPoint& p, unsigned long l, long prec) {
    if (l < 2) throw BoundUnavailable("eisenstein: truncation order must be >= 2");
    BigReal one = BigReal::of(1, prec);
    BigReal ratio = pow_si(one + BigReal::of(1, prec) / static_cast<long>(l), k) * p.abs_q_bound;
    if (!(ratio < 1)) throw BoundUnavailable("eisenstein: (1+1/l)^k |q| >= 1, no tail certificate");
    BigReal lk = pow_si(BigReal::of(static_cast<long>(l), prec), k);
    BigReal ql = exp_r(BigReal::of(static_cast<long>(l), prec) * ln_r(p.abs_q_bound));
    int ck = eis_coeff(k);
    return (lk * ql / (one - ratio)) * std::abs(ck);
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////////////
//  Eisenstein series
////////////////////////////////////////////////////////////////////////////////

struct EisValue {
    BigComplex value;
    long truncation_order;  // terms with n < truncation_order were summed
    BigReal tail_bound;     // certified bound on |value - limit|
};

// E_k at p, truncated at order l, with its tail certificate.
inline EisValue eisenstein(int k, const QPoint& p, unsigned long l, const PrecisionCtx& ctx) {
    const long prec = ctx.work();
    const int ck = detail::eis_coeff(k);
    BigReal tail = detail::eis_tail(k, p, l, prec);

    std::vector<Int> sig = detail::sigma_sieve(k - 1, l);
    BigComplex qn(BigReal::of(1, prec), BigReal::of(0, prec));
    BigComplex sum(prec);
    for (unsigned long n = 1; n < l; ++n) {
        qn = qn * p.q;
        sum = sum + qn * sig[n];
    }
    BigComplex value = BigComplex(BigReal::of(1, prec), BigReal::of(0, prec)) + sum * ck;
    return EisValue{value, static_cast<long>(l), tail};
}

// E_k at automatic truncation order: the smallest order whose certified tail
// drops below 2^-(bits+24) * max(|partial sum|, 1/4). The 1/4 floor keeps the
// rule convergent at interior zeros of E_k (e.g. E4 at the hexagonal point),
// where a purely relative target could never be met; everywhere on the
// certified region |E_k| >= 0.6, so the floor never loosens the target there.
inline EisValue eisenstein(int k, const QPoint& p, const PrecisionCtx& ctx) {
    const long prec = ctx.work();
    const double log2q = p.abs_q_bound.log2_abs();
    if (log2q >= -0.001) throw BoundUnavailable("eisenstein: |q| too close to 1");
    const double target = -static_cast<double>(ctx.bits + 26);

    // cheap double scan for the first order meeting the absolute target
    unsigned long l = 3;
    const double lc = std::log2(std::abs(detail::eis_coeff(k)));
    for (;; ++l) {
        double ratio = std::pow(1.0 + 1.0 / static_cast<double>(l), k) * std::exp2(log2q);
        if (ratio < 0.5) {
            double t = lc + k * std::log2(static_cast<double>(l)) +
                       static_cast<double>(l) * log2q - std::log2(1.0 - ratio);
            if (t < target) break;
        }
        if (l > 100000000UL) throw BoundUnavailable("eisenstein: no practical truncation order");
    }
    // certify the choice (and nudge up in the rare case the double scan was
    // optimistic)
    BigReal floor_q = ldexp_r(BigReal::of(1, prec), -(ctx.bits + 26));
    while (!(detail::eis_tail(k, p, l, prec) < floor_q)) ++l;

    // the absolute floor implies tail < 2^-(bits+24) * max(|partial|, 1/4)
    return eisenstein(k, p, l, ctx);
}

////////////////////////////////////////////////////////////////////////////////
//  Modular invariants
////////////////////////////////////////////////////////////////////////////////

namespace detail {

struct JParts {
    EisValue e4, e6;
    BigComplex num;    // E4^3
    BigComplex den;    // E4^3 - E6^2
    BigReal err_num;   // certified |error of E4^3|
    BigReal err_den;   // certified |error of E4^3 - E6^2|
};

inline JParts j_parts(const QPoint& p, const PrecisionCtx& ctx) {
    EisValue e4 = eisenstein(4, p, ctx);
    EisValue e6 = eisenstein(6, p, ctx);
    BigComplex a = e4.value, b = e6.value;
    BigComplex a3 = a * a * a, b2 = b * b;
    BigReal na = abs_c(a), nb = abs_c(b);
    BigReal t4 = e4.tail_bound, t6 = e6.tail_bound;
    BigReal err_a3 = (na * na * 3 + na * t4 * 3 + t4 * t4) * t4;
    BigReal err_b2 = (nb * 2 + t6) * t6;
    return JParts{e4, e6, a3, a3 - b2, err_a3, err_a3 + err_b2};
}

}  // namespace detail

// J = E4^3 / (E4^3 - E6^2). Certified-relative-error contract: on inputs where
// the denominator clears its own error certificate (checked here), the result
// is accurate to well within 2^(16-bits) relative.
inline BigComplex modular_J(const QPoint& p, const PrecisionCtx& ctx) {
    detail::JParts jp = detail::j_parts(p, ctx);
    if (!(abs_c(jp.den) > ldexp_r(jp.err_den, 32)))
        throw SingularDenominator("modular_J: E4^3 - E6^2 not certified away from zero");
    return jp.num / jp.den;
}

// Discriminant-normalized combination (E4^3 - E6^2) / 1728 = q - 24 q^2 + ...
inline BigComplex eta24(const QPoint& p, const PrecisionCtx& ctx) {
    detail::JParts jp = detail::j_parts(p, ctx);
    return jp.den / 1728;
}

// s2 = (E4 / E6) * (E2 - 3/(pi * Im tau)).
inline BigComplex modular_s2(const QPoint& p, const PrecisionCtx& ctx) {
    const long prec = ctx.work();
    EisValue e2 = eisenstein(2, p, ctx);
    EisValue e4 = eisenstein(4, p, ctx);
    EisValue e6 = eisenstein(6, p, ctx);
    if (!(abs_c(e6.value) > ldexp_r(e6.tail_bound, 32)))
        throw SingularDenominator("modular_s2: E6 not certified away from zero");
    BigReal corr = BigReal::of(3, prec) / (ref_pi(ctx) * p.tau.im);
    BigComplex e2star = e2.value - corr;
    return (e4.value / e6.value) * e2star;
}

// Quadratic approximant of J: (1+240(q+9q^2))^3 / (1728 q (1-q-q^2)^24).
inline BigComplex approx_J(const QPoint& p, const PrecisionCtx& ctx) {
    const long prec = ctx.work();
    BigComplex one(BigReal::of(1, prec), BigReal::of(0, prec));
    BigComplex x = one + (p.q + p.q * p.q * 9) * 240;
    BigComplex k = pow_ui(one - p.q - p.q * p.q, 24);
    return pow_ui(x, 3) / (p.q * k * 1728);
}

// Quadratic approximant of s2:
//   (1+240(q+9q^2)) / (1-504(q+33q^2)) * (1 - 24(q+3q^2) - 3/(pi * Im tau)).
inline BigComplex approx_s2(const QPoint& p, const PrecisionCtx& ctx) {
    const long prec = ctx.work();
    BigComplex one(BigReal::of(1, prec), BigReal::of(0, prec));
    BigComplex x = one + (p.q + p.q * p.q * 9) * 240;
    BigComplex y = one - (p.q + p.q * p.q * 33) * 504;
    BigReal corr = BigReal::of(3, prec) / (ref_pi(ctx) * p.tau.im);
    BigComplex z = one - (p.q + p.q * p.q * 3) * 24 - corr;
    return (x / y) * z;
}

////////////////////////////////////////////////////////////////////////////////
//  Region inequalities on Im(tau) > 1.25
//
//  Everything this library later uses to recognize integers and rationals
//  from floating-point values rests on these inequalities. Each record states
//  the inequality, the achieved margin (bound - value as a fraction of the
//  bound), and the verdict. A verdict only passes when the inequality clears
//  its bound by a 2^-32 relative cushion, so numerically marginal cases
//  surface as failures instead of silent passes.
////////////////////////////////////////////////////////////////////////////////

struct BoundRecord {
    std::string check;   // short inequality tag
    double im_tau;
    double margin;       // relative slack, positive means satisfied
    bool pass;
};

struct BoundReport {
    std::vector<BoundRecord> records;
    bool sigma_growth_ok = true;  // sigma_k(n) <= n^(k+1) for n <= 10^4
    bool all_pass = true;
};

namespace detail {

// value must stay strictly below bound (upper=true) or above it (upper=false)
inline void push_bound(BoundReport& rep, const std::string& check, double im_tau,
                       const BigReal& value, const BigReal& bound, bool upper) {
    const long p = value.prec();
    BigReal cushion = ldexp_r(abs_r(bound), -32);
    bool pass = upper ? (value < bound - cushion) : (value > bound + cushion);
    double margin = ((upper ? bound - value : value - bound) / abs_r(bound)).to_double();
    rep.records.push_back(BoundRecord{check, im_tau, margin, pass});
    if (!pass) rep.all_pass = false;
    (void)p;
}

}  // namespace detail

// Evaluate the full inequality suite at each sample (all must satisfy
// Im tau > 1.25) plus the one-off divisor-growth check.
inline BoundReport bound_suite(const std::vector<QPoint>& samples, const PrecisionCtx& ctx) {
    const long prec = ctx.work();
    BoundReport rep;

    // sigma_k(n) <= n^(k+1), n <= 10^4: checked once per suite run
    for (int k : {1, 3, 5}) {
        std::vector<Int> tab = detail::sigma_sieve(k, 10001);
        Int nk;
        for (unsigned long n = 1; n <= 10000; ++n) {
            mpz_ui_pow_ui(nk.get_mpz_t(), n, static_cast<unsigned long>(k + 1));
            if (tab[n] > nk) { rep.sigma_growth_ok = false; rep.all_pass = false; break; }
        }
    }

    const BigReal lim125 = BigReal::of(rat_of(5, 4), prec);
    for (const QPoint& p : samples) {
        if (!(p.tau.im > lim125))
            throw std::invalid_argument("bound_suite: samples must have Im(tau) > 1.25");
        const double y = p.tau.im.to_double();
        const BigReal aq = p.abs_q_bound;

        // |q| < exp(-7.852)  (from 2*pi*Im(tau) > 7.852, pi > 3.1408)
        detail::push_bound(rep, "abs-q", y, aq, exp_r(BigReal::of(rat_of(-7852, 1000), prec)), true);

        // sharpened order-3 tails: |R_k^(3)| <= {4.007, 28.1, 245.6} |q|^3
        const Rat sharp[3] = {rat_of(4007, 1000), rat_of(281, 10), rat_of(2456, 10)};
        const int ks[3] = {2, 4, 6};
        BigReal q3 = aq * aq * aq;
        for (int i = 0; i < 3; ++i) {
            EisValue full = eisenstein(ks[i], p, ctx);
            EisValue low = eisenstein(ks[i], p, 3, ctx);
            BigReal rk = abs_c(full.value - low.value) / std::abs(detail::eis_coeff(ks[i]));
            detail::push_bound(rep, "tail-sharp-E" + std::to_string(ks[i]), y, rk,
                               BigReal::of(sharp[i], prec) * q3, true);
        }

        // |E6| > 0.8
        EisValue e6 = eisenstein(6, p, ctx);
        detail::push_bound(rep, "E6-lower", y, abs_c(e6.value), BigReal::of(rat_of(8, 10), prec), false);

        // J window: |J| > 1.096 and 0.737 < |1728 J q| < 1.321
        BigComplex J = modular_J(p, ctx);
        BigReal absJ = abs_c(J);
        detail::push_bound(rep, "J-lower", y, absJ, BigReal::of(rat_of(1096, 1000), prec), false);
        BigReal window = absJ * 1728 * abs_c(p.q);
        detail::push_bound(rep, "J-window-lo", y, window, BigReal::of(rat_of(737, 1000), prec), false);
        detail::push_bound(rep, "J-window-hi", y, window, BigReal::of(rat_of(1321, 1000), prec), true);

        // |1728 J - 1728 J~| < 500 |q| < 0.2
        BigComplex Jt = approx_J(p, ctx);
        BigReal japx = abs_c(J - Jt) * 1728;
        BigReal cap = BigReal::of(500, prec) * abs_c(p.q);
        detail::push_bound(rep, "J-approx", y, japx, cap, true);
        detail::push_bound(rep, "J-approx-absolute", y, cap, BigReal::of(rat_of(2, 10), prec), true);

        // |s2 - s2~| < 222000 |q|^3
        BigComplex s2 = modular_s2(p, ctx);
        BigComplex s2t = approx_s2(p, ctx);
        BigReal q3s = abs_c(p.q);
        q3s = q3s * q3s * q3s;
        detail::push_bound(rep, "s2-approx", y, abs_c(s2 - s2t), BigReal::of(222000, prec) * q3s, true);
    }
    return rep;
}

}  // namespace modpi

#endif  // MODPI_QSERIES_HPP
