#ifndef MODPI_NUMERIC_HPP
#define MODPI_NUMERIC_HPP

////////////////////////////////////////////////////////////////////////////////
//  numeric.hpp
//
//  Arbitrary-precision scalar layer: a RAII wrapper over MPFR reals, complex
//  numbers as explicit (re, im) pairs of those reals, exact integers and
//  rationals from GMP, and the small set of transcendental operations the
//  rest of the library needs (exp, log, sin, cos, principal square root,
//  principal rational powers, and an independent reference value of pi).
//
//  Conventions
//   * Every operation rounds to nearest at the precision of its operands;
//     mixed-precision operands produce results at the larger precision.
//   * A PrecisionCtx fixes the target precision in bits plus guard bits; all
//     internal computation runs at ctx.work() = bits + guard_bits.
//   * Values are immutable in spirit: functions return fresh values, nothing
//     mutates a previously published result.
//   * No interval arithmetic: certified bounds are produced alongside values
//     (see qseries.hpp) instead of wrapping every scalar.
////////////////////////////////////////////////////////////////////////////////

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace modpi {

// Exact integer and rational types. Arithmetic on mpq_class stays canonical
// (reduced, positive denominator); raw two-argument construction does not,
// hence the rat_of helper.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat_of(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}
inline Rat rat_of(long num, long den) { return rat_of(Int(num), Int(den)); }

////////////////////////////////////////////////////////////////////////////////
//  Precision context
////////////////////////////////////////////////////////////////////////////////

struct PrecisionCtx {
    long bits;        // target precision, >= 64
    long guard_bits;  // extra working bits on top of the target

    explicit PrecisionCtx(long bits_ = 256, long guard_bits_ = 32)
        : bits(bits_), guard_bits(guard_bits_) {
        if (bits < 64) throw std::invalid_argument("PrecisionCtx: bits must be >= 64");
        if (guard_bits < 0) throw std::invalid_argument("PrecisionCtx: guard_bits must be >= 0");
    }

    long work() const { return bits + guard_bits; }
};

////////////////////////////////////////////////////////////////////////////////
//  BigReal: RAII wrapper over mpfr_t
////////////////////////////////////////////////////////////////////////////////

class BigReal {
  public:
    explicit BigReal(long prec = 64) { mpfr_init2(v_, pickprec(prec)); mpfr_set_zero(v_, 1); }

    BigReal(const BigReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigReal(BigReal&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }

    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal& operator=(BigReal&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }

    ~BigReal() { mpfr_clear(v_); }

    // Factories. The precision argument is always explicit: a value never
    // guesses how many bits its creator wanted.
    template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
    static BigReal of(T x, long prec) {
        BigReal r(prec); mpfr_set_si(r.v_, static_cast<long>(x), MPFR_RNDN); return r;
    }
    static BigReal of(const Int& x, long prec) {
        BigReal r(prec); mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN); return r;
    }
    static BigReal of(const Rat& x, long prec) {
        BigReal r(prec); mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN); return r;
    }
    static BigReal of(double x, long prec) {
        BigReal r(prec); mpfr_set_d(r.v_, x, MPFR_RNDN); return r;
    }
    static BigReal of_str(const char* s, long prec) {
        BigReal r(prec);
        if (mpfr_set_str(r.v_, s, 10, MPFR_RNDN) != 0)
            throw std::invalid_argument(std::string("BigReal: unparsable literal ") + s);
        return r;
    }
    // x * 2^e with x exact.
    static BigReal of_scaled(const Int& x, long e, long prec) {
        BigReal r = of(x, prec); mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN); return r;
    }

    long prec() const { return mpfr_get_prec(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // log2(|x|) as a double; -inf for zero. Good to double accuracy, which is
    // all the convergence estimates and reports need.
    double log2_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        long e = 0;
        double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
        return static_cast<double>(e) + std::log2(std::fabs(m));
    }

    // Nearest integer (ties to even, per MPFR).
    Int round_to_int() const {
        Int z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
        return z;
    }

    // Fixed-point decimal rendering with `digits` digits after the point.
    std::string to_decimal(int digits) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*RNf", digits, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    // Scientific rendering with `sig` significant digits.
    std::string to_sci(int sig) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*RNe", sig - 1, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

  private:
    static long pickprec(long p) { return p < MPFR_PREC_MIN ? MPFR_PREC_MIN : p; }
    mpfr_t v_;
};

inline long join_prec(const BigReal& a, const BigReal& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
}

// -- arithmetic ---------------------------------------------------------------

inline BigReal operator-(const BigReal& a) {
    BigReal r(a.prec()); mpfr_neg(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(join_prec(a, b)); mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(join_prec(a, b)); mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(join_prec(a, b)); mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(join_prec(a, b)); mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}

inline BigReal operator+(const BigReal& a, long b) {
    BigReal r(a.prec()); mpfr_add_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline BigReal operator+(long a, const BigReal& b) { return b + a; }
inline BigReal operator-(const BigReal& a, long b) {
    BigReal r(a.prec()); mpfr_sub_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline BigReal operator-(long a, const BigReal& b) {
    BigReal r(b.prec()); mpfr_si_sub(r.raw(), a, b.raw(), MPFR_RNDN); return r;
}
inline BigReal operator*(const BigReal& a, long b) {
    BigReal r(a.prec()); mpfr_mul_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline BigReal operator*(long a, const BigReal& b) { return b * a; }
inline BigReal operator/(const BigReal& a, long b) {
    BigReal r(a.prec()); mpfr_div_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline BigReal operator/(long a, const BigReal& b) {
    BigReal r(b.prec()); mpfr_si_div(r.raw(), a, b.raw(), MPFR_RNDN); return r;
}
inline BigReal operator*(const BigReal& a, const Int& b) {
    BigReal r(a.prec()); mpfr_mul_z(r.raw(), a.raw(), b.get_mpz_t(), MPFR_RNDN); return r;
}
inline BigReal operator*(const Int& a, const BigReal& b) { return b * a; }

inline int cmp(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.raw(), b.raw()); }
inline bool operator<(const BigReal& a, const BigReal& b)  { return cmp(a, b) < 0; }
inline bool operator>(const BigReal& a, const BigReal& b)  { return cmp(a, b) > 0; }
inline bool operator<=(const BigReal& a, const BigReal& b) { return cmp(a, b) <= 0; }
inline bool operator>=(const BigReal& a, const BigReal& b) { return cmp(a, b) >= 0; }
inline bool operator<(const BigReal& a, long b)  { return mpfr_cmp_si(a.raw(), b) < 0; }
inline bool operator>(const BigReal& a, long b)  { return mpfr_cmp_si(a.raw(), b) > 0; }
inline bool operator<=(const BigReal& a, long b) { return mpfr_cmp_si(a.raw(), b) <= 0; }
inline bool operator>=(const BigReal& a, long b) { return mpfr_cmp_si(a.raw(), b) >= 0; }

// -- real functions -----------------------------------------------------------

inline BigReal abs_r(const BigReal& a) {
    BigReal r(a.prec()); mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal min_r(const BigReal& a, const BigReal& b) { return a <= b ? a : b; }
inline BigReal max_r(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }

// Real square root; negative input is a domain error (the complex principal
// root lives in principal_sqrt below).
inline BigReal sqrt_r(const BigReal& a) {
    if (a.sign() < 0) throw std::domain_error("sqrt_r: negative argument");
    BigReal r(a.prec()); mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal exp_r(const BigReal& a) {
    BigReal r(a.prec()); mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r;
}
// Natural log on the positive reals only.
inline BigReal ln_r(const BigReal& a) {
    if (a.sign() <= 0) throw std::domain_error("ln_r: argument must be positive");
    BigReal r(a.prec()); mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal sin_r(const BigReal& a) {
    BigReal r(a.prec()); mpfr_sin(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal cos_r(const BigReal& a) {
    BigReal r(a.prec()); mpfr_cos(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal sinh_r(const BigReal& a) {
    BigReal r(a.prec()); mpfr_sinh(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal cosh_r(const BigReal& a) {
    BigReal r(a.prec()); mpfr_cosh(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline BigReal atan2_r(const BigReal& y, const BigReal& x) {
    BigReal r(join_prec(y, x)); mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN); return r;
}
inline BigReal hypot_r(const BigReal& x, const BigReal& y) {
    BigReal r(join_prec(x, y)); mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN); return r;
}
inline BigReal pow_si(const BigReal& a, long e) {
    BigReal r(a.prec()); mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN); return r;
}
inline BigReal ldexp_r(const BigReal& a, long e) {
    BigReal r(a.prec()); mpfr_mul_2si(r.raw(), a.raw(), e, MPFR_RNDN); return r;
}
// 2^-k at small precision, for tolerance thresholds.
inline BigReal two_pow(long k, long prec = 64) {
    BigReal r(prec); mpfr_set_si_2exp(r.raw(), 1, k, MPFR_RNDN); return r;
}

////////////////////////////////////////////////////////////////////////////////
//  Reference pi: Machin arctangent series over exact integers
//
//  pi = 16*atan(1/5) - 4*atan(1/239), each arctangent summed as a truncated
//  alternating series on integers scaled by 2^s. This path shares nothing
//  with the series evaluated elsewhere in the library, so it can serve as an
//  independent cross-check for them. Results are cached per scale.
////////////////////////////////////////////////////////////////////////////////

namespace detail {

inline Int atan_inv_scaled(unsigned long k, const Int& scale) {
    // floor-ish evaluation of atan(1/k) * scale; each term truncates toward
    // zero, so the absolute error is below the term count.
    Int acc = 0;
    Int t = scale / k;
    unsigned long kk = k * k, n = 0;
    while (t != 0) {
        Int term = t / (2 * n + 1);
        if (n % 2 == 0) acc += term; else acc -= term;
        t /= kk;
        ++n;
    }
    return acc;
}

inline Int pi_scaled(long sbits) {
    static std::map<long, Int> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(sbits);
    if (it != cache.end()) return it->second;
    Int scale = 1;
    scale <<= sbits;
    Int p = 16 * atan_inv_scaled(5, scale) - 4 * atan_inv_scaled(239, scale);
    cache.emplace(sbits, p);
    return p;
}

}  // namespace detail

inline BigReal ref_pi(const PrecisionCtx& ctx) {
    const long s = ctx.work() + 64;  // truncation error < a few thousand ulps of 2^-s
    return BigReal::of_scaled(detail::pi_scaled(s), -s, ctx.work());
}

////////////////////////////////////////////////////////////////////////////////
//  BigComplex: (re, im) pairs of BigReal
////////////////////////////////////////////////////////////////////////////////

struct BigComplex {
    BigReal re, im;

    BigComplex() : re(64), im(64) {}
    explicit BigComplex(long prec) : re(prec), im(prec) {}
    BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
    explicit BigComplex(BigReal r) : re(std::move(r)), im(re.prec()) {}

    static BigComplex of(long r, long i, long prec) {
        return BigComplex(BigReal::of(r, prec), BigReal::of(i, prec));
    }

    long prec() const { return join_prec(re, im); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

inline BigComplex operator-(const BigComplex& a) { return BigComplex(-a.re, -a.im); }
inline BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re + b.re, a.im + b.im);
}
inline BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re - b.re, a.im - b.im);
}
inline BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
inline BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigReal d = b.re * b.re + b.im * b.im;
    return BigComplex((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
}
inline BigComplex operator+(const BigComplex& a, const BigReal& b) { return BigComplex(a.re + b, a.im); }
inline BigComplex operator+(const BigReal& a, const BigComplex& b) { return b + a; }
inline BigComplex operator-(const BigComplex& a, const BigReal& b) { return BigComplex(a.re - b, a.im); }
inline BigComplex operator-(const BigReal& a, const BigComplex& b) { return BigComplex(a - b.re, -b.im); }
inline BigComplex operator*(const BigComplex& a, const BigReal& b) { return BigComplex(a.re * b, a.im * b); }
inline BigComplex operator*(const BigReal& a, const BigComplex& b) { return b * a; }
inline BigComplex operator/(const BigComplex& a, const BigReal& b) { return BigComplex(a.re / b, a.im / b); }
inline BigComplex operator/(const BigReal& a, const BigComplex& b) { return BigComplex(a, BigReal(a.prec())) / b; }
inline BigComplex operator+(const BigComplex& a, long b) { return BigComplex(a.re + b, a.im); }
inline BigComplex operator-(const BigComplex& a, long b) { return BigComplex(a.re - b, a.im); }
inline BigComplex operator-(long a, const BigComplex& b) { return BigComplex(a - b.re, -b.im); }
inline BigComplex operator*(const BigComplex& a, long b) { return BigComplex(a.re * b, a.im * b); }
inline BigComplex operator*(long a, const BigComplex& b) { return b * a; }
inline BigComplex operator/(const BigComplex& a, long b) { return BigComplex(a.re / b, a.im / b); }
inline BigComplex operator/(long a, const BigComplex& b) {
    BigReal d = b.re * b.re + b.im * b.im;
    return BigComplex(a * b.re / d, -(a * b.im) / d);
}
inline BigComplex operator*(const BigComplex& a, const Int& b) { return BigComplex(a.re * b, a.im * b); }
inline BigComplex operator*(const Int& a, const BigComplex& b) { return b * a; }

inline BigComplex conj_c(const BigComplex& a) { return BigComplex(a.re, -a.im); }
inline BigReal abs_c(const BigComplex& a) { return hypot_r(a.re, a.im); }
inline BigReal arg_c(const BigComplex& a) {
    if (a.is_zero()) throw std::domain_error("arg_c: zero argument");
    return atan2_r(a.im, a.re);
}

inline BigComplex pow_ui(const BigComplex& a, unsigned long e) {
    BigComplex base = a;
    BigComplex acc(BigReal::of(1, a.prec()), BigReal::of(0, a.prec()));
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

// -- complex elementary functions ----------------------------------------------

inline BigComplex exp_c(const BigComplex& z) {
    BigReal m = exp_r(z.re);
    return BigComplex(m * cos_r(z.im), m * sin_r(z.im));
}
inline BigComplex sin_c(const BigComplex& z) {
    return BigComplex(sin_r(z.re) * cosh_r(z.im), cos_r(z.re) * sinh_r(z.im));
}
inline BigComplex cos_c(const BigComplex& z) {
    return BigComplex(cos_r(z.re) * cosh_r(z.im), -(sin_r(z.re) * sinh_r(z.im)));
}

// Principal square root: w*w = x with Re(w) > 0, or Re(w) = 0 and Im(w) >= 0.
inline BigComplex principal_sqrt(const BigComplex& x) {
    const long p = x.prec();
    if (x.is_zero()) return BigComplex(p);
    if (x.im.is_zero()) {
        if (x.re.sign() >= 0) return BigComplex(sqrt_r(x.re), BigReal::of(0, p));
        return BigComplex(BigReal::of(0, p), sqrt_r(-x.re));
    }
    BigReal r = abs_c(x);
    if (x.re.sign() >= 0) {
        BigReal t = sqrt_r(ldexp_r(r + x.re, -1));
        return BigComplex(t, x.im / ldexp_r(t, 1));
    }
    BigReal s = sqrt_r(ldexp_r(r - x.re, -1));         // |Im w|
    BigReal t = abs_r(x.im) / ldexp_r(s, 1);           // Re w > 0
    return BigComplex(t, x.im.sign() >= 0 ? s : -s);
}
inline BigComplex principal_sqrt(const BigReal& x) {
    return principal_sqrt(BigComplex(x, BigReal::of(0, x.prec())));
}

// Principal logarithm: ln|z| + i*arg(z), arg in (-pi, pi].
inline BigComplex principal_log(const BigComplex& z) {
    if (z.is_zero()) throw std::domain_error("principal_log: zero argument");
    return BigComplex(ln_r(abs_c(z)), arg_c(z));
}

// Principal rational power z^(p/q) = exp((p/q) * Log z).
inline BigComplex principal_pow(const BigComplex& z, const Rat& e) {
    if (z.is_zero()) {
        if (sgn(e) <= 0) throw std::domain_error("principal_pow: 0 to non-positive power");
        return BigComplex(z.prec());
    }
    return exp_c(principal_log(z) * BigReal::of(e, z.prec()));
}

}  // namespace modpi

#endif  // MODPI_NUMERIC_HPP
