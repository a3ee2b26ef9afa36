#ifndef MODPI_HYPERGEOM_HPP
#define MODPI_HYPERGEOM_HPP

// Hypergeometric layer: exact Pochhammer/coefficient streams for 2F1 and 3F2,
// certified evaluation inside the unit disc, the classical second- and
// third-order ODE recursions, Clausen's formula, the central coefficient
// (6n)!/((3n)!(n!)^3 12^(3n)), the twelfth-root period identity, and a
// residual check for the second-order ODE satisfied by
// J^(-1/4) (1-J)^(1/4) 2F1(1/12,5/12;1;1/J).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "modpi/numeric.hpp"
#include "modpi/qseries.hpp"

namespace modpi {

////////////////////////////////////////////////////////////////////////////////
//  Exceptions
////////////////////////////////////////////////////////////////////////////////

// Evaluation point outside |z| < 1 - 2^-20.
struct OutOfDisc : std::domain_error {
    using std::domain_error::domain_error;
};

////////////////////////////////////////////////////////////////////////////////
//  Parameter packs
////////////////////////////////////////////////////////////////////////////////

namespace detail {

inline bool is_nonpositive_int(const Rat& x) {
    return x.get_den() == 1 && x.get_num() <= 0;
}

}  // namespace detail

// 2F1(a,b;c;z); the lower parameter c must not be a non-positive integer.
struct HG2F1 {
    Rat a, b, c;

    HG2F1(const Rat& a_, const Rat& b_, const Rat& c_) : a(a_), b(b_), c(c_) {
        if (detail::is_nonpositive_int(c))
            throw std::invalid_argument("HG2F1: c is a non-positive integer");
    }
};

// 3F2(alpha,beta,gamma;delta,eps;z); delta, eps not non-positive integers.
struct HG3F2 {
    Rat alpha, beta, gamma, delta, eps;

    HG3F2(const Rat& al, const Rat& be, const Rat& ga, const Rat& de,
          const Rat& ep)
        : alpha(al), beta(be), gamma(ga), delta(de), eps(ep) {
        if (detail::is_nonpositive_int(delta) || detail::is_nonpositive_int(eps))
            throw std::invalid_argument(
                "HG3F2: lower parameter is a non-positive integer");
    }
};

////////////////////////////////////////////////////////////////////////////////
//  Exact coefficient streams
////////////////////////////////////////////////////////////////////////////////

// Rising factorial (a)_n = a (a+1) ... (a+n-1), (a)_0 = 1.
inline Rat pochhammer(const Rat& a, long n) {
    if (n < 0) throw std::invalid_argument("pochhammer: n must be >= 0");
    Rat r(1);
    Rat f(a);
    for (long k = 0; k < n; ++k) {
        r *= f;
        f += 1;
    }
    return r;
}

// n-th Maclaurin coefficient (a)_n (b)_n / ((c)_n n!).
inline Rat coeff_2f1(const HG2F1& p, long n) {
    if (n < 0) throw std::invalid_argument("coeff_2f1: n must be >= 0");
    Rat r = pochhammer(p.a, n) * pochhammer(p.b, n) / pochhammer(p.c, n);
    Int fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
    return r / Rat(fact);
}

// n-th Maclaurin coefficient of 3F2.
inline Rat coeff_3f2(const HG3F2& p, long n) {
    if (n < 0) throw std::invalid_argument("coeff_3f2: n must be >= 0");
    Rat r = pochhammer(p.alpha, n) * pochhammer(p.beta, n) *
            pochhammer(p.gamma, n) /
            (pochhammer(p.delta, n) * pochhammer(p.eps, n));
    Int fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
    return r / Rat(fact);
}

////////////////////////////////////////////////////////////////////////////////
//  Certified evaluation for |z| < 1
////////////////////////////////////////////////////////////////////////////////

namespace detail {

// Step data for the generic (q+1)Fq term recursion
//     t_{n+1} = t_n * z * prod(num_i + n) / (prod(den_j + n) * (n+1)).
//
// The coefficient ratio tends to 1, so the term ratio tends to |z|.  For
// n >= n0 below it is certified <= rho := (1+|z|)/2 < 1:
//     prod(n+|num_i|)        <= n^p * (1 + A/n)   (chord bound, n >= 1)
//     prod(n+den_j) * (n+1)  >= n^p * (1 - D/n)   (n > 2*max|den_j|)
// with A = prod(1+|num_i|) - 1 and D = sum|den_j|, hence
//     ratio <= (1 + K/n) |z|,  K = A + 2D + 2AD,
// and (1 + K/n)|z| <= (1+|z|)/2 once n >= 2K|z|/(1-|z|).
struct PfqPlan {
    long n0;            // first index from which the geometric bound holds
    double rho;         // certified per-step ratio bound, < 1
};

inline PfqPlan pfq_plan(const std::vector<Rat>& num, const std::vector<Rat>& den,
                        double abs_z) {
    double a_prod = 1.0;
    for (const Rat& p : num) a_prod *= 1.0 + std::fabs(p.get_d());
    const double a = a_prod - 1.0;
    double d = 0.0, d_max = 0.0;
    for (const Rat& q : den) {
        const double aq = std::fabs(q.get_d());
        d += aq;
        d_max = d_max > aq ? d_max : aq;
    }
    const double k = a + 2.0 * d + 2.0 * a * d;
    double n0 = 2.0 * d_max + 2.0;
    const double geo = 2.0 * k * abs_z / (1.0 - abs_z);
    if (geo > n0) n0 = geo;
    PfqPlan plan;
    plan.n0 = static_cast<long>(std::ceil(1.0625 * n0)) + 4;
    plan.rho = 0.5 * (1.0 + abs_z);
    return plan;
}

// Disc admission: requires |z| < 1 - 2^-20, returns a double upper bound
// on |z| (used only inside the certified n0/rho plan above).
inline double disc_abs(const BigComplex& z, const PrecisionCtx& ctx) {
    const long p = ctx.work();
    BigReal az = abs_c(z);
    BigReal margin = BigReal::of(1, p) - two_pow(-20, p);
    if (!(az < margin)) throw OutOfDisc("pfq evaluation: |z| >= 1 - 2^-20");
    double up = az.to_double() * (1.0 + 1e-14) + 1e-300;
    return up < 1.0 - 9.5e-7 ? up : 1.0 - 9.5e-7;
}

// Shared series loop.  weights = 0 sums f(z); weights = 2 additionally
// accumulates sum n t_n and sum n(n-1) t_n (for termwise derivatives) and
// widens the stopping bound accordingly.
inline void eval_pfq(const std::vector<Rat>& num, const std::vector<Rat>& den,
                     const BigComplex& z, const PrecisionCtx& ctx, int weights,
                     BigComplex& s0, BigComplex& s1, BigComplex& s2) {
    const long p = ctx.work();
    s0 = BigComplex(BigReal::of(1, p), BigReal::of(0, p));
    s1 = BigComplex(BigReal::of(0, p), BigReal::of(0, p));
    s2 = BigComplex(BigReal::of(0, p), BigReal::of(0, p));
    if (z.re.is_zero() && z.im.is_zero()) return;

    const double az = disc_abs(z, ctx);
    const PfqPlan plan = pfq_plan(num, den, az);
    BigReal rho = BigReal::of(Rat(plan.rho), p);
    BigReal geom = rho / (BigReal::of(1, p) - rho);       // sum_{j>=1} rho^j
    BigReal geom2 = geom / (BigReal::of(1, p) - rho);     // rho/(1-rho)^2 bound

    BigComplex t(BigReal::of(1, p), BigReal::of(0, p));
    long n = 0;
    for (;;) {
        Rat f(1);
        for (const Rat& u : num) f *= u + n;
        for (const Rat& v : den) f /= v + n;
        f /= n + 1;
        t = (t * z) * BigReal::of(f, p);
        ++n;                                              // t is now t_n
        s0 = s0 + t;
        if (weights == 2) {
            s1 = s1 + t * n;
            s2 = s2 + t * (n * (n - 1));
        }
        if (n < plan.n0) continue;
        // Remaining tail: sum_{m>n} |t_m| <= |t_n| sum_{j>=1} rho^j; the
        // n- and n(n-1)-weighted tails pick up (n+j)^2 <= 2n^2 + 2j^2-style
        // factors, bounded via sum j rho^j and sum j^2 rho^j <= 2 rho/(1-rho)^3.
        BigReal at = abs_c(t);
        BigReal tail = at * geom;
        if (weights == 2) {
            BigReal nn = BigReal::of(n, p);
            tail = at * (geom * (nn * nn) + geom2 * (nn + nn) +
                         geom2 / (BigReal::of(1, p) - rho) * 2 + geom);
        }
        BigReal thresh = ldexp_r(abs_c(s0), -(ctx.bits + 16));
        if (tail <= thresh) break;
    }
}

}  // namespace detail

// Evaluate 2F1(a,b;c;z), |z| < 1 - 2^-20; truncation certified so that the
// geometric tail bound is below 2^-(bits+16) of the partial sum.
inline BigComplex eval_2f1(const HG2F1& p, const BigComplex& z,
                           const PrecisionCtx& ctx) {
    BigComplex s0, s1, s2;
    detail::eval_pfq({p.a, p.b}, {p.c}, z, ctx, 0, s0, s1, s2);
    return s0;
}

// Evaluate 3F2(alpha,beta,gamma;delta,eps;z) under the same contract.
inline BigComplex eval_3f2(const HG3F2& p, const BigComplex& z,
                           const PrecisionCtx& ctx) {
    BigComplex s0, s1, s2;
    detail::eval_pfq({p.alpha, p.beta, p.gamma}, {p.delta, p.eps}, z, ctx, 0,
                     s0, s1, s2);
    return s0;
}

////////////////////////////////////////////////////////////////////////////////
//  ODE recursions and Clausen's formula (exact rational checks)
////////////////////////////////////////////////////////////////////////////////

// (c+n) A_{n+1} = (n^2 + (a+b) n + ab) A_n for A_n = (a)_n (b)_n / (c)_n,
// the coefficient recursion of  z(z-1) f'' + [(a+b+1)z - c] f' + ab f = 0.
inline bool ode_recursion_check_2f1(const HG2F1& p, long n_max) {
    Rat an = 1;
    for (long n = 0; n <= n_max; ++n) {
        Rat an1 = an * (p.a + n) * (p.b + n) / (p.c + n);
        Rat lhs = (p.c + n) * an1;
        Rat rhs = (Rat(n) * n + (p.a + p.b) * n + p.a * p.b) * an;
        if (lhs != rhs) return false;
        an = an1;
    }
    return true;
}

// (delta+n)(eps+n) A_{n+1} = (alpha+n)(beta+n)(gamma+n) A_n for the 3F2
// coefficients A_n = (alpha)_n (beta)_n (gamma)_n / ((delta)_n (eps)_n).
inline bool ode_recursion_check_3f2(const HG3F2& p, long n_max) {
    Rat an = 1;
    for (long n = 0; n <= n_max; ++n) {
        Rat an1 = an * (p.alpha + n) * (p.beta + n) * (p.gamma + n) /
                  ((p.delta + n) * (p.eps + n));
        Rat lhs = (p.delta + n) * (p.eps + n) * an1;
        Rat rhs = (p.alpha + n) * (p.beta + n) * (p.gamma + n) * an;
        if (lhs != rhs) return false;
        an = an1;
    }
    return true;
}

// Clausen (1828):  (2F1(a,b;a+b+1/2;z))^2 = 3F2(2a,2b,a+b;2a+2b,a+b+1/2;z),
// compared coefficient-by-coefficient via the exact Cauchy product.
inline bool clausen_check(const Rat& a, const Rat& b, long n_max) {
    if (a == 0 && b == 0) return true;  // both sides are identically 1
    Rat c = a + b + rat_of(1, 2);
    if (detail::is_nonpositive_int(c) || detail::is_nonpositive_int(a + b) ||
        detail::is_nonpositive_int(a * 2 + b * 2))
        throw std::invalid_argument("clausen_check: lower parameter hits a pole");
    HG2F1 lhs(a, b, c);
    HG3F2 rhs(a * 2, b * 2, a + b, a * 2 + b * 2, c);
    std::vector<Rat> cl(static_cast<std::size_t>(n_max) + 1);
    for (long n = 0; n <= n_max; ++n)
        cl[static_cast<std::size_t>(n)] = coeff_2f1(lhs, n);
    for (long n = 0; n <= n_max; ++n) {
        Rat square = 0;
        for (long k = 0; k <= n; ++k)
            square += cl[static_cast<std::size_t>(k)] *
                      cl[static_cast<std::size_t>(n - k)];
        if (square != coeff_3f2(rhs, n)) return false;
    }
    return true;
}

////////////////////////////////////////////////////////////////////////////////
//  Central series coefficient
////////////////////////////////////////////////////////////////////////////////

// (6n)! / ((3n)! (n!)^3 12^(3n)), asserted against the Pochhammer form
// (1/6)_n (5/6)_n (1/2)_n / (n!)^3.
inline Rat chud_coeff(long n) {
    if (n < 0) throw std::invalid_argument("chud_coeff: n must be >= 0");
    const unsigned long un = static_cast<unsigned long>(n);
    Int f6, f3, f1;
    mpz_fac_ui(f6.get_mpz_t(), 6 * un);
    mpz_fac_ui(f3.get_mpz_t(), 3 * un);
    mpz_fac_ui(f1.get_mpz_t(), un);
    Int twelve_pow;
    mpz_ui_pow_ui(twelve_pow.get_mpz_t(), 12, 3 * un);
    Int den = f3 * f1 * f1 * f1 * twelve_pow;
    Int cube = f1 * f1 * f1;
    Rat factorial_form = Rat(f6) / Rat(den);
    Rat poch_form = pochhammer(rat_of(1, 6), n) * pochhammer(rat_of(5, 6), n) *
                    pochhammer(rat_of(1, 2), n) / Rat(cube);
    if (factorial_form != poch_form)
        throw std::logic_error("chud_coeff: factorial and Pochhammer forms differ");
    return factorial_form;
}

////////////////////////////////////////////////////////////////////////////////
//  Twelfth-root period identity
////////////////////////////////////////////////////////////////////////////////

// Relative residual of
//     Delta(tau)^(1/12) = 2 pi 12^(-1/4) (1/J)^(1/12) 2F1(1/12,5/12;1;1/J)
// on Im tau > 1.25.  Principal roots throughout; the root is taken of 1/J
// (the series variable) so that both sides approach the negative real axis
// from the same side when Re tau = ±1/2 and Delta, J are exactly negative.
inline BigReal kummer_check(const QPoint& p, const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    if (!(p.tau.im > BigReal::of(rat_of(5, 4), wp)))
        throw std::invalid_argument("kummer_check: requires Im(tau) > 1.25");
    BigReal two_pi = ldexp_r(ref_pi(ctx), 1);
    BigComplex delta = eta24(p, ctx) * pow_si(two_pi, 12);
    BigComplex lhs = principal_pow(delta, rat_of(1, 12));
    BigComplex w = 1 / modular_J(p, ctx);
    BigReal root12 = sqrt_r(sqrt_r(BigReal::of(12, wp)));
    BigComplex rhs = principal_pow(w, rat_of(1, 12)) *
                     eval_2f1(HG2F1(rat_of(1, 12), rat_of(5, 12), Rat(1)), w, ctx) *
                     (two_pi / root12);
    return abs_c(lhs - rhs) / abs_c(lhs);
}

////////////////////////////////////////////////////////////////////////////////
//  Second-order ODE residual
////////////////////////////////////////////////////////////////////////////////

// Residual |b'' + b'/J + (31J-4)/(144 J^2 (J-1)^2) b| for
//     b(J) = J^(-1/4) (1-J)^(1/4) 2F1(1/12,5/12;1;1/J),  |J| > 1.
// Derivatives are termwise in w = 1/J; the algebraic prefactor u enters
// only through the branch-free logarithmic derivatives
//     u'/u  = -1/(4J(1-J)),      u''/u = (5-8J)/(16 J^2 (1-J)^2),
// and through |u| = (|1-J|/|J|)^(1/4) as a final positive scale factor.
inline BigReal picard_fuchs_residual(const BigComplex& J,
                                     const PrecisionCtx& ctx) {
    BigComplex w = 1 / J;
    BigComplex s0, s1, s2;  // sum t_n, sum n t_n, sum n(n-1) t_n
    detail::eval_pfq({rat_of(1, 12), rat_of(5, 12)}, {Rat(1)}, w, ctx, 2,
                     s0, s1, s2);
    // f = s0, w f' = s1, w^2 f'' = s2 - hence for g(J) = f(1/J):
    //   g'  = -w^2 f'  = -w s1
    //   g'' = w^4 f'' + 2 w^3 f' = w^2 (s2 + 2 s1)
    BigComplex g = s0;
    BigComplex gp = -(w * s1);
    BigComplex gpp = (w * w) * (s2 + s1 * 2);

    BigComplex one_m = 1 - J;
    BigComplex jj = J * J;
    BigComplex oo = one_m * one_m;
    BigComplex p1 = -1 / ((J * one_m) * 4);            // u'/u
    BigComplex p2 = (5 - J * 8) / ((jj * oo) * 16);    // u''/u
    BigComplex q = (J * 31 - 4) / ((jj * oo) * 144);
    BigComplex bracket =
        gpp + p1 * gp * 2 + p2 * g + w * (gp + p1 * g) + q * g;
    BigReal scale = sqrt_r(sqrt_r(abs_c(one_m) / abs_c(J)));
    return abs_c(bracket) * scale;
}

}  // namespace modpi

#endif  // MODPI_HYPERGEOM_HPP
