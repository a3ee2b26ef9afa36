#ifndef MODPI_WEIERSTRASS_HPP
#define MODPI_WEIERSTRASS_HPP

// Numerical Weierstrass layer on L_tau = Z + Z tau: sigma, zeta, wp, wp',
// wp'' through their Fourier representations, lattice invariants and
// quasiperiods, half-period values, duplication and sigma-product identity
// residuals, and the division-point enumerations (integer order and the
// C*tau order attached to a CM quadratic A + B tau + C tau^2 = 0).

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "modpi/numeric.hpp"
#include "modpi/qseries.hpp"

namespace modpi {

////////////////////////////////////////////////////////////////////////////////
//  Exceptions
////////////////////////////////////////////////////////////////////////////////

// z cannot be brought into (or lies outside) the Fourier convergence band.
struct ReductionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// z is within 2^-(bits/2) of a lattice point.
struct PoleProximity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// wp'(z) vanishes (z is a half period), the duplication quotient is undefined.
struct ZeroDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (A,B,C) is not a primitive quadratic relation for tau.
struct InvalidCM : std::runtime_error {
    using std::runtime_error::runtime_error;
};

////////////////////////////////////////////////////////////////////////////////
//  Lattices and invariants
////////////////////////////////////////////////////////////////////////////////

// L = Z omega1 + Z omega2 with Im(omega2/omega1) > 0, i.e. L = omega1 * L_tau.
struct Lattice {
    BigComplex omega1, omega2;

    Lattice(const BigComplex& o1, const BigComplex& o2) : omega1(o1), omega2(o2) {
        BigComplex t = o2 / o1;
        if (!(t.im > BigReal::of(0, t.prec())))
            throw std::invalid_argument("Lattice: Im(omega2/omega1) must be > 0");
    }
    BigComplex tau() const { return omega2 / omega1; }
    const BigComplex& scale() const { return omega1; }
};

struct LatticeInvariants {
    BigComplex g2, g3, eta1, eta2, Delta;
};

// Invariants of L_tau: g2 = (4/3) pi^4 E4, g3 = (8/27) pi^6 E6,
// eta1 = (pi^2/3) E2, eta2 = eta1 tau - 2 pi i, Delta = (2pi)^12 (E4^3-E6^2)/1728.
inline LatticeInvariants invariants_of(const QPoint& p, const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    BigReal pi = ref_pi(ctx);
    BigComplex e2 = eisenstein(2, p, ctx).value;
    BigComplex e4 = eisenstein(4, p, ctx).value;
    BigComplex e6 = eisenstein(6, p, ctx).value;
    LatticeInvariants inv{
        e4 * (pow_si(pi, 4) * 4 / 3),
        e6 * (pow_si(pi, 6) * 8 / 27),
        e2 * (pi * pi / 3),
        BigComplex(BigReal::of(0, wp), BigReal::of(0, wp)),
        (e4 * e4 * e4 - e6 * e6) * (pow_si(ldexp_r(pi, 1), 12) / 1728)};
    inv.eta2 = inv.eta1 * p.tau - BigComplex(BigReal::of(0, wp), ldexp_r(pi, 1));
    return inv;
}

// Homogeneity: G_k(aL) = a^-k G_k(L), eta(aL) = a^-1 eta(L).
inline LatticeInvariants scale_invariants(const LatticeInvariants& inv,
                                          const BigComplex& a) {
    BigComplex a2 = a * a;
    BigComplex a4 = a2 * a2;
    BigComplex a6 = a4 * a2;
    return LatticeInvariants{inv.g2 / a4, inv.g3 / a6, inv.eta1 / a,
                             inv.eta2 / a, inv.Delta / (a6 * a6)};
}

// Invariants of a general lattice via its normalized shape and scale.
inline LatticeInvariants invariants_of(const Lattice& L, const PrecisionCtx& ctx) {
    return scale_invariants(invariants_of(make_qpoint(L.tau(), ctx), ctx),
                            L.omega1);
}

////////////////////////////////////////////////////////////////////////////////
//  Lattice reduction and truncation orders
////////////////////////////////////////////////////////////////////////////////

namespace detail {

struct ReducedZ {
    BigComplex zr;  // z = zr + m*1 + n*tau, |Re zr| <= 1/2, |Im zr| <= Im(tau)/2
    Int m, n;
};

inline ReducedZ reduce_z(const BigComplex& z, const QPoint& p,
                         const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    if (z.re.is_nan() || z.im.is_nan())
        throw ReductionFailure("reduce_z: NaN input");
    Int n = (z.im / p.tau.im).round_to_int();
    BigComplex z1 = z - p.tau * n;
    Int m = z1.re.round_to_int();
    BigComplex zr = z1 - BigReal::of(m, wp);
    // paranoia: the band property is what the series bounds rely on
    if (!(abs_r(zr.im) <= p.tau.im * BigReal::of(rat_of(11, 20), wp)))
        throw ReductionFailure("reduce_z: reduced point left the band");
    return ReducedZ{zr, m, n};
}

// Distance from a band-reduced point to the nearest lattice point among the
// nine candidates a + b tau, a,b in {-1,0,1}.
inline BigReal lattice_distance(const BigComplex& zr, const QPoint& p) {
    BigReal best = abs_c(zr);
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            if (a == 0 && b == 0) continue;
            BigReal d = abs_c(zr - (p.tau * b + a));
            if (d < best) best = d;
        }
    return best;
}

inline void pole_guard(const BigComplex& zr, const QPoint& p,
                       const PrecisionCtx& ctx) {
    if (lattice_distance(zr, p) < two_pow(-(ctx.bits / 2), ctx.work()))
        throw PoleProximity("evaluation point within 2^-(bits/2) of the lattice");
}

// Smallest truncation order L with  coef (L+1)^k beta^(L+1) / (1-rho) < target,
// rho = beta e^(k/(L+1)); doubling scan, each candidate certified in BigReal.
inline long series_order(const BigReal& beta, int k, const BigReal& coef,
                         const BigReal& target, long prec) {
    BigReal one = BigReal::of(1, prec);
    if (!(beta < one - two_pow(-10, prec)))
        throw ReductionFailure("series_order: modulus too close to 1");
    for (long L = 2; L <= (1L << 26); L *= 2) {
        BigReal rho = beta * exp_r(BigReal::of(k, prec) / (L + 1));
        if (!(rho < one - two_pow(-10, prec))) continue;
        BigReal tail = coef * pow_si(beta, L + 1) *
                       pow_si(BigReal::of(L + 1, prec), k) / (one - rho);
        if (tail < target) return L;
    }
    throw ReductionFailure("series_order: no admissible truncation order");
}

// Certified upper bound on |q| e^(2 pi |Im z|), the modulus that controls
// every Fourier term at z.
inline BigReal band_modulus(const BigComplex& z, const QPoint& p,
                            const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    BigReal two_pi = ldexp_r(ref_pi(ctx), 1);
    BigReal cushion = BigReal::of(1, wp) + two_pow(8 - wp, wp);
    return p.abs_q_bound * exp_r(two_pi * abs_r(z.im)) * cushion;
}

struct FourierVals {
    BigComplex zeta, wp, wp1, wp2;
};

constexpr unsigned kZeta = 1, kWp = 2, kWp1 = 4, kWp2 = 8;

// Fourier forms in the band |Im z| < Im tau (no reduction, no pole guard):
//   zeta  = eta1 z + pi cot(pi z) + 4 pi    sum q^m/(1-q^m) sin(2 pi m z)
//   wp    = -eta1 + (pi/sin pi z)^2 - 8 pi^2 sum m   q^m/(1-q^m) cos(2 pi m z)
//   wp'   = -2 pi^3 cos/sin^3      + 16 pi^3 sum m^2 q^m/(1-q^m) sin(2 pi m z)
//   wp''  = 2 pi^4 (sin^2+3cos^2)/sin^4
//                                  + 32 pi^4 sum m^3 q^m/(1-q^m) cos(2 pi m z)
inline FourierVals fourier_band(const BigComplex& z, const QPoint& p,
                                const PrecisionCtx& ctx, unsigned which,
                                const BigComplex& eta1) {
    const long wp = ctx.work();
    BigReal pi = ref_pi(ctx);
    BigReal one = BigReal::of(1, wp);

    BigComplex piz = z * pi;
    BigComplex sz = sin_c(piz);
    BigComplex cz = cos_c(piz);

    int kmax = (which & kWp2) ? 3 : (which & kWp1) ? 2 : (which & kWp) ? 1 : 0;
    BigReal beta = band_modulus(z, p, ctx);
    BigReal denom = one - p.abs_q_bound;
    if (!(denom > 0))
        throw ReductionFailure("fourier_band: |q| bound reaches 1");
    BigReal coef = BigReal::of(3200, wp) / denom;  // covers 32 pi^4 and below
    long L = series_order(beta, kmax, coef, two_pow(-(ctx.bits + 24), wp), wp);

    BigComplex w = exp_c(BigComplex(-(ldexp_r(pi, 1) * z.im),
                                    ldexp_r(pi, 1) * z.re));
    BigComplex winv = 1 / w;
    BigComplex two_i(BigReal::of(0, wp), BigReal::of(2, wp));

    BigComplex s_ze(BigReal::of(0, wp), BigReal::of(0, wp));
    BigComplex s_wp = s_ze, s_wp1 = s_ze, s_wp2 = s_ze;
    BigComplex qm(one, BigReal::of(0, wp));
    BigComplex wm = qm, wmi = qm;
    for (long m = 1; m <= L; ++m) {
        qm = qm * p.q;
        wm = wm * w;
        wmi = wmi * winv;
        BigComplex cm = qm / (1 - qm);
        BigComplex sin_m = (wm - wmi) / two_i;
        BigComplex cos_m = (wm + wmi) / 2;
        if (which & kZeta) s_ze = s_ze + cm * sin_m;
        if (which & kWp) s_wp = s_wp + cm * cos_m * m;
        if (which & kWp1) s_wp1 = s_wp1 + cm * sin_m * (m * m);
        if (which & kWp2) s_wp2 = s_wp2 + cm * cos_m * (m * m * m);
    }

    FourierVals out{s_ze, s_wp, s_wp1, s_wp2};
    if (which & kZeta)
        out.zeta = eta1 * z + (cz / sz) * pi + s_ze * ldexp_r(pi, 2);
    if (which & kWp)
        out.wp = (pi * pi) / (sz * sz) - eta1 - s_wp * ldexp_r(pi * pi, 3);
    if (which & kWp1)
        out.wp1 = s_wp1 * ldexp_r(pow_si(pi, 3), 4) -
                  (cz / (sz * sz * sz)) * ldexp_r(pow_si(pi, 3), 1);
    if (which & kWp2)
        out.wp2 = ((sz * sz + cz * cz * 3) / pow_ui(sz, 4)) *
                      ldexp_r(pow_si(pi, 4), 1) +
                  s_wp2 * ldexp_r(pow_si(pi, 4), 5);
    return out;
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////////////
//  sigma, zeta, wp
////////////////////////////////////////////////////////////////////////////////

// sigma(z; L_tau) from the Fourier product
//   (2 pi i)^-1 e^(eta1 z^2/2) (w^(1/2)-w^(-1/2))
//       prod (1-q^n w)(1-q^n/w)/(1-q^n)^2,      w = e^(2 pi i z),
// after reduction z = zr + m + n tau and the translation law
//   sigma(z + omega_k) = -exp(eta_k (z + omega_k/2)) sigma(z).
inline BigComplex sigma_w(const BigComplex& z, const QPoint& p,
                          const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    BigReal pi = ref_pi(ctx);
    BigReal one = BigReal::of(1, wp);
    LatticeInvariants inv = invariants_of(p, ctx);
    detail::ReducedZ red = detail::reduce_z(z, p, ctx);

    // band product
    BigReal beta = detail::band_modulus(red.zr, p, ctx);
    BigReal denom = one - p.abs_q_bound;
    if (!(denom > 0)) throw ReductionFailure("sigma_w: |q| bound reaches 1");
    long L = detail::series_order(beta, 0, BigReal::of(16, wp) / denom,
                                  two_pow(-(ctx.bits + 24), wp), wp);

    BigComplex hz = exp_c(BigComplex(-(pi * red.zr.im), pi * red.zr.re));
    BigComplex w = hz * hz;
    BigComplex winv = 1 / w;
    BigComplex prod(one, BigReal::of(0, wp));
    BigComplex qm = prod;
    for (long m = 1; m <= L; ++m) {
        qm = qm * p.q;
        BigComplex dm = 1 - qm;
        prod = prod * ((1 - qm * w) * (1 - qm * winv)) / (dm * dm);
    }
    BigComplex two_pi_i(BigReal::of(0, wp), ldexp_r(pi, 1));
    BigComplex band = exp_c(inv.eta1 * (red.zr * red.zr) / 2) *
                      (hz - 1 / hz) * prod / two_pi_i;

    // translation back: z = zr + m + n tau
    BigReal mb = BigReal::of(red.m, wp);
    BigReal nb = BigReal::of(red.n, wp);
    BigComplex arg = inv.eta1 * (red.zr + mb / 2) * mb +
                     inv.eta2 * (red.zr + mb + p.tau * nb / 2) * nb;
    BigComplex val = exp_c(arg) * band;
    Int par = red.m + red.n;
    if (par % 2 != 0) val = -val;
    return val;
}

// zeta(z; L_tau); quasiperiodic continuation zeta(z + m + n tau) =
// zeta(z) + m eta1 + n eta2.
inline BigComplex zeta_w(const BigComplex& z, const QPoint& p,
                         const PrecisionCtx& ctx) {
    LatticeInvariants inv = invariants_of(p, ctx);
    detail::ReducedZ red = detail::reduce_z(z, p, ctx);
    detail::pole_guard(red.zr, p, ctx);
    detail::FourierVals v =
        detail::fourier_band(red.zr, p, ctx, detail::kZeta, inv.eta1);
    const long wp = ctx.work();
    return v.zeta + inv.eta1 * BigReal::of(red.m, wp) +
           inv.eta2 * BigReal::of(red.n, wp);
}

// zeta without lattice reduction, valid for |Im z| <= 0.8 Im tau.  Used to
// measure eta1 and eta2 as genuine zeta differences, independent of the
// Legendre closed form.
inline BigComplex zeta_raw(const BigComplex& z, const QPoint& p,
                           const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    if (!(abs_r(z.im) * 5 <= p.tau.im * 4))
        throw ReductionFailure("zeta_raw: |Im z| > 0.8 Im tau");
    Int c = z.re.round_to_int();
    if (abs_c(z - BigReal::of(c, wp)) < two_pow(-(ctx.bits / 2), wp))
        throw PoleProximity("zeta_raw: too close to the real lattice line");
    LatticeInvariants inv = invariants_of(p, ctx);
    return detail::fourier_band(z, p, ctx, detail::kZeta, inv.eta1).zeta;
}

inline BigComplex wp(const BigComplex& z, const QPoint& p,
                     const PrecisionCtx& ctx) {
    LatticeInvariants inv = invariants_of(p, ctx);
    detail::ReducedZ red = detail::reduce_z(z, p, ctx);
    detail::pole_guard(red.zr, p, ctx);
    return detail::fourier_band(red.zr, p, ctx, detail::kWp, inv.eta1).wp;
}

inline BigComplex wp_prime(const BigComplex& z, const QPoint& p,
                           const PrecisionCtx& ctx) {
    LatticeInvariants inv = invariants_of(p, ctx);
    detail::ReducedZ red = detail::reduce_z(z, p, ctx);
    detail::pole_guard(red.zr, p, ctx);
    return detail::fourier_band(red.zr, p, ctx, detail::kWp1, inv.eta1).wp1;
}

inline BigComplex wp_second(const BigComplex& z, const QPoint& p,
                            const PrecisionCtx& ctx) {
    LatticeInvariants inv = invariants_of(p, ctx);
    detail::ReducedZ red = detail::reduce_z(z, p, ctx);
    detail::pole_guard(red.zr, p, ctx);
    return detail::fourier_band(red.zr, p, ctx, detail::kWp2, inv.eta1).wp2;
}

////////////////////////////////////////////////////////////////////////////////
//  Half periods, duplication, sigma identities
////////////////////////////////////////////////////////////////////////////////

struct HalfPeriodValues {
    BigComplex e1, e2, e3;  // wp at 1/2, tau/2, (1+tau)/2
};

// The three half-period values; asserts Vieta for 4x^3 - g2 x - g3 =
// 4(x-e1)(x-e2)(x-e3) before returning.
inline HalfPeriodValues half_period_values(const QPoint& p,
                                           const PrecisionCtx& ctx) {
    const long wp_ = ctx.work();
    BigReal half = BigReal::of(rat_of(1, 2), wp_);
    BigComplex h1(half, BigReal::of(0, wp_));
    BigComplex h2 = p.tau / 2;
    BigComplex h3 = h2 + half;
    HalfPeriodValues e{wp(h1, p, ctx), wp(h2, p, ctx), wp(h3, p, ctx)};

    LatticeInvariants inv = invariants_of(p, ctx);
    BigReal tol = two_pow(-(ctx.bits / 2), wp_) *
                  max_r(BigReal::of(1, wp_),
                        max_r(abs_c(inv.g2), abs_c(inv.g3)));
    BigComplex s1 = e.e1 + e.e2 + e.e3;
    BigComplex s2 = e.e1 * e.e2 + e.e1 * e.e3 + e.e2 * e.e3;
    BigComplex s3 = e.e1 * e.e2 * e.e3;
    if (!(abs_c(s1) < tol) || !(abs_c(s2 + inv.g2 / 4) < tol) ||
        !(abs_c(s3 - inv.g3 / 4) < tol))
        throw std::logic_error(
            "half_period_values: Vieta consistency check failed");
    return e;
}

// max residual of  wp'' = 6 wp^2 - g2/2  and  wp(2z) = (wp''/wp')^2/4 - 2 wp.
inline BigReal duplication_check(const BigComplex& z, const QPoint& p,
                                 const PrecisionCtx& ctx) {
    LatticeInvariants inv = invariants_of(p, ctx);
    detail::ReducedZ red = detail::reduce_z(z, p, ctx);
    detail::pole_guard(red.zr, p, ctx);
    detail::FourierVals v = detail::fourier_band(
        red.zr, p, ctx, detail::kWp | detail::kWp1 | detail::kWp2, inv.eta1);
    if (abs_c(v.wp1) < two_pow(-(ctx.bits / 2), ctx.work()))
        throw ZeroDerivative("duplication_check: wp'(z) vanishes");
    BigReal r1 = abs_c(v.wp2 - (v.wp * v.wp * 6 - inv.g2 / 2));
    BigComplex q = v.wp2 / v.wp1;
    BigComplex wp2z = wp(z * 2, p, ctx);
    BigReal r2 = abs_c(wp2z - (q * q / 4 - v.wp * 2));
    return max_r(r1, r2);
}

// |wp(v) - wp(u) - sigma(u+v) sigma(u-v) / (sigma(u)^2 sigma(v)^2)|.
inline BigReal sigma_addition_check(const BigComplex& u, const BigComplex& v,
                                    const QPoint& p, const PrecisionCtx& ctx) {
    BigComplex pu = wp(u, p, ctx);
    BigComplex pv = wp(v, p, ctx);
    BigComplex su = sigma_w(u, p, ctx);
    BigComplex sv = sigma_w(v, p, ctx);
    BigComplex num = sigma_w(u + v, p, ctx) * sigma_w(u - v, p, ctx);
    return abs_c(pv - pu - num / (su * su * sv * sv));
}

// |T1 + T2 + T3| / max |Ti| for the cyclic three-term product identity
//   sigma(u+u1) sigma(u-u1) sigma(u2+u3) sigma(u2-u3) + (cyclic in u1,u2,u3).
inline BigReal sigma_three_term_check(const BigComplex& u, const BigComplex& u1,
                                      const BigComplex& u2, const BigComplex& u3,
                                      const QPoint& p, const PrecisionCtx& ctx) {
    auto term = [&](const BigComplex& a, const BigComplex& b,
                    const BigComplex& c) {
        return sigma_w(u + a, p, ctx) * sigma_w(u - a, p, ctx) *
               sigma_w(b + c, p, ctx) * sigma_w(b - c, p, ctx);
    };
    BigComplex t1 = term(u1, u2, u3);
    BigComplex t2 = term(u2, u3, u1);
    BigComplex t3 = term(u3, u1, u2);
    BigReal scale = max_r(abs_c(t1), max_r(abs_c(t2), abs_c(t3)));
    if (scale.is_zero()) return scale;
    return abs_c(t1 + t2 + t3) / scale;
}

////////////////////////////////////////////////////////////////////////////////
//  Division points
////////////////////////////////////////////////////////////////////////////////

struct DivisionPointSet {
    long m = 0;              // integer order (0 for the C*tau case)
    long A = 0, B = 0, C = 0;  // CM triple (0 for the integer case)
    std::vector<BigComplex> points;
};

// All u in the fundamental parallelogram with m u in L, u not in L:
// u = (l + k tau)/m, 0 <= k,l < m, (k,l) != (0,0); exactly m^2 - 1 points.
inline DivisionPointSet division_points(long m, const QPoint& p,
                                        const PrecisionCtx& ctx) {
    if (m < 1) throw std::invalid_argument("division_points: m must be >= 1");
    const long wp = ctx.work();
    DivisionPointSet out;
    out.m = m;
    out.points.reserve(static_cast<std::size_t>(m) * m - 1);
    for (long k = 0; k < m; ++k)
        for (long l = 0; l < m; ++l) {
            if (k == 0 && l == 0) continue;
            out.points.push_back(p.tau * BigReal::of(rat_of(k, m), wp) +
                                 BigReal::of(rat_of(l, m), wp));
        }
    return out;
}

// The C*tau-division points for a primitive quadratic A + B tau + C tau^2 = 0:
// u = (k/A) tau + (l A + k B)/(A C), k in [0,A), the C admissible l per k,
// excluding u = 0; exactly A*C - 1 points.
inline DivisionPointSet division_points_ctau(long A, long B, long C,
                                             const QPoint& p,
                                             const PrecisionCtx& ctx) {
    const long wp = ctx.work();
    if (A < 1 || C < 1)
        throw InvalidCM("division_points_ctau: need A >= 1 and C >= 1");
    long g = std::labs(B);
    long x = A, y = C;
    while (y != 0) { long t = x % y; x = y; y = t; }
    while (x != 0) { long t = g % x; g = x; x = t; }
    if (g != 1) throw InvalidCM("division_points_ctau: gcd(A,B,C) != 1");

    BigComplex rel = p.tau * p.tau * C + p.tau * B + A;
    BigReal scale = max_r(BigReal::of(1, wp),
                          abs_c(p.tau) * std::labs(B) +
                              abs_c(p.tau * p.tau) * C + BigReal::of(A, wp));
    if (!(abs_c(rel) < scale * two_pow(-(ctx.bits / 2), wp)))
        throw InvalidCM("division_points_ctau: A + B tau + C tau^2 != 0");

    DivisionPointSet out;
    out.A = A;
    out.B = B;
    out.C = C;
    out.points.reserve(static_cast<std::size_t>(A) * C - 1);
    for (long k = 0; k < A; ++k) {
        // l with 0 <= l A + k B < A C
        long lo = -(k * B);
        long l0 = lo >= 0 ? (lo + A - 1) / A : -((-lo) / A);
        for (long l = l0; l * A + k * B < A * C; ++l) {
            if (k == 0 && l == 0) continue;
            out.points.push_back(p.tau * BigReal::of(rat_of(k, A), wp) +
                                 BigReal::of(rat_of(l * A + k * B, A * C), wp));
        }
    }
    return out;
}

}  // namespace modpi

#endif  // MODPI_WEIERSTRASS_HPP
