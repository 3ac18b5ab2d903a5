#include "lsr/cf.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace lsr {

RationalInterval::RationalInterval(mpq_class l, mpq_class h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) std::swap(lo, hi);
}

void ContinuedFraction::append(const mpz_class& a) {
    const bool first = quotients.empty() && ps_.size() == 1;
    if (first) {
        // a0 seed: p0 = a0, q0 = 1.
        a0 = a;
        ps_.push_back(a);
        qs_.push_back(1);
        return;
    }
    if (a < 1) fail(errc::invalid_quotient, "partial quotients must be >= 1");
    const size_t k = ps_.size();
    ps_.push_back(a * ps_[k - 1] + ps_[k - 2]);
    qs_.push_back(a * qs_[k - 1] + qs_[k - 2]);
    quotients.push_back(a);
}

ContinuedFraction ContinuedFraction::from_a0(const mpz_class& a0) {
    ContinuedFraction cf;
    cf.append(a0);
    return cf;
}

ContinuedFraction convergents(const mpz_class& a0, const std::vector<mpz_class>& quotients) {
    ContinuedFraction cf = ContinuedFraction::from_a0(a0);
    for (const auto& a : quotients) cf.append(a);
    return cf;
}

RationalInterval eval_enclosure(const ContinuedFraction& cf, long depth) {
    if (depth < 1) fail(errc::not_in_domain, "enclosure needs depth >= 1");
    if (depth > cf.size()) fail(errc::depth_exceeded, "depth exceeds available quotients");
    // Convergents are coprime by the determinant identity, so the quotients
    // are already canonical; skipping the gcd matters at huge tips.
    mpq_class a(cf.p(depth - 1), cf.q(depth - 1));
    mpq_class b(cf.p(depth), cf.q(depth));
    return {std::move(a), std::move(b)};
}

RationalInterval dist_to_coset(const RationalInterval& x, const mpz_class& a, const mpz_class& b) {
    if (b < 1) fail(errc::not_in_domain, "coset modulus must be positive");
    // Nearest coset index for each endpoint: l = floor((x - a)/b + 1/2).
    auto nearest = [&](const mpq_class& v) {
        mpq_class t = (v - mpq_class(a)) / mpq_class(b) + mpq_class(1, 2);
        mpz_class l;
        mpz_fdiv_q(l.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
        return l;
    };
    const mpz_class llo = nearest(x.lo), lhi = nearest(x.hi);
    if (llo != lhi)
        fail(errc::ambiguous_coset, "interval straddles a midpoint between coset points");
    const mpq_class v = mpq_class(a) + mpq_class(b) * mpq_class(llo);
    const mpq_class dlo = abs(x.lo - v), dhi = abs(x.hi - v);
    if (x.contains(v)) return {mpq_class(0), std::max(dlo, dhi)};
    return {std::min(dlo, dhi), std::max(dlo, dhi)};
}

RationalInterval dist_coset(const mpz_class& n, const ContinuedFraction& cf, const mpz_class& a,
                            const mpz_class& b, long depth) {
    if (n < 0) fail(errc::not_in_domain, "n must be >= 0");
    const RationalInterval enc = eval_enclosure(cf, depth);
    return dist_to_coset({enc.lo * mpq_class(n), enc.hi * mpq_class(n)}, a, b);
}

RationalInterval dist_coset_exact(const mpq_class& theta, const mpz_class& n, const mpz_class& a,
                                  const mpz_class& b) {
    if (n < 0) fail(errc::not_in_domain, "n must be >= 0");
    return dist_to_coset(RationalInterval::point(theta * mpq_class(n)), a, b);
}

std::pair<mpz_class, std::vector<mpz_class>> common_cf_prefix(const RationalInterval& iv,
                                                              size_t max_terms) {
    auto floor_q = [](const mpq_class& v) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
        return f;
    };

    mpq_class lo = iv.lo, hi = iv.hi;
    const mpz_class a0 = floor_q(lo);
    if (a0 != floor_q(hi)) fail(errc::enclosure_too_wide, "leading term undetermined");

    std::vector<mpz_class> terms;
    lo -= mpq_class(a0);
    hi -= mpq_class(a0);
    while (terms.size() < max_terms) {
        if (lo == 0 || hi == 0) break;  // an endpoint expansion terminates here
        // Reciprocal flips the interval.
        mpq_class nlo = 1 / hi, nhi = 1 / lo;
        const mpz_class d = floor_q(nlo);
        if (d != floor_q(nhi)) break;
        terms.push_back(d);
        lo = nlo - mpq_class(d);
        hi = nhi - mpq_class(d);
    }
    return {a0, terms};
}

mpz_class ceil_rational_power(const mpz_class& x, unsigned long p, unsigned long q) {
    if (x < 1 || q < 1) fail(errc::not_in_domain, "need x >= 1, q >= 1");
    if (p == 0) return 1;
    const unsigned long g = std::gcd(p, q);
    p /= g;
    q /= g;
    const double bits_est = (double)p * mpz_sizeinbase(x.get_mpz_t(), 2);
    if (bits_est > 1.5e9) fail(errc::overflow, "x^p too large for exact ceiling");
    mpz_class xp;
    mpz_pow_ui(xp.get_mpz_t(), x.get_mpz_t(), p);
    mpz_class r;
    const int exact = mpz_root(r.get_mpz_t(), xp.get_mpz_t(), q);
    if (!exact) r += 1;
    return r;
}

namespace {

mpz_class mod_norm(const mpz_class& v, const mpz_class& b) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), b.get_mpz_t());
    return r;
}

mpz_class mod_inverse(const mpz_class& v, const mpz_class& b) {
    mpz_class inv;
    if (!mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), b.get_mpz_t()))
        fail(errc::not_in_domain, "value not invertible mod b");
    return inv;
}

bool is_prime(const mpz_class& b) { return mpz_probab_prime_p(b.get_mpz_t(), 40) > 0; }

// Residue in [1, b] (0 maps to b) so it can serve as a partial quotient.
mpz_class as_quotient(const mpz_class& residue, const mpz_class& b) {
    return residue == 0 ? b : residue;
}

}  // namespace

SeedResult seed_congruent_prefix(const RationalInterval& theta0, const mpz_class& a,
                                 const mpz_class& b, const mpq_class& eps) {
    if (b < 2 || !is_prime(b)) fail(errc::not_in_domain, "b must be prime");
    const mpz_class a_res = mod_norm(a, b);
    if (a_res == 0) fail(errc::not_in_domain, "a must be nonzero mod b");
    if (eps <= 0) fail(errc::not_in_domain, "eps must be positive");
    const mpq_class half_b = mpq_class(b) / 2;
    if (!(theta0.lo > -half_b && theta0.hi < half_b))
        fail(errc::not_in_domain, "theta0 enclosure must lie inside (-b/2, b/2)");

    auto [a0, digits] = common_cf_prefix(theta0, 512);

    // Depth n0: the first index with 2 < eps * q_{n0}^2, so any extension of
    // the copied prefix stays within eps of theta0.
    SeedResult out;
    out.cf = ContinuedFraction::from_a0(a0);
    long n0 = -1;
    for (size_t i = 0; i < digits.size(); ++i) {
        out.cf.append(digits[i]);
        const mpq_class qsq = mpq_class(out.cf.q(out.cf.size())) * mpq_class(out.cf.q(out.cf.size()));
        if (mpq_class(2) < eps * qsq) {
            n0 = out.cf.size();
            break;
        }
    }
    if (n0 < 1) fail(errc::enclosure_too_wide, "theta0 enclosure too wide for requested eps");
    out.copied_depth = n0;

    // Congruence steering. Residues of convergent numerators mod b.
    auto pres = [&](long k) { return mod_norm(out.cf.p(k), b); };

    long cur = out.cf.size();
    if (pres(cur) == 0) {
        // Divisible branch: one quotient of 1 swaps in the previous numerator,
        // which cannot also be divisible by b.
        out.cf.append(1);
        out.fallback_used = true;
        cur = out.cf.size();
    }
    // k1 (p_cur is invertible): p_new = k1 p_cur + p_prev == a (mod b).
    {
        const mpz_class k1 =
            as_quotient(mod_norm((a_res - pres(cur - 1)) * mod_inverse(pres(cur), b), b), b);
        out.cf.append(k1);
        cur = out.cf.size();
    }
    // k2 (now p_cur == a): p_new = k2 a + p_prev == a (mod b).
    {
        const mpz_class k2 =
            as_quotient(mod_norm((a_res - pres(cur - 1)) * mod_inverse(a_res, b), b), b);
        out.cf.append(k2);
        cur = out.cf.size();
    }
    if (pres(cur) != a_res || pres(cur - 1) != a_res)
        fail(errc::verification_failed, "congruent prefix construction failed");
    return out;
}

mpz_class growth_quotient(const mpz_class& q_prev, const mpz_class& q_cur, const mpq_class& K,
                          const mpz_class& b) {
    if (K <= 1) fail(errc::not_in_domain, "K must be > 1");
    // ceil( (2 K q_cur)^{(1+q_cur)/(1+q_prev)} / q_cur ), exactly:
    // the smallest y with y^Q * kd^P * q_cur^Q >= (2 kn q_cur)^P.
    const mpz_class P = 1 + q_cur, Q = 1 + q_prev;
    if (!P.fits_ulong_p() || !Q.fits_ulong_p())
        fail(errc::overflow, "exponents too large for the exact growth path");
    unsigned long p = P.get_ui(), q = Q.get_ui();
    const unsigned long g = std::gcd(p, q);
    p /= g;
    q /= g;

    const mpz_class base = 2 * K.get_num() * q_cur;
    const double bits_est = (double)p * mpz_sizeinbase(base.get_mpz_t(), 2);
    if (bits_est > 1.5e9) fail(errc::overflow, "growth quotient too large for the exact path");

    mpz_class num, kdp, qcq;
    mpz_pow_ui(num.get_mpz_t(), base.get_mpz_t(), p);
    mpz_pow_ui(kdp.get_mpz_t(), mpz_class(K.get_den()).get_mpz_t(), p);
    mpz_pow_ui(qcq.get_mpz_t(), q_cur.get_mpz_t(), q);
    const mpz_class den = kdp * qcq;

    mpz_class y;
    {
        mpz_class t;
        mpz_fdiv_q(t.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        mpz_root(y.get_mpz_t(), t.get_mpz_t(), q);
    }
    auto ok = [&](const mpz_class& v) {
        mpz_class vq;
        mpz_pow_ui(vq.get_mpz_t(), v.get_mpz_t(), q);
        return vq * den >= num;
    };
    while (!ok(y)) y += 1;
    while (y > 1 && ok(y - 1)) y -= 1;
    return b * y;
}

namespace {

// log2 bracket of a positive rational.
std::pair<mpq_class, mpq_class> log2_bounds_q(const mpq_class& v) {
    const auto n = dy_log2_bounds(dy_from_mpz(v.get_num(), 256, Round::Down), 48, 256);
    const auto nu = dy_log2_bounds(dy_from_mpz(v.get_num(), 256, Round::Up), 48, 256);
    const auto d = dy_log2_bounds(dy_from_mpz(v.get_den(), 256, Round::Down), 48, 256);
    const auto du = dy_log2_bounds(dy_from_mpz(v.get_den(), 256, Round::Up), 48, 256);
    return {n.first - du.second, nu.second - d.first};
}

}  // namespace

bool prove_root_less(const mpq_class& x, const mpz_class& ax, const mpq_class& y,
                     const mpz_class& ay, bool* conclusive_out) {
    if (conclusive_out) *conclusive_out = true;
    const double xb = mpz_sizeinbase(x.get_num().get_mpz_t(), 2) +
                      mpz_sizeinbase(x.get_den().get_mpz_t(), 2);
    const double yb = mpz_sizeinbase(y.get_num().get_mpz_t(), 2) +
                      mpz_sizeinbase(y.get_den().get_mpz_t(), 2);
    if (ax.fits_ulong_p() && ay.fits_ulong_p() &&
        xb * ay.get_d() + yb * ax.get_d() < 4.0e5) {
        // Exact: x^ay < y^ax.
        mpz_class xn, xd, yn, yd;
        mpz_pow_ui(xn.get_mpz_t(), x.get_num().get_mpz_t(), ay.get_ui());
        mpz_pow_ui(xd.get_mpz_t(), x.get_den().get_mpz_t(), ay.get_ui());
        mpz_pow_ui(yn.get_mpz_t(), y.get_num().get_mpz_t(), ax.get_ui());
        mpz_pow_ui(yd.get_mpz_t(), y.get_den().get_mpz_t(), ax.get_ui());
        return xn * yd < yn * xd;
    }
    const auto lx = log2_bounds_q(x);
    const auto ly = log2_bounds_q(y);
    // Compare log2(x)/ax against log2(y)/ay.
    const mpq_class lhs_hi = lx.second / mpq_class(ax);
    const mpq_class rhs_lo = ly.first / mpq_class(ay);
    if (lhs_hi < rhs_lo) return true;
    const mpq_class lhs_lo = lx.first / mpq_class(ax);
    const mpq_class rhs_hi = ly.second / mpq_class(ay);
    if (lhs_lo >= rhs_hi) return false;
    if (conclusive_out) {
        *conclusive_out = false;
        return false;
    }
    fail(errc::verification_failed, "root comparison inconclusive at working precision");
}

ContinuedFraction extend_nonfinite(ContinuedFraction cf, const mpz_class& a, const mpz_class& b,
                                   const mpq_class& K, int steps, const ExtendOptions& opts,
                                   ExtendInfo* info) {
    if (steps < 1) fail(errc::not_in_domain, "steps must be >= 1");
    if (K <= 1) fail(errc::not_in_domain, "K must be > 1");
    if (b < 2 || !is_prime(b)) fail(errc::not_in_domain, "b must be prime");
    const mpz_class a_res = mod_norm(a, b);
    if (a_res == 0) fail(errc::not_in_domain, "a must be nonzero mod b");

    const long N = cf.size();
    if (N < 1 || mod_norm(cf.p(N), b) != a_res || mod_norm(cf.p(N - 1), b) != a_res)
        fail(errc::not_in_domain, "prefix does not satisfy the tip congruences");

    ExtendInfo out;
    out.steps_requested = steps;
    out.seed_tip = N;

    const mpz_class kn = K.get_num(), kd = K.get_den();
    const double budget_bits = (double)opts.digit_budget * 3.3220;

    auto stop_or_throw = [&](const char* what) {
        if (opts.on_budget == BudgetPolicy::StopEarly) {
            out.budget_stopped = true;
            return true;
        }
        fail(errc::overflow, what);
    };

    // Step 1: smallest multiple of b whose denominator beats (2 K q_N)^{1+q_N}.
    {
        const mpz_class& qN = cf.q(N);
        const mpz_class& qN1 = cf.q(N - 1);
        const mpz_class base = 2 * kn * qN;  // numerator of 2 K q_N
        if (!(mpq_class(base) / mpq_class(kd) > 1))
            fail(errc::not_in_domain, "2 K q_N must exceed 1");
        const mpz_class E = 1 + qN;
        if (!E.fits_ulong_p() ||
            (double)E.get_ui() * mpz_sizeinbase(base.get_mpz_t(), 2) > budget_bits) {
            if (stop_or_throw("threshold quotient exceeds the digit budget")) {
                if (info) *info = out;
                return cf;
            }
        }
        mpz_class num, kde;
        mpz_pow_ui(num.get_mpz_t(), base.get_mpz_t(), E.get_ui());
        mpz_pow_ui(kde.get_mpz_t(), kd.get_mpz_t(), E.get_ui());
        // Smallest x with (x qN + qN1) kd^E > base^E.
        mpz_class x;
        mpz_fdiv_q(x.get_mpz_t(), mpz_class(num - qN1 * kde).get_mpz_t(),
                   mpz_class(qN * kde).get_mpz_t());
        x += 1;
        if (x < 1) x = 1;
        mpz_class aN1;
        mpz_cdiv_q(aN1.get_mpz_t(), x.get_mpz_t(), b.get_mpz_t());
        aN1 *= b;
        cf.append(aN1);
        out.steps.push_back({true, aN1, 0});
        out.steps_done = 1;

        // Postcheck: the chosen multiple works, the previous one does not.
        const mpz_class& qNew = cf.q(N + 1);
        if (!(qNew * kde > num))
            fail(errc::verification_failed, "threshold growth inequality failed");
        if (aN1 - b >= 1 && ((aN1 - b) * qN + qN1) * kde > num)
            fail(errc::verification_failed, "threshold quotient is not minimal");

        // Smallest power of two with q_{N+1} <= C^{1+q_N}.
        const long e = E.get_si();
        long t = ((long)mpz_sizeinbase(qNew.get_mpz_t(), 2) + e - 1) / e;
        while (t > 1 && (t - 1) * e <= (1l << 22)) {
            mpz_class pw = 1;
            mpz_mul_2exp(pw.get_mpz_t(), pw.get_mpz_t(), (mp_bitcnt_t)((t - 1) * e));
            if (pw >= qNew)
                --t;
            else
                break;
        }
        mpz_class C = 1;
        mpz_mul_2exp(C.get_mpz_t(), C.get_mpz_t(), (mp_bitcnt_t)t);
        out.growth_floor_C = C;
    }

    // Growth steps.
    for (int step = 2; step <= steps; ++step) {
        const long m = cf.size();
        const mpz_class& q_cur = cf.q(m);
        const mpz_class& q_prev = cf.q(m - 1);
        const mpq_class base = 2 * K * mpq_class(q_cur);

        // Predicted size of the new quotient: (1+q_cur)/(1+q_prev) * log2(base).
        const mpq_class E = mpq_class(1 + q_cur) / mpq_class(1 + q_prev);
        const mpq_class predicted_bits = E * log2_bounds_q(base).second;
        if (predicted_bits > mpq_class((long)budget_bits)) {
            if (stop_or_throw("growth quotient exceeds the digit budget")) break;
        }

        mpz_class aq;
        GrowthStep rec;
        if (predicted_bits <= mpq_class(opts.exact_quotient_bits)) {
            aq = growth_quotient(q_prev, q_cur, K, b);
            rec = {true, aq, 0};
        } else {
            // Decimal-upper form b * d * 10^s >= b * (2K q_cur)^E / q_cur.
            if (!mpz_class(1 + q_cur).fits_ulong_p() || !mpz_class(1 + q_prev).fits_ulong_p())
                fail(errc::overflow, "growth exponents out of range");
            const Dyadic pow_up = dy_pow(dy_from_mpq(base, 224, Round::Up), 1 + q_cur, 224, Round::Up);
            const Dyadic root_up =
                dy_root(pow_up, mpz_class(1 + q_prev).get_ui(), 224, Round::Up);
            const Dyadic val_up =
                dy_div(root_up, dy_from_mpz(q_cur, 224, Round::Down), 224, Round::Up);
            const DecimalUpper dec = dy_decimal_upper(val_up, 24);
            mpz_class p10;
            mpz_ui_pow_ui(p10.get_mpz_t(), 10, dec.pow10);
            aq = b * dec.coeff * p10;
            rec = {false, b * dec.coeff, dec.pow10};
        }
        cf.append(aq);
        out.steps.push_back(rec);
        out.steps_done = step;

        // Divisibility by b keeps the congruences alive.
        if (mod_norm(aq, b) != 0) fail(errc::verification_failed, "growth quotient not divisible by b");
        if (mod_norm(cf.p(m + 1), b) != a_res || mod_norm(cf.p(m), b) != a_res)
            fail(errc::verification_failed, "congruence persistence failed");

        // Left growth inequality: (2 K q_cur)^{1/(1+q_prev)} < q_new^{1/(1+q_cur)}.
        if (!prove_root_less(base, 1 + q_prev, mpq_class(cf.q(m + 1)), 1 + q_cur))
            fail(errc::verification_failed, "left growth inequality failed");
        // Right chain: q_new^{1/(1+q_cur)} <= C (4Kb)^{sum_{k=N}^{m-1} 1/(1+q_k)}.
        {
            mpq_class S = 0;
            for (long k = N; k <= m - 1; ++k) S += mpq_class(1) / mpq_class(1 + cf.q(k));
            const mpq_class fourKb = 4 * K * mpq_class(b);
            const auto lq = log2_bounds_q(mpq_class(cf.q(m + 1)));
            const auto lf = log2_bounds_q(fourKb);
            const mpq_class lhs_hi = lq.second / mpq_class(1 + q_cur);
            const mpq_class rhs_lo =
                mpq_class((long)mpz_sizeinbase(out.growth_floor_C.get_mpz_t(), 2) - 1) +
                S * lf.first;
            if (!(lhs_hi <= rhs_lo))
                fail(errc::verification_failed, "right growth chain failed");
        }
    }

    if (info) *info = out;
    return cf;
}

RationalInterval outward_round(const RationalInterval& iv, long frac_bits) {
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), (mp_bitcnt_t)frac_bits);
    auto snap = [&](const mpq_class& v, bool up) {
        mpz_class num = v.get_num() * scale;
        mpz_class q;
        if (up)
            mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), v.get_den().get_mpz_t());
        else
            mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), v.get_den().get_mpz_t());
        mpq_class r(q, scale);
        r.canonicalize();
        return r;
    };
    return {snap(iv.lo, false), snap(iv.hi, true)};
}

RationalInterval pi_interval() {
    // First 100 decimal digits of pi; bracketed by the truncation and one ulp.
    static const char* digits =
        "3"
        "1415926535897932384626433832795028841971"
        "6939937510582097494459230781640628620899"
        "8628034825342117067982";
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, 102);
    mpq_class lo(num);
    lo /= mpq_class(den);
    mpq_class hi(num + 1);
    hi /= mpq_class(den);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

}  // namespace lsr
