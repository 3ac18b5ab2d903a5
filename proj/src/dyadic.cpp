#include "lsr/dyadic.hpp"

#include <cassert>

namespace lsr {

namespace {

inline long bit_length(const mpz_class& v) {
    return (long)mpz_sizeinbase(v.get_mpz_t(), 2);
}

}  // namespace

Dyadic dy_round(Dyadic x, int prec, Round dir) {
    if (x.mant == 0) return x;
    assert(x.mant > 0);
    const long bits = bit_length(x.mant);
    if (bits <= prec) return x;
    const long drop = bits - prec;
    mpz_class q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), x.mant.get_mpz_t(), (mp_bitcnt_t)drop);
    if (dir == Round::Up) {
        mpz_class back;
        mpz_mul_2exp(back.get_mpz_t(), q.get_mpz_t(), (mp_bitcnt_t)drop);
        if (back != x.mant) q += 1;
    }
    return {q, x.exp + drop};
}

Dyadic dy_from_mpz(const mpz_class& v, int prec, Round dir) { return dy_round({v, 0}, prec, dir); }

Dyadic dy_from_mpq(const mpq_class& v, int prec, Round dir) {
    return dy_div(dy_from_mpz(v.get_num(), prec + 8, dir),
                  dy_from_mpz(v.get_den(), prec + 8, dir == Round::Up ? Round::Down : Round::Up),
                  prec, dir);
}

mpq_class dy_to_mpq(const Dyadic& x) {
    mpq_class r(x.mant);
    if (x.exp >= 0) {
        mpz_class m;
        mpz_mul_2exp(m.get_mpz_t(), x.mant.get_mpz_t(), (mp_bitcnt_t)x.exp);
        r = mpq_class(m);
    } else {
        mpz_class d = 1;
        mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), (mp_bitcnt_t)(-x.exp));
        r = mpq_class(x.mant) / mpq_class(d);
    }
    return r;
}

Dyadic dy_mul(const Dyadic& a, const Dyadic& b, int prec, Round dir) {
    return dy_round({a.mant * b.mant, a.exp + b.exp}, prec, dir);
}

Dyadic dy_add(const Dyadic& a, const Dyadic& b, int prec, Round dir) {
    if (a.mant == 0) return dy_round(b, prec, dir);
    if (b.mant == 0) return dy_round(a, prec, dir);
    assert(a.mant > 0 && b.mant > 0);
    const Dyadic& big = (a.exp >= b.exp) ? a : b;
    const Dyadic& small = (a.exp >= b.exp) ? b : a;
    const long d = big.exp - small.exp;
    // A negligible summand only nudges the result by one ulp.
    if (d > prec + 64 + bit_length(small.mant)) {
        if (dir == Round::Up) return dy_round({big.mant + 1, big.exp}, prec, dir);
        return dy_round(big, prec, dir);
    }
    mpz_class m;
    mpz_mul_2exp(m.get_mpz_t(), big.mant.get_mpz_t(), (mp_bitcnt_t)d);
    m += small.mant;
    return dy_round({m, small.exp}, prec, dir);
}

Dyadic dy_div(const Dyadic& a, const Dyadic& b, int prec, Round dir) {
    assert(a.mant > 0 && b.mant > 0);
    const long s = std::max<long>(0, prec + bit_length(b.mant) - bit_length(a.mant) + 2);
    mpz_class num;
    mpz_mul_2exp(num.get_mpz_t(), a.mant.get_mpz_t(), (mp_bitcnt_t)s);
    mpz_class q;
    if (dir == Round::Up)
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.mant.get_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.mant.get_mpz_t());
    return dy_round({q, a.exp - b.exp - s}, prec, dir);
}

Dyadic dy_pow(const Dyadic& x, const mpz_class& e, int prec, Round dir) {
    assert(x.mant > 0 && e >= 0);
    Dyadic result{1, 0};
    Dyadic base = dy_round(x, prec, dir);
    const size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return result;
    for (size_t i = 0; i < nbits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) result = dy_mul(result, base, prec, dir);
        if (i + 1 < nbits) base = dy_mul(base, base, prec, dir);
    }
    return result;
}

Dyadic dy_root(const Dyadic& x, unsigned long k, int prec, Round dir) {
    assert(x.mant > 0 && k >= 1);
    if (k == 1) return dy_round(x, prec, dir);
    // Shift so the exponent is divisible by k and the mantissa carries at
    // least k*(prec+1) bits, then take the integer k-th root.
    long s = ((x.exp % (long)k) + (long)k) % (long)k;
    const long want = (long)k * (prec + 1);
    if (bit_length(x.mant) + s < want) {
        long extra = want - bit_length(x.mant) - s;
        extra = ((extra + (long)k - 1) / (long)k) * (long)k;
        s += extra;
    }
    mpz_class m;
    mpz_mul_2exp(m.get_mpz_t(), x.mant.get_mpz_t(), (mp_bitcnt_t)s);
    mpz_class r;
    const int exact = mpz_root(r.get_mpz_t(), m.get_mpz_t(), k);
    if (dir == Round::Up && !exact) r += 1;
    return dy_round({r, (x.exp - s) / (long)k}, prec, dir);
}

int dy_cmp(const Dyadic& a, const Dyadic& b) {
    if (a.mant == 0 || b.mant == 0) {
        if (a.mant == b.mant) return 0;
        return a.mant < b.mant ? -1 : 1;
    }
    assert(a.mant > 0 && b.mant > 0);
    const long fa = dy_floor_log2(a), fb = dy_floor_log2(b);
    if (fa != fb) return fa < fb ? -1 : 1;
    // Same binade: aligning shifts by at most the mantissa width difference.
    const long d = a.exp - b.exp;
    mpz_class am = a.mant, bm = b.mant;
    if (d >= 0)
        mpz_mul_2exp(am.get_mpz_t(), am.get_mpz_t(), (mp_bitcnt_t)d);
    else
        mpz_mul_2exp(bm.get_mpz_t(), bm.get_mpz_t(), (mp_bitcnt_t)(-d));
    return cmp(am, bm) < 0 ? -1 : (am == bm ? 0 : 1);
}

mpz_class dy_ceil(const Dyadic& x) {
    assert(x.mant > 0);
    if (x.exp >= 0) {
        if (x.exp > (1l << 34)) fail(errc::overflow, "dyadic ceil exponent too large");
        mpz_class m;
        mpz_mul_2exp(m.get_mpz_t(), x.mant.get_mpz_t(), (mp_bitcnt_t)x.exp);
        return m;
    }
    mpz_class q;
    mpz_cdiv_q_2exp(q.get_mpz_t(), x.mant.get_mpz_t(), (mp_bitcnt_t)(-x.exp));
    return q;
}

long dy_floor_log2(const Dyadic& x) {
    assert(x.mant > 0);
    return bit_length(x.mant) - 1 + x.exp;
}

std::pair<mpq_class, mpq_class> dy_log2_bounds(const Dyadic& x, int frac_bits, int prec) {
    assert(x.mant > 0);
    const long fl = dy_floor_log2(x);

    // Scale into [1,2) and run the digit-by-digit squaring recurrence once per
    // rounding direction; the extracted bit strings bracket the fractional part.
    auto frac_track = [&](Round dir) -> mpz_class {
        Dyadic y{x.mant, x.exp - fl};
        y = dy_round(y, prec, dir);
        mpz_class bits = 0;
        for (int i = 0; i < frac_bits; ++i) {
            y = dy_mul(y, y, prec, dir);
            bits <<= 1;
            if (dy_floor_log2(y) >= 1) {
                bits += 1;
                y.exp -= 1;
            }
        }
        return bits;
    };

    const mpz_class down = frac_track(Round::Down);
    const mpz_class up = frac_track(Round::Up);
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), (mp_bitcnt_t)frac_bits);

    // One-ulp slack on either side absorbs the final renormalization state.
    mpq_class lo = mpq_class(fl) + mpq_class(down - 1) / mpq_class(den);
    mpq_class hi = mpq_class(fl) + mpq_class(up + 2) / mpq_class(den);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

DecimalUpper dy_decimal_upper(const Dyadic& x, int coeff_digits) {
    assert(x.mant > 0);
    const long fl2 = dy_floor_log2(x);
    // floor(fl2 * log10(2)) without floating point.
    const long fl10 = (long)((__int128)fl2 * 30103 / 100000) - 1;
    const long s = std::max<long>(0, fl10 - coeff_digits + 1);

    DecimalUpper out;
    out.pow10 = (unsigned long)s;
    if (s == 0) {
        out.coeff = dy_ceil(x);
        return out;
    }
    const Dyadic p10 = dy_pow(dy_from_mpz(10, dyadic_default_prec, Round::Down),
                              mpz_class((unsigned long)s), 192, Round::Down);
    out.coeff = dy_ceil(dy_div(x, p10, 192, Round::Up));
    return out;
}

}  // namespace lsr
