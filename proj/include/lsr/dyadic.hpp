#pragma once

#include <gmpxx.h>

#include <utility>

#include "lsr/errors.hpp"

namespace lsr {

// Exact binary floats mant * 2^exp with directed rounding. Everything here is
// integer arithmetic; a value rounded Down is <= the true value and a value
// rounded Up is >= it, so interval endpoints computed with these primitives
// are rigorous. Quantities fed through this layer are positive.
struct Dyadic {
    mpz_class mant;
    long exp = 0;

    bool positive() const { return mant > 0; }
};

enum class Round { Down, Up };

inline constexpr int dyadic_default_prec = 128;

// Rounds to at most `prec` mantissa bits in the given direction (value > 0).
Dyadic dy_round(Dyadic x, int prec, Round dir);

Dyadic dy_from_mpz(const mpz_class& v, int prec, Round dir);
Dyadic dy_from_mpq(const mpq_class& v, int prec, Round dir);
mpq_class dy_to_mpq(const Dyadic& x);

Dyadic dy_mul(const Dyadic& a, const Dyadic& b, int prec, Round dir);
Dyadic dy_add(const Dyadic& a, const Dyadic& b, int prec, Round dir);
Dyadic dy_div(const Dyadic& a, const Dyadic& b, int prec, Round dir);

// x^e by binary powering, e >= 0, x > 0.
Dyadic dy_pow(const Dyadic& x, const mpz_class& e, int prec, Round dir);

// k-th root, k >= 1, x > 0.
Dyadic dy_root(const Dyadic& x, unsigned long k, int prec, Round dir);

// Exact comparison (no rounding).
int dy_cmp(const Dyadic& a, const Dyadic& b);

// Smallest integer >= value (x > 0).
mpz_class dy_ceil(const Dyadic& x);

// floor(log2 x) as a plain long (x > 0).
long dy_floor_log2(const Dyadic& x);

// Rational bracket [lo, hi] around log2(x), tight to about 2^-frac_bits.
// Computed by squaring x 'frac_bits' times with directed rounding.
std::pair<mpq_class, mpq_class> dy_log2_bounds(const Dyadic& x, int frac_bits = 48,
                                               int prec = 192);

// Decimal representation d * 10^s >= x with a short coefficient (x > 0).
// Used to keep huge constructed integers serializable.
struct DecimalUpper {
    mpz_class coeff;
    unsigned long pow10 = 0;
};
DecimalUpper dy_decimal_upper(const Dyadic& x, int coeff_digits = 24);

}  // namespace lsr
