#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyinv {

// Exact coefficient arithmetic. BigInt/BigRat are GMP value types; both are
// immutable-by-convention once stored in a polynomial term.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline std::string to_string(const BigInt& z) { return z.get_str(); }
inline std::string to_string(const BigRat& q) { return q.get_str(); }

inline bool is_zero(const BigInt& z) { return mpz_sgn(z.get_mpz_t()) == 0; }
inline bool is_zero(const BigRat& q) { return mpq_sgn(q.get_mpq_t()) == 0; }

inline BigInt pow_ui(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt bigint_from_string(const std::string& s) {
    BigInt z;
    if (mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("not a decimal integer: '" + s + "'");
    return z;
}

// Reduced fraction with positive denominator.
inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (is_zero(den)) throw std::invalid_argument("zero denominator");
    BigRat q(num, den);
    q.canonicalize();
    return q;
}

inline size_t bit_length(const BigInt& z) {
    if (is_zero(z)) return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

inline bool fits_slong(const BigInt& z) { return z.fits_slong_p(); }

}  // namespace polyinv
