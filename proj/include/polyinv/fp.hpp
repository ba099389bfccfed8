#pragma once

#include <cstdint>
#include <string>

#include "polyinv/bigint.hpp"
#include "polyinv/errors.hpp"
#include "polyinv/primes.hpp"

namespace polyinv {

// Balanced residue of a mod p: the representative r with -p/2 < r <= p/2.
// For odd p that is |r| <= (p-1)/2; for p = 2 it is {0, 1}.
inline int64_t balance_i64(uint64_t r, uint64_t p) {
    return (2 * r > p) ? static_cast<int64_t>(r) - static_cast<int64_t>(p) : static_cast<int64_t>(r);
}

inline void check_modulus(uint64_t p) {
    if (p < 2 || !is_prime_u64(p)) throw InvalidModulusError("modulus " + std::to_string(p) + " is not prime");
    if (p > (uint64_t(1) << 62)) throw InvalidModulusError("modulus too large for word arithmetic");
}

// Prime field element with balanced representative. Elements are immutable
// values; mixed-modulus arithmetic is an error.
struct Fp {
    int64_t value = 0;   // balanced: -p/2 < value <= p/2
    uint64_t modulus = 0;

    Fp() = default;
    Fp(int64_t balanced, uint64_t p) : value(balanced), modulus(p) {}

    friend bool operator==(const Fp& a, const Fp& b) = default;
};

inline bool is_zero(const Fp& a) { return a.value == 0; }
inline std::string to_string(const Fp& a) { return std::to_string(a.value); }

namespace detail {
inline void require_same_modulus(const Fp& a, const Fp& b) {
    if (a.modulus != b.modulus)
        throw ModulusMismatchError("mixed moduli " + std::to_string(a.modulus) + " and " + std::to_string(b.modulus));
}
inline int64_t norm_balanced(int64_t v, uint64_t p) {
    int64_t m = static_cast<int64_t>(p);
    v %= m;
    if (v < 0) v += m;
    return balance_i64(static_cast<uint64_t>(v), p);
}
}  // namespace detail

inline Fp fp_from_i64(int64_t v, uint64_t p) { return Fp(detail::norm_balanced(v, p), p); }

inline Fp operator+(const Fp& a, const Fp& b) {
    detail::require_same_modulus(a, b);
    return fp_from_i64(a.value + b.value, a.modulus);
}
inline Fp operator-(const Fp& a, const Fp& b) {
    detail::require_same_modulus(a, b);
    return fp_from_i64(a.value - b.value, a.modulus);
}
inline Fp operator-(const Fp& a) { return Fp(a.value == 0 ? 0 : detail::norm_balanced(-a.value, a.modulus), a.modulus); }
inline Fp operator*(const Fp& a, const Fp& b) {
    detail::require_same_modulus(a, b);
    __int128 prod = static_cast<__int128>(a.value) * b.value;
    int64_t r = static_cast<int64_t>(prod % static_cast<__int128>(a.modulus));
    return fp_from_i64(r, a.modulus);
}
inline Fp& operator+=(Fp& a, const Fp& b) { return a = a + b; }
inline Fp& operator-=(Fp& a, const Fp& b) { return a = a - b; }
inline Fp& operator*=(Fp& a, const Fp& b) { return a = a * b; }

// balanced_residue: validated entry point for reducing integers mod p.
inline Fp balanced_residue(const BigInt& a, uint64_t p) {
    check_modulus(p);
    uint64_t r = mpz_fdiv_ui(a.get_mpz_t(), p);  // in [0, p)
    return Fp(balance_i64(r, p), p);
}

inline Fp balanced_residue_unchecked(const BigInt& a, uint64_t p) {
    uint64_t r = mpz_fdiv_ui(a.get_mpz_t(), p);
    return Fp(balance_i64(r, p), p);
}

// Balanced residue of a mod N for a big modulus (used by the CRT merge).
inline BigInt balanced_residue_big(const BigInt& a, const BigInt& N) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), N.get_mpz_t());  // in [0, N)
    if (2 * r > N) r -= N;
    return r;
}

inline BigInt lift(const Fp& a) { return BigInt(static_cast<long>(a.value)); }

}  // namespace polyinv
