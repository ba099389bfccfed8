#pragma once

#include <cstdint>
#include <vector>

namespace polyinv {

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs. The witness set
// {2,3,5,7,11,13,17,19,23,29,31,37} is exact below 3.3e24, so it covers
// the whole uint64_t range.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline uint64_t next_prime_u64(uint64_t n) {
    if (n < 2) return 2;
    uint64_t c = n + 1 + (n & 1);  // next odd candidate (or 3 from 2)
    if (n == 2) c = 3;
    while (!is_prime_u64(c)) c += 2;
    return c;
}

// a^-1 mod m for gcd(a, m) = 1; extended Euclid on signed words.
inline int64_t inverse_mod_i64(int64_t a, uint64_t m) {
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(m);
    int64_t new_r = a % r;
    if (new_r < 0) new_r += r;
    while (new_r != 0) {
        int64_t q = r / new_r;
        int64_t tmp = t - q * new_t;
        t = new_t; new_t = tmp;
        tmp = r - q * new_r;
        r = new_r; new_r = tmp;
    }
    if (r != 1) return 0;  // not invertible
    if (t < 0) t += static_cast<int64_t>(m);
    return t;
}

}  // namespace polyinv
