#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>

#include "polyinv/errors.hpp"

namespace polyinv {

inline constexpr int kMaxVars = 8;

// Exponent vector of up to 8 variables, packed 16 bits per variable into two
// words. X1 sits in the top lane of w0 so that numeric comparison of
// (w0, w1) is exactly lexicographic comparison with X1 > X2 > ... > X8.
// Packing keeps monomial products down to two word additions in the hot
// modular loops; per-variable exponents are capped at 65535 (checked).
class Monomial {
public:
    Monomial() = default;

    static Monomial unit(int var) {  // X_{var}, 1-based
        Monomial m;
        m.set_exponent(var, 1);
        return m;
    }

    uint32_t exponent(int var) const {  // 1-based
        check_var(var);
        int lane = var - 1;
        uint64_t w = (lane < 4) ? w0_ : w1_;
        int shift = 48 - 16 * (lane & 3);
        return static_cast<uint32_t>((w >> shift) & 0xFFFF);
    }

    void set_exponent(int var, uint32_t e) {
        check_var(var);
        if (e > 0xFFFF) throw ExponentOverflowError("exponent " + std::to_string(e) + " exceeds 65535");
        int lane = var - 1;
        int shift = 48 - 16 * (lane & 3);
        uint64_t mask = ~(uint64_t(0xFFFF) << shift);
        uint64_t& w = (lane < 4) ? w0_ : w1_;
        w = (w & mask) | (static_cast<uint64_t>(e) << shift);
    }

    uint32_t total_degree() const { return sum_lanes(w0_) + sum_lanes(w1_); }

    bool is_one() const { return w0_ == 0 && w1_ == 0; }

    // Product of monomials = lane-wise exponent sum.
    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        constexpr uint64_t kHigh = 0x8000800080008000ull;
        Monomial r;
        if (((a.w0_ | b.w0_ | a.w1_ | b.w1_) & kHigh) == 0) {
            // No lane has its top bit set, so lane sums cannot carry across.
            r.w0_ = a.w0_ + b.w0_;
            r.w1_ = a.w1_ + b.w1_;
            return r;
        }
        for (int v = 1; v <= kMaxVars; ++v) {
            uint32_t s = a.exponent(v) + b.exponent(v);
            if (s > 0xFFFF) throw ExponentOverflowError("monomial product exponent overflow");
            r.set_exponent(v, s);
        }
        return r;
    }

    Monomial without_var(int var) const {
        Monomial m = *this;
        m.set_exponent(var, 0);
        return m;
    }

    // Graded lexicographic order, X1 > X2 > ... (the canonical term order).
    friend std::strong_ordering grlex(const Monomial& a, const Monomial& b) {
        uint32_t da = a.total_degree(), db = b.total_degree();
        if (da != db) return da <=> db;
        if (a.w0_ != b.w0_) return a.w0_ <=> b.w0_;
        return a.w1_ <=> b.w1_;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) = default;

    size_t hash() const {
        uint64_t h = w0_ * 0x9E3779B97F4A7C15ull;
        h ^= (h >> 32);
        h += w1_ * 0xC2B2AE3D27D4EB4Full;
        h ^= (h >> 29);
        h *= 0x165667B19E3779F9ull;
        return static_cast<size_t>(h ^ (h >> 32));
    }

    uint64_t word0() const { return w0_; }
    uint64_t word1() const { return w1_; }

private:
    static void check_var(int var) {
        if (var < 1 || var > kMaxVars)
            throw ArityMismatchError("variable X" + std::to_string(var) + " outside the supported 1..8 range");
    }

    static uint32_t sum_lanes(uint64_t w) {
        uint64_t s = (w & 0x0000FFFF0000FFFFull) + ((w >> 16) & 0x0000FFFF0000FFFFull);
        return static_cast<uint32_t>((s & 0xFFFFFFFFull) + (s >> 32));
    }

    uint64_t w0_ = 0;  // X1..X4, X1 in the top 16 bits
    uint64_t w1_ = 0;  // X5..X8
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Descending graded-lex, the order terms are stored and printed in.
struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex(a, b) == std::strong_ordering::greater; }
};

}  // namespace polyinv
