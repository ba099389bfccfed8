#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyinv/bigint.hpp"
#include "polyinv/inversion.hpp"
#include "polyinv/polymap.hpp"

namespace polyinv {

namespace detail {
inline unsigned long checked_pow_exponent(uint32_t D, long j) {
    // D^j as an exponent of a further power; refuse anything that cannot
    // even be held in a word.
    unsigned long e = 1;
    for (long i = 0; i < j; ++i) {
        if (e > (1ul << 62) / D) throw Error("bound exponent overflow: D^j does not fit a word");
        e *= D;
    }
    return e;
}
}  // namespace detail

// l_k: upper bound for the length of P_k.
// l_0 = 1, l_1 = l(F)-1, l_k = (l(F)-1) * prod_{j=1}^{k-1} (l(F)^(D^j) + 1).
inline BigInt length_bound_l(long k, const MapShape& shape) {
    if (k < 0) throw Error("length bound index must be >= 0");
    if (k == 0) return 1;
    BigInt l(static_cast<unsigned long>(shape.length));
    BigInt out = l - 1;
    if (k == 1) return out;
    if (shape.all_identity()) return out;  // l(F) = 1, every l_k = 0
    for (long j = 1; j <= k - 1; ++j) {
        unsigned long e = detail::checked_pow_exponent(*shape.D, j);
        out *= pow_ui(l, e) + 1;
    }
    return out;
}

// b_k: upper bound for the largest coefficient magnitude in P_k.
// b_1 = B, b_k = B^(1+D+...+D^(k-1)) * (l-1)^(k-1) * prod_{j=1}^{k-1} (l^(D^j)+1)^(k-j).
inline BigInt coeff_bound_b(long k, const MapShape& shape) {
    if (k < 1) throw Error("coefficient bound index must be >= 1");
    BigInt B = shape.B;
    if (k == 1) return B;
    if (shape.all_identity()) return B;
    BigInt l(static_cast<unsigned long>(shape.length));
    unsigned long bexp = 0;
    for (long i = 0; i <= k - 1; ++i) {
        unsigned long t = detail::checked_pow_exponent(*shape.D, i);
        if (bexp > (1ul << 62) - t) throw Error("bound exponent overflow");
        bexp += t;
    }
    BigInt out = pow_ui(B, bexp);
    BigInt lm1 = l - 1;
    out *= pow_ui(lm1, static_cast<unsigned long>(k - 1));
    for (long j = 1; j <= k - 1; ++j) {
        unsigned long e = detail::checked_pow_exponent(*shape.D, j);
        out *= pow_ui(BigInt(pow_ui(l, e) + 1), static_cast<unsigned long>(k - j));
    }
    return out;
}

// The exact coefficient bound C for the inverse (via the proof chain:
// C = b_{mu-1} * sum_{i=0}^{mu-1} l_i) plus everything that went into it.
// C is materialized only when its estimated size fits max_bits; the large
// examples make C astronomically big, in which case mu and a log2 estimate
// are still reported.
struct BoundReport {
    int n = 0;
    std::optional<uint32_t> D;
    std::optional<uint32_t> d;
    BigInt B;
    size_t length = 0;
    long mu = 1;
    bool materialized = false;
    double approx_log2_C = 0.0;
    std::vector<BigInt> l_terms;  // l_0 .. l_{mu-1} when materialized
    BigInt b_mu_minus_1;
    BigInt C;
    BigInt threshold;  // 2C + 1
};

inline BoundReport global_bound_C(const MapShape& shape, size_t max_bits = (size_t{1} << 24)) {
    BoundReport r;
    r.n = shape.n;
    r.D = shape.D;
    r.d = shape.d;
    r.B = shape.B;
    r.length = shape.length;
    StepBound sb = step_bound_mu(shape);
    r.mu = sb.mu;

    if (shape.all_identity()) {
        r.materialized = true;
        r.l_terms = {BigInt(1)};
        r.b_mu_minus_1 = 1;
        r.C = 1;
        r.threshold = 3;
        r.approx_log2_C = 0.0;
        return r;
    }

    // Size estimate in log2; the dominant factor is B^(sum D^i) * prod (l^(D^j)+1)^(mu-1-j).
    const double logB = std::max(0.0, static_cast<double>(bit_length(r.B)));
    const double logl = std::log2(std::max<double>(2.0, static_cast<double>(r.length)));
    const double logD = std::log2(static_cast<double>(*shape.D));
    const long mu = r.mu;
    double est = 0.0;
    bool huge = false;
    if (static_cast<double>(mu - 2) * logD > 62.0) {
        huge = true;  // D^(mu-2) alone overflows a word; C is far beyond reach
    } else {
        double Dpow = 1.0;
        for (long i = 0; i <= mu - 2 && !huge; ++i) {
            est += Dpow * logB;                                 // B^(D^i)
            if (i >= 1) est += (mu - i) * (Dpow * logl + 1.0);  // (l^(D^i)+1)^(mu-1-i) and the l_i sum
            Dpow *= static_cast<double>(*shape.D);
            if (est > 1e18) huge = true;
        }
    }
    r.approx_log2_C = huge ? std::numeric_limits<double>::infinity() : est;
    if (huge || est > static_cast<double>(max_bits)) return r;

    BigInt sum_l = 0;
    for (long i = 0; i <= mu - 1; ++i) {
        r.l_terms.push_back(length_bound_l(i, shape));
        sum_l += r.l_terms.back();
    }
    // b_0 = 1 (P_0 = Id); the closed form for b_{mu-1} applies from mu >= 2.
    r.b_mu_minus_1 = mu >= 2 ? coeff_bound_b(mu - 1, shape) : BigInt(1);
    r.C = r.b_mu_minus_1 * sum_l;
    r.threshold = 2 * r.C + 1;
    r.materialized = true;
    return r;
}

}  // namespace polyinv
