#pragma once

#include <string>

#include "polyinv/bigint.hpp"
#include "polyinv/fp.hpp"

namespace polyinv {

// Multiplicative identity "in the same ring as" a sample value. Needed
// because a prime-field one carries the sample's modulus.
inline BigInt ring_one(const BigInt&) { return BigInt(1); }
inline BigRat ring_one(const BigRat&) { return BigRat(1); }
inline Fp ring_one(const Fp& like) { return Fp(1, like.modulus); }

inline bool ring_is_one(const BigInt& z) { return z == 1; }
inline bool ring_is_one(const BigRat& q) { return q == 1; }
inline bool ring_is_one(const Fp& v) { return v.value == 1; }

template <class R>
struct RingName;
template <>
struct RingName<BigInt> {
    static constexpr const char* value = "integer";
};
template <>
struct RingName<BigRat> {
    static constexpr const char* value = "rational";
};
template <>
struct RingName<Fp> {
    static constexpr const char* value = "gf";
};

}  // namespace polyinv
