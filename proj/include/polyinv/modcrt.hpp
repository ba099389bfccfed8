#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyinv/bounds.hpp"
#include "polyinv/fp.hpp"
#include "polyinv/inversion.hpp"
#include "polyinv/polymap.hpp"

namespace polyinv {

// Coefficient-wise balanced reduction mod p; terms vanishing mod p drop out.
inline Polynomial<Fp> reduce_poly(const Polynomial<BigInt>& P, uint64_t p) {
    std::vector<Term<Fp>> ts;
    ts.reserve(P.length());
    for (const auto& t : P.terms()) {
        Fp c = balanced_residue_unchecked(t.coeff, p);
        if (!is_zero(c)) ts.push_back({t.mono, c});
    }
    return Polynomial<Fp>::from_sorted_terms(P.arity(), std::move(ts));
}

inline PolyMap<Fp> reduce_map(const PolyMap<BigInt>& F, uint64_t p) {
    check_modulus(p);
    std::vector<Polynomial<Fp>> out;
    out.reserve(F.arity());
    for (const auto& c : F.coordinates()) out.push_back(reduce_poly(c, p));
    return PolyMap<Fp>(std::move(out));
}

// Balanced integer lift of a prime-field polynomial (for tests and merging).
inline Polynomial<BigInt> lift_poly(const Polynomial<Fp>& P) {
    std::vector<Term<BigInt>> ts;
    ts.reserve(P.length());
    for (const auto& t : P.terms()) ts.push_back({t.mono, lift(t.coeff)});
    return Polynomial<BigInt>::from_sorted_terms(P.arity(), std::move(ts));
}

inline PolyMap<BigInt> lift_map(const PolyMap<Fp>& F) {
    std::vector<Polynomial<BigInt>> out;
    out.reserve(F.arity());
    for (const auto& c : F.coordinates()) out.push_back(lift_poly(c));
    return PolyMap<BigInt>(std::move(out));
}

// The per-prime unit the CRT merges: the inverse of F mod p plus how the
// run ended.
struct ModularWitness {
    uint64_t p = 0;
    InvertStatus status = InvertStatus::inconclusive;
    long stop_step = 0;
    long mu = 0;
    std::optional<PolyMap<Fp>> inverse;
    double seconds = 0.0;
    size_t peak_terms = 0;
    bool truncated_run = false;
    bool cancelled = false;
};

struct ModInvertOptions {
    bool low_degree_only = true;
    std::optional<long> max_steps;
    std::atomic<bool>* cancel = nullptr;
};

// Reduce mod p, recompute the shape (reduction can lower D and with it the
// step bound), and run the inversion over F_p.
ModularWitness invert_mod_p(const PolyMap<BigInt>& F, uint64_t p, const ModInvertOptions& opt = {});

// Accumulated CRT state: balanced residues mod N = prod(merged primes) for
// every (coordinate, monomial) seen in any witness. Zero residues are kept:
// a coefficient can vanish mod one prime and reappear mod the next.
struct CrtAccumulator {
    BigInt N = 1;
    std::vector<uint64_t> merged_primes;
    std::vector<std::map<Monomial, BigInt, GrlexGreater>> coefficients;  // per coordinate

    bool empty() const { return merged_primes.empty(); }
};

CrtAccumulator crt_merge(const CrtAccumulator& acc, const ModularWitness& w);

// Lift the accumulator to an integer map (zero residues dropped).
PolyMap<BigInt> lift_accumulator(const CrtAccumulator& acc, int arity);

enum class StabilizationKind { certified, stable, unstable };

struct StabilizationResult {
    StabilizationKind kind = StabilizationKind::unstable;
    std::vector<std::pair<int, Monomial>> unstable;  // (coordinate, monomial) still moving
};

// Certified: N > 2C, the lift IS the inverse and its monomial set is
// complete. Stable: the last two merges agree coefficient-for-coefficient
// (a heuristic). Unstable: lists what changed.
StabilizationResult stabilization_check(std::span<const CrtAccumulator> history, const BoundReport* bound);

struct PrimeSelection {
    std::vector<uint64_t> primes;
    bool sufficient = true;  // product >= 2C+1
};

// Smallest-first enumeration 2, 3, 5, ... until the product reaches 2C+1.
PrimeSelection select_primes(const BigInt& C);
// Validates a user list; warns (sufficient = false) when the product falls
// short of 2C+1 — the pipeline may still certify by composition.
PrimeSelection select_primes(const BigInt& C, const std::vector<uint64_t>& user_list);

}  // namespace polyinv
