#include "polyinv/modcrt.hpp"

#include <chrono>

namespace polyinv {

ModularWitness invert_mod_p(const PolyMap<BigInt>& F, uint64_t p, const ModInvertOptions& opt) {
    ModularWitness w;
    w.p = p;
    auto t0 = std::chrono::steady_clock::now();
    PolyMap<Fp> Fp_map = reduce_map(F, p);
    InvertOptions iopt;
    iopt.low_degree_only = opt.low_degree_only;
    iopt.max_steps = opt.max_steps;
    iopt.cancel = opt.cancel;
    InversionResult<Fp> res = invert(Fp_map, iopt);
    w.status = res.status;
    w.stop_step = res.stop_step;
    w.mu = res.mu;
    w.peak_terms = res.peak_terms;
    w.truncated_run = res.truncated_run;
    w.cancelled = res.cancelled;
    if (res.inverse) w.inverse = std::move(res.inverse);
    w.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Identity reductions have no terms to borrow a modulus from later, so
    // the special case is harmless; stop_step for F = Id is 1 (P_1 = 0).
    if (Fp_map.is_identity()) w.stop_step = 1;
    return w;
}

CrtAccumulator crt_merge(const CrtAccumulator& acc, const ModularWitness& w) {
    if (!w.inverse) throw Error("cannot merge a witness without an inverse (p = " + std::to_string(w.p) + ")");
    for (uint64_t q : acc.merged_primes)
        if (q == w.p) throw Error("prime " + std::to_string(w.p) + " already merged");

    const PolyMap<Fp>& G = *w.inverse;
    const int n = G.arity();
    CrtAccumulator out;
    out.merged_primes = acc.merged_primes;
    out.merged_primes.push_back(w.p);
    out.N = acc.N * static_cast<unsigned long>(w.p);
    out.coefficients.resize(n);

    const uint64_t p = w.p;
    const int64_t n_mod_p = static_cast<int64_t>(mpz_fdiv_ui(acc.N.get_mpz_t(), p));
    const int64_t n_inv = inverse_mod_i64(n_mod_p, p);
    if (n_inv == 0) throw Error("merged primes are not coprime");

    static const std::map<Monomial, BigInt, GrlexGreater> kEmptyCoeffs;
    for (int i = 0; i < n; ++i) {
        const auto& acc_map =
            acc.coefficients.size() > static_cast<size_t>(i) ? acc.coefficients[i] : kEmptyCoeffs;
        auto it_a = acc_map.begin();
        const auto& terms = G.coordinate(i + 1).terms();
        size_t it_w = 0;
        auto emit = [&](const Monomial& m, const BigInt& r_acc, int64_t r_w) {
            // r = r_acc + N * t with t = (r_w - r_acc) / N mod p: congruent to
            // r_acc mod N and to r_w mod p; stored balanced mod N*p.
            int64_t acc_mod_p = balance_i64(mpz_fdiv_ui(r_acc.get_mpz_t(), p), p);
            int64_t t = (r_w - acc_mod_p) % static_cast<int64_t>(p);
            if (t < 0) t += static_cast<int64_t>(p);
            t = static_cast<int64_t>(detail::mulmod_u64(static_cast<uint64_t>(t), static_cast<uint64_t>(n_inv), p));
            BigInt r = r_acc + acc.N * static_cast<long>(t);
            out.coefficients[i].emplace_hint(out.coefficients[i].end(), m, balanced_residue_big(r, out.N));
        };
        // Both sources are in descending graded-lex order; walk the union.
        while (it_a != acc_map.end() || it_w < terms.size()) {
            if (it_a == acc_map.end()) {
                emit(terms[it_w].mono, BigInt(0), terms[it_w].coeff.value);
                ++it_w;
            } else if (it_w == terms.size()) {
                emit(it_a->first, it_a->second, 0);
                ++it_a;
            } else {
                auto ord = grlex(it_a->first, terms[it_w].mono);
                if (ord == std::strong_ordering::greater) {
                    emit(it_a->first, it_a->second, 0);
                    ++it_a;
                } else if (ord == std::strong_ordering::less) {
                    emit(terms[it_w].mono, BigInt(0), terms[it_w].coeff.value);
                    ++it_w;
                } else {
                    emit(it_a->first, it_a->second, terms[it_w].coeff.value);
                    ++it_a;
                    ++it_w;
                }
            }
        }
    }
    return out;
}

PolyMap<BigInt> lift_accumulator(const CrtAccumulator& acc, int arity) {
    std::vector<Polynomial<BigInt>> coords;
    coords.reserve(arity);
    for (int i = 0; i < arity; ++i) {
        std::vector<Term<BigInt>> ts;
        if (static_cast<size_t>(i) < acc.coefficients.size()) {
            for (const auto& [m, r] : acc.coefficients[i])
                if (!is_zero(r)) ts.push_back({m, r});
        }
        coords.push_back(Polynomial<BigInt>::from_sorted_terms(arity, std::move(ts)));
    }
    return PolyMap<BigInt>(std::move(coords));
}

StabilizationResult stabilization_check(std::span<const CrtAccumulator> history, const BoundReport* bound) {
    if (history.size() < 2) throw Error("stabilization check needs at least two merge snapshots");
    StabilizationResult res;
    const CrtAccumulator& cur = history.back();
    if (bound && bound->materialized && cur.N > 2 * bound->C) {
        res.kind = StabilizationKind::certified;
        return res;
    }
    const CrtAccumulator& prev = history[history.size() - 2];
    size_t n = std::max(cur.coefficients.size(), prev.coefficients.size());
    for (size_t i = 0; i < n; ++i) {
        static const std::map<Monomial, BigInt, GrlexGreater> kEmpty;
        const auto& a = i < prev.coefficients.size() ? prev.coefficients[i] : kEmpty;
        const auto& b = i < cur.coefficients.size() ? cur.coefficients[i] : kEmpty;
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() || ib != b.end()) {
            if (ib == b.end() || (ia != a.end() && GrlexGreater{}(ia->first, ib->first))) {
                res.unstable.emplace_back(static_cast<int>(i) + 1, ia->first);
                ++ia;
            } else if (ia == a.end() || GrlexGreater{}(ib->first, ia->first)) {
                if (!is_zero(ib->second)) res.unstable.emplace_back(static_cast<int>(i) + 1, ib->first);
                ++ib;
            } else {
                if (ia->second != ib->second) res.unstable.emplace_back(static_cast<int>(i) + 1, ib->first);
                ++ia;
                ++ib;
            }
        }
    }
    res.kind = res.unstable.empty() ? StabilizationKind::stable : StabilizationKind::unstable;
    return res;
}

PrimeSelection select_primes(const BigInt& C) {
    if (C < 0) throw Error("coefficient bound must be non-negative");
    PrimeSelection sel;
    BigInt target = 2 * C + 1;
    BigInt product = 1;
    uint64_t p = 2;
    while (product < target) {
        sel.primes.push_back(p);
        product *= static_cast<unsigned long>(p);
        p = next_prime_u64(p);
    }
    if (sel.primes.empty()) sel.primes.push_back(2);
    return sel;
}

PrimeSelection select_primes(const BigInt& C, const std::vector<uint64_t>& user_list) {
    PrimeSelection sel;
    BigInt product = 1;
    for (uint64_t p : user_list) {
        check_modulus(p);
        for (uint64_t q : sel.primes)
            if (q == p) throw Error("duplicate prime " + std::to_string(p));
        sel.primes.push_back(p);
        product *= static_cast<unsigned long>(p);
    }
    if (sel.primes.empty()) throw Error("empty prime list");
    sel.sufficient = product >= 2 * C + 1;
    return sel;
}

}  // namespace polyinv
