#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyinv/compose.hpp"
#include "polyinv/polymap.hpp"

namespace polyinv {

// One row of the per-step tables: (monomials, degree, ldegree) of P^i_k.
// degree/ldegree are undefined exactly when the step polynomial is zero.
struct StepStats {
    long step = 0;
    int coordinate = 0;
    size_t monomials = 0;
    std::optional<uint32_t> degree;
    std::optional<uint32_t> ldegree;
};

enum class InvertStatus {
    pascal_finite,    // P_m = 0 observed; inverse is the alternating sum
    invertible,       // certified invertible at the step bound; no Pascal-finite stop observed
    not_invertible,   // truncation test failed at the step bound
    inconclusive,     // max_steps cut the iteration before the bound
};

inline const char* to_string(InvertStatus s) {
    switch (s) {
        case InvertStatus::pascal_finite: return "pascal_finite";
        case InvertStatus::invertible: return "invertible";
        case InvertStatus::not_invertible: return "not_invertible";
        case InvertStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct StepBound {
    long mu = 1;                              // max over coordinates with H_i != 0
    std::vector<std::optional<long>> mi;      // per coordinate, 1-based offset 0
};

namespace detail {
inline long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
}  // namespace detail

inline long degree_bound_power(const MapShape& s) {  // D^(n-1)
    if (s.all_identity()) return 0;
    long db = 1;
    for (int i = 0; i + 1 < s.n; ++i) {
        db *= static_cast<long>(*s.D);
        if (db > (1L << 22)) throw Error("degree bound D^(n-1) too large to iterate");
    }
    return db;
}

// m_i = floor((D^(n-1) - d_i)/(d - 1) + 1) + 1, mu = max over coordinates.
inline StepBound step_bound_mu(const MapShape& s) {
    StepBound b;
    b.mi.resize(s.n);
    if (s.all_identity()) {
        b.mu = 1;
        return b;
    }
    long db = degree_bound_power(s);
    long dm1 = static_cast<long>(*s.d) - 1;
    for (int i = 0; i < s.n; ++i) {
        if (!s.di[i]) continue;
        long mi = detail::floor_div(db - static_cast<long>(*s.di[i]), dm1) + 2;
        b.mi[i] = mi;
        if (mi > b.mu) b.mu = mi;
    }
    return b;
}

// Delta_F(P) = P o F - P, coordinate-wise.
template <class R>
PolyMap<R> delta_step(const PolyMap<R>& P, const PolyMap<R>& F) {
    if (P.arity() != F.arity()) throw ArityMismatchError("delta_step: arity mismatch");
    Composer<R> c(F);
    std::vector<Polynomial<R>> out;
    out.reserve(P.arity());
    for (int i = 1; i <= P.arity(); ++i) out.push_back(c.compose(P.coordinate(i)) - P.coordinate(i));
    return PolyMap<R>(std::move(out));
}

struct InvertOptions {
    std::optional<long> max_steps;
    // Iterate only the degree <= D^(n-1) part of the sequence. Exact for the
    // inverse and the invertibility verdict; Pascal-finite classification is
    // claimed only when no term was ever truncated.
    bool low_degree_only = false;
    bool record_stats = false;
    std::atomic<bool>* cancel = nullptr;
};

template <class R>
struct InversionResult {
    InvertStatus status = InvertStatus::inconclusive;
    std::optional<PolyMap<R>> inverse;
    long mu = 1;
    long stop_step = 0;            // last step index reached (max over coordinates)
    std::vector<StepStats> report; // populated under record_stats
    size_t peak_terms = 0;
    bool truncated_run = false;    // low_degree_only and something was actually cut
    bool cancelled = false;
};

// The core iteration: per coordinate i, P_0 = X_i, P_{k+1} = P_k o F - P_k,
// alternating sum S = sum (-1)^k P_k. A coordinate stops when P_k vanishes
// (then S is final) or at its step bound m_i, where the inverse candidate is
// the degree <= D^(n-1) truncation of S. The candidate is certified by
// composing with F; on success the remaining high part of S is exactly the
// remainder the truncation test asks for, so this check and the step-bound
// test agree.
template <class R>
InversionResult<R> invert(const PolyMap<R>& F, const InvertOptions& opt = {}) {
    InversionResult<R> res;
    MapShape shape = shape_of(F);
    const int n = F.arity();

    if (shape.all_identity()) {
        res.status = InvertStatus::pascal_finite;
        res.inverse = F;  // F = Id
        res.mu = 1;
        res.stop_step = 1;
        return res;
    }

    const R one = ring_one(F.coordinate(1).terms().front().coeff);
    StepBound bound = step_bound_mu(shape);
    res.mu = bound.mu;
    const long db = degree_bound_power(shape);
    if (db > 0xFFFF) throw Error("degree bound exceeds exponent capacity");

    ComposeOptions copt;
    if (opt.low_degree_only) copt.max_degree = static_cast<uint32_t>(db);

    Composer<R> composer(F);
    std::vector<Polynomial<R>> inverse_coords(n, Polynomial<R>::zero(n));
    bool all_vanished = true;
    bool any_truncated = false;
    bool hit_max_steps = false;

    for (int i = 1; i <= n; ++i) {
        if (!shape.di[i - 1]) {  // H_i = 0: inverse coordinate is X_i
            inverse_coords[i - 1] = Polynomial<R>::variable(n, i, one);
            continue;
        }
        const long mi = *bound.mi[i - 1];
        const long cap = opt.max_steps ? std::min(mi, *opt.max_steps) : mi;
        const long di = static_cast<long>(*shape.di[i - 1]);
        const long dm1 = static_cast<long>(*shape.d) - 1;

        Polynomial<R> P = Polynomial<R>::variable(n, i, one);
        Polynomial<R> S = P;
        if (opt.record_stats) res.report.push_back({0, i, 1, 1u, 1u});
        bool vanished = false;
        long k = 0;
        while (k < cap) {
            if (opt.cancel && opt.cancel->load(std::memory_order_relaxed)) {
                res.cancelled = true;
                return res;
            }
            ++k;
            Polynomial<R> next = composer.compose(P, copt) - P;
            any_truncated = any_truncated || composer.pruned_in_last_call();
            P = std::move(next);
            res.peak_terms = std::max(res.peak_terms, P.length() + S.length());
            if (opt.record_stats) res.report.push_back({k, i, P.length(), P.degree(), P.ldegree()});
            if (P.is_zero_poly()) {
                vanished = true;
                break;
            }
            if (static_cast<long>(*P.ldegree()) < (k - 1) * dm1 + di)
                throw Error("internal: lower-degree growth bound violated at step " + std::to_string(k));
            S = (k % 2 == 1) ? S - P : S + P;
        }
        res.stop_step = std::max(res.stop_step, k);
        if (!vanished) {
            all_vanished = false;
            if (k < mi) {  // max_steps cut before the decision bound
                hit_max_steps = true;
                continue;
            }
            inverse_coords[i - 1] = S.truncate_degree(static_cast<uint32_t>(db));
        } else {
            inverse_coords[i - 1] = std::move(S);
        }
    }

    res.truncated_run = opt.low_degree_only && any_truncated;
    if (hit_max_steps) {
        res.status = InvertStatus::inconclusive;
        return res;
    }

    PolyMap<R> G(std::move(inverse_coords));
    PolyMap<R> check = compose_map(G, F);
    if (!check.is_identity()) {
        if (all_vanished && !res.truncated_run)
            throw Error("internal: alternating sum of a vanishing sequence failed to invert");
        res.status = InvertStatus::not_invertible;
        return res;
    }
    res.inverse = std::move(G);
    res.status = (all_vanished && !res.truncated_run) ? InvertStatus::pascal_finite : InvertStatus::invertible;
    return res;
}

// Exact per-step statistics of one coordinate's Delta sequence: rows for
// steps 0..steps, cut right after the first vanishing step (the tables'
// convention).
template <class R>
std::vector<StepStats> stats_stream(const PolyMap<R>& F, int coordinate, long steps) {
    if (coordinate < 1 || coordinate > F.arity()) throw Error("coordinate out of range");
    shape_of(F);  // validate Id + H shape
    const R one = ring_one(F.coordinate(1).terms().front().coeff);
    std::vector<StepStats> rows;
    Polynomial<R> P = Polynomial<R>::variable(F.arity(), coordinate, one);
    rows.push_back({0, coordinate, 1, 1u, 1u});
    Composer<R> composer(F);
    for (long k = 1; k <= steps; ++k) {
        P = composer.compose(P) - P;
        rows.push_back({k, coordinate, P.length(), P.degree(), P.ldegree()});
        if (P.is_zero_poly()) break;
    }
    return rows;
}

}  // namespace polyinv
