#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "polyinv/polymap.hpp"
#include "polyinv/polynomial.hpp"
#include "polyinv/primes.hpp"

namespace polyinv {

struct ComposeOptions {
    // Discard every term of total degree > max_degree as soon as it appears.
    // Sound for the truncated Delta iteration: composition with shape Id+H
    // maps never lowers a term's total degree.
    std::optional<uint32_t> max_degree;
};

namespace detail {

// Binomial rows for the X_v + t substitution path. Word-size prime fields
// use the multiplicative recurrence when p > e and Lucas' theorem with
// factorial tables mod p otherwise; exact rings use GMP's binomials.
template <class R>
struct BinomialRows {
    std::vector<R> row(uint32_t e, const R& like) {
        std::vector<R> w(e + 1);
        BigInt b;
        for (uint32_t j = 0; j <= e; ++j) {
            mpz_bin_uiui(b.get_mpz_t(), e, j);
            if constexpr (std::is_same_v<R, BigInt>)
                w[j] = b;
            else
                w[j] = R(b);
        }
        (void)like;
        return w;
    }
};

template <>
struct BinomialRows<Fp> {
    std::vector<Fp> row(uint32_t e, const Fp& like) {
        uint64_t p = like.modulus;
        std::vector<Fp> w(e + 1);
        w[0] = Fp(1, p);
        if (p > e) {
            // j < p throughout, so every j is invertible mod p.
            std::vector<uint64_t> inv(e + 1, 1);
            for (uint32_t j = 2; j <= e; ++j) inv[j] = mulmod_u64(p - (p / j), inv[p % j], p);
            uint64_t cur = 1;
            for (uint32_t j = 1; j <= e; ++j) {
                cur = mulmod_u64(cur, (e - j + 1) % p, p);
                cur = mulmod_u64(cur, inv[j], p);
                w[j] = Fp(balance_i64(cur, p), p);
            }
            return w;
        }
        ensure_factorials(p);
        for (uint32_t j = 1; j <= e; ++j) w[j] = Fp(balance_i64(lucas(e, j, p), p), p);
        return w;
    }

private:
    void ensure_factorials(uint64_t p) {
        if (p == fact_p_) return;
        fact_.assign(p, 1);
        for (uint64_t i = 2; i < p; ++i) fact_[i] = mulmod_u64(fact_[i - 1], i, p);
        inv_fact_.assign(p, 1);
        if (p > 2) {
            inv_fact_[p - 1] = static_cast<uint64_t>(inverse_mod_i64(static_cast<int64_t>(fact_[p - 1]), p));
            for (uint64_t i = p - 1; i >= 2; --i) inv_fact_[i - 1] = mulmod_u64(inv_fact_[i], i, p);
        }
        fact_p_ = p;
    }

    uint64_t small_binom(uint64_t a, uint64_t b, uint64_t p) const {
        if (b > a) return 0;
        return mulmod_u64(fact_[a], mulmod_u64(inv_fact_[b], inv_fact_[a - b], p), p);
    }

    uint64_t lucas(uint64_t a, uint64_t b, uint64_t p) {
        uint64_t r = 1;
        while ((a || b) && r) {
            uint64_t ad = a % p, bd = b % p;
            r = mulmod_u64(r, small_binom(ad, bd, p), p);
            a /= p;
            b /= p;
        }
        return r;
    }

    uint64_t fact_p_ = 0;
    std::vector<uint64_t> fact_;
    std::vector<uint64_t> inv_fact_;
};

}  // namespace detail

// Evaluates polynomials at a polynomial map: P |-> P(F_1, ..., F_n).
// A composer owns per-variable power caches, so reusing one instance across
// the steps of a Delta iteration amortizes them.
template <class R>
class Composer {
public:
    explicit Composer(PolyMap<R> F) : F_(std::move(F)), n_(F_.arity()) {
        vars_.resize(n_ + 1);
        for (int v = 1; v <= n_; ++v) {
            VarInfo& info = vars_[v];
            const auto& fv = F_.coordinate(v);
            info.identity = fv.is_identity_of(v);
            if (info.identity) continue;
            // X_v plus one extra term with a unit X_v coefficient: such a
            // coordinate powers up binomially, no materialized cache needed.
            const R* unit_coeff = fv.coefficient(Monomial::unit(v));
            if (fv.length() == 2 && unit_coeff && ring_is_one(*unit_coeff)) {
                for (const auto& t : fv.terms())
                    if (!(t.mono == Monomial::unit(v))) {
                        info.binomial = true;
                        info.extra = t;
                    }
            }
        }
    }

    const PolyMap<R>& map() const { return F_; }

    // True when the last degree-bounded call actually discarded a term.
    bool pruned_in_last_call() const { return pruned_; }

    Polynomial<R> compose(const Polynomial<R>& P, const ComposeOptions& opt = {}) {
        if (P.arity() != n_) throw ArityMismatchError("compose: arity of polynomial differs from map");
        if (opt.max_degree != cache_bound_) {
            for (auto& info : vars_) info.powers.clear();
            cache_bound_ = opt.max_degree;
        }
        pruned_ = false;
        max_deg_ = opt.max_degree;
        if (P.is_zero_poly()) return P;

        active_.clear();
        for (int v = 1; v <= n_; ++v)
            if (!vars_[v].identity && P.degree_in(v) > 0) active_.push_back(v);
        if (active_.empty()) {
            if (max_deg_) {
                auto t = P.truncate_degree(*max_deg_);
                if (t.length() != P.length()) pruned_ = true;
                return t;
            }
            return P;
        }
        // Innermost variable = largest exponent range: the expensive
        // expansion then runs against the smallest groups and cancels in one
        // accumulator before the cheaper outer products.
        std::sort(active_.begin(), active_.end(),
                  [&](int a, int b) { return P.degree_in(a) < P.degree_in(b); });

        const auto& terms = P.terms();
        order_.resize(terms.size());
        std::iota(order_.begin(), order_.end(), size_t{0});
        std::sort(order_.begin(), order_.end(), [&](size_t a, size_t b) {
            for (int v : active_) {
                uint32_t ea = terms[a].mono.exponent(v), eb = terms[b].mono.exponent(v);
                if (ea != eb) return ea > eb;
            }
            return false;
        });
        return eval(terms, 0, order_.size(), 0);
    }

private:
    struct VarInfo {
        bool identity = false;
        bool binomial = false;
        Term<R> extra{};                    // the non-X_v term when binomial
        std::vector<Polynomial<R>> powers;  // F_v^0, F_v^1, ... (non-binomial path)
    };

    const Polynomial<R>& power(int v, uint32_t e) {
        auto& pw = vars_[v].powers;
        if (pw.empty()) {
            const auto& fv = F_.coordinate(v);
            pw.push_back(Polynomial<R>::constant(n_, ring_one(fv.terms().front().coeff)));
            pw.push_back(fv);
        }
        while (pw.size() <= e) {
            auto next = mul(pw.back(), pw[1], max_deg_);
            pw.push_back(std::move(next));
        }
        return pw[e];
    }

    bool prune(uint32_t deg) {
        if (max_deg_ && deg > *max_deg_) {
            pruned_ = true;
            return true;
        }
        return false;
    }

    Monomial strip_active(Monomial m) const {
        for (int v : active_) m.set_exponent(v, 0);
        return m;
    }

    // Accumulates (sum of child terms) * F_v^e into acc.
    void emit_product(TermAccumulator<R>& acc, std::span<const Term<R>> child, int v, uint32_t e) {
        if (child.empty()) return;
        VarInfo& info = vars_[v];
        if (e == 0) {
            for (const auto& t : child) {
                if (prune(t.mono.total_degree())) continue;
                acc.add(t.mono, t.coeff);
            }
            return;
        }
        if (info.binomial) {
            const uint32_t dt = info.extra.mono.total_degree();
            auto w = rows_.row(e, info.extra.coeff);
            R cpow = ring_one(info.extra.coeff);
            for (uint32_t j = 1; j <= e; ++j) {
                cpow = R(cpow * info.extra.coeff);
                w[j] = R(w[j] * cpow);
            }
            for (const auto& t : child) {
                const uint32_t base_deg = t.mono.total_degree();
                Monomial tpow;  // extra.mono^j
                for (uint32_t j = 0; j <= e; ++j) {
                    uint32_t deg_j = base_deg + (e - j) + j * dt;
                    if (max_deg_ && deg_j > *max_deg_) {
                        pruned_ = true;
                        break;  // deg_j increases with j since dt >= 2
                    }
                    if (!is_zero(w[j])) {
                        Monomial m = t.mono * tpow;
                        if (e - j > 0) {
                            Monomial xv;
                            xv.set_exponent(v, e - j);
                            m = m * xv;
                        }
                        acc.add(m, R(t.coeff * w[j]));
                    }
                    if (j < e) tpow = tpow * info.extra.mono;
                }
            }
            return;
        }
        const Polynomial<R>& fv_e = power(v, e);
        for (const auto& t : child) {
            uint32_t dtc = t.mono.total_degree();
            for (const auto& u : fv_e.terms()) {
                if (prune(dtc + u.mono.total_degree())) continue;
                acc.add(t.mono * u.mono, R(t.coeff * u.coeff));
            }
        }
    }

    Polynomial<R> eval(const std::vector<Term<R>>& terms, size_t lo, size_t hi, size_t depth) {
        const int v = active_[depth];
        const bool innermost = depth + 1 == active_.size();
        TermAccumulator<R> acc(hi - lo + 16);
        size_t i = lo;
        while (i < hi) {
            const uint32_t e = terms[order_[i]].mono.exponent(v);
            size_t j = i;
            while (j < hi && terms[order_[j]].mono.exponent(v) == e) ++j;
            if (innermost) {
                // Leaf: every active exponent is fixed within this group; the
                // substitution products reintroduce them level by level.
                std::vector<Term<R>> child;
                child.reserve(j - i);
                for (size_t k = i; k < j; ++k) {
                    const auto& t = terms[order_[k]];
                    child.push_back({strip_active(t.mono), t.coeff});
                }
                emit_product(acc, child, v, e);
            } else {
                Polynomial<R> sub = eval(terms, i, j, depth + 1);
                emit_product(acc, sub.terms(), v, e);
            }
            i = j;
        }
        return acc.extract_sorted(n_);
    }

    const PolyMap<R> F_;
    int n_;
    std::vector<VarInfo> vars_;
    std::vector<int> active_;
    std::vector<size_t> order_;
    detail::BinomialRows<R> rows_;
    std::optional<uint32_t> max_deg_;
    std::optional<uint32_t> cache_bound_;
    bool pruned_ = false;
};

// One-shot composition: exact substitution of F_i for X_i, canonicalized.
template <class R>
Polynomial<R> compose(const Polynomial<R>& P, const PolyMap<R>& F, const ComposeOptions& opt = {}) {
    Composer<R> c(F);
    return c.compose(P, opt);
}

// Coordinate-wise lift: (P o F)_i = P_i o F.
template <class R>
PolyMap<R> compose_map(const PolyMap<R>& P, const PolyMap<R>& F, const ComposeOptions& opt = {}) {
    if (P.arity() != F.arity()) throw ArityMismatchError("compose_map: arity mismatch");
    Composer<R> c(F);
    std::vector<Polynomial<R>> out;
    out.reserve(P.arity());
    for (int i = 1; i <= P.arity(); ++i) out.push_back(c.compose(P.coordinate(i), opt));
    return PolyMap<R>(std::move(out));
}

}  // namespace polyinv
