#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "polyinv/errors.hpp"
#include "polyinv/monomial.hpp"
#include "polyinv/ring.hpp"

namespace polyinv {

template <class R>
struct Term {
    Monomial mono;
    R coeff;
};

template <class R>
class TermAccumulator;

// Sparse multivariate polynomial: terms in descending graded-lex order,
// zero coefficients never stored. Values are immutable once built; all
// operations return fresh polynomials.
template <class R>
class Polynomial {
public:
    Polynomial() : arity_(0) {}
    explicit Polynomial(int arity) : arity_(arity) { check_arity(arity); }

    static Polynomial zero(int arity) { return Polynomial(arity); }

    static Polynomial constant(int arity, R c) {
        Polynomial p(arity);
        if (!is_zero(c)) p.terms_.push_back({Monomial{}, std::move(c)});
        return p;
    }

    static Polynomial variable(int arity, int var, R one) {
        if (var < 1 || var > arity) throw Error("variable index X" + std::to_string(var) + " out of range");
        Polynomial p(arity);
        p.terms_.push_back({Monomial::unit(var), std::move(one)});
        return p;
    }

    // Normalizes an arbitrary term list: sorts, merges duplicates, drops zeros.
    static Polynomial from_terms(int arity, std::vector<Term<R>> terms) {
        Polynomial p(arity);
        std::sort(terms.begin(), terms.end(),
                  [](const Term<R>& a, const Term<R>& b) { return GrlexGreater{}(a.mono, b.mono); });
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
                p.terms_.back().coeff += t.coeff;
            } else {
                p.terms_.push_back(std::move(t));
            }
        }
        std::erase_if(p.terms_, [](const Term<R>& t) { return is_zero(t.coeff); });
        return p;
    }

    // Takes a vector already in strictly descending order with no zeros.
    static Polynomial from_sorted_terms(int arity, std::vector<Term<R>> terms) {
        Polynomial p(arity);
        p.terms_ = std::move(terms);
        return p;
    }

    int arity() const { return arity_; }
    bool is_zero_poly() const { return terms_.empty(); }
    size_t length() const { return terms_.size(); }
    const std::vector<Term<R>>& terms() const { return terms_; }

    std::optional<uint32_t> degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.front().mono.total_degree();
    }
    std::optional<uint32_t> ldegree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.back().mono.total_degree();
    }

    uint32_t degree_in(int var) const {
        uint32_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
        return d;
    }

    const R* coefficient(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term<R>& t, const Monomial& key) {
            return GrlexGreater{}(t.mono, key);
        });
        if (it != terms_.end() && it->mono == m) return &it->coeff;
        return nullptr;
    }

    // True if this is exactly X_var.
    bool is_identity_of(int var) const {
        return terms_.size() == 1 && terms_[0].mono == Monomial::unit(var) && ring_is_one(terms_[0].coeff);
    }

    Polynomial truncate_degree(uint32_t k) const {
        Polynomial p(arity_);
        for (const auto& t : terms_)
            if (t.mono.total_degree() <= k) p.terms_.push_back(t);
        return p;
    }

    // Applies fn(coeff, total_degree) to every term; drops resulting zeros.
    template <class Fn>
    Polynomial transform(Fn&& fn) const {
        Polynomial p(arity_);
        for (const auto& t : terms_) {
            R c = fn(t.coeff, t.mono.total_degree());
            if (!is_zero(c)) p.terms_.push_back({t.mono, std::move(c)});
        }
        return p;
    }

    friend Polynomial operator-(const Polynomial& a) {
        Polynomial p(a.arity_);
        p.terms_.reserve(a.terms_.size());
        for (const auto& t : a.terms_) p.terms_.push_back({t.mono, -t.coeff});
        return p;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.arity_ != b.arity_ || a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].mono != b.terms_[i].mono || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
        return true;
    }

private:
    static void check_arity(int n) {
        if (n < 1 || n > kMaxVars)
            throw ArityMismatchError("arity " + std::to_string(n) + " unsupported (1.." + std::to_string(kMaxVars) + ")");
    }

    static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
        if (a.arity_ != b.arity_) throw ArityMismatchError("polynomial arity mismatch");
        Polynomial p(a.arity_);
        p.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            auto ord = grlex(a.terms_[i].mono, b.terms_[j].mono);
            if (ord == std::strong_ordering::greater) {
                p.terms_.push_back(a.terms_[i++]);
            } else if (ord == std::strong_ordering::less) {
                const auto& t = b.terms_[j++];
                p.terms_.push_back({t.mono, subtract ? R(-t.coeff) : t.coeff});
            } else {
                R c = subtract ? R(a.terms_[i].coeff - b.terms_[j].coeff) : R(a.terms_[i].coeff + b.terms_[j].coeff);
                if (!is_zero(c)) p.terms_.push_back({a.terms_[i].mono, std::move(c)});
                ++i, ++j;
            }
        }
        for (; i < a.terms_.size(); ++i) p.terms_.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) {
            const auto& t = b.terms_[j];
            p.terms_.push_back({t.mono, subtract ? R(-t.coeff) : t.coeff});
        }
        return p;
    }

    int arity_;
    std::vector<Term<R>> terms_;
};

template <class R>
Polynomial<R> scale(const Polynomial<R>& p, const R& c) {
    if (is_zero(c)) return Polynomial<R>::zero(p.arity());
    return p.transform([&](const R& v, uint32_t) { return R(v * c); });
}

// Open-addressing accumulator used by multiplication and composition.
// Entries whose value cancels to zero stay in the table and are filtered
// out on extraction.
template <class R>
class TermAccumulator {
public:
    explicit TermAccumulator(size_t expected = 16) { rehash(round_up(expected * 2)); }

    void add(const Monomial& m, const R& c) {
        size_t i = find_slot(m);
        if (!used_[i]) {
            used_[i] = 1;
            keys_[i] = m;
            vals_[i] = c;
            if (++count_ * 10 >= cap_ * 7) grow();
        } else {
            vals_[i] += c;
        }
    }

    size_t size() const { return count_; }

    Polynomial<R> extract_sorted(int arity) {
        std::vector<Term<R>> terms;
        terms.reserve(count_);
        for (size_t i = 0; i < cap_; ++i)
            if (used_[i] && !is_zero(vals_[i])) terms.push_back({keys_[i], std::move(vals_[i])});
        std::sort(terms.begin(), terms.end(),
                  [](const Term<R>& a, const Term<R>& b) { return GrlexGreater{}(a.mono, b.mono); });
        return Polynomial<R>::from_sorted_terms(arity, std::move(terms));
    }

private:
    static size_t round_up(size_t n) {
        size_t c = 16;
        while (c < n) c <<= 1;
        return c;
    }

    size_t find_slot(const Monomial& m) const {
        size_t i = m.hash() & (cap_ - 1);
        while (used_[i] && !(keys_[i] == m)) i = (i + 1) & (cap_ - 1);
        return i;
    }

    void grow() {
        auto old_used = std::move(used_);
        auto old_keys = std::move(keys_);
        auto old_vals = std::move(vals_);
        size_t old_cap = cap_;
        rehash(cap_ * 2);
        count_ = 0;
        for (size_t i = 0; i < old_cap; ++i) {
            if (!old_used[i]) continue;
            size_t j = find_slot(old_keys[i]);
            used_[j] = 1;
            keys_[j] = old_keys[i];
            vals_[j] = std::move(old_vals[i]);
            ++count_;
        }
    }

    void rehash(size_t cap) {
        cap_ = cap;
        used_.assign(cap, 0);
        keys_.assign(cap, Monomial{});
        vals_.assign(cap, R{});
    }

    size_t cap_ = 0;
    size_t count_ = 0;
    std::vector<uint8_t> used_;
    std::vector<Monomial> keys_;
    std::vector<R> vals_;
};

// Product, optionally discarding all result terms of total degree > max_deg.
template <class R>
Polynomial<R> mul(const Polynomial<R>& a, const Polynomial<R>& b, std::optional<uint32_t> max_deg = std::nullopt) {
    if (a.arity() != b.arity()) throw ArityMismatchError("polynomial arity mismatch");
    if (a.is_zero_poly() || b.is_zero_poly()) return Polynomial<R>::zero(a.arity());
    const auto& small = a.length() <= b.length() ? a : b;
    const auto& big = a.length() <= b.length() ? b : a;
    TermAccumulator<R> acc(small.length() * big.length() / 2 + 16);
    for (const auto& ts : small.terms()) {
        uint32_t ds = ts.mono.total_degree();
        for (const auto& tb : big.terms()) {
            if (max_deg && ds + tb.mono.total_degree() > *max_deg) continue;
            acc.add(ts.mono * tb.mono, R(ts.coeff * tb.coeff));
        }
    }
    return acc.extract_sorted(a.arity());
}

template <class R>
Polynomial<R> operator*(const Polynomial<R>& a, const Polynomial<R>& b) {
    return mul(a, b);
}

}  // namespace polyinv
