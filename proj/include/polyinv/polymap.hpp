#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyinv/polynomial.hpp"

namespace polyinv {

// n-tuple of polynomials in n variables: the maps F, G, P_k, V_k.
template <class R>
class PolyMap {
public:
    PolyMap() = default;
    explicit PolyMap(std::vector<Polynomial<R>> coords) : coords_(std::move(coords)) {
        int n = static_cast<int>(coords_.size());
        for (const auto& c : coords_)
            if (c.arity() != n) throw ArityMismatchError("coordinate arity differs from map arity");
    }

    static PolyMap identity(int arity, const R& one) {
        std::vector<Polynomial<R>> cs;
        cs.reserve(arity);
        for (int i = 1; i <= arity; ++i) cs.push_back(Polynomial<R>::variable(arity, i, one));
        return PolyMap(std::move(cs));
    }

    int arity() const { return static_cast<int>(coords_.size()); }
    const Polynomial<R>& coordinate(int i) const { return coords_[i - 1]; }  // 1-based
    const std::vector<Polynomial<R>>& coordinates() const { return coords_; }

    bool is_identity() const {
        for (int i = 1; i <= arity(); ++i)
            if (!coords_[i - 1].is_identity_of(i)) return false;
        return true;
    }

    // H_i = F_i - X_i.
    Polynomial<R> nonlinear_part(int i) const {
        const auto& fi = coords_[i - 1];
        const R* c = fi.coefficient(Monomial::unit(i));
        if (!c) throw ShapeError(i, "X" + std::to_string(i) + " missing");
        return fi - Polynomial<R>::variable(arity(), i, ring_one(*c));
    }

    size_t length() const {
        size_t l = 0;
        for (const auto& c : coords_) l = std::max(l, c.length());
        return l;
    }

    friend bool operator==(const PolyMap& a, const PolyMap& b) { return a.coords_ == b.coords_; }

private:
    std::vector<Polynomial<R>> coords_;
};

// Structural measures of a shape F = Id + H map: n, per-coordinate degrees
// D_i and lower degrees d_i of H_i (identity coordinates excluded), the
// extremes D = max D_i and d = min d_i, the length l(F), and the largest
// coefficient magnitude B (meaningful for integer maps).
struct MapShape {
    int n = 0;
    std::optional<uint32_t> D;             // undefined when H = 0
    std::optional<uint32_t> d;
    std::vector<std::optional<uint32_t>> Di;  // per coordinate, nullopt when H_i = 0
    std::vector<std::optional<uint32_t>> di;
    size_t length = 0;
    BigInt B = 0;
    bool all_identity() const { return !D.has_value(); }
};

namespace detail {
inline BigInt coeff_magnitude(const BigInt& c) { return abs(c); }
inline BigInt coeff_magnitude(const Fp& c) { return BigInt(static_cast<long>(c.value < 0 ? -c.value : c.value)); }
inline BigInt coeff_magnitude(const BigRat& c) {
    BigInt n = abs(c.get_num());
    BigInt d = abs(c.get_den());
    return n > d ? n : d;
}

template <class R>
std::string render_term_for_error(const Term<R>& t);
}  // namespace detail

// Validates the F = Id + H, ldegree(H_i) >= 2 shape and derives its measures.
template <class R>
MapShape shape_of(const PolyMap<R>& F) {
    MapShape s;
    s.n = F.arity();
    s.length = F.length();
    s.Di.resize(s.n);
    s.di.resize(s.n);
    for (int i = 1; i <= s.n; ++i) {
        const auto& fi = F.coordinate(i);
        for (const auto& t : fi.terms()) {
            BigInt m = detail::coeff_magnitude(t.coeff);
            if (m > s.B) s.B = m;
        }
        const R* xi = fi.coefficient(Monomial::unit(i));
        if (!xi || !ring_is_one(*xi))
            throw ShapeError(i, "X" + std::to_string(i) + " (linear part must be exactly X" + std::to_string(i) + ")");
        Polynomial<R> h = F.nonlinear_part(i);
        if (h.is_zero_poly()) continue;
        if (*h.ldegree() < 2) {
            const auto& offending = h.terms().back();
            throw ShapeError(i, detail::render_term_for_error(offending));
        }
        s.Di[i - 1] = h.degree();
        s.di[i - 1] = h.ldegree();
        if (!s.D || *h.degree() > *s.D) s.D = h.degree();
        if (!s.d || *h.ldegree() < *s.d) s.d = h.ldegree();
    }
    return s;
}

namespace detail {
template <class R>
std::string render_term_for_error(const Term<R>& t) {
    std::string out = to_string(t.coeff);
    for (int v = 1; v <= kMaxVars; ++v) {
        uint32_t e = t.mono.exponent(v);
        if (e == 0) continue;
        out += "*X" + std::to_string(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}
}  // namespace detail

}  // namespace polyinv
