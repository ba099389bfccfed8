#pragma once

#include <optional>
#include <vector>

#include "polyinv/compose.hpp"
#include "polyinv/inversion.hpp"
#include "polyinv/polymap.hpp"

namespace polyinv {

namespace detail {
// r^(deg-1) scaling of one coefficient; deg >= 1 for shape Id+H maps.
inline BigInt homotopy_scale(const BigInt& c, uint32_t deg, const BigInt& r) {
    if (deg == 0) throw Error("homotopy specialization of a constant term needs a rational ring");
    return c * pow_ui(r, deg - 1);
}
inline BigRat homotopy_scale(const BigRat& c, uint32_t deg, const BigInt& r) {
    if (deg == 0) return make_rat(c.get_num(), c.get_den() * r);
    return c * BigRat(pow_ui(r, deg - 1));
}
}  // namespace detail

// The homotopy specialization at t = r: the degree-i homogeneous part of
// every coordinate is scaled by r^(i-1), i.e. X |-> r^-1 F(rX).
template <class R>
PolyMap<R> specialize_homotopy(const PolyMap<R>& F, const BigInt& r) {
    if (is_zero(r)) throw Error("homotopy parameter r must be nonzero");
    std::vector<Polynomial<R>> out;
    out.reserve(F.arity());
    for (const auto& c : F.coordinates())
        out.push_back(c.transform([&](const R& v, uint32_t deg) { return detail::homotopy_scale(v, deg, r); }));
    return PolyMap<R>(std::move(out));
}

// Witness that `cleared` is the specialization of F's clearing map at t = r.
struct ClearingCertificate {
    BigInt r;
    PolyMap<BigRat> original;
    PolyMap<BigInt> cleared;
};

inline PolyMap<BigRat> to_rational_map(const PolyMap<BigInt>& F) {
    std::vector<Polynomial<BigRat>> out;
    out.reserve(F.arity());
    for (const auto& c : F.coordinates()) {
        std::vector<Term<BigRat>> ts;
        ts.reserve(c.length());
        for (const auto& t : c.terms()) ts.push_back({t.mono, BigRat(t.coeff)});
        out.push_back(Polynomial<BigRat>::from_sorted_terms(F.arity(), std::move(ts)));
    }
    return PolyMap<BigRat>(std::move(out));
}

// Fails with the offending term when a coefficient is not integral.
inline PolyMap<BigInt> to_integer_map(const PolyMap<BigRat>& F) {
    std::vector<Polynomial<BigInt>> out;
    out.reserve(F.arity());
    for (int i = 1; i <= F.arity(); ++i) {
        const auto& c = F.coordinate(i);
        std::vector<Term<BigInt>> ts;
        ts.reserve(c.length());
        for (const auto& t : c.terms()) {
            if (t.coeff.get_den() != 1)
                throw Error("coordinate F" + std::to_string(i) + ": term '" +
                            detail::render_term_for_error(t) + "' is not integral");
            ts.push_back({t.mono, t.coeff.get_num()});
        }
        out.push_back(Polynomial<BigInt>::from_sorted_terms(F.arity(), std::move(ts)));
    }
    return PolyMap<BigInt>(std::move(out));
}

// Denominator clearing: pick r (default: lcm of all coefficient
// denominators, which suffices since every H term has degree >= 2) and
// specialize the clearing map at t = r. A supplied r that fails to clear is
// reported with the offending term.
inline ClearingCertificate clear_denominators(const PolyMap<BigRat>& F, std::optional<BigInt> r_opt = std::nullopt) {
    shape_of(F);  // must be Id + H
    BigInt r;
    if (r_opt) {
        r = *r_opt;
        if (is_zero(r)) throw Error("clearing parameter r must be nonzero");
    } else {
        r = 1;
        for (const auto& c : F.coordinates())
            for (const auto& t : c.terms()) r = lcm(r, BigInt(t.coeff.get_den()));
    }
    PolyMap<BigRat> scaled = specialize_homotopy(F, r);
    PolyMap<BigInt> cleared = to_integer_map(scaled);  // reports the offending term if r fails
    return ClearingCertificate{r, F, std::move(cleared)};
}

// Transports an inverse of the cleared map back: G(X) = r * G_cleared(r^-1 X),
// i.e. degree-i parts scaled by r^(1-i). Verified against the original map.
inline PolyMap<BigRat> transport_inverse(const ClearingCertificate& cert, const PolyMap<BigInt>& G_cleared) {
    std::vector<Polynomial<BigRat>> out;
    out.reserve(G_cleared.arity());
    for (const auto& c : G_cleared.coordinates()) {
        out.push_back(Polynomial<BigRat>::from_sorted_terms(
            G_cleared.arity(), [&] {
                std::vector<Term<BigRat>> ts;
                ts.reserve(c.length());
                for (const auto& t : c.terms()) {
                    uint32_t deg = t.mono.total_degree();
                    BigRat v = deg == 0 ? BigRat(t.coeff) * BigRat(cert.r)
                                        : make_rat(t.coeff, pow_ui(cert.r, deg - 1));
                    if (!is_zero(v)) ts.push_back({t.mono, std::move(v)});
                }
                return ts;
            }()));
    }
    PolyMap<BigRat> G(std::move(out));
    if (!compose_map(G, cert.original).is_identity())
        throw Error("transported inverse does not invert the original map");
    return G;
}

}  // namespace polyinv
