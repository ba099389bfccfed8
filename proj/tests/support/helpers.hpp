#pragma once

// Shared test plumbing: file paths, CLI runner, independent oracles, and the
// random-automorphism generator used by the property suites.

#include <array>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "polyinv/compose.hpp"
#include "polyinv/io.hpp"
#include "polyinv/polymap.hpp"

namespace testsupport {

using namespace polyinv;

inline std::string data_dir() { return POLYINV_DATA_DIR; }
inline std::string golden_dir() { return POLYINV_GOLDEN_DIR; }
inline std::string cli_path() { return POLYINV_CLI_PATH; }

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline CliResult run_cli(const std::string& args) {
    CliResult res;
    std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string slurp(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
    std::fclose(f);
    return out;
}

inline Monomial mono(std::initializer_list<uint32_t> exps) {
    Monomial m;
    int v = 1;
    for (uint32_t e : exps) m.set_exponent(v++, e);
    return m;
}

// Coefficient of a monomial in coordinate i of a map (zero when absent).
template <class R>
R coeff_of(const PolyMap<R>& f, int i, const Monomial& m) {
    const R* c = f.coordinate(i).coefficient(m);
    return c ? *c : R{};
}

// ---- independent oracles ---------------------------------------------------

// Plain schoolbook product assembled through from_terms: shares no code with
// the accumulator-based production multiply.
template <class R>
Polynomial<R> naive_mul(const Polynomial<R>& a, const Polynomial<R>& b) {
    std::vector<Term<R>> ts;
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) ts.push_back({ta.mono * tb.mono, R(ta.coeff * tb.coeff)});
    return Polynomial<R>::from_terms(a.arity(), std::move(ts));
}

// Brute-force substitution: per term, multiply plain powers of the F_i.
template <class R>
Polynomial<R> naive_compose(const Polynomial<R>& P, const PolyMap<R>& F) {
    Polynomial<R> out = Polynomial<R>::zero(P.arity());
    for (const auto& t : P.terms()) {
        Polynomial<R> prod = Polynomial<R>::constant(P.arity(), t.coeff);
        for (int v = 1; v <= P.arity(); ++v)
            for (uint32_t e = 0; e < t.mono.exponent(v); ++e) prod = naive_mul(prod, F.coordinate(v));
        out = out + prod;
    }
    return out;
}

// d/dX_var, the exponent rule term by term (for the Jacobian oracle).
template <class R>
Polynomial<R> derivative(const Polynomial<R>& p, int var) {
    std::vector<Term<R>> ts;
    for (const auto& t : p.terms()) {
        uint32_t e = t.mono.exponent(var);
        if (e == 0) continue;
        Monomial m = t.mono;
        m.set_exponent(var, e - 1);
        ts.push_back({m, R(t.coeff * static_cast<long>(e))});
    }
    return Polynomial<R>::from_terms(p.arity(), std::move(ts));
}

// ---- random automorphisms ---------------------------------------------------

struct RandomMapSpec {
    int n = 3;
    int min_deg = 2;         // smallest term degree in any H_i
    int max_deg = 3;         // cap on deg(H_i)
    int max_coeff = 9;       // |coefficients| <= max_coeff
    int max_terms = 3;       // per H_i
    bool permuted = true;    // conjugate by a random variable permutation
};

// A strictly triangular shape Id+H map (H_i depends only on later variables)
// is always an automorphism; conjugating by a permutation keeps it one and
// hides the ordering.
inline PolyMap<BigInt> random_triangular_automorphism(std::mt19937_64& rng, const RandomMapSpec& spec) {
    const int n = spec.n;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    if (spec.permuted) std::shuffle(perm.begin(), perm.end(), rng);

    std::uniform_int_distribution<int> coeff_dist(-spec.max_coeff, spec.max_coeff);
    std::uniform_int_distribution<int> deg_dist(spec.min_deg, spec.max_deg);
    std::uniform_int_distribution<int> nterms_dist(1, spec.max_terms);

    std::vector<Polynomial<BigInt>> coords;
    for (int i = 1; i <= n; ++i) coords.push_back(Polynomial<BigInt>::variable(n, i, BigInt(1)));

    for (int pos = 0; pos < n; ++pos) {
        const int var = perm[pos];           // this coordinate's variable
        std::vector<int> later(perm.begin() + pos + 1, perm.end());
        if (later.empty()) continue;
        int nterms = nterms_dist(rng);
        std::vector<Term<BigInt>> ts;
        for (int t = 0; t < nterms; ++t) {
            int deg = deg_dist(rng);
            Monomial m;
            for (int d = 0; d < deg; ++d) {
                int v = later[std::uniform_int_distribution<size_t>(0, later.size() - 1)(rng)];
                m.set_exponent(v, m.exponent(v) + 1);
            }
            int c = coeff_dist(rng);
            if (c == 0) c = 1;
            ts.push_back({m, BigInt(c)});
        }
        Polynomial<BigInt> h = Polynomial<BigInt>::from_terms(n, std::move(ts));
        coords[var - 1] = coords[var - 1] + h;
    }
    return PolyMap<BigInt>(std::move(coords));
}

}  // namespace testsupport
