#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyinv/inversion.hpp"
#include "polyinv/pipeline.hpp"
#include "polyinv/polymap.hpp"

namespace polyinv {

enum class RingTag { integer, rational, gf };

// A parsed map file: one "F<i> = <expr>" line per coordinate, arity inferred
// from the line count, ring from the literals (any "/" means rational) unless
// a "ring ..." directive or an override says otherwise.
struct MapDocument {
    RingTag tag = RingTag::integer;
    uint64_t p = 0;  // gf modulus
    std::variant<PolyMap<BigInt>, PolyMap<BigRat>, PolyMap<Fp>> map;

    int arity() const;
    const PolyMap<BigInt>& as_integer() const { return std::get<PolyMap<BigInt>>(map); }
    const PolyMap<BigRat>& as_rational() const { return std::get<PolyMap<BigRat>>(map); }
    const PolyMap<Fp>& as_gf() const { return std::get<PolyMap<Fp>>(map); }
};

struct RingOverride {
    std::optional<RingTag> tag;
    uint64_t p = 0;
};

MapDocument parse_map_document(const std::string& text, const RingOverride& force = {});
MapDocument load_map_file(const std::string& path, const RingOverride& force = {});

std::string render_monomial(const Monomial& m);

template <class R>
std::string render_polynomial(const Polynomial<R>& p);

template <class R>
std::string render_map(const PolyMap<R>& f);  // bare F-lines

std::string render_map_document(const MapDocument& doc);  // with ring directive when needed

// CSV surfaces. Stats: header step,coordinate,monomials,degree,ldegree with
// empty degree fields for vanished steps. Report: prime,status,stop_step,
// seconds,peak_terms. Trace: coordinate,monomial,p_or_N,residue.
void write_stats_csv(std::ostream& os, const std::vector<StepStats>& rows);
void write_report_csv(std::ostream& os, const std::vector<PrimeReportRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

}  // namespace polyinv
