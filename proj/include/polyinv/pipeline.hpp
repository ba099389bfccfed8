#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyinv/modcrt.hpp"

namespace polyinv {

struct PipelineOptions {
    int jobs = 1;
    bool exact_steps = false;    // full Delta sequences instead of the low-degree band
    bool stable_early = false;   // stop once coefficients are stable and composition verifies
    std::optional<long> max_steps;
    bool collect_trace = false;
};

struct PrimeReportRow {
    uint64_t p = 0;
    std::string status;
    long stop_step = 0;
    double seconds = 0.0;
    size_t peak_terms = 0;
};

struct TraceRow {
    int coordinate = 0;
    Monomial mono;
    std::string modulus;  // "p" for witness rows, "N" for merged rows
    BigInt residue;
};

struct PipelineResult {
    enum class Status { ok, not_invertible, inconclusive } status = Status::inconclusive;
    std::optional<PolyMap<BigInt>> inverse;
    std::vector<PrimeReportRow> report;
    std::vector<TraceRow> trace;
    BigInt N = 1;
    bool bound_materialized = false;
    BigInt threshold;           // 2C+1 when materialized
    std::string certificate;    // how the result was certified
    std::string diagnostic;     // failure detail
    bool stopped_early = false; // stable_early fired
};

// Invert every reduction concurrently, merge witnesses in ascending prime
// order (deterministic regardless of jobs), lift, and certify. The final
// composition check runs unconditionally.
PipelineResult pipeline_invert_crt(const PolyMap<BigInt>& F, const std::vector<uint64_t>& primes,
                                   const PipelineOptions& opt = {});

}  // namespace polyinv
