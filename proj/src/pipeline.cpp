#include "polyinv/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace polyinv {

namespace {

void append_witness_trace(std::vector<TraceRow>& trace, const ModularWitness& w) {
    const PolyMap<Fp>& G = *w.inverse;
    for (int i = 1; i <= G.arity(); ++i)
        for (const auto& t : G.coordinate(i).terms())
            trace.push_back({i, t.mono, std::to_string(w.p), lift(t.coeff)});
}

void append_merge_trace(std::vector<TraceRow>& trace, const CrtAccumulator& acc) {
    for (size_t i = 0; i < acc.coefficients.size(); ++i)
        for (const auto& [m, r] : acc.coefficients[i])
            trace.push_back({static_cast<int>(i) + 1, m, acc.N.get_str(), r});
}

}  // namespace

PipelineResult pipeline_invert_crt(const PolyMap<BigInt>& F, const std::vector<uint64_t>& primes_in,
                                   const PipelineOptions& opt) {
    PipelineResult res;
    if (primes_in.empty()) throw Error("no primes given");
    std::vector<uint64_t> primes = primes_in;
    std::sort(primes.begin(), primes.end());
    for (size_t i = 0; i < primes.size(); ++i) {
        check_modulus(primes[i]);
        if (i > 0 && primes[i] == primes[i - 1]) throw Error("duplicate prime " + std::to_string(primes[i]));
    }

    MapShape shape = shape_of(F);
    BoundReport bound = global_bound_C(shape);
    res.bound_materialized = bound.materialized;
    if (bound.materialized) res.threshold = bound.threshold;

    ModInvertOptions mopt;
    mopt.low_degree_only = !opt.exact_steps;
    mopt.max_steps = opt.max_steps;
    std::atomic<bool> cancel{false};
    mopt.cancel = &cancel;

    const size_t count = primes.size();
    std::vector<std::optional<ModularWitness>> results(count);

    const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(count)));
    std::mutex mtx;
    std::condition_variable cv;
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;

    auto run_one = [&](size_t idx) {
        ModularWitness w = invert_mod_p(F, primes[idx], mopt);
        {
            std::lock_guard<std::mutex> lk(mtx);
            results[idx] = std::move(w);
        }
        cv.notify_all();
    };

    if (jobs == 1) {
        // Inline: witnesses are produced and merged one at a time, keeping
        // only one alive (memory is the binding constraint at scale).
    } else {
        for (int t = 0; t < jobs; ++t)
            workers.emplace_back([&] {
                for (;;) {
                    size_t idx = next.fetch_add(1);
                    if (idx >= count || cancel.load(std::memory_order_relaxed)) return;
                    run_one(idx);
                }
            });
    }

    CrtAccumulator acc;
    std::vector<CrtAccumulator> history;
    bool aborted = false;

    for (size_t i = 0; i < count && !aborted; ++i) {
        if (jobs == 1) {
            if (!cancel.load(std::memory_order_relaxed)) run_one(i);
        }
        ModularWitness w;
        {
            std::unique_lock<std::mutex> lk(mtx);
            cv.wait(lk, [&] { return results[i].has_value(); });
            w = std::move(*results[i]);
            results[i].reset();
        }
        res.report.push_back({w.p, to_string(w.status), w.stop_step, w.seconds, w.peak_terms});
        if (w.cancelled) continue;  // early-exit already fired; row is informational
        if (w.status == InvertStatus::not_invertible) {
            res.status = PipelineResult::Status::not_invertible;
            res.diagnostic = "reduction mod " + std::to_string(w.p) +
                             " is not invertible; an invertible integer map reduces to an invertible map mod every prime";
            aborted = true;
            break;
        }
        if (w.status == InvertStatus::inconclusive) {
            res.status = PipelineResult::Status::inconclusive;
            res.diagnostic = "inversion mod " + std::to_string(w.p) + " hit the step limit before its bound";
            aborted = true;
            break;
        }
        if (opt.collect_trace) append_witness_trace(res.trace, w);
        acc = crt_merge(acc, w);
        if (acc.merged_primes.size() >= 2 && opt.collect_trace) append_merge_trace(res.trace, acc);
        history.push_back(acc);
        if (history.size() > 2) history.erase(history.begin());

        if (opt.stable_early && history.size() >= 2 && i + 1 < count) {
            StabilizationResult st = stabilization_check(history, bound.materialized ? &bound : nullptr);
            if (st.kind != StabilizationKind::unstable) {
                PolyMap<BigInt> candidate = lift_accumulator(acc, F.arity());
                if (compose_map(candidate, F).is_identity() && compose_map(F, candidate).is_identity()) {
                    res.stopped_early = true;
                    cancel.store(true, std::memory_order_relaxed);
                    break;
                }
            }
        }
    }
    cancel.store(true, std::memory_order_relaxed);
    for (auto& t : workers) t.join();
    if (aborted) return res;

    res.N = acc.N;
    PolyMap<BigInt> G = lift_accumulator(acc, F.arity());
    const bool over_threshold = bound.materialized && acc.N > 2 * bound.C;

    // Composition is always the final certificate, independent of the bound.
    if (compose_map(G, F).is_identity() && compose_map(F, G).is_identity()) {
        res.status = PipelineResult::Status::ok;
        res.inverse = std::move(G);
        res.certificate = over_threshold ? "modulus exceeds 2C and composition is the identity"
                                         : (res.stopped_early ? "coefficients stable and composition is the identity"
                                                              : "composition is the identity");
        return res;
    }
    if (over_threshold) {
        // N > 2C makes the lift exact for any true inverse, so failure here
        // is a proof there is none.
        res.status = PipelineResult::Status::not_invertible;
        res.diagnostic = "modulus exceeds 2C but the lift does not invert F";
        return res;
    }
    res.status = PipelineResult::Status::inconclusive;
    res.diagnostic = "lift does not invert F within this prime budget; add primes or raise the budget";
    return res;
}

}  // namespace polyinv
