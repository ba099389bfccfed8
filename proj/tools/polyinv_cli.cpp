// polyinv: invert polynomial automorphisms of the form Id + H exactly, by
// the alternating Delta iteration, with denominator clearing, reductions mod
// primes, and CRT reconstruction of integer inverses.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "polyinv/bounds.hpp"
#include "polyinv/io.hpp"
#include "polyinv/pipeline.hpp"
#include "polyinv/segre.hpp"

namespace {

using namespace polyinv;

RingOverride parse_ring_flag(const std::string& s) {
    RingOverride r;
    if (s.empty()) return r;
    if (s == "integer") {
        r.tag = RingTag::integer;
    } else if (s == "rational") {
        r.tag = RingTag::rational;
    } else if (s.rfind("gf:", 0) == 0) {
        r.tag = RingTag::gf;
        r.p = std::stoull(s.substr(3));
    } else if (s.rfind("gf(", 0) == 0 && s.back() == ')') {
        r.tag = RingTag::gf;
        r.p = std::stoull(s.substr(3, s.size() - 4));
    } else {
        throw Error("unknown ring '" + s + "' (integer | rational | gf:P)");
    }
    return r;
}

std::vector<uint64_t> parse_prime_list(const std::string& s) {
    std::vector<uint64_t> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoull(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

template <class Fn>
int with_doc_map(const MapDocument& doc, Fn&& fn) {
    switch (doc.tag) {
        case RingTag::integer: return fn(doc.as_integer());
        case RingTag::rational: return fn(doc.as_rational());
        case RingTag::gf: return fn(doc.as_gf());
    }
    return 1;
}

int cmd_invert(const std::string& file, const std::string& ring, std::optional<long> max_steps,
               const std::string& stats_out) {
    MapDocument doc = load_map_file(file, parse_ring_flag(ring));
    return with_doc_map(doc, [&](const auto& F) {
        InvertOptions opt;
        opt.max_steps = max_steps;
        opt.record_stats = !stats_out.empty();
        auto res = invert(F, opt);
        if (!stats_out.empty()) {
            std::ostringstream csv;
            write_stats_csv(csv, res.report);
            write_file(stats_out, csv.str());
        }
        std::cerr << "status: " << to_string(res.status) << " (step bound " << res.mu << ", stopped at "
                  << res.stop_step << ")\n";
        switch (res.status) {
            case InvertStatus::pascal_finite:
            case InvertStatus::invertible:
                std::cout << render_map(*res.inverse);
                return 0;
            case InvertStatus::not_invertible:
                return 2;
            case InvertStatus::inconclusive:
                return 3;
        }
        return 1;
    });
}

int cmd_segre(const std::string& file, const std::string& r_flag, const std::string& ring) {
    RingOverride ov = parse_ring_flag(ring);
    MapDocument doc = load_map_file(file, ov);
    PolyMap<BigRat> F = doc.tag == RingTag::rational ? doc.as_rational()
                        : doc.tag == RingTag::integer
                            ? to_rational_map(doc.as_integer())
                            : throw Error("segre expects a rational or integer map");
    std::optional<BigInt> r;
    if (!r_flag.empty()) r = bigint_from_string(r_flag);
    ClearingCertificate cert = clear_denominators(F, r);
    std::cout << "r = " << cert.r.get_str() << "\n" << render_map(cert.cleared);
    return 0;
}

int cmd_reduce(const std::string& file, uint64_t p, const std::string& ring) {
    MapDocument doc = load_map_file(file, parse_ring_flag(ring));
    if (doc.tag != RingTag::integer) throw Error("reduce expects an integer map");
    MapDocument out;
    out.tag = RingTag::gf;
    out.p = p;
    out.map = reduce_map(doc.as_integer(), p);
    std::cout << render_map_document(out);
    return 0;
}

int cmd_bound(const std::string& file, const std::string& ring) {
    MapDocument doc = load_map_file(file, parse_ring_flag(ring));
    MapShape shape;
    if (doc.tag == RingTag::integer)
        shape = shape_of(doc.as_integer());
    else if (doc.tag == RingTag::gf)
        shape = shape_of(doc.as_gf());
    else
        throw Error("bound expects an integer or gf(p) map");
    BoundReport rep = global_bound_C(shape);
    std::cout << "n = " << rep.n << "\n";
    std::cout << "D = " << (rep.D ? std::to_string(*rep.D) : std::string("undefined")) << "\n";
    std::cout << "d = " << (rep.d ? std::to_string(*rep.d) : std::string("undefined")) << "\n";
    std::cout << "B = " << rep.B.get_str() << "\n";
    std::cout << "l(F) = " << rep.length << "\n";
    std::cout << "mu = " << rep.mu << "\n";
    if (rep.materialized) {
        std::cout << "C = " << rep.C.get_str() << "\n";
        std::cout << "2C+1 = " << rep.threshold.get_str() << "\n";
    } else {
        std::cout << "C not materialized (approx log2(C) = ";
        if (std::isinf(rep.approx_log2_C))
            std::cout << "beyond 2^62";
        else
            std::cout << static_cast<long double>(rep.approx_log2_C);
        std::cout << "); certification will rely on the composition check\n";
    }
    return 0;
}

int cmd_crt_invert(const std::string& file, const std::string& primes_flag, bool auto_primes, int jobs,
                   const std::string& trace_path, const std::string& report_path, bool stable_early,
                   bool exact_steps) {
    MapDocument doc = load_map_file(file, {});
    if (doc.tag != RingTag::integer) throw Error("crt-invert expects an integer map");
    const PolyMap<BigInt>& F = doc.as_integer();

    std::vector<uint64_t> primes;
    if (auto_primes) {
        BoundReport rep = global_bound_C(shape_of(F));
        if (!rep.materialized)
            throw Error("--auto needs a materializable coefficient bound; pass --primes explicitly");
        if (bit_length(rep.C) > 4096)
            throw Error("the coefficient bound spans " + std::to_string(bit_length(rep.C)) +
                        " bits; reaching 2C+1 would take thousands of primes. Pass --primes (the "
                        "composition check certifies the result) and consider --stable-early.");
        primes = select_primes(rep.C).primes;
        std::cerr << "auto-selected " << primes.size() << " primes (product >= 2C+1)\n";
    } else {
        primes = parse_prime_list(primes_flag);
        if (primes.empty()) throw Error("pass --primes p1,p2,... or --auto");
    }

    PipelineOptions opt;
    opt.jobs = jobs;
    opt.exact_steps = exact_steps;
    opt.stable_early = stable_early;
    opt.collect_trace = !trace_path.empty();
    PipelineResult res = pipeline_invert_crt(F, primes, opt);

    if (!report_path.empty()) {
        std::ostringstream csv;
        write_report_csv(csv, res.report);
        write_file(report_path, csv.str());
    }
    if (!trace_path.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, res.trace);
        write_file(trace_path, csv.str());
    }
    switch (res.status) {
        case PipelineResult::Status::ok:
            std::cerr << "N = " << res.N.get_str() << "; certified: " << res.certificate << "\n";
            std::cout << render_map(*res.inverse);
            return 0;
        case PipelineResult::Status::not_invertible:
            std::cerr << "not invertible: " << res.diagnostic << "\n";
            return 2;
        case PipelineResult::Status::inconclusive:
            std::cerr << "inconclusive: " << res.diagnostic << "\n";
            return 3;
    }
    return 1;
}

int cmd_stats(const std::string& file, int coordinate, long steps, const std::string& out,
              const std::string& ring) {
    MapDocument doc = load_map_file(file, parse_ring_flag(ring));
    return with_doc_map(doc, [&](const auto& F) {
        auto rows = stats_stream(F, coordinate, steps);
        std::ostringstream csv;
        write_stats_csv(csv, rows);
        if (out.empty())
            std::cout << csv.str();
        else
            write_file(out, csv.str());
        return 0;
    });
}

int cmd_verify(const std::string& file_f, const std::string& file_g, const std::string& ring) {
    RingOverride ov = parse_ring_flag(ring);
    MapDocument df = load_map_file(file_f, ov);
    MapDocument dg = load_map_file(file_g, ov);
    if (df.tag != dg.tag || df.p != dg.p)
        throw Error("the two maps live in different rings; force one with --ring");
    return with_doc_map(df, [&](const auto& F) {
        using R = typename std::decay_t<decltype(F)>;
        const auto& G = std::get<R>(dg.map);
        if (F.arity() != G.arity()) throw Error("arity mismatch between the two maps");
        bool gf = compose_map(G, F).is_identity();
        bool fg = compose_map(F, G).is_identity();
        if (gf && fg) {
            std::cout << "identity confirmed: G o F = F o G = Id\n";
            return 0;
        }
        std::cout << "not inverse: G o F " << (gf ? "=" : "!=") << " Id, F o G " << (fg ? "=" : "!=") << " Id\n";
        return 1;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact inversion of polynomial automorphisms (Id + H form): Delta iteration, denominator "
                 "clearing, reductions mod p, CRT reconstruction"};
    app.require_subcommand(1);

    std::string file, ring, gfile;
    std::string stats_out, r_flag, primes_flag, trace_path, report_path, out_path;
    std::optional<long> max_steps;
    long steps = 0;
    int coordinate = 1;
    int jobs = 1;
    uint64_t prime = 0;
    bool auto_primes = false, stable_early = false, exact_steps = false;

    auto* invert_cmd = app.add_subcommand("invert", "invert a map; prints the inverse (exit 0), 2 = not invertible, 3 = inconclusive");
    invert_cmd->add_option("file", file)->required();
    invert_cmd->add_option("--max-steps", max_steps, "cap the iteration; below the step bound this can only be inconclusive");
    invert_cmd->add_option("--stats-out", stats_out, "write per-step statistics CSV");
    invert_cmd->add_option("--ring", ring, "integer | rational | gf:P (default: inferred)");

    auto* segre_cmd = app.add_subcommand("segre", "clear denominators: print r and the integer map r^-1 F(rX)");
    segre_cmd->add_option("file", file)->required();
    segre_cmd->add_option("--r", r_flag, "use this r instead of the denominator lcm");
    segre_cmd->add_option("--ring", ring);

    auto* reduce_cmd = app.add_subcommand("reduce", "reduce an integer map mod a prime (balanced residues)");
    reduce_cmd->add_option("file", file)->required();
    reduce_cmd->add_option("--prime", prime, "modulus")->required();
    reduce_cmd->add_option("--ring", ring);

    auto* bound_cmd = app.add_subcommand("bound", "step bound mu and coefficient bound C for an integer map");
    bound_cmd->add_option("file", file)->required();
    bound_cmd->add_option("--ring", ring);

    auto* crt_cmd = app.add_subcommand("crt-invert", "invert mod several primes and reconstruct the integer inverse by CRT");
    crt_cmd->add_option("file", file)->required();
    crt_cmd->add_option("--primes", primes_flag, "comma-separated primes");
    crt_cmd->add_flag("--auto", auto_primes, "choose smallest primes with product >= 2C+1");
    crt_cmd->add_option("--jobs", jobs, "worker threads (merge order stays deterministic)");
    crt_cmd->add_option("--trace-coeffs", trace_path, "write the per-prime/per-modulus coefficient table CSV");
    crt_cmd->add_option("--report", report_path, "write the per-prime run report CSV");
    crt_cmd->add_flag("--stable-early", stable_early, "stop once coefficients stabilize and composition verifies");
    crt_cmd->add_flag("--exact-steps", exact_steps, "iterate full Delta sequences instead of the low-degree band");

    auto* stats_cmd = app.add_subcommand("stats", "per-step monomial count, degree and lower degree of one coordinate");
    stats_cmd->add_option("file", file)->required();
    stats_cmd->add_option("--coordinate", coordinate, "coordinate index (1-based)")->required();
    stats_cmd->add_option("--steps", steps, "last step index")->required();
    stats_cmd->add_option("--out", out_path, "CSV path (default: stdout)");
    stats_cmd->add_option("--ring", ring);

    auto* verify_cmd = app.add_subcommand("verify", "check G o F = F o G = Id; exit 0 if so, 1 if not");
    verify_cmd->add_option("file", file)->required();
    verify_cmd->add_option("gfile", gfile)->required();
    verify_cmd->add_option("--ring", ring);

    CLI11_PARSE(app, argc, argv);

    try {
        if (invert_cmd->parsed()) return cmd_invert(file, ring, max_steps, stats_out);
        if (segre_cmd->parsed()) return cmd_segre(file, r_flag, ring);
        if (reduce_cmd->parsed()) return cmd_reduce(file, prime, ring);
        if (bound_cmd->parsed()) return cmd_bound(file, ring);
        if (crt_cmd->parsed())
            return cmd_crt_invert(file, primes_flag, auto_primes, jobs, trace_path, report_path, stable_early,
                                  exact_steps);
        if (stats_cmd->parsed()) return cmd_stats(file, coordinate, steps, out_path, ring);
        if (verify_cmd->parsed()) return cmd_verify(file, gfile, ring);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return app.got_subcommand("verify") ? 2 : 1;
    }
    return 1;
}
