#include "polyinv/io.hpp"

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

namespace polyinv {

int MapDocument::arity() const {
    return std::visit([](const auto& m) { return m.arity(); }, map);
}

namespace {

struct RawTerm {
    bool negative = false;
    BigInt num = 1;
    BigInt den = 1;
    bool has_coeff = false;
    std::vector<std::pair<int, uint32_t>> factors;  // (variable, exponent)
    int line = 0, col = 0;
};

struct RawLine {
    int index = 0;  // the i of "F<i>"
    std::vector<RawTerm> terms;
    int line_no = 0;
};

class LineParser {
public:
    LineParser(const std::string& s, int line_no) : s_(s), line_(line_no) {}

    [[noreturn]] void fail(const std::string& msg, int col = -1) const {
        throw ParseError(line_, col < 0 ? static_cast<int>(pos_) + 1 : col, msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }

    std::string digits() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected digits");
        return s_.substr(start, pos_ - start);
    }

    long integer_index() {
        std::string d = digits();
        if (d.size() > 6) fail("index too large");
        return std::stol(d);
    }

    RawLine parse_line() {
        RawLine out;
        out.line_no = line_;
        skip_ws();
        if (!eat('F')) fail("expected coordinate line 'F<i> = <expr>'");
        out.index = static_cast<int>(integer_index());
        if (!eat('=')) fail("expected '='");
        bool first = true;
        while (!done()) {
            bool neg = false;
            if (eat('+')) {
                neg = false;
            } else if (eat('-')) {
                neg = true;
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            out.terms.push_back(parse_term(neg));
            first = false;
        }
        if (out.terms.empty()) fail("empty expression");
        return out;
    }

    RawTerm parse_term(bool neg) {
        RawTerm t;
        t.negative = neg;
        t.line = line_;
        t.col = static_cast<int>(pos_) + 1;
        skip_ws();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            t.num = bigint_from_string(digits());
            t.has_coeff = true;
            if (eat('/')) {
                int col = static_cast<int>(pos_) + 1;
                t.den = bigint_from_string(digits());
                if (is_zero(t.den)) fail("zero denominator", col);
            }
        }
        bool any_factor = false;
        for (;;) {
            skip_ws();
            size_t save = pos_;
            bool star = eat('*');
            if (peek() != 'X') {
                if (star) fail("expected variable after '*'");
                pos_ = save;
                break;
            }
            eat('X');
            int var = static_cast<int>(integer_index());
            if (var < 1) fail("variable index must be >= 1");
            uint32_t e = 1;
            if (eat('^')) {
                std::string d = digits();
                if (d.size() > 5) fail("exponent too large");
                long v = std::stol(d);
                if (v > 0xFFFF) fail("exponent too large");
                e = static_cast<uint32_t>(v);
            }
            t.factors.emplace_back(var, e);
            any_factor = true;
        }
        if (!t.has_coeff && !any_factor) fail("expected coefficient or variable");
        return t;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 0;
};

Monomial monomial_of(const RawTerm& t, int arity) {
    Monomial m;
    for (auto [var, e] : t.factors) {
        if (var > arity)
            throw ParseError(t.line, t.col, "variable X" + std::to_string(var) + " exceeds arity " + std::to_string(arity));
        uint32_t cur = m.exponent(var);
        if (cur + e > 0xFFFF) throw ParseError(t.line, t.col, "exponent too large");
        m.set_exponent(var, cur + e);
    }
    return m;
}

template <class R, class CoeffFn>
PolyMap<R> assemble(const std::vector<RawLine>& lines, int arity, CoeffFn&& coeff_of) {
    std::vector<Polynomial<R>> coords(arity, Polynomial<R>::zero(arity));
    for (const auto& ln : lines) {
        std::vector<Term<R>> ts;
        ts.reserve(ln.terms.size());
        for (const auto& rt : ln.terms) {
            R c = coeff_of(rt);
            if (!is_zero(c)) ts.push_back({monomial_of(rt, arity), std::move(c)});
        }
        coords[ln.index - 1] = Polynomial<R>::from_terms(arity, std::move(ts));
    }
    return PolyMap<R>(std::move(coords));
}

}  // namespace

MapDocument parse_map_document(const std::string& text, const RingOverride& force) {
    std::vector<RawLine> lines;
    std::optional<RingTag> directive_tag;
    uint64_t directive_p = 0;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool any_slash = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        size_t nonws = line.find_first_not_of(" \t\r");
        if (nonws == std::string::npos) continue;
        if (line.compare(nonws, 4, "ring") == 0 && lines.empty() && !directive_tag) {
            std::string rest = line.substr(nonws + 4);
            std::string word;
            for (char c : rest)
                if (!std::isspace(static_cast<unsigned char>(c))) word += c;
            if (word == "integer") {
                directive_tag = RingTag::integer;
            } else if (word == "rational") {
                directive_tag = RingTag::rational;
            } else if (word.rfind("gf(", 0) == 0 && word.back() == ')') {
                directive_tag = RingTag::gf;
                directive_p = std::stoull(word.substr(3, word.size() - 4));
            } else if (word.rfind("gf:", 0) == 0) {
                directive_tag = RingTag::gf;
                directive_p = std::stoull(word.substr(3));
            } else {
                throw ParseError(line_no, static_cast<int>(nonws) + 1, "unknown ring directive '" + word + "'");
            }
            continue;
        }
        if (line.find('/') != std::string::npos) any_slash = true;
        LineParser lp(line, line_no);
        lines.push_back(lp.parse_line());
    }
    if (lines.empty()) throw ParseError(line_no, 1, "no coordinate lines found");

    const int arity = static_cast<int>(lines.size());
    std::vector<bool> seen(arity + 1, false);
    for (const auto& ln : lines) {
        if (ln.index < 1 || ln.index > arity)
            throw ParseError(ln.line_no, 1,
                             "coordinate F" + std::to_string(ln.index) + " outside 1.." + std::to_string(arity) +
                                 " (exactly one line per coordinate)");
        if (seen[ln.index]) throw ParseError(ln.line_no, 1, "duplicate coordinate F" + std::to_string(ln.index));
        seen[ln.index] = true;
    }

    RingTag tag;
    uint64_t p = 0;
    if (force.tag) {
        tag = *force.tag;
        p = force.p;
    } else if (directive_tag) {
        tag = *directive_tag;
        p = directive_p;
    } else {
        tag = any_slash ? RingTag::rational : RingTag::integer;
    }

    MapDocument doc;
    doc.tag = tag;
    doc.p = p;
    switch (tag) {
        case RingTag::integer:
            doc.map = assemble<BigInt>(lines, arity, [](const RawTerm& t) -> BigInt {
                if (t.den != 1)
                    throw ParseError(t.line, t.col, "rational literal in an integer map (use --ring rational)");
                return t.negative ? BigInt(-t.num) : t.num;
            });
            break;
        case RingTag::rational:
            doc.map = assemble<BigRat>(lines, arity, [](const RawTerm& t) {
                BigRat q = make_rat(t.num, t.den);
                return t.negative ? BigRat(-q) : q;
            });
            break;
        case RingTag::gf:
            check_modulus(p);
            doc.map = assemble<Fp>(lines, arity, [p](const RawTerm& t) {
                if (t.den != 1) throw ParseError(t.line, t.col, "rational literal in a gf(p) map");
                return balanced_residue_unchecked(t.negative ? BigInt(-t.num) : t.num, p);
            });
            break;
    }
    return doc;
}

MapDocument load_map_file(const std::string& path, const RingOverride& force) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read map file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_map_document(ss.str(), force);
}

std::string render_monomial(const Monomial& m) {
    std::string out;
    for (int v = 1; v <= kMaxVars; ++v) {
        uint32_t e = m.exponent(v);
        if (e == 0) continue;
        if (!out.empty()) out += '*';
        out += "X" + std::to_string(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    if (out.empty()) out = "1";
    return out;
}

namespace {

bool coeff_negative(const BigInt& c) { return sgn(c) < 0; }
bool coeff_negative(const BigRat& c) { return sgn(c) < 0; }
bool coeff_negative(const Fp& c) { return c.value < 0; }

std::string coeff_abs_string(const BigInt& c) { return BigInt(abs(c)).get_str(); }
std::string coeff_abs_string(const BigRat& c) { return BigRat(abs(c)).get_str(); }
std::string coeff_abs_string(const Fp& c) { return std::to_string(c.value < 0 ? -c.value : c.value); }

bool coeff_abs_is_one(const BigInt& c) { return abs(c) == 1; }
bool coeff_abs_is_one(const BigRat& c) { return abs(c) == 1; }
bool coeff_abs_is_one(const Fp& c) { return c.value == 1 || c.value == -1; }

}  // namespace

template <class R>
std::string render_polynomial(const Polynomial<R>& p) {
    if (p.is_zero_poly()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        bool neg = coeff_negative(t.coeff);
        if (first) {
            if (neg) out += '-';
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        bool trivial_mono = t.mono.is_one();
        if (trivial_mono) {
            out += coeff_abs_string(t.coeff);
        } else if (coeff_abs_is_one(t.coeff)) {
            out += render_monomial(t.mono);
        } else {
            out += coeff_abs_string(t.coeff) + "*" + render_monomial(t.mono);
        }
    }
    return out;
}

template std::string render_polynomial<BigInt>(const Polynomial<BigInt>&);
template std::string render_polynomial<BigRat>(const Polynomial<BigRat>&);
template std::string render_polynomial<Fp>(const Polynomial<Fp>&);

template <class R>
std::string render_map(const PolyMap<R>& f) {
    std::string out;
    for (int i = 1; i <= f.arity(); ++i)
        out += "F" + std::to_string(i) + " = " + render_polynomial(f.coordinate(i)) + "\n";
    return out;
}

template std::string render_map<BigInt>(const PolyMap<BigInt>&);
template std::string render_map<BigRat>(const PolyMap<BigRat>&);
template std::string render_map<Fp>(const PolyMap<Fp>&);

std::string render_map_document(const MapDocument& doc) {
    switch (doc.tag) {
        case RingTag::integer:
            return render_map(doc.as_integer());
        case RingTag::rational:
            return "ring rational\n" + render_map(doc.as_rational());
        case RingTag::gf:
            return "ring gf(" + std::to_string(doc.p) + ")\n" + render_map(doc.as_gf());
    }
    return {};
}

void write_stats_csv(std::ostream& os, const std::vector<StepStats>& rows) {
    os << "step,coordinate,monomials,degree,ldegree\n";
    for (const auto& r : rows) {
        os << r.step << ',' << r.coordinate << ',' << r.monomials << ',';
        if (r.degree) os << *r.degree;
        os << ',';
        if (r.ldegree) os << *r.ldegree;
        os << '\n';
    }
}

void write_report_csv(std::ostream& os, const std::vector<PrimeReportRow>& rows) {
    os << "prime,status,stop_step,seconds,peak_terms\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
        os << r.p << ',' << r.status << ',' << r.stop_step << ',' << buf << ',' << r.peak_terms << '\n';
    }
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
    os << "coordinate,monomial,p_or_N,residue\n";
    for (const auto& r : rows)
        os << r.coordinate << ',' << render_monomial(r.mono) << ',' << r.modulus << ',' << r.residue.get_str() << '\n';
}

}  // namespace polyinv
