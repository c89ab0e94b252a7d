#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pirc/confluence.hpp"
#include "pirc/dt.hpp"
#include "pirc/interp.hpp"
#include "pirc/rewrite.hpp"
#include "pirc/tpdb.hpp"
#include "pirc/transform.hpp"

namespace pirc {

using nlohmann::json;

struct DriverOptions {
    bool json_output = false;
    std::size_t max_size = 8;
    std::uint64_t fuel = 100000;
    int degree = 2;
    int coeff = 2;
    bool all_paths = false;
    double timeout_seconds = 0;  // 0: no wall-clock limit
    std::string delta_out;
    std::uint64_t budget = 1000000;
    std::size_t cap = 200000;
};

inline json dh_to_json(const DerivationHeight& h) {
    switch (h.kind) {
        case DerivationHeight::Kind::Omega: return json{{"kind", "omega"}};
        case DerivationHeight::Kind::AtLeast:
            return json{{"kind", "at_least"}, {"value", h.value}};
        default: return json{{"kind", "finite"}, {"value", h.value}};
    }
}

inline json polynomial_to_json(const Polynomial& p, int arity) {
    json out = json::array();
    for (const auto& [e, c] : p.monomials()) {
        json mono = json::array();
        mono.push_back(c);
        for (int i = 0; i < arity; ++i)
            mono.push_back(i < static_cast<int>(e.size()) ? e[static_cast<std::size_t>(i)] : 0);
        out.push_back(std::move(mono));
    }
    return out;
}

inline json interpretation_to_json(const Interpretation& I) {
    json out = json::object();
    for (const auto& [s, p] : I.assignment())
        if (s.kind != SymbolKind::Compound) out[s.display()] = polynomial_to_json(p, s.arity);
    return out;
}

/// Symbols a certificate may interpret: the base signature, the sharp
/// twins of defined symbols, and the compound symbols of the problem.
inline std::map<std::string, Symbol> interpretation_scope(const DtProblem& p) {
    std::map<std::string, Symbol> scope;
    for (const Symbol& s : p.base.signature()) scope.emplace(s.display(), s);
    for (const Symbol& s : p.base.defined_symbols()) {
        Symbol sh = Symbol::sharp(s.name, s.arity);
        scope.emplace(sh.display(), sh);
    }
    for (const DtRule& dt : p.dts) {
        Symbol com = Symbol::compound(static_cast<int>(dt.rhs_parts.size()));
        scope.emplace(com.display(), com);
    }
    return scope;
}

inline Interpretation interpretation_from_json(const json& j, const DtProblem& p) {
    auto scope = interpretation_scope(p);
    Interpretation I;
    if (!j.is_object()) throw Error("interpretation must be an object of symbol -> monomials");
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto s = scope.find(it.key());
        if (s == scope.end()) throw Error("unknown symbol in certificate: " + it.key());
        Polynomial poly;
        for (const json& mono : it.value()) {
            if (!mono.is_array() || mono.empty())
                throw Error("monomial must be [coeff, exponents...]");
            std::uint64_t coeff = mono[0].get<std::uint64_t>();
            std::vector<unsigned> exps;
            for (std::size_t i = 1; i < mono.size(); ++i) exps.push_back(mono[i].get<unsigned>());
            if (static_cast<int>(exps.size()) > s->second.arity)
                throw Error("too many exponents for " + it.key());
            poly += Polynomial::monomial(coeff, std::move(exps));
        }
        I.set(s->second, poly);
    }
    // The compound interpretation is fixed; fill any missing entries.
    for (const auto& [name, sym] : scope)
        if (sym.kind == SymbolKind::Compound && !I.assignment().count(sym))
            I.set(sym, Interpretation::com_sum(sym.arity));
    return I;
}

struct CertificateCheck {
    bool accepted = false;
    int degree = 0;
    std::string message;
};

/// Replays a witness chain (or a single interpretation) against the
/// canonical problem: every step must apply, recorded removals must
/// reproduce exactly, and the counted set must end empty.
inline CertificateCheck check_certificate(const DtProblem& canonical, const json& cert) {
    std::vector<json> steps;
    if (cert.contains("steps")) {
        for (const json& s : cert["steps"]) steps.push_back(s);
    } else {
        steps.push_back(cert);
    }
    DtProblem p = canonical;
    int degree = 0;
    try {
        for (const json& step : steps) {
            const json& ij = step.contains("interpretation") ? step["interpretation"] : step;
            Interpretation I = interpretation_from_json(ij, canonical);
            if (!check_cpi(I, canonical.base))
                return {false, 0, "interpretation violates the CPI shape"};
            OrientationResult r = orient(p, I);
            if (!r.weak_ok) return {false, 0, "weak orientation of D u R fails"};
            if (r.strict.empty()) return {false, 0, "no counted DT is strictly oriented"};
            if (step.contains("removed")) {
                std::vector<std::string> recorded = step["removed"].get<std::vector<std::string>>();
                std::vector<std::string> actual;
                for (std::size_t i : r.strict) actual.push_back(p.dts[i].to_string());
                std::sort(recorded.begin(), recorded.end());
                std::sort(actual.begin(), actual.end());
                if (recorded != actual)
                    return {false, 0, "recorded strict set does not replay"};
            }
            auto [next, k] = reduction_pair_step(p, I);
            degree = std::max(degree, k);
            p = std::move(next);
        }
    } catch (const Error& e) {
        return {false, 0, e.what()};
    }
    if (!p.counted.empty())
        return {false, degree, std::to_string(p.counted.size()) + " counted DTs remain"};
    return {true, degree, "certificate accepted"};
}

struct AnalysisReport {
    std::string input;
    bool thm6_no_parallelism = false;
    ConfluenceVerdict confluence;
    DtProblem problem;
    ComplexityBound upper;
    std::optional<std::string> delta_path;
    std::vector<EmpiricalRow> irc_rows;
    std::vector<EmpiricalRow> pirc_rows;
    std::optional<int> fitted_irc;
    std::optional<int> fitted_pirc;
    bool tight = false;
    std::vector<std::pair<std::string, double>> timings_ms;
    std::vector<std::string> timed_out;

    json to_json() const {
        json j;
        j["input"] = input;
        j["thm6_no_parallelism"] = thm6_no_parallelism;
        j["confluence"] = json{{"verdict", confluence.confluent ? "confluent" : "unknown"}};
        if (confluence.witness) {
            j["confluence"]["witness"] = json{{"rule_a", confluence.witness->rule_a + 1},
                                              {"rule_b", confluence.witness->rule_b + 1},
                                              {"position", confluence.witness->at.to_string()}};
        }
        json pdts = json::array();
        std::size_t cursor = 0;
        for (const Rule& r : problem.base.rules()) {
            json group;
            group["rule"] = r.to_string();
            json tuples = json::array();
            std::size_t k = msdc(r.rhs, problem.base).size();
            for (std::size_t i = 0; i < k && cursor < problem.dts.size(); ++i, ++cursor)
                tuples.push_back(problem.dts[cursor].to_string());
            group["pdts"] = std::move(tuples);
            pdts.push_back(std::move(group));
        }
        j["pdts"] = std::move(pdts);
        json ub;
        switch (upper.kind) {
            case ComplexityBound::Kind::PolyDegree:
                ub["kind"] = "poly";
                ub["degree"] = upper.degree;
                break;
            case ComplexityBound::Kind::Unbounded: ub["kind"] = "unbounded"; break;
            default:
                ub["kind"] = "unknown";
                ub["degree"] = nullptr;
                break;
        }
        json witness = json::array();
        for (const WitnessStep& step : upper.witness) {
            json s;
            s["interpretation"] = interpretation_to_json(step.interpretation);
            s["degree"] = step.degree;
            json removed = json::array();
            for (std::size_t i : step.removed) removed.push_back(problem.dts[i].to_string());
            s["removed"] = std::move(removed);
            witness.push_back(std::move(s));
        }
        ub["witness"] = std::move(witness);
        j["upper_bound"] = std::move(ub);
        j["delta_path"] = delta_path ? json(*delta_path) : json(nullptr);
        json rows = json::array();
        for (std::size_t i = 0; i < irc_rows.size(); ++i) {
            json row;
            row["n"] = irc_rows[i].n;
            row["irc"] = dh_to_json(irc_rows[i].value);
            if (i < pirc_rows.size()) row["pirc"] = dh_to_json(pirc_rows[i].value);
            rows.push_back(std::move(row));
        }
        j["empirical"] = json{{"rows", std::move(rows)},
                              {"fitted_irc_degree", fitted_irc ? json(*fitted_irc) : json(nullptr)},
                              {"fitted_pirc_degree", fitted_pirc ? json(*fitted_pirc) : json(nullptr)},
                              {"note", "empirical estimate, not a proof"}};
        j["tight"] = tight;
        json timings = json::object();
        for (const auto& [phase, ms] : timings_ms) timings[phase] = ms;
        for (const std::string& phase : timed_out) timings[phase] = "timeout";
        j["timings"] = std::move(timings);
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "input: " << input << "\n";
        os << "no parallelism (PDT = DT): " << (thm6_no_parallelism ? "yes" : "no") << "\n";
        os << "confluence of parallel-innermost rewriting: " << confluence.to_string() << "\n";
        os << "parallel dependency tuples:\n";
        for (const DtRule& dt : problem.dts) os << "  " << dt.to_string() << "\n";
        os << "pirc upper bound: " << upper.to_string();
        if (tight) os << "  [tight: matches the empirical estimate on a confluent system]";
        os << "\n";
        for (std::size_t i = 0; i < upper.witness.size(); ++i) {
            os << "  step " << i + 1 << " removes " << upper.witness[i].removed.size()
               << " tuple(s) at degree " << upper.witness[i].degree << ":\n";
            for (const auto& [s, p] : upper.witness[i].interpretation.assignment())
                if (s.kind != SymbolKind::Compound)
                    os << "    " << s.display() << " -> " << p.to_string() << "\n";
        }
        if (delta_path) os << "delta export: " << *delta_path << "\n";
        if (!irc_rows.empty()) {
            os << "empirical table (estimate, not a proof):\n";
            os << "  n  irc  pirc\n";
            for (std::size_t i = 0; i < irc_rows.size(); ++i) {
                os << "  " << irc_rows[i].n << "  " << irc_rows[i].value.to_string() << "  "
                   << (i < pirc_rows.size() ? pirc_rows[i].value.to_string() : "-") << "\n";
            }
            os << "  fitted degrees: irc ~ "
               << (fitted_irc ? "n^" + std::to_string(*fitted_irc) : std::string("?"))
               << ", pirc ~ "
               << (fitted_pirc ? "n^" + std::to_string(*fitted_pirc) : std::string("?")) << "\n";
        }
        for (const std::string& phase : timed_out) os << phase << ": timeout\n";
        return os.str();
    }
};

namespace detail {
class PhaseClock {
public:
    explicit PhaseClock(double timeout_seconds) : timeout_(timeout_seconds) {}

    bool expired() const {
        if (timeout_ <= 0) return false;
        auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(now - start_).count() > timeout_;
    }

    template <typename F>
    bool phase(const std::string& name, AnalysisReport& report, F&& body) {
        if (expired()) {
            report.timed_out.push_back(name);
            return false;
        }
        auto t0 = std::chrono::steady_clock::now();
        body();
        auto t1 = std::chrono::steady_clock::now();
        report.timings_ms.emplace_back(name,
                                       std::chrono::duration<double, std::milli>(t1 - t0).count());
        return true;
    }

private:
    double timeout_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};
}  // namespace detail

inline AnalysisReport analyze_trs(const std::string& input_name, const Trs& R,
                                  const DriverOptions& opts = {}) {
    AnalysisReport report;
    report.input = input_name;
    detail::PhaseClock clock(opts.timeout_seconds);

    clock.phase("thm6", report, [&] { report.thm6_no_parallelism = has_no_parallelism(R); });
    clock.phase("pdts", report, [&] { report.problem = canonical_parallel_problem(R); });
    clock.phase("upper_bound", report, [&] {
        SearchConfig cfg;
        cfg.degree_bound = opts.degree;
        cfg.coeff_bound = opts.coeff;
        cfg.escalate_coeff = std::max(3, opts.coeff);
        cfg.budget = opts.budget;
        report.upper = prove_upper_bound(report.problem, cfg);
    });
    clock.phase("confluence", report, [&] { report.confluence = confluence_parallel_innermost(R); });
    if (opts.max_size > 0) {
        clock.phase("empirical", report, [&] {
            report.irc_rows =
                empirical_complexity(R, Strategy::innermost(), opts.max_size, opts.fuel, opts.cap);
            report.pirc_rows = empirical_complexity(R, Strategy::parallel_innermost(),
                                                    opts.max_size, opts.fuel, opts.cap);
            report.fitted_irc = fit_growth_degree(report.irc_rows);
            report.fitted_pirc = fit_growth_degree(report.pirc_rows);
        });
    }
    if (!opts.delta_out.empty()) {
        clock.phase("delta", report, [&] {
            std::ofstream out(opts.delta_out);
            if (!out) throw Error("cannot write " + opts.delta_out);
            out << serialize(delta(report.problem));
            report.delta_path = opts.delta_out;
        });
    }
    report.tight = report.upper.kind == ComplexityBound::Kind::PolyDegree &&
                   report.fitted_pirc.has_value() && *report.fitted_pirc == report.upper.degree &&
                   report.confluence.confluent;
    return report;
}

/// Deterministic rewrite trace: leftmost-innermost redex and the first
/// matching rule in file order (all redexes at once for the parallel
/// strategy, sorted successor order for the relative one).
inline std::string trace_rewrite(const ParsedSystem& sys, const Term& start,
                                 const Strategy& strategy, const DriverOptions& opts) {
    std::ostringstream os;
    const Trs& R = sys.relative ? sys.signature_system() : sys.trs;
    if (opts.all_paths) {
        std::vector<Term> all = reachable_terms(start, strategy, R, opts.fuel);
        os << "reachable terms (" << all.size() << "):\n";
        for (const Term& t : all) os << "  " << t.to_string() << "\n";
        DerivationHeight h = derivation_height(start, strategy, R, opts.fuel);
        os << "derivation height: " << h.to_string() << "\n";
        return os.str();
    }
    Term cur = start;
    std::size_t steps = 0;
    os << "step 0: " << cur.to_string() << "\n";
    for (;;) {
        if (steps >= opts.fuel) {
            os << "fuel exhausted after " << steps << " steps (partial trace)\n";
            return os.str();
        }
        if (strategy.kind == Strategy::Kind::RelativeInnermost) {
            auto succ = relative_innermost_successors(cur, *strategy.relative);
            if (succ.empty()) break;
            cur = succ.front().first;
            ++steps;
            os << "step " << steps << " (1 counted): " << cur.to_string() << "\n";
            continue;
        }
        std::vector<Position> redexes = innermost_redexes(cur, R);
        if (redexes.empty()) break;
        std::vector<Position> used;
        if (strategy.kind == Strategy::Kind::Innermost)
            used.push_back(redexes.front());
        else
            used = redexes;
        os << "  rewriting at:";
        for (const Position& p : used) os << " " << p.to_string();
        os << "\n";
        for (const Position& p : used) {
            Term redex = subterm_at(cur, p);
            for (const Rule& r : R.rules()) {
                if (auto sigma = match_term(r.lhs, redex)) {
                    cur = replace_at(cur, p, sigma->apply(r.rhs));
                    break;
                }
            }
        }
        ++steps;
        os << "step " << steps << ": " << cur.to_string() << "\n";
    }
    os << "normal form after " << steps << " step(s)\n";
    return os.str();
}

inline std::string pdts_listing(const Trs& R) {
    std::ostringstream os;
    for (const Rule& r : R.rules()) {
        os << r.to_string() << "\n";
        for (const DtRule& dt : parallel_dts(r, R)) os << "  " << dt.to_string() << "\n";
    }
    return os.str();
}

inline std::string empirical_table(const ParsedSystem& sys, std::size_t max_size,
                                   const DriverOptions& opts) {
    std::ostringstream os;
    if (sys.relative) {
        Trs combined = sys.signature_system();
        Strategy strat = Strategy::relative_innermost(sys.rel);
        GroundBasicEnumeration e = enumerate_ground_basic(combined, max_size, opts.cap);
        std::vector<DerivationHeight> by_size(max_size + 1, DerivationHeight::finite(0));
        for (const Term& t : e.terms)
            by_size[term_size(t)] =
                by_size[term_size(t)].sup(derivation_height(t, strat, combined, opts.fuel));
        os << "n  relative_irc\n";
        DerivationHeight acc = DerivationHeight::finite(0);
        for (std::size_t n = 1; n <= max_size; ++n) {
            acc = acc.sup(by_size[n]);
            os << n << "  " << acc.to_string() << "\n";
        }
        os << "(empirical estimate, not a proof)\n";
        return os.str();
    }
    const Trs& R = sys.trs;
    auto irc = empirical_complexity(R, Strategy::innermost(), max_size, opts.fuel, opts.cap);
    auto pirc =
        empirical_complexity(R, Strategy::parallel_innermost(), max_size, opts.fuel, opts.cap);
    os << "n  irc  pirc\n";
    for (std::size_t i = 0; i < irc.size(); ++i)
        os << irc[i].n << "  " << irc[i].value.to_string() << "  " << pirc[i].value.to_string()
           << "\n";
    auto fi = fit_growth_degree(irc);
    auto fp = fit_growth_degree(pirc);
    os << "fitted degrees (empirical estimate, not a proof): irc ~ "
       << (fi ? "n^" + std::to_string(*fi) : std::string("?")) << ", pirc ~ "
       << (fp ? "n^" + std::to_string(*fp) : std::string("?")) << "\n";
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace pirc
