#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pirc/driver.hpp"

namespace {

pirc::ParsedSystem load(const std::string& path) {
    return pirc::parse_system(pirc::read_file(path));
}

pirc::Trs require_plain(const pirc::ParsedSystem& sys, const std::string& cmd) {
    if (sys.relative)
        throw pirc::Error(cmd + " needs a plain TRS; this file declares relative (->=) rules");
    return sys.trs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pirc: upper bounds on parallel-innermost runtime complexity of term rewriting"};
    app.require_subcommand(1);

    pirc::DriverOptions opts;
    std::string file, term_text, strategy_name = "parallel", out_path, cert_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--fuel", opts.fuel, "state budget for rewriting searches");
        cmd->add_option("--timeout", opts.timeout_seconds, "wall-clock seconds per phase");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "full pipeline: PDTs, bound, confluence");
    analyze->add_option("file", file)->required();
    analyze->add_flag("--json", opts.json_output, "emit the JSON report");
    analyze->add_option("--max-size", opts.max_size, "empirical sampling up to this term size");
    analyze->add_option("--degree", opts.degree, "interpretation degree bound (1 or 2)");
    analyze->add_option("--coeff", opts.coeff, "interpretation coefficient bound");
    analyze->add_option("--delta-out", opts.delta_out, "also export the delta-transformed system");
    add_common(analyze);

    CLI::App* rewrite = app.add_subcommand("rewrite", "trace a reduction of a term");
    rewrite->add_option("file", file)->required();
    rewrite->add_option("term", term_text)->required();
    rewrite->add_option("--strategy", strategy_name, "innermost | parallel | relative");
    rewrite->add_flag("--all-paths", opts.all_paths, "print the reachable reduction graph");
    add_common(rewrite);

    CLI::App* pdts = app.add_subcommand("pdts", "list the parallel dependency tuples");
    pdts->add_option("file", file)->required();

    CLI::App* delta_cmd = app.add_subcommand("delta", "export S/((D\\S) u R) for external tools");
    delta_cmd->add_option("file", file)->required();
    delta_cmd->add_option("out", out_path)->required();

    CLI::App* empirical = app.add_subcommand("empirical", "sampled complexity table");
    empirical->add_option("file", file)->required();
    empirical->add_option("--max-size", opts.max_size, "sample terms up to this size");
    add_common(empirical);

    CLI::App* check = app.add_subcommand("check", "validate an interpretation certificate");
    check->add_option("file", file)->required();
    check->add_option("certificate", cert_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            pirc::Trs R = require_plain(load(file), "analyze");
            pirc::AnalysisReport report = pirc::analyze_trs(file, R, opts);
            if (opts.json_output)
                std::cout << report.to_json().dump(2) << "\n";
            else
                std::cout << report.to_text();
        } else if (rewrite->parsed()) {
            pirc::ParsedSystem sys = load(file);
            pirc::Strategy strat = pirc::Strategy::parallel_innermost();
            if (strategy_name == "innermost") strat = pirc::Strategy::innermost();
            else if (strategy_name == "parallel") strat = pirc::Strategy::parallel_innermost();
            else if (strategy_name == "relative") {
                if (!sys.relative)
                    throw pirc::Error("relative strategy needs a file with ->= rules");
                strat = pirc::Strategy::relative_innermost(sys.rel);
            } else {
                throw pirc::Error("unknown strategy " + strategy_name);
            }
            if (sys.relative && strategy_name != "relative")
                strat = pirc::Strategy::relative_innermost(sys.rel);
            const pirc::Trs& sig = sys.relative ? sys.signature_system() : sys.trs;
            std::set<std::string> vars;
            for (const auto& v : sig.all_variable_names()) vars.insert(v);
            pirc::Term start = pirc::parse_term_over(term_text, sig, vars);
            std::cout << pirc::trace_rewrite(sys, start, strat, opts);
        } else if (pdts->parsed()) {
            pirc::Trs R = require_plain(load(file), "pdts");
            std::cout << pirc::pdts_listing(R);
        } else if (delta_cmd->parsed()) {
            pirc::Trs R = require_plain(load(file), "delta");
            pirc::RelativeTrs rel = pirc::delta(pirc::canonical_parallel_problem(R));
            std::ofstream out(out_path);
            if (!out) throw pirc::Error("cannot write " + out_path);
            out << pirc::serialize(rel);
            std::cout << "wrote " << out_path << "\n";
        } else if (empirical->parsed()) {
            pirc::ParsedSystem sys = load(file);
            std::cout << pirc::empirical_table(sys, opts.max_size, opts);
        } else if (check->parsed()) {
            pirc::Trs R = require_plain(load(file), "check");
            pirc::json cert = pirc::json::parse(pirc::read_file(cert_path));
            pirc::DtProblem canonical = pirc::canonical_parallel_problem(R);
            pirc::CertificateCheck result = pirc::check_certificate(canonical, cert);
            std::cout << (result.accepted ? "accepted" : "rejected") << ": " << result.message;
            if (result.accepted) std::cout << " (degree " << result.degree << ")";
            std::cout << "\n";
        }
    } catch (const pirc::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const pirc::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
