#pragma once

// Command implementations behind the witgen tool.
//
// Exit code convention, shared by all commands:
//   0  the command's positive outcome (witness found, trace accepted,
//      report reproduced)
//   1  the negative outcome (no witness, trace rejected, verification
//      failed)
//   2  unusable input: unreadable files, parse errors, malformed
//      reports, bad flag combinations

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "witgen/report.hpp"

namespace witgen {

namespace detail {

inline bool read_file(const std::string& path, std::string& out, std::string& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err = "cannot read " + path;
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

inline bool write_file(const std::string& path, const std::string& data, std::string& err) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err = "cannot write " + path;
        return false;
    }
    out << data;
    return out.good();
}

}  // namespace detail

struct CheckOptions {
    std::string spec_path, program_path, apis_path;
    int domain = 4;
    int max_prefix = 6;
    int max_hypotheses = 16;
    int max_branches = 10000;
    double timeout_s = 10.0;
    bool complement_within_op = false;
    std::string out_path;      // empty: report to stdout
    std::string emit_sfa_dir;  // empty: no automata dumps
};

inline int cmd_check(const CheckOptions& opt) {
    std::string spec_text, program_text, apis_text, err;
    if (!detail::read_file(opt.spec_path, spec_text, err) ||
        !detail::read_file(opt.program_path, program_text, err) ||
        !detail::read_file(opt.apis_path, apis_text, err)) {
        std::cerr << "error: " << err << "\n";
        return 2;
    }

    auto total_start = std::chrono::steady_clock::now();
    ApiTable apis;
    SpecFile spec;
    Program prog;
    InferConfig cfg;
    cfg.domain_size = opt.domain;
    cfg.max_hypotheses = opt.max_hypotheses;
    cfg.max_branches = opt.max_branches;
    cfg.timeout_ms = static_cast<int>(opt.timeout_s * 1000.0);
    cfg.match.complement_within_op = opt.complement_within_op;
    cfg.oracle.max_prefix = opt.max_prefix;
    try {
        apis = parse_apis(apis_text);
        spec = parse_spec(spec_text, &apis);
        prog = parse_program(program_text);
        check_program(prog, apis);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    WitnessResult r;
    std::int64_t infer_ms = 0;
    try {
        auto t0 = std::chrono::steady_clock::now();
        r = infer_witness(prog, apis, spec, cfg);
        infer_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (!opt.emit_sfa_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(opt.emit_sfa_dir, ec);
        GuardEnv env = apis.guard_env(cfg.domain_size, cfg.match);
        auto dump = [&](const std::string& name, const Sre& expr) {
            std::string path = opt.emit_sfa_dir + "/" + name + ".dot";
            if (!detail::write_file(path, to_dot(compile(expr, env)), err))
                std::cerr << "warning: " << err << "\n";
        };
        dump("property", spec.regex);
        if (r.found) {
            dump("hypothesis_prefix", r.hypothesis.split.prefix);
            dump("hypothesis_suffix", r.hypothesis.split.suffix);
            dump("context", r.judgment.context);
            dump("effect", r.judgment.effect);
        }
    }

    if (!r.found) {
        std::cerr << "no witness: " << r.stats.stop_reason << " (hypotheses "
                  << r.stats.hypotheses_tried << ", branches " << r.stats.branches << ")\n";
        if (r.stats.budget_hit)
            std::cerr << "note: a search budget was exhausted; this is not a refutation\n";
        return 1;
    }

    std::int64_t total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - total_start)
                                .count();
    WitnessReport rep = make_report(prog, program_text, apis, apis_text, spec, spec_text, r,
                                    cfg, infer_ms, total_ms);
    std::string payload = serialize_report(rep);
    if (opt.out_path.empty()) {
        std::cout << payload;
    } else if (!detail::write_file(opt.out_path, payload, err)) {
        std::cerr << "error: " << err << "\n";
        return 2;
    }
    std::cerr << "witness: " << to_string(r.judgment) << "\n";
    return 0;
}

struct MemberOptions {
    std::string sre, trace, bind;
    bool complement_within_op = false;
};

inline int cmd_member(const MemberOptions& opt) {
    try {
        Assignment sigma = parse_bindings(opt.bind);
        detail::VarSorts vars;
        for (const auto& [name, value] : sigma) vars[name] = Sort::Addr;
        Sre r = parse_sre(opt.sre, vars);
        Trace t = parse_trace(opt.trace);
        MatchOptions match;
        match.complement_within_op = opt.complement_within_op;
        bool in = accepts(r, t, sigma, match);
        std::cout << (in ? "accepted" : "rejected") << "\n";
        return in ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

struct ValidateOptions {
    std::string report_path;
    int domain = 0;      // 0: use the report's value
    int max_prefix = 0;  // 0: use the report's value
};

inline int cmd_validate(const ValidateOptions& opt) {
    std::string text, err;
    if (!detail::read_file(opt.report_path, text, err)) {
        std::cerr << "error: " << err << "\n";
        return 2;
    }

    WitnessReport rep;
    ApiTable apis;
    SpecFile spec;
    Program prog;
    Sre context, effect, suffix;
    Evidence ev;
    try {
        OrderedJson j = OrderedJson::parse(text);
        rep = report_from_json(j);
        apis = parse_apis(rep.apis_source);
        spec = parse_spec(rep.property_source, &apis);
        prog = parse_program(rep.program_source);
        check_program(prog, apis);
        detail::VarSorts vars;
        for (const QualifiedVar& v : rep.vars) vars[v.name] = v.sort;
        context = parse_sre(rep.context_text, vars, &apis);
        effect = parse_sre(rep.effect_text, vars, &apis);
        suffix = parse_sre(rep.hyp_suffix, vars, &apis);
        ev.sigma = parse_bindings(rep.bindings_text);
        ev.prefix = parse_trace(rep.prefix_text);
        ev.produced = parse_trace(rep.produced_text);
    } catch (const OrderedJson::exception& e) {
        std::cerr << "error: malformed report: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    OracleConfig cfg;
    cfg.domain_size = opt.domain > 0 ? opt.domain : rep.domain_size;
    cfg.max_prefix = opt.max_prefix > 0 ? opt.max_prefix : rep.max_prefix;
    std::string why;
    if (!validate_fixed(prog, apis, rep.vars, context, effect, suffix, spec.regex, ev, cfg,
                        &why)) {
        std::cerr << "validation failed: " << why << "\n";
        return 1;
    }
    std::cout << "witness reproduced\n";
    return 0;
}

}  // namespace witgen
