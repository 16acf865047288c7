#pragma once

// Self-contained witness reports.
//
// A report carries everything needed to re-check a witness later:
// the program, operation signatures, and property sources; the chosen
// hypothesis; the judgment with its qualified variables; the abduced
// atoms; and the concrete evidence.  Serialization is canonical: field
// order is fixed and timings are integers, so parsing a report and
// serializing it again reproduces the bytes exactly.

#include <json.hpp>

#include "witgen/infer.hpp"
#include "witgen/parser.hpp"

namespace witgen {

using OrderedJson = nlohmann::ordered_json;

struct WitnessReport {
    std::string program_name, program_source;
    std::string property_name, property_source;
    std::string apis_source;
    int domain_size = 4;
    int pivot = 0;
    std::string hyp_prefix, hyp_suffix;
    std::vector<QualifiedVar> vars;
    std::string context_text, effect_text;
    std::vector<std::string> abduced;
    std::string bindings_text, prefix_text, produced_text;
    std::int64_t infer_ms = 0, validate_ms = 0, total_ms = 0;
    int max_hypotheses = 0, max_branches = 0, timeout_ms = 0, max_prefix = 0;
    int hypotheses_tried = 0, branches = 0;
};

inline std::string bindings_to_string(const Assignment& sigma) {
    std::string s;
    for (const auto& [name, value] : sigma) {
        if (!s.empty()) s += ",";
        s += name + "=" + std::to_string(value);
    }
    return s;
}

// Collects a report from an inference result.  The result must carry a
// witness; refutations have nothing to serialize.
inline WitnessReport make_report(const Program& prog, const std::string& program_source,
                                 const ApiTable&, const std::string& apis_source,
                                 const SpecFile& spec, const std::string& property_source,
                                 const WitnessResult& r, const InferConfig& cfg,
                                 std::int64_t infer_ms, std::int64_t total_ms) {
    if (!r.found) throw std::logic_error("make_report: no witness to report");
    WitnessReport rep;
    rep.program_name = prog.name;
    rep.program_source = program_source;
    rep.property_name = spec.name;
    rep.property_source = property_source;
    rep.apis_source = apis_source;
    rep.domain_size = cfg.domain_size;
    rep.pivot = r.hypothesis.split.state;
    rep.hyp_prefix = to_string(r.hypothesis.split.prefix);
    rep.hyp_suffix = to_string(r.hypothesis.split.suffix);
    rep.vars = r.judgment.vars;
    rep.context_text = to_string(r.judgment.context);
    rep.effect_text = to_string(r.judgment.effect);
    for (const Atom& a : r.abduced) rep.abduced.push_back(to_string(a));
    rep.bindings_text = bindings_to_string(r.evidence.sigma);
    rep.prefix_text = to_string(r.evidence.prefix);
    rep.produced_text = to_string(r.evidence.produced);
    rep.infer_ms = infer_ms;
    rep.validate_ms = r.stats.validate_ms;
    rep.total_ms = total_ms;
    rep.max_hypotheses = cfg.max_hypotheses;
    rep.max_branches = cfg.max_branches;
    rep.timeout_ms = cfg.timeout_ms;
    rep.max_prefix = cfg.oracle.max_prefix;
    rep.hypotheses_tried = r.stats.hypotheses_tried;
    rep.branches = r.stats.branches;
    return rep;
}

inline OrderedJson report_to_json(const WitnessReport& r) {
    OrderedJson j;
    j["program"] = {{"name", r.program_name}, {"source", r.program_source}};
    j["property"] = {{"name", r.property_name}, {"source", r.property_source}};
    j["apis"] = {{"source", r.apis_source}};
    j["domain_size"] = r.domain_size;
    j["hypothesis"] = {{"pivot", r.pivot}, {"prefix", r.hyp_prefix}, {"suffix", r.hyp_suffix}};
    OrderedJson vars = OrderedJson::array();
    for (const QualifiedVar& v : r.vars) {
        OrderedJson jv;
        jv["name"] = v.name;
        jv["sort"] = to_string(v.sort);
        OrderedJson quals = OrderedJson::array();
        for (const Atom& a : v.qual) quals.push_back(to_string(a));
        jv["where"] = quals;
        vars.push_back(jv);
    }
    j["judgment"] = {{"vars", vars}, {"context", r.context_text}, {"effect", r.effect_text}};
    j["abduced"] = r.abduced;
    j["evidence"] = {{"bindings", r.bindings_text},
                     {"prefix", r.prefix_text},
                     {"produced", r.produced_text}};
    j["timings_ms"] = {{"infer", r.infer_ms}, {"validate", r.validate_ms}, {"total", r.total_ms}};
    j["budgets"] = {{"max_hypotheses", r.max_hypotheses},
                    {"max_branches", r.max_branches},
                    {"timeout_ms", r.timeout_ms},
                    {"max_prefix", r.max_prefix},
                    {"hypotheses_tried", r.hypotheses_tried},
                    {"branches", r.branches}};
    return j;
}

inline std::string serialize_report(const WitnessReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

namespace detail {

inline Sort sort_from_string(const std::string& s) {
    if (s == "addr") return Sort::Addr;
    if (s == "int") return Sort::Int;
    if (s == "unit") return Sort::Unit;
    throw ParseError("unknown sort '" + s + "' in report");
}

}  // namespace detail

// Parses a report back.  Missing or ill-typed fields throw ParseError;
// the texts inside are revalidated by the caller when it reconstructs
// the program, property, and expressions.
inline WitnessReport report_from_json(const OrderedJson& j) {
    WitnessReport r;
    try {
        r.program_name = j.at("program").at("name").get<std::string>();
        r.program_source = j.at("program").at("source").get<std::string>();
        r.property_name = j.at("property").at("name").get<std::string>();
        r.property_source = j.at("property").at("source").get<std::string>();
        r.apis_source = j.at("apis").at("source").get<std::string>();
        r.domain_size = j.at("domain_size").get<int>();
        r.pivot = j.at("hypothesis").at("pivot").get<int>();
        r.hyp_prefix = j.at("hypothesis").at("prefix").get<std::string>();
        r.hyp_suffix = j.at("hypothesis").at("suffix").get<std::string>();
        for (const OrderedJson& jv : j.at("judgment").at("vars")) {
            QualifiedVar v;
            v.name = jv.at("name").get<std::string>();
            v.sort = detail::sort_from_string(jv.at("sort").get<std::string>());
            detail::VarSorts qvars;
            for (const QualifiedVar& prev : r.vars) qvars[prev.name] = prev.sort;
            qvars["nu"] = v.sort;
            for (const OrderedJson& q : jv.at("where"))
                for (const Atom& a : parse_atoms(q.get<std::string>(), qvars))
                    v.qual.push_back(a);
            r.vars.push_back(std::move(v));
        }
        r.context_text = j.at("judgment").at("context").get<std::string>();
        r.effect_text = j.at("judgment").at("effect").get<std::string>();
        for (const OrderedJson& a : j.at("abduced")) r.abduced.push_back(a.get<std::string>());
        r.bindings_text = j.at("evidence").at("bindings").get<std::string>();
        r.prefix_text = j.at("evidence").at("prefix").get<std::string>();
        r.produced_text = j.at("evidence").at("produced").get<std::string>();
        r.infer_ms = j.at("timings_ms").at("infer").get<std::int64_t>();
        r.validate_ms = j.at("timings_ms").at("validate").get<std::int64_t>();
        r.total_ms = j.at("timings_ms").at("total").get<std::int64_t>();
        r.max_hypotheses = j.at("budgets").at("max_hypotheses").get<int>();
        r.max_branches = j.at("budgets").at("max_branches").get<int>();
        r.timeout_ms = j.at("budgets").at("timeout_ms").get<int>();
        r.max_prefix = j.at("budgets").at("max_prefix").get<int>();
        r.hypotheses_tried = j.at("budgets").at("hypotheses_tried").get<int>();
        r.branches = j.at("budgets").at("branches").get<int>();
    } catch (const OrderedJson::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
    return r;
}

}  // namespace witgen
