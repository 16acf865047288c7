#pragma once

// Ground truth by bounded search.
//
// Everything here works on concrete data: assignments for the visible
// variables, store-coherent trace prefixes, and actual program runs.
// validate_fixed checks one piece of evidence against a judgment;
// validate_search looks for such evidence; brute_force_witness searches
// for a violation with no judgment at all and is the reference the
// inference engine is tested against.
//
// Prefix enumeration never materialises the full trace tree.  Two
// prefixes that reach the same key-value store and the same automaton
// state sets are interchangeable for every check below, so the search
// walks that quotient breadth-first and reconstructs a concrete prefix
// from parent pointers only when evidence is found.

#include <functional>

#include "witgen/lang.hpp"
#include "witgen/sfa.hpp"
#include "witgen/typing.hpp"

namespace witgen {

struct OracleConfig {
    int domain_size = 4;
    int max_prefix = 6;          // prefix length bound for searches
    std::size_t max_nodes = 200000;  // cap on explored (store, states) nodes
};

// Store-coherent candidate events: a get for every bound key (with the
// stored value as its result) and every put over the domain.
inline std::vector<Event> coherent_events(const Store& store, int domain_size) {
    std::vector<Event> out;
    for (const auto& [k, v] : store)
        if (k >= 0 && k < domain_size) out.push_back(Event{"get", {k}, v});
    for (int k = 0; k < domain_size; ++k)
        for (int v = 0; v < domain_size; ++v) out.push_back(Event{"put", {k, v}, std::nullopt});
    return out;  // already sorted: "get" < "put", keys and values ascending
}

// Calls `visit` on every coherent trace up to cfg.max_prefix events, in
// length order then lexicographic order.  Stops early when `visit`
// returns false.  The table must define the two store operations.
inline void enumerate_traces(const ApiTable& apis, const OracleConfig& cfg,
                             const std::function<bool(const Trace&)>& visit) {
    if (!apis.find("put") || !apis.find("get"))
        throw std::logic_error("enumerate_traces: store operations missing from the table");
    Trace cur;
    bool stop = false;
    std::function<void(int, const Store&)> go = [&](int left, const Store& store) {
        if (stop) return;
        if (left == 0) {
            stop = !visit(cur);
            return;
        }
        for (const Event& e : coherent_events(store, cfg.domain_size)) {
            cur.push_back(e);
            if (e.op == "put") {
                Store next = store;
                next[e.args[0]] = e.args[1];
                go(left - 1, next);
            } else {
                go(left - 1, store);
            }
            cur.pop_back();
            if (stop) return;
        }
    };
    for (int len = 0; len <= cfg.max_prefix && !stop; ++len) go(len, Store{});
}

// ---------------------------------------------------------------------------
// Evidence

struct Evidence {
    Assignment sigma;  // values for the judgment variables
    Trace prefix;      // store-coherent environment prefix
    Trace produced;    // events the program emitted on top of it
};

struct ValidationOutcome {
    bool ok = false;
    bool budget_hit = false;  // search gave up before exhausting the space
    Evidence evidence;        // filled in iff ok
    std::string detail;       // reason when !ok, empty otherwise
};

namespace detail {

inline bool within_domain(const Event& e, int domain_size) {
    for (int a : e.args)
        if (a < 0 || a >= domain_size) return false;
    if (e.result && (*e.result < 0 || *e.result >= domain_size)) return false;
    return true;
}

inline Trace concat_traces(const Trace& a, const Trace& b) {
    Trace out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

// Checks one piece of evidence against a judgment, a hypothesis suffix,
// and the original property.  In order:
//   1. sigma binds every judgment variable inside the domain and
//      satisfies the qualifiers;
//   2. the prefix is store-coherent;
//   3. the program runs to completion after the prefix;
//   4. it produced exactly the recorded events;
//   5. prefix + some produced-split lands in context / effect;
//   6. the produced events match the hypothesis suffix;
//   7. the whole trace satisfies the property.
// `suffix` and `spec_regex` may be null to skip their checks.
inline bool validate_fixed(const Program& prog, const ApiTable& apis,
                           const std::vector<QualifiedVar>& vars, const Sre& context,
                           const Sre& effect, const Sre& suffix, const Sre& spec_regex,
                           const Evidence& ev, const OracleConfig& cfg,
                           std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    std::string qwhy;
    if (!check_qualifiers(vars, ev.sigma, &qwhy)) return fail("qualifiers: " + qwhy);
    for (const auto& [name, value] : ev.sigma)
        if (value < 0 || value >= cfg.domain_size)
            return fail("binding " + name + " outside the domain");
    if (static_cast<int>(ev.prefix.size()) > cfg.max_prefix) return fail("prefix too long");

    Store store;
    for (const Event& e : ev.prefix) {
        if (!detail::within_domain(e, cfg.domain_size)) return fail("prefix event outside the domain");
        if (e.op == "put" && e.args.size() == 2 && !e.result) {
            store[e.args[0]] = e.args[1];
        } else if (e.op == "get" && e.args.size() == 1 && e.result) {
            auto it = store.find(e.args[0]);
            if (it == store.end() || it->second != *e.result)
                return fail("prefix is not store-coherent at " + to_string(e));
        } else {
            return fail("prefix event is not a store operation: " + to_string(e));
        }
    }

    Assignment args;
    for (const auto& [name, sort] : prog.params) {
        auto it = ev.sigma.find(name);
        if (it == ev.sigma.end()) return fail("no binding for parameter " + name);
        args[name] = it->second;
    }
    RunResult rr = run_concrete(prog, ev.prefix, args, apis);
    if (!run_ok(rr)) {
        const RunStuck& st = std::get<RunStuck>(rr);
        return fail("program stuck at call " + std::to_string(st.call_index) + ": " + st.detail);
    }
    const Trace& produced = std::get<RunOk>(rr).produced;
    if (produced != ev.produced) return fail("produced trace mismatch: got " + to_string(produced));

    bool split_ok = false;
    for (std::size_t m = 0; m <= produced.size() && !split_ok; ++m) {
        Trace head = ev.prefix;
        head.insert(head.end(), produced.begin(), produced.begin() + m);
        Trace tail(produced.begin() + m, produced.end());
        split_ok = accepts(context, head, ev.sigma) && accepts(effect, tail, ev.sigma);
    }
    if (!split_ok) return fail("no split of the produced events fits context and effect");
    if (suffix && !accepts(suffix, produced, ev.sigma))
        return fail("produced events do not match the hypothesis suffix");
    if (spec_regex && !accepts(spec_regex, detail::concat_traces(ev.prefix, produced), ev.sigma))
        return fail("full trace does not satisfy the property");
    return true;
}

namespace detail {

// One node of the quotiented prefix search.
struct PrefixNode {
    Store store;
    std::set<int> ctx_states;   // context automaton states (empty set = pruned)
    std::set<int> spec_states;  // property automaton states
    int parent = -1;
    Event via;
    int depth = 0;
};

inline std::string prefix_key(const PrefixNode& n) {
    std::string k;
    for (const auto& [key, value] : n.store)
        k += std::to_string(key) + ":" + std::to_string(value) + ",";
    k += "|";
    for (int s : n.ctx_states) k += std::to_string(s) + ",";
    k += "|";
    for (int s : n.spec_states) k += std::to_string(s) + ",";
    return k;
}

inline Trace rebuild_prefix(const std::vector<PrefixNode>& nodes, int idx) {
    Trace out;
    for (int i = idx; nodes[i].parent >= 0; i = nodes[i].parent) out.push_back(nodes[i].via);
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Searches for evidence that a judgment is a genuine witness: an
// assignment satisfying the qualifiers (enumerated in declaration
// order) and a coherent prefix (shortest first) such that the program
// run completes and the six checks of validate_fixed hold.  The prefix
// walk explores the quotient by (store, context states, property
// states); prefixes killing the context automaton are pruned, since no
// extension can reach an accepting context split.
inline ValidationOutcome validate_search(const Program& prog, const ApiTable& apis,
                                         const std::vector<QualifiedVar>& vars,
                                         const Sre& context, const Sre& effect,
                                         const Sre& suffix, const Sre& spec_regex,
                                         const OracleConfig& cfg) {
    ValidationOutcome out;
    GuardEnv env = apis.guard_env(cfg.domain_size);
    Sfa ctx_sfa = compile(context, env);
    Sfa spec_sfa = spec_regex ? compile(spec_regex, env) : Sfa{};
    if (ctx_sfa.states.empty()) {
        out.detail = "context language is empty";
        return out;
    }
    std::size_t nodes_used = 0;

    std::vector<int> vals(vars.size(), 0);
    while (true) {
        Assignment sigma;
        for (std::size_t i = 0; i < vars.size(); ++i) sigma[vars[i].name] = vals[i];
        if (check_qualifiers(vars, sigma)) {
            Assignment args;
            for (const auto& [name, sort] : prog.params) args[name] = sigma.at(name);

            std::vector<detail::PrefixNode> nodes;
            std::set<std::string> seen;
            detail::PrefixNode root;
            root.ctx_states = {ctx_sfa.initial};
            if (spec_regex) root.spec_states = {spec_sfa.initial};
            nodes.push_back(root);
            seen.insert(detail::prefix_key(root));

            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (++nodes_used > cfg.max_nodes) {
                    out.budget_hit = true;
                    out.detail = "prefix search budget exhausted";
                    return out;
                }
                // deliberate copy: nodes grows inside the loop
                const detail::PrefixNode n = nodes[i];

                Trace prefix = detail::rebuild_prefix(nodes, static_cast<int>(i));
                RunResult rr = run_concrete(prog, prefix, args, apis);
                if (run_ok(rr)) {
                    const Trace& produced = std::get<RunOk>(rr).produced;
                    // context/effect split via the live context states
                    bool split_ok = false;
                    std::set<int> cur = n.ctx_states;
                    for (std::size_t m = 0; m <= produced.size() && !split_ok; ++m) {
                        if (m > 0) cur = sfa_step(ctx_sfa, cur, produced[m - 1], sigma);
                        bool ctx_hit = false;
                        for (int s : cur) ctx_hit = ctx_hit || ctx_sfa.accepting[s];
                        if (ctx_hit) {
                            Trace tail(produced.begin() + m, produced.end());
                            split_ok = accepts(effect, tail, sigma);
                        }
                    }
                    bool good = split_ok && (!suffix || accepts(suffix, produced, sigma));
                    if (good && spec_regex) {
                        std::set<int> sp = n.spec_states;
                        for (const Event& e : produced) sp = sfa_step(spec_sfa, sp, e, sigma);
                        bool hit = false;
                        for (int s : sp) hit = hit || spec_sfa.accepting[s];
                        good = hit;
                    }
                    if (good) {
                        Evidence ev{sigma, prefix, produced};
                        std::string why;
                        if (!validate_fixed(prog, apis, vars, context, effect, suffix, spec_regex,
                                            ev, cfg, &why))
                            throw std::logic_error("validate_search disagrees with validate_fixed: " +
                                                   why);
                        out.ok = true;
                        out.evidence = std::move(ev);
                        return out;
                    }
                }

                if (n.depth >= cfg.max_prefix) continue;
                for (const Event& e : coherent_events(n.store, cfg.domain_size)) {
                    detail::PrefixNode next;
                    next.store = n.store;
                    if (e.op == "put") next.store[e.args[0]] = e.args[1];
                    next.ctx_states = sfa_step(ctx_sfa, n.ctx_states, e, sigma);
                    if (next.ctx_states.empty()) continue;  // context can never accept again
                    if (spec_regex) {
                        next.spec_states = sfa_step(spec_sfa, n.spec_states, e, sigma);
                        if (next.spec_states.empty()) continue;
                    }
                    next.parent = static_cast<int>(i);
                    next.via = e;
                    next.depth = n.depth + 1;
                    if (seen.insert(detail::prefix_key(next)).second) nodes.push_back(std::move(next));
                }
            }
        }
        // odometer over assignments, last variable fastest
        std::size_t i = vals.size();
        while (i > 0 && ++vals[i - 1] == cfg.domain_size) {
            vals[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    if (out.detail.empty()) out.detail = "no evidence within the search bounds";
    return out;
}

// Reference search: no judgment, no inference.  Tries every assignment
// of the property variables and program parameters (qualifiers from the
// property declarations) and every coherent prefix, runs the program,
// and asks whether the full trace violates the property in a way that
// implicates the program: the property automaton must sit in some
// non-accepting state q after the prefix and reach acceptance on the
// produced events alone, so the prefix lands in q's prefix language and
// the produced events in its suffix language.
inline ValidationOutcome brute_force_witness(const Program& prog, const ApiTable& apis,
                                             const SpecFile& spec, const OracleConfig& cfg) {
    ValidationOutcome out;
    GuardEnv env = apis.guard_env(cfg.domain_size);
    Sfa spec_sfa = compile(spec.regex, env);
    if (spec_sfa.states.empty()) {
        out.detail = "property language is empty";
        return out;
    }

    std::vector<QualifiedVar> vars = spec.vars;
    for (const auto& [name, sort] : prog.params) {
        for (const QualifiedVar& v : spec.vars)
            if (v.name == name)
                throw std::invalid_argument("parameter " + name + " shadows a property variable");
        vars.push_back(QualifiedVar{name, sort, {}});
    }
    std::size_t nodes_used = 0;

    std::vector<int> vals(vars.size(), 0);
    while (true) {
        Assignment sigma;
        for (std::size_t i = 0; i < vars.size(); ++i) sigma[vars[i].name] = vals[i];
        if (check_qualifiers(vars, sigma)) {
            Assignment args;
            for (const auto& [name, sort] : prog.params) args[name] = sigma.at(name);

            std::vector<detail::PrefixNode> nodes;
            std::set<std::string> seen;
            detail::PrefixNode root;
            root.spec_states = {spec_sfa.initial};
            nodes.push_back(root);
            seen.insert(detail::prefix_key(root));

            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (++nodes_used > cfg.max_nodes) {
                    out.budget_hit = true;
                    out.detail = "search budget exhausted";
                    return out;
                }
                const detail::PrefixNode n = nodes[i];

                Trace prefix = detail::rebuild_prefix(nodes, static_cast<int>(i));
                RunResult rr = run_concrete(prog, prefix, args, apis);
                if (run_ok(rr)) {
                    const Trace& produced = std::get<RunOk>(rr).produced;
                    for (int q : n.spec_states) {
                        if (spec_sfa.accepting[q]) continue;  // prefix already violates
                        std::set<int> cur{q};
                        for (const Event& e : produced) cur = sfa_step(spec_sfa, cur, e, sigma);
                        bool hit = false;
                        for (int s : cur) hit = hit || spec_sfa.accepting[s];
                        if (hit) {
                            out.ok = true;
                            out.evidence = Evidence{sigma, prefix, produced};
                            return out;
                        }
                    }
                }

                if (n.depth >= cfg.max_prefix) continue;
                for (const Event& e : coherent_events(n.store, cfg.domain_size)) {
                    detail::PrefixNode next;
                    next.store = n.store;
                    if (e.op == "put") next.store[e.args[0]] = e.args[1];
                    next.spec_states = sfa_step(spec_sfa, n.spec_states, e, sigma);
                    if (next.spec_states.empty()) continue;
                    next.parent = static_cast<int>(i);
                    next.via = e;
                    next.depth = n.depth + 1;
                    if (seen.insert(detail::prefix_key(next)).second) nodes.push_back(std::move(next));
                }
            }
        }
        std::size_t i = vals.size();
        while (i > 0 && ++vals[i - 1] == cfg.domain_size) {
            vals[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    if (out.detail.empty()) out.detail = "exhausted: no violation within the bounds";
    return out;
}

}  // namespace witgen
