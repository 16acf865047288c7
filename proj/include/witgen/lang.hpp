#pragma once

// Client programs and API signatures.
//
// Programs are straight-line A-normal form: a sequence of let-bound API
// calls ending in a final call or variable.  An API signature carries the
// pieces of its specification type: ghost variables, a required context
// expression over the trace so far, an ensures qualifier for the result
// value (over `nu`), and a single-literal effect pattern describing the
// event the call appends.
//
// run_concrete replays a trace prefix into a key-value store and then
// executes the program: each call appends exactly one event.  A `get` on
// a key the store does not bind is stuck, which is reported as such (the
// context hypothesis was not met) rather than as an error.

#include <variant>

#include "witgen/sre.hpp"

namespace witgen {

struct QualifiedVar {
    std::string name;
    Sort sort = Sort::Addr;
    std::vector<Atom> qual;  // atoms over `nu`, earlier variables, constants
};

struct ApiSignature {
    std::string name;
    std::vector<std::pair<std::string, Sort>> params;
    Sort ret = Sort::Unit;
    std::vector<std::pair<std::string, Sort>> ghosts;
    Sre requires_ctx;          // context expression; `.*` when unconstrained
    std::vector<Atom> ensures; // result qualifier over `nu`, ghosts, params
    EventPattern effect;       // single literal, one event per call

    bool has_result() const { return ret != Sort::Unit; }
};

struct ApiTable {
    std::vector<ApiSignature> apis;

    const ApiSignature* find(const std::string& name) const {
        for (const ApiSignature& a : apis)
            if (a.name == name) return &a;
        return nullptr;
    }
    GuardEnv guard_env(int domain_size, MatchOptions match = {}) const {
        GuardEnv env;
        env.domain_size = domain_size;
        env.match = match;
        for (const ApiSignature& a : apis)
            env.ops.push_back(ApiOp{a.name, static_cast<int>(a.params.size()), a.has_result()});
        return env;
    }
};

// Named trace property: declared variables with result-style qualifiers
// (`nu` in a qualifier refers to the variable being declared) and a
// symbolic regular expression over them.
struct SpecFile {
    std::string name;
    std::vector<QualifiedVar> vars;
    Sre regex;
};

struct Call {
    std::string bind;  // empty for the final expression position
    std::string op;
    std::vector<Term> args;
};

struct Program {
    std::string name;
    std::vector<std::pair<std::string, Sort>> params;
    std::vector<Call> calls;
    std::string final_var;  // set when the final expression is a variable

    bool returns_var() const { return !final_var.empty(); }
};

inline std::string to_string(const Call& c) {
    std::string s = c.op;
    for (const Term& t : c.args) s += " " + to_string(t);
    return s;
}

inline std::string to_string(const Program& p) {
    std::string s = "fun " + p.name + "(";
    for (size_t i = 0; i < p.params.size(); ++i) {
        if (i) s += ", ";
        s += p.params[i].first + ": " + to_string(p.params[i].second);
    }
    s += ") =";
    for (size_t i = 0; i < p.calls.size(); ++i) {
        const Call& c = p.calls[i];
        bool last = i + 1 == p.calls.size() && p.final_var.empty();
        s += last ? " " + to_string(c) : " let " + c.bind + " = " + to_string(c) + " in";
    }
    if (p.returns_var()) s += " " + p.final_var;
    return s;
}

// ---------------------------------------------------------------------------
// Concrete execution

using Store = std::map<int, int>;

struct RunOk {
    Trace produced;
    Store store;
    std::optional<int> result;  // value of the final expression, if any
};
struct RunStuck {
    size_t call_index = 0;
    std::string detail;
};
using RunResult = std::variant<RunOk, RunStuck>;

inline bool run_ok(const RunResult& r) { return std::holds_alternative<RunOk>(r); }

// Replays `prefix` into an empty store: puts update bindings, gets do not
// change state.  Prefixes produced by the trace enumerator are coherent
// by construction; replay does not re-check get results.
inline Store replay(const Trace& prefix) {
    Store store;
    for (const Event& e : prefix)
        if (e.op == "put" && e.args.size() == 2) store[e.args[0]] = e.args[1];
    return store;
}

inline RunResult run_concrete(const Program& prog, const Trace& prefix, const Assignment& args,
                              const ApiTable& apis) {
    Store store = replay(prefix);
    std::map<std::string, int> envv;
    for (auto& [name, sort] : prog.params) {
        auto it = args.find(name);
        if (it == args.end()) throw std::logic_error("run_concrete: missing argument " + name);
        envv[name] = it->second;
    }
    auto value_of = [&](const Term& t) {
        if (!t.is_var) return t.value;
        auto it = envv.find(t.name);
        if (it == envv.end()) throw std::logic_error("run_concrete: unbound variable " + t.name);
        return it->second;
    };

    Trace produced;
    std::optional<int> last_result;
    for (size_t i = 0; i < prog.calls.size(); ++i) {
        const Call& c = prog.calls[i];
        const ApiSignature* api = apis.find(c.op);
        if (!api) throw std::logic_error("run_concrete: unknown operation " + c.op);
        if (api->params.size() != c.args.size())
            throw std::logic_error("run_concrete: arity mismatch for " + c.op);

        std::vector<int> vals;
        for (const Term& t : c.args) vals.push_back(value_of(t));

        Event e;
        e.op = c.op;
        e.args = vals;
        last_result.reset();
        if (c.op == "get") {
            auto it = store.find(vals[0]);
            if (it == store.end())
                return RunStuck{i, "get on unbound key " + std::to_string(vals[0])};
            e.result = it->second;
            last_result = it->second;
        } else if (c.op == "put") {
            store[vals[0]] = vals[1];
        } else if (api->has_result()) {
            // only the store operations have execution semantics
            return RunStuck{i, "operation " + c.op + " has no concrete semantics"};
        }
        produced.push_back(e);
        if (!c.bind.empty() && e.result) envv[c.bind] = *e.result;
    }

    std::optional<int> result = last_result;
    if (prog.returns_var()) {
        auto it = envv.find(prog.final_var);
        if (it == envv.end()) throw std::logic_error("run_concrete: unbound result variable");
        result = it->second;
    }
    return RunOk{std::move(produced), std::move(store), result};
}

}  // namespace witgen
