#pragma once

// Witness inference.
//
// A violation hypothesis is a split of the property automaton at a
// non-accepting state: the environment provides a trace in the prefix
// language, the program must then produce events completing the suffix
// language.  The engine walks the program call by call, abducing
// equalities between program names and property variables wherever the
// product of the evolving context with a call's requirement needs them,
// and consuming the suffix expression with symbolic derivatives.  A
// branch survives to a judgment only if the context stays nonempty, the
// suffix is fully consumed, the call-local names can be eliminated, and
// a concrete evidence search confirms the result.  The returned
// judgment is therefore always backed by an actual run.
//
// Abduction branches keep only the equalities a product path commits;
// the disequalities a path picks to thread complements are choices
// about the environment trace, not about the variables, and are
// rediscovered by the emptiness check and the evidence search.

#include <chrono>

#include "witgen/oracle.hpp"

namespace witgen {

struct InferConfig {
    int domain_size = 4;
    int max_hypotheses = 16;
    int max_branches = 10000;  // decision points across the whole search
    int timeout_ms = 10000;    // wall clock, 0 disables
    MatchOptions match;
    OracleConfig oracle;                   // evidence search bounds (domain is synced)
    std::size_t max_product_nodes = 100000;  // per-call nonemptiness walk cap
};

// A split of the property automaton plus the property variables it
// constrains.
struct Hypothesis {
    Split split;
    std::vector<QualifiedVar> vars;
};

inline std::vector<Hypothesis> enumerate_hypotheses(const SpecFile& spec, const GuardEnv& env) {
    std::vector<Hypothesis> out;
    for (const Split& s : enumerate_splits(compile(spec.regex, env)))
        out.push_back(Hypothesis{s, spec.vars});
    return out;
}

struct InferStats {
    int hypotheses_tried = 0;
    int branches = 0;
    bool budget_hit = false;  // some bound stopped the search before exhaustion
    std::string stop_reason;
    std::int64_t validate_ms = 0;
};

struct WitnessResult {
    bool found = false;
    Hypothesis hypothesis;
    Judgment judgment;
    std::vector<Atom> abduced;  // atoms added to the qualifier store, pre-elimination
    ConstraintStore store;      // constraint store after local elimination
    Evidence evidence;
    InferStats stats;
};

namespace detail {

// Collects the abduction branches of a context automaton: for every
// store reachable at an accepting state, the equalities it added on top
// of `seed`.  Branches whose new equalities touch a preferred name (the
// property variables) come first, then the remaining alignments in
// breadth-first order, and the unchanged store last.
inline std::vector<ConstraintStore> context_branches(const Sfa& a, const ConstraintStore& seed,
                                                     const std::set<std::string>& preferred,
                                                     std::size_t cap, bool* truncated) {
    std::vector<ConstraintStore> out;
    if (a.states.empty() || !satisfiable(seed, a.env.domain_size)) return out;
    struct Node {
        int state;
        ConstraintStore store;
    };
    std::vector<Node> nodes{{a.initial, seed}};
    std::set<std::pair<int, std::string>> visited{{a.initial, seed.key()}};
    std::set<std::string> found;
    auto note = [&](int state, const ConstraintStore& st) {
        if (!a.accepting[state]) return;
        std::vector<Atom> ext;
        for (const Atom& at : st.atoms)
            if (at.is_eq && !seed.contains(at)) ext.push_back(at);
        ConstraintStore cand = seed.with_all(ext);
        if (found.insert(cand.key()).second) out.push_back(std::move(cand));
    };
    note(a.initial, seed);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.size() > cap) {
            if (truncated) *truncated = true;
            break;
        }
        const Node cur = nodes[i];  // deliberate copy: nodes grows below
        for (int ei : a.out[cur.state])
            for (ConstraintStore& br : feasible_event_branches(a.edges[ei].label, cur.store, a.env)) {
                auto key = std::make_pair(a.edges[ei].dst, br.key());
                if (!visited.insert(key).second) continue;
                note(a.edges[ei].dst, br);
                nodes.push_back({a.edges[ei].dst, std::move(br)});
            }
    }
    auto score = [&](const ConstraintStore& s) {
        int n = 0;
        for (const Atom& at : s.atoms)
            if (at.is_eq && !seed.contains(at) &&
                ((at.lhs.is_var && preferred.count(at.lhs.name)) ||
                 (at.rhs.is_var && preferred.count(at.rhs.name))))
                ++n;
        return n;
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const ConstraintStore& x, const ConstraintStore& y) {
                         return score(x) > score(y);
                     });
    std::stable_partition(out.begin(), out.end(),
                          [&](const ConstraintStore& s) { return !(s == seed); });
    return out;
}

struct InferEngine {
    InferEngine(const Program& p, const ApiTable& a, const SpecFile& s, const InferConfig& c)
        : prog(p), apis(a), spec(s), cfg(c) {}

    const Program& prog;
    const ApiTable& apis;
    const SpecFile& spec;
    const InferConfig& cfg;
    GuardEnv env;
    OracleConfig ocfg;
    ConstraintStore seed;
    std::chrono::steady_clock::time_point deadline;
    bool has_deadline = false;
    InferStats stats;
    const Hypothesis* hyp = nullptr;

    bool over_budget() {
        if (stats.branches > cfg.max_branches) {
            stats.budget_hit = true;
            if (stats.stop_reason.empty()) stats.stop_reason = "branch budget exhausted";
            return true;
        }
        if (has_deadline && std::chrono::steady_clock::now() > deadline) {
            stats.budget_hit = true;
            if (stats.stop_reason.empty()) stats.stop_reason = "timed out";
            return true;
        }
        return false;
    }

    struct Frame {
        Sre ctx;        // context so far: split prefix, requirements, emitted events
        Sre remainder;  // unconsumed part of the split suffix
        ConstraintStore store;
        std::vector<EventPattern> produced;
        std::vector<Sre> pre_ctx;  // context snapshot before each produced event
        int first_progress = -1;   // produced index that first advanced the remainder
        std::vector<std::string> locals;
    };

    std::optional<WitnessResult> run(const Hypothesis& h) {
        hyp = &h;
        Frame f;
        f.ctx = h.split.prefix;
        f.remainder = h.split.suffix;
        f.store = seed;
        return step(0, f);
    }

    std::optional<WitnessResult> step(std::size_t idx, const Frame& f) {
        ++stats.branches;
        if (over_budget()) return std::nullopt;
        if (idx == prog.calls.size()) return leaf(f);

        const Call& c = prog.calls[idx];
        const ApiSignature* api = apis.find(c.op);
        if (!api) throw std::logic_error("infer: unknown operation " + c.op);

        Subst inst;
        for (std::size_t i = 0; i < api->params.size(); ++i) inst[api->params[i].first] = c.args[i];
        std::string binder = c.bind;
        if (binder.empty() && api->has_result()) binder = "r@" + std::to_string(idx);

        // a ghost the signature pins to the result takes the binder's name
        std::string pinned;
        for (const Atom& a : api->ensures) {
            if (!a.is_eq || !a.lhs.is_var || !a.rhs.is_var) continue;
            auto ghost_named = [&](const std::string& n) {
                for (const auto& [g, sort] : api->ghosts)
                    if (g == n) return true;
                return false;
            };
            if (a.lhs.name == "nu" && ghost_named(a.rhs.name)) pinned = a.rhs.name;
            if (a.rhs.name == "nu" && ghost_named(a.lhs.name)) pinned = a.lhs.name;
        }

        std::vector<std::string> locals = f.locals;
        if (!binder.empty()) locals.push_back(binder);
        for (const auto& [g, sort] : api->ghosts) {
            std::string gname =
                (g == pinned && !binder.empty()) ? binder : g + "@" + std::to_string(idx);
            inst[g] = Term::var(gname, sort);
            if (gname != binder) locals.push_back(gname);
        }

        // result qualifier, with nu bound to the binder
        std::vector<Atom> ens;
        if (!binder.empty()) {
            Subst s = inst;
            s["nu"] = Term::var(binder, api->ret);
            for (const Atom& a : api->ensures) {
                Term l = subst_term(a.lhs, s), r = subst_term(a.rhs, s);
                if (l == r) {
                    if (a.is_eq) continue;   // trivially true
                    return std::nullopt;     // nu != nu after collapse
                }
                if (!l.is_var && !r.is_var) {
                    if ((l.value == r.value) == a.is_eq) continue;
                    return std::nullopt;
                }
                ens.emplace_back(a.is_eq, l, r);
            }
        }
        ConstraintStore store1 = f.store.with_all(ens);
        if (!satisfiable(store1, env.domain_size)) return std::nullopt;

        Sre req = subst_sre(api->requires_ctx, inst);
        Sre ctx1 = sre_inter(f.ctx, req);

        std::set<std::string> preferred;
        for (const QualifiedVar& v : spec.vars) preferred.insert(v.name);
        bool truncated = false;
        std::vector<ConstraintStore> branches = context_branches(
            compile(ctx1, env), store1, preferred, cfg.max_product_nodes, &truncated);
        if (truncated) {
            stats.budget_hit = true;
            if (stats.stop_reason.empty()) stats.stop_reason = "context product walk truncated";
        }
        if (branches.empty()) return std::nullopt;

        EventPattern eff = subst_pattern(api->effect, inst);
        Sre ctx2 = sre_concat(ctx1, sre_lit(eff));

        for (const ConstraintStore& st2 : branches) {
            for (const SymbolicBranch& sb : deriv_symbolic(f.remainder, eff, st2, env)) {
                Frame g;
                g.ctx = ctx2;
                g.remainder = sb.residual;
                g.store = sb.store;
                g.produced = f.produced;
                g.produced.push_back(eff);
                g.pre_ctx = f.pre_ctx;
                g.pre_ctx.push_back(ctx1);
                bool progressed = !sre_equal(sb.residual, f.remainder);
                g.first_progress =
                    f.first_progress >= 0
                        ? f.first_progress
                        : (progressed ? static_cast<int>(g.produced.size()) - 1 : -1);
                g.locals = locals;
                if (auto r = step(idx + 1, g)) return r;
                if (over_budget()) return std::nullopt;
            }
        }
        return std::nullopt;
    }

    std::optional<WitnessResult> leaf(const Frame& f) {
        if (f.first_progress < 0 || !nullable(f.remainder)) return std::nullopt;
        if (!satisfiable(f.store, env.domain_size)) return std::nullopt;
        if (!find_word(compile(f.ctx, env), f.store)) return std::nullopt;

        // judgment context: everything known before the first event that
        // advanced the suffix; judgment effect: that event and the rest
        Sre ctx_snapshot = f.pre_ctx[f.first_progress];
        Sre effect = sre_lit(f.produced[f.first_progress]);
        for (std::size_t i = f.first_progress + 1; i < f.produced.size(); ++i)
            effect = sre_concat(effect, sre_lit(f.produced[i]));

        std::vector<Term> kept;
        std::vector<std::pair<std::string, Sort>> ordered;
        for (const QualifiedVar& v : spec.vars) {
            kept.push_back(Term::var(v.name, v.sort));
            ordered.emplace_back(v.name, v.sort);
        }
        for (const auto& [name, sort] : prog.params) {
            kept.push_back(Term::var(name, sort));
            ordered.emplace_back(name, sort);
        }
        for (int c = 0; c < env.domain_size; ++c) kept.push_back(Term::constant(c));

        auto elim = eliminate_locals(f.store, ctx_snapshot, effect, f.locals, kept,
                                     env.domain_size);
        if (!elim) return std::nullopt;

        Judgment j;
        j.vars = project_context(elim->store, ordered, env.domain_size);
        j.context = elim->context;
        j.effect = elim->effect;

        auto t0 = std::chrono::steady_clock::now();
        ValidationOutcome v = validate_search(prog, apis, j.vars, j.context, j.effect,
                                              hyp->split.suffix, spec.regex, ocfg);
        stats.validate_ms += std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        if (!v.ok) {
            if (v.budget_hit) {
                stats.budget_hit = true;
                if (stats.stop_reason.empty()) stats.stop_reason = "evidence search truncated";
            }
            return std::nullopt;
        }

        WitnessResult out;
        out.found = true;
        out.hypothesis = *hyp;
        out.judgment = j;
        for (const Atom& a : f.store.atoms)
            if (!seed.contains(a)) out.abduced.push_back(a);
        out.store = elim->store;
        out.evidence = v.evidence;
        return out;
    }
};

}  // namespace detail

// Searches the hypotheses in order and returns the first judgment whose
// evidence search succeeds.  Throws std::invalid_argument when program
// names shadow property variables; every other failure is reported in
// the stats.
inline WitnessResult infer_witness(const Program& prog, const ApiTable& apis,
                                   const SpecFile& spec, const InferConfig& cfg = {}) {
    std::set<std::string> reserved;
    for (const QualifiedVar& v : spec.vars) reserved.insert(v.name);
    for (const auto& [name, sort] : prog.params)
        if (reserved.count(name))
            throw std::invalid_argument("parameter " + name + " shadows a property variable");
    for (const Call& c : prog.calls)
        if (!c.bind.empty() && reserved.count(c.bind))
            throw std::invalid_argument("binder " + c.bind + " shadows a property variable");

    detail::InferEngine eng(prog, apis, spec, cfg);
    eng.env = apis.guard_env(cfg.domain_size, cfg.match);
    eng.ocfg = cfg.oracle;
    eng.ocfg.domain_size = cfg.domain_size;

    std::vector<Atom> seed_atoms;
    for (const QualifiedVar& v : spec.vars) {
        Subst s;
        s["nu"] = Term::var(v.name, v.sort);
        for (const Atom& a : v.qual)
            seed_atoms.emplace_back(a.is_eq, subst_term(a.lhs, s), subst_term(a.rhs, s));
    }
    eng.seed = ConstraintStore{}.with_all(seed_atoms);

    WitnessResult none;
    if (!satisfiable(eng.seed, cfg.domain_size)) {
        none.stats.stop_reason = "variable qualifiers are unsatisfiable";
        return none;
    }
    if (cfg.timeout_ms > 0) {
        eng.deadline =
            std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg.timeout_ms);
        eng.has_deadline = true;
    }

    std::vector<Hypothesis> hyps = enumerate_hypotheses(spec, eng.env);
    std::size_t limit = hyps.size();
    if (limit > static_cast<std::size_t>(cfg.max_hypotheses)) {
        limit = cfg.max_hypotheses;
        eng.stats.budget_hit = true;
        eng.stats.stop_reason = "hypothesis budget exhausted";
    }
    for (std::size_t i = 0; i < limit; ++i) {
        ++eng.stats.hypotheses_tried;
        if (auto r = eng.run(hyps[i])) {
            r->stats = eng.stats;
            return *r;
        }
        if (eng.over_budget()) break;
    }
    none.stats = eng.stats;
    if (none.stats.stop_reason.empty())
        none.stats.stop_reason = "no hypothesis yields a validated witness";
    return none;
}

}  // namespace witgen
