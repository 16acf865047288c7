#pragma once

// Symbolic finite automata over qualified event patterns.
//
// compile() builds an automaton from an expression by iterated partial
// derivatives: every state is labeled with an expression whose language
// is exactly the set of words accepted from that state, states are
// numbered in breadth-first discovery order, and edges carry a
// conjunction of event patterns (conjunctions arise from intersection).
// Statically infeasible edges are pruned and states that cannot reach
// an accepting state are trimmed (keeping the initial state and the
// relative numbering of survivors).
//
// find_word() decides emptiness by breadth-first search over pairs of
// (state, constraint store); the store accumulates the minimal atoms
// that justify each edge, so the search is exact over the finite
// domain and the first accepting node yields a shortest witness: a
// concrete trace together with an assignment of pattern variables.
//
// state_eliminate() computes, for a chosen state, an expression for the
// language of paths from the initial state to it (states are eliminated
// in descending id order, which keeps the results in a predictable
// shape).  enumerate_splits() pairs that prefix expression with the
// state's own label, giving all prefix/suffix decompositions of the
// language pivoted at a non-accepting state.

#include <deque>

#include "witgen/sre.hpp"

namespace witgen {

struct SfaEdge {
    int src = 0, dst = 0;
    std::vector<EventPattern> label;  // conjunction: an event must match all
};

struct Sfa {
    GuardEnv env;
    std::vector<Sre> states;  // id -> expression accepted from this state
    std::vector<SfaEdge> edges;
    std::vector<std::vector<int>> out;  // id -> edge indices
    std::vector<bool> accepting;
    int initial = 0;
};

inline std::string to_string(const std::vector<EventPattern>& label) {
    std::string s;
    for (size_t i = 0; i < label.size(); ++i) {
        if (i) s += " & ";
        s += to_string(label[i]);
    }
    return s;
}

namespace detail {

using LinRow = std::vector<std::pair<std::vector<EventPattern>, Sre>>;

inline void add_lin(LinRow& out, std::vector<EventPattern> label, Sre residual) {
    if (is_empty_sre(residual)) return;
    // normalize the conjunction: drop any-event when more specific
    // patterns are present, deduplicate, keep at least one pattern
    std::vector<EventPattern> norm;
    for (const EventPattern& p : label) {
        if (p.any) continue;
        if (std::find(norm.begin(), norm.end(), p) == norm.end()) norm.push_back(p);
    }
    if (norm.empty()) norm.push_back(EventPattern::any_event());
    for (auto& [l, r] : out)
        if (l == norm && sre_equal(r, residual)) return;
    out.emplace_back(std::move(norm), std::move(residual));
}

inline LinRow lin(const Sre& r) {
    LinRow out;
    switch (r->kind) {
        case SreKind::Empty:
        case SreKind::Epsilon: break;
        case SreKind::Lit:
            add_lin(out, {r->lit}, sre_epsilon());
            break;
        case SreKind::Concat: {
            for (auto& [g, d] : lin(r->left)) add_lin(out, g, sre_concat(d, r->right));
            if (r->left->nullable)
                for (auto& [g, d] : lin(r->right)) add_lin(out, g, d);
            break;
        }
        case SreKind::Union: {
            for (auto& [g, d] : lin(r->left)) add_lin(out, g, d);
            for (auto& [g, d] : lin(r->right)) add_lin(out, g, d);
            break;
        }
        case SreKind::Star: {
            for (auto& [g, d] : lin(r->left)) add_lin(out, g, sre_concat(d, r));
            break;
        }
        case SreKind::Inter: {
            for (auto& [g1, d1] : lin(r->left))
                for (auto& [g2, d2] : lin(r->right)) {
                    std::vector<EventPattern> g = g1;
                    g.insert(g.end(), g2.begin(), g2.end());
                    add_lin(out, std::move(g), sre_inter(d1, d2));
                }
            break;
        }
    }
    return out;
}

}  // namespace detail

inline Sfa compile(const Sre& r, const GuardEnv& env) {
    constexpr size_t kMaxStates = 20000;
    Sfa a;
    a.env = env;

    std::map<std::string, int> index;
    std::deque<int> work;
    auto state_id = [&](const Sre& s) {
        auto it = index.find(s->key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(a.states.size());
        index[s->key] = id;
        a.states.push_back(s);
        work.push_back(id);
        if (a.states.size() > kMaxStates) throw std::runtime_error("automaton too large");
        return id;
    };

    state_id(r);
    while (!work.empty()) {
        int src = work.front();
        work.pop_front();
        for (auto& [label, residual] : detail::lin(a.states[src])) {
            if (feasible_event_branches(label, ConstraintStore{}, env).empty()) continue;
            int dst = state_id(residual);
            a.edges.push_back({src, dst, label});
        }
    }

    // trim: keep states that reach an accepting state, plus the initial
    int n = static_cast<int>(a.states.size());
    std::vector<bool> reach(n, false);
    for (int i = 0; i < n; ++i) reach[i] = a.states[i]->nullable;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const SfaEdge& e : a.edges)
            if (reach[e.dst] && !reach[e.src]) {
                reach[e.src] = true;
                changed = true;
            }
    }
    reach[a.initial] = true;

    std::vector<int> remap(n, -1);
    std::vector<Sre> kept;
    for (int i = 0; i < n; ++i)
        if (reach[i]) {
            remap[i] = static_cast<int>(kept.size());
            kept.push_back(a.states[i]);
        }
    std::vector<SfaEdge> kept_edges;
    for (SfaEdge& e : a.edges)
        if (reach[e.src] && reach[e.dst])
            kept_edges.push_back({remap[e.src], remap[e.dst], std::move(e.label)});
    a.states = std::move(kept);
    a.edges = std::move(kept_edges);
    a.initial = remap[a.initial];

    n = static_cast<int>(a.states.size());
    a.accepting.assign(n, false);
    for (int i = 0; i < n; ++i) a.accepting[i] = a.states[i]->nullable;
    a.out.assign(n, {});
    for (size_t i = 0; i < a.edges.size(); ++i) a.out[a.edges[i].src].push_back(static_cast<int>(i));
    return a;
}

inline Sfa intersect(const Sfa& a, const Sfa& b) {
    if (a.env.domain_size != b.env.domain_size)
        throw std::logic_error("intersect: domain size mismatch");
    return compile(sre_inter(a.states[a.initial], b.states[b.initial]), a.env);
}

// ---------------------------------------------------------------------------
// Concrete simulation

inline std::set<int> sfa_step(const Sfa& a, const std::set<int>& states, const Event& e,
                              const Assignment& sigma) {
    std::set<int> next;
    for (int s : states)
        for (int ei : a.out[s]) {
            const SfaEdge& edge = a.edges[ei];
            bool all = true;
            for (const EventPattern& p : edge.label)
                if (!match_concrete(p, e, sigma, a.env.match)) {
                    all = false;
                    break;
                }
            if (all) next.insert(edge.dst);
        }
    return next;
}

inline bool sfa_accepts(const Sfa& a, const Trace& t, const Assignment& sigma) {
    std::set<int> cur{a.initial};
    for (const Event& e : t) {
        cur = sfa_step(a, cur, e, sigma);
        if (cur.empty()) return false;
    }
    for (int s : cur)
        if (a.accepting[s]) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Emptiness and witnesses

// All events over the environment's operations and domain, in a fixed
// order: operations as listed, argument tuples lexicographic, result
// values innermost.
inline std::vector<Event> enumerate_events(const GuardEnv& env) {
    std::vector<Event> out;
    for (const ApiOp& op : env.ops) {
        std::vector<int> args(op.arity, 0);
        while (true) {
            if (op.has_result) {
                for (int r = 0; r < env.domain_size; ++r)
                    out.push_back(Event{op.op, args, r});
            } else {
                out.push_back(Event{op.op, args, std::nullopt});
            }
            int i = op.arity - 1;
            for (; i >= 0; --i) {
                if (++args[i] < env.domain_size) break;
                args[i] = 0;
            }
            if (i < 0) break;
        }
    }
    return out;
}

// First event (in enumerate_events order) matching every pattern in the
// conjunction under sigma.
inline std::optional<Event> concrete_event(const std::vector<EventPattern>& label,
                                           const Assignment& sigma, const GuardEnv& env) {
    for (const Event& e : enumerate_events(env)) {
        bool all = true;
        for (const EventPattern& p : label)
            if (!match_concrete(p, e, sigma, env.match)) {
                all = false;
                break;
            }
        if (all) return e;
    }
    return std::nullopt;
}

struct SfaWitness {
    Trace trace;
    Assignment sigma;
    ConstraintStore store;
    std::vector<int> path;  // states visited, initial first
};

inline std::optional<SfaWitness> find_word(const Sfa& a, const ConstraintStore& seed = {}) {
    constexpr size_t kMaxNodes = 500000;
    struct Node {
        int state;
        ConstraintStore store;
        int parent, via_edge;
    };
    std::vector<Node> nodes;
    std::set<std::pair<int, std::string>> visited;
    auto push = [&](int state, ConstraintStore store, int parent, int via_edge) {
        auto key = std::make_pair(state, store.key());
        if (!visited.insert(key).second) return;
        nodes.push_back({state, std::move(store), parent, via_edge});
        if (nodes.size() > kMaxNodes) throw std::runtime_error("emptiness search too large");
    };
    if (a.states.empty() || !satisfiable(seed, a.env.domain_size)) return std::nullopt;
    push(a.initial, seed, -1, -1);

    for (size_t i = 0; i < nodes.size(); ++i) {
        int state = nodes[i].state;
        ConstraintStore store = nodes[i].store;  // copy: nodes may reallocate
        if (a.accepting[state]) {
            std::vector<int> edge_seq;
            std::vector<int> path{state};
            for (int at = static_cast<int>(i); nodes[at].parent >= 0; at = nodes[at].parent) {
                edge_seq.push_back(nodes[at].via_edge);
                path.push_back(nodes[nodes[at].parent].state);
            }
            std::reverse(edge_seq.begin(), edge_seq.end());
            std::reverse(path.begin(), path.end());

            auto sigma = find_assignment(store, a.env.domain_size);
            assert(sigma);
            // variables mentioned only in labels are unconstrained
            for (int ei : edge_seq)
                for (const EventPattern& p : a.edges[ei].label) {
                    auto touch = [&](const ArgConstraint& c) {
                        if (c.kind != ArgConstraint::Kind::Wildcard && c.term.is_var)
                            sigma->emplace(c.term.name, 0);
                    };
                    for (const ArgConstraint& c : p.args) touch(c);
                    if (p.result) touch(*p.result);
                }

            SfaWitness w;
            w.sigma = *sigma;
            w.store = store;
            w.path = path;
            for (int ei : edge_seq) {
                auto e = concrete_event(a.edges[ei].label, w.sigma, a.env);
                assert(e);
                w.trace.push_back(*e);
            }
            return w;
        }
        for (int ei : a.out[state]) {
            for (ConstraintStore& br :
                 feasible_event_branches(a.edges[ei].label, store, a.env))
                push(a.edges[ei].dst, std::move(br), static_cast<int>(i), ei);
        }
    }
    return std::nullopt;
}

inline bool is_empty(const Sfa& a) { return !find_word(a).has_value(); }

// ---------------------------------------------------------------------------
// Prefix languages and splits

namespace detail {

inline Sre label_sre(const std::vector<EventPattern>& label) {
    Sre r = sre_lit(label[0]);
    for (size_t i = 1; i < label.size(); ++i) r = sre_inter(r, sre_lit(label[i]));
    return r;
}

}  // namespace detail

// Expression for the paths from the initial state to `target`, computed
// by eliminating all other states in descending id order.
inline Sre state_eliminate(const Sfa& a, int target) {
    int n = static_cast<int>(a.states.size());
    std::vector<std::vector<Sre>> m(n, std::vector<Sre>(n, sre_empty()));
    for (const SfaEdge& e : a.edges)
        m[e.src][e.dst] = sre_union(m[e.src][e.dst], detail::label_sre(e.label));

    for (int s = n - 1; s >= 0; --s) {
        if (s == a.initial || s == target) continue;
        Sre loop = sre_star(m[s][s]);
        for (int i = 0; i < n; ++i) {
            if (i == s || is_empty_sre(m[i][s])) continue;
            for (int j = 0; j < n; ++j) {
                if (j == s || is_empty_sre(m[s][j])) continue;
                m[i][j] = sre_union(m[i][j], sre_concat(sre_concat(m[i][s], loop), m[s][j]));
            }
        }
        for (int i = 0; i < n; ++i) m[i][s] = m[s][i] = sre_empty();
    }

    if (target == a.initial) return sre_star(m[a.initial][a.initial]);
    Sre head = sre_concat(sre_star(m[a.initial][a.initial]), m[a.initial][target]);
    Sre back = sre_concat(m[target][a.initial], head);
    return sre_concat(head, sre_star(sre_union(m[target][target], back)));
}

struct Split {
    int state = 0;
    Sre prefix;  // language of paths from the initial state to `state`
    Sre suffix;  // language accepted from `state`
};

// Prefix/suffix decompositions pivoted at each non-accepting state, in
// state id (breadth-first) order.
inline std::vector<Split> enumerate_splits(const Sfa& a) {
    std::vector<Split> out;
    for (int q = 0; q < static_cast<int>(a.states.size()); ++q) {
        if (a.accepting[q]) continue;
        out.push_back({q, state_eliminate(a, q), a.states[q]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Export

inline std::string to_dot(const Sfa& a) {
    auto esc = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out;
    };
    std::string d = "digraph sfa {\n  rankdir=LR;\n  start [shape=point];\n";
    for (size_t i = 0; i < a.states.size(); ++i) {
        d += "  s" + std::to_string(i) + " [shape=" +
             (a.accepting[i] ? "doublecircle" : "circle") + ", label=\"s" + std::to_string(i) +
             "\", tooltip=\"" + esc(to_string(a.states[i])) + "\"];\n";
    }
    d += "  start -> s" + std::to_string(a.initial) + ";\n";
    for (const SfaEdge& e : a.edges) {
        d += "  s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) + " [label=\"" +
             esc(to_string(e.label)) + "\"];\n";
    }
    d += "}\n";
    return d;
}

}  // namespace witgen
