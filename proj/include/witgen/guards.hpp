#pragma once

// Equality logic over a finite address domain, and the qualified event
// patterns built on top of it.
//
// Terms are variables or integer constants.  Atoms are equalities and
// disequalities between terms.  A ConstraintStore is a conjunction of
// atoms; satisfiability and entailment are decided exactly over the
// configured domain {0, ..., domain_size-1} by merging equality classes
// and then searching for a consistent assignment of classes to domain
// values (the search subsumes the pigeonhole bound and is complete for
// disequality cycles that a clique count would miss).
//
// EventPattern describes sets of concrete events: an operation name, one
// constraint per argument position (wildcard, =term, !=term), an optional
// constraint on the result position, an any-event form `.`, and a
// single-event complement `~p`.  Complement is interpreted over all
// events by default; MatchOptions::complement_within_op restricts it to
// events of the same operation.
//
// unify_symbolic(p, q, store) returns the minimal extensions of `store`
// under which a single event can satisfy both patterns.  It is built on
// feasible_event_branches, which handles arbitrary conjunctions of
// patterns and is reused by the automata product and by symbolic
// derivatives.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace witgen {

enum class Sort { Addr, Int, Unit };

inline const char* to_string(Sort s) {
    switch (s) {
        case Sort::Addr: return "addr";
        case Sort::Int: return "int";
        case Sort::Unit: return "unit";
    }
    return "addr";
}

struct SortError : std::runtime_error {
    explicit SortError(const std::string& what) : std::runtime_error(what) {}
};

// Variable or integer constant.  Variables compare by name; the sort is
// carried for error reporting and does not participate in identity.
struct Term {
    bool is_var = false;
    std::string name;     // variable name when is_var
    int value = 0;        // constant value when !is_var
    Sort sort = Sort::Addr;

    static Term var(std::string n, Sort s = Sort::Addr) {
        Term t;
        t.is_var = true;
        t.name = std::move(n);
        t.sort = s;
        return t;
    }
    static Term constant(int v, Sort s = Sort::Addr) {
        Term t;
        t.is_var = false;
        t.value = v;
        t.sort = s;
        return t;
    }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.is_var != b.is_var) return false;
        return a.is_var ? a.name == b.name : a.value == b.value;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) {
        if (a.is_var != b.is_var) return a.is_var < b.is_var;  // constants first
        return a.is_var ? a.name < b.name : a.value < b.value;
    }
};

inline std::string to_string(const Term& t) {
    return t.is_var ? t.name : std::to_string(t.value);
}

// Equality or disequality between two terms, normalized so the smaller
// term is on the left.  Unit-sorted terms may only appear in trivially
// decided atoms; relating unit to addr/int is a sort error.
struct Atom {
    bool is_eq = true;
    Term lhs, rhs;

    Atom() = default;
    Atom(bool eq, Term a, Term b) : is_eq(eq), lhs(std::move(a)), rhs(std::move(b)) {
        if ((lhs.sort == Sort::Unit) != (rhs.sort == Sort::Unit))
            throw SortError("atom relates unit and non-unit terms: " + to_string(lhs) +
                            (is_eq ? " = " : " != ") + to_string(rhs));
        if (rhs < lhs) std::swap(lhs, rhs);
    }
    static Atom eq(Term a, Term b) { return Atom(true, std::move(a), std::move(b)); }
    static Atom neq(Term a, Term b) { return Atom(false, std::move(a), std::move(b)); }

    Atom negated() const {
        Atom a = *this;
        a.is_eq = !is_eq;
        return a;
    }

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.is_eq == b.is_eq && a.lhs == b.lhs && a.rhs == b.rhs;
    }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.lhs != b.lhs) return a.lhs < b.lhs;
        if (a.rhs != b.rhs) return a.rhs < b.rhs;
        return a.is_eq > b.is_eq;  // equalities before disequalities
    }
};

inline std::string to_string(const Atom& a) {
    return to_string(a.lhs) + (a.is_eq ? " = " : " != ") + to_string(a.rhs);
}

// Conjunction of atoms, kept sorted and deduplicated so stores have a
// canonical text form usable as a hash key.
struct ConstraintStore {
    std::vector<Atom> atoms;

    ConstraintStore() = default;
    explicit ConstraintStore(std::vector<Atom> as) : atoms(std::move(as)) { normalize(); }

    void normalize() {
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    }
    bool contains(const Atom& a) const {
        return std::binary_search(atoms.begin(), atoms.end(), a);
    }
    ConstraintStore with(const Atom& a) const {
        ConstraintStore s = *this;
        s.atoms.push_back(a);
        s.normalize();
        return s;
    }
    ConstraintStore with_all(const std::vector<Atom>& as) const {
        ConstraintStore s = *this;
        s.atoms.insert(s.atoms.end(), as.begin(), as.end());
        s.normalize();
        return s;
    }
    std::string key() const {
        std::string k;
        for (const Atom& a : atoms) {
            k += to_string(a);
            k += ';';
        }
        return k;
    }
    friend bool operator==(const ConstraintStore& a, const ConstraintStore& b) {
        return a.atoms == b.atoms;
    }
};

inline std::string to_string(const ConstraintStore& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.atoms.size(); ++i) {
        if (i) out += ", ";
        out += to_string(s.atoms[i]);
    }
    return out + "}";
}

using Assignment = std::map<std::string, int>;

namespace detail {

// Union-find over the terms of a store.
struct ClassIndex {
    std::vector<Term> terms;
    std::vector<int> parent;

    int id(const Term& t) {
        for (size_t i = 0; i < terms.size(); ++i)
            if (terms[i] == t) return static_cast<int>(i);
        terms.push_back(t);
        parent.push_back(static_cast<int>(terms.size()) - 1);
        return static_cast<int>(terms.size()) - 1;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(int a, int b) { parent[find(a)] = find(b); }
};

struct ClassModel {
    ClassIndex ix;
    std::vector<std::pair<int, int>> diseq;  // class-representative pairs
    bool contradiction = false;

    struct Cls {
        std::optional<int> constant;  // pinned value if the class holds a constant
        bool has_var = false;
    };
    std::map<int, Cls> classes;

    void build(const ConstraintStore& store) {
        for (const Atom& a : store.atoms) {
            if (a.lhs.sort == Sort::Unit) {
                // unit has a single value: u = u holds, u != u does not
                if (!a.is_eq) contradiction = true;
                continue;
            }
            int l = ix.id(a.lhs), r = ix.id(a.rhs);
            if (a.is_eq) ix.merge(l, r);
        }
        for (const Atom& a : store.atoms) {
            if (a.lhs.sort == Sort::Unit || a.is_eq) continue;
            diseq.emplace_back(ix.find(ix.id(a.lhs)), ix.find(ix.id(a.rhs)));
        }
        for (int i = 0; i < static_cast<int>(ix.terms.size()); ++i) {
            int rep = ix.find(i);
            Cls& c = classes[rep];
            const Term& t = ix.terms[i];
            if (t.is_var) {
                c.has_var = true;
            } else {
                if (c.constant && *c.constant != t.value) contradiction = true;
                c.constant = t.value;
            }
        }
        for (auto& [l, r] : diseq) {
            if (l == r) contradiction = true;
            auto cl = classes.find(l), cr = classes.find(r);
            if (cl->second.constant && cr->second.constant &&
                *cl->second.constant == *cr->second.constant)
                contradiction = true;
        }
    }
};

}  // namespace detail

// Finds an assignment of all variables in `store` to {0..domain_size-1}
// satisfying every atom, or nullopt.  Classes containing a constant are
// pinned to it; a class holding both a variable and an out-of-domain
// constant is unsatisfiable because variables only range over the domain.
inline std::optional<Assignment> find_assignment(const ConstraintStore& store, int domain_size) {
    detail::ClassModel m;
    m.build(store);
    if (m.contradiction) return std::nullopt;

    std::map<int, int> value;  // rep -> chosen value
    std::vector<int> open;     // unpinned classes, in representative order
    for (auto& [rep, cls] : m.classes) {
        if (cls.constant) {
            if (cls.has_var && (*cls.constant < 0 || *cls.constant >= domain_size))
                return std::nullopt;
            value[rep] = *cls.constant;
        } else {
            open.push_back(rep);
        }
    }

    auto consistent = [&](int rep, int v) {
        for (auto& [l, r] : m.diseq) {
            int other;
            if (l == rep) other = r;
            else if (r == rep) other = l;
            else continue;
            auto it = value.find(other);
            if (it != value.end() && it->second == v) return false;
        }
        return true;
    };

    std::vector<int> chosen(open.size(), -1);
    size_t i = 0;
    while (i < open.size()) {
        int rep = open[i];
        int v = chosen[i] + 1;
        while (v < domain_size && !consistent(rep, v)) ++v;
        if (v < domain_size) {
            chosen[i] = v;
            value[rep] = v;
            ++i;
        } else {
            chosen[i] = -1;
            value.erase(rep);
            if (i == 0) return std::nullopt;
            --i;
        }
    }

    Assignment out;
    for (int t = 0; t < static_cast<int>(m.ix.terms.size()); ++t) {
        const Term& term = m.ix.terms[t];
        if (term.is_var) out[term.name] = value.at(m.ix.find(t));
    }
    return out;
}

inline bool satisfiable(const ConstraintStore& store, int domain_size) {
    return find_assignment(store, domain_size).has_value();
}

// store must be satisfiable; decides store |= atom over the domain.
inline bool entails(const ConstraintStore& store, const Atom& atom, int domain_size) {
    if (!satisfiable(store, domain_size))
        throw std::logic_error("entails: store is unsatisfiable");
    if (atom.lhs.sort == Sort::Unit && atom.rhs.sort == Sort::Unit) return atom.is_eq;
    return !satisfiable(store.with(atom.negated()), domain_size);
}

// ---------------------------------------------------------------------------
// Events and event patterns

// One step of an execution trace: operation name, concrete argument
// addresses, and (for value-returning operations) a concrete result.
struct Event {
    std::string op;
    std::vector<int> args;
    std::optional<int> result;

    friend bool operator==(const Event& a, const Event& b) {
        return a.op == b.op && a.args == b.args && a.result == b.result;
    }
    friend bool operator<(const Event& a, const Event& b) {
        if (a.op != b.op) return a.op < b.op;
        if (a.args != b.args) return a.args < b.args;
        return a.result < b.result;
    }
};

using Trace = std::vector<Event>;

inline std::string to_string(const Event& e) {
    std::string s = "<";
    if (e.result) s += std::to_string(*e.result) + " <- ";
    s += e.op;
    for (int a : e.args) s += " " + std::to_string(a);
    return s + ">";
}

inline std::string to_string(const Trace& t) {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ";";
        s += to_string(t[i]);
    }
    return s;
}

struct ArgConstraint {
    enum class Kind { Wildcard, Eq, Neq };
    Kind kind = Kind::Wildcard;
    Term term;

    static ArgConstraint wildcard() { return {}; }
    static ArgConstraint eq(Term t) { return {Kind::Eq, std::move(t)}; }
    static ArgConstraint neq(Term t) { return {Kind::Neq, std::move(t)}; }

    friend bool operator==(const ArgConstraint& a, const ArgConstraint& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Wildcard) return true;
        return a.term == b.term;
    }
};

inline std::string to_string(const ArgConstraint& c) {
    switch (c.kind) {
        case ArgConstraint::Kind::Wildcard: return "_";
        case ArgConstraint::Kind::Eq: return to_string(c.term);
        case ArgConstraint::Kind::Neq: return "!" + to_string(c.term);
    }
    return "_";
}

// Qualified single-event pattern.  `any` matches every event.  `negated`
// matches exactly the events its body does not match; a negated pattern
// is never itself `any`.
struct EventPattern {
    bool any = false;
    bool negated = false;
    std::string op;
    std::vector<ArgConstraint> args;
    std::optional<ArgConstraint> result;

    static EventPattern any_event() {
        EventPattern p;
        p.any = true;
        return p;
    }
    EventPattern body() const {
        EventPattern p = *this;
        p.negated = false;
        return p;
    }
    EventPattern complemented() const {
        assert(!any);
        EventPattern p = *this;
        p.negated = !negated;
        return p;
    }

    friend bool operator==(const EventPattern& a, const EventPattern& b) {
        return a.any == b.any && a.negated == b.negated && a.op == b.op && a.args == b.args &&
               a.result == b.result;
    }
};

inline std::string to_string(const EventPattern& p) {
    if (p.any) return ".";
    std::string s = p.negated ? "~<" : "<";
    if (p.result) s += to_string(*p.result) + " <- ";
    s += p.op;
    for (const ArgConstraint& c : p.args) s += " " + to_string(c);
    return s + ">";
}

struct MatchOptions {
    bool complement_within_op = false;  // scope of `~p`; default: all events
};

inline int eval_term(const Term& t, const Assignment& sigma) {
    if (!t.is_var) return t.value;
    auto it = sigma.find(t.name);
    if (it == sigma.end())
        throw std::logic_error("unbound variable in pattern: " + t.name);
    return it->second;
}

inline bool arg_matches(const ArgConstraint& c, int v, const Assignment& sigma) {
    switch (c.kind) {
        case ArgConstraint::Kind::Wildcard: return true;
        case ArgConstraint::Kind::Eq: return v == eval_term(c.term, sigma);
        case ArgConstraint::Kind::Neq: return v != eval_term(c.term, sigma);
    }
    return true;
}

inline bool match_concrete(const EventPattern& p, const Event& e, const Assignment& sigma,
                           const MatchOptions& opts = {}) {
    if (p.any) return true;
    bool body = true;
    if (p.op != e.op || p.args.size() != e.args.size()) {
        body = false;
    } else {
        for (size_t i = 0; i < p.args.size() && body; ++i)
            body = arg_matches(p.args[i], e.args[i], sigma);
        if (body && p.result) body = e.result && arg_matches(*p.result, *e.result, sigma);
    }
    if (!p.negated) return body;
    if (opts.complement_within_op && p.op != e.op) return false;
    return !body;
}

// ---------------------------------------------------------------------------
// Operation signatures (shared alphabet for symbolic reasoning)

struct ApiOp {
    std::string op;
    int arity = 0;
    bool has_result = false;
};

// Environment needed to reason about pattern satisfiability: which
// operations exist (complements range over them), how many argument
// slots each has, and the domain size.
struct GuardEnv {
    std::vector<ApiOp> ops;
    int domain_size = 4;
    MatchOptions match;

    const ApiOp* find(const std::string& name) const {
        for (const ApiOp& o : ops)
            if (o.op == name) return &o;
        return nullptr;
    }
};

inline GuardEnv default_guard_env(int domain_size = 4) {
    return GuardEnv{{{"put", 2, false}, {"get", 1, true}}, domain_size, {}};
}

namespace detail {

// Conjunction of =/!= requirements on one event slot.
struct SlotCond {
    std::vector<Term> eqs, neqs;
};

// Minimal atom sets making one slot satisfiable by some domain value.
// With k distinct forbidden values and no pinned value, a free value
// exists iff k < domain_size; otherwise forbidden terms must be merged
// until fewer than domain_size distinct values remain.
inline std::vector<std::vector<Atom>> slot_atom_choices(const SlotCond& s, int domain_size) {
    std::vector<std::vector<Atom>> out;
    if (!s.eqs.empty()) {
        std::vector<Atom> atoms;
        const Term& rep = s.eqs[0];
        for (size_t i = 1; i < s.eqs.size(); ++i)
            if (!(rep == s.eqs[i])) atoms.push_back(Atom::eq(rep, s.eqs[i]));
        for (const Term& t : s.neqs)
            atoms.push_back(Atom::neq(rep, t));
        out.push_back(std::move(atoms));
        return out;
    }
    if (static_cast<int>(s.neqs.size()) < domain_size) {
        out.push_back({});
        return out;
    }
    const size_t n = s.neqs.size();
    std::vector<int> block(n, 0);
    std::vector<std::vector<Atom>> candidates;
    std::function<void(size_t, int)> rec = [&](size_t i, int nblocks) {
        if (i == n) {
            if (nblocks >= domain_size) return;
            std::vector<Atom> atoms;
            for (int b = 0; b < nblocks; ++b) {
                const Term* rep = nullptr;
                for (size_t j = 0; j < n; ++j) {
                    if (block[j] != b) continue;
                    if (!rep) rep = &s.neqs[j];
                    else if (!(*rep == s.neqs[j])) atoms.push_back(Atom::eq(*rep, s.neqs[j]));
                }
            }
            candidates.push_back(std::move(atoms));
            return;
        }
        for (int b = 0; b <= nblocks && b < domain_size; ++b) {
            block[i] = b;
            rec(i + 1, std::max(nblocks, b + 1));
        }
    };
    rec(0, 0);
    for (auto& c : candidates) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    for (size_t i = 0; i < candidates.size(); ++i) {
        bool minimal = true;
        for (size_t j = 0; j < candidates.size() && minimal; ++j) {
            if (i == j || candidates[j].size() >= candidates[i].size()) continue;
            minimal = !std::includes(candidates[i].begin(), candidates[i].end(),
                                     candidates[j].begin(), candidates[j].end());
        }
        if (minimal && std::find(out.begin(), out.end(), candidates[i]) == out.end())
            out.push_back(candidates[i]);
    }
    return out;
}

}  // namespace detail

// All minimal extensions of `store` under which one event can satisfy
// every pattern in `conj` simultaneously.  Branches are deduplicated and
// ordered: extensions adding equalities first, then disequality-only
// extensions, then the unchanged store.
inline std::vector<ConstraintStore> feasible_event_branches(const std::vector<EventPattern>& conj,
                                                            const ConstraintStore& store,
                                                            const GuardEnv& env) {
    std::vector<const EventPattern*> pos, neg;
    for (const EventPattern& p : conj) {
        if (p.any) continue;
        (p.negated ? neg : pos).push_back(&p);
    }

    std::vector<const ApiOp*> op_choices;
    if (!pos.empty()) {
        const ApiOp* op = env.find(pos[0]->op);
        if (!op) return {};
        for (const EventPattern* p : pos)
            if (p->op != op->op) return {};
        op_choices.push_back(op);
    } else {
        for (const ApiOp& o : env.ops) op_choices.push_back(&o);
    }

    std::vector<ConstraintStore> branches;
    std::vector<std::string> seen;
    auto emit = [&](const ConstraintStore& s) {
        std::string k = s.key();
        if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
            seen.push_back(k);
            branches.push_back(s);
        }
    };

    for (const ApiOp* op : op_choices) {
        const int nslots = op->arity + (op->has_result ? 1 : 0);
        std::vector<detail::SlotCond> base(nslots);

        // Adds a pattern constraint (or its violation) to a slot; returns
        // false when the requirement cannot be expressed (violated wildcard).
        auto add_constraint = [](std::vector<detail::SlotCond>& slots, int idx,
                                 const ArgConstraint& c, bool violate) -> bool {
            using K = ArgConstraint::Kind;
            if (c.kind == K::Wildcard) return !violate;
            auto& slot = slots[idx];
            if ((c.kind == K::Eq) != violate) slot.eqs.push_back(c.term);
            else slot.neqs.push_back(c.term);
            return true;
        };

        bool ok = true;
        for (const EventPattern* p : pos) {
            if (static_cast<int>(p->args.size()) != op->arity) { ok = false; break; }
            for (int i = 0; i < op->arity; ++i) add_constraint(base, i, p->args[i], false);
            if (p->result) {
                if (!op->has_result) { ok = false; break; }
                add_constraint(base, op->arity, *p->result, false);
            }
        }
        if (!ok) continue;

        // Each same-op complement must be violated in at least one slot;
        // complements of other ops hold vacuously under all-events scope
        // and exclude the op entirely under within-op scope.
        std::vector<const EventPattern*> must_violate;
        bool op_excluded = false;
        for (const EventPattern* q : neg) {
            if (q->op == op->op)
                must_violate.push_back(q);
            else if (env.match.complement_within_op)
                op_excluded = true;
        }
        if (op_excluded) continue;

        std::vector<std::vector<std::pair<int, ArgConstraint>>> viol_options;
        bool impossible = false;
        for (const EventPattern* q : must_violate) {
            std::vector<std::pair<int, ArgConstraint>> opts;
            if (static_cast<int>(q->args.size()) != op->arity || (q->result && !op->has_result)) {
                // body can never match this op's events: vacuously violated
                opts.emplace_back(-1, ArgConstraint::wildcard());
            } else {
                for (int i = 0; i < op->arity; ++i)
                    if (q->args[i].kind != ArgConstraint::Kind::Wildcard)
                        opts.emplace_back(i, q->args[i]);
                if (q->result && q->result->kind != ArgConstraint::Kind::Wildcard)
                    opts.emplace_back(op->arity, *q->result);
            }
            if (opts.empty()) { impossible = true; break; }
            viol_options.push_back(std::move(opts));
        }
        if (impossible) continue;

        std::vector<size_t> pick(viol_options.size(), 0);
        while (true) {
            std::vector<detail::SlotCond> slots = base;
            bool feasible = true;
            for (size_t v = 0; v < pick.size() && feasible; ++v) {
                auto& [idx, c] = viol_options[v][pick[v]];
                if (idx >= 0) feasible = add_constraint(slots, idx, c, true);
            }
            if (feasible) {
                std::vector<std::vector<std::vector<Atom>>> per_slot;
                for (const auto& s : slots)
                    per_slot.push_back(detail::slot_atom_choices(s, env.domain_size));
                bool any_empty = false;
                for (auto& cs : per_slot)
                    if (cs.empty()) any_empty = true;
                if (!any_empty) {
                    std::vector<size_t> sel(per_slot.size(), 0);
                    while (true) {
                        std::vector<Atom> atoms;
                        for (size_t s = 0; s < per_slot.size(); ++s)
                            atoms.insert(atoms.end(), per_slot[s][sel[s]].begin(),
                                         per_slot[s][sel[s]].end());
                        ConstraintStore ext = store.with_all(atoms);
                        if (satisfiable(ext, env.domain_size)) emit(ext);
                        size_t s = 0;
                        for (; s < per_slot.size(); ++s) {
                            if (++sel[s] < per_slot[s].size()) break;
                            sel[s] = 0;
                        }
                        if (s == per_slot.size()) break;
                    }
                }
            }
            size_t v = 0;
            for (; v < pick.size(); ++v) {
                if (++pick[v] < viol_options[v].size()) break;
                pick[v] = 0;
            }
            if (v == pick.size()) break;
        }
    }

    // Keep subset-minimal extensions, then order: equality-introducing
    // first, disequality-only next, unchanged store last.
    auto added = [&](const ConstraintStore& s) {
        std::vector<Atom> extra;
        for (const Atom& a : s.atoms)
            if (!store.contains(a)) extra.push_back(a);
        return extra;
    };
    std::vector<ConstraintStore> minimal;
    for (size_t i = 0; i < branches.size(); ++i) {
        std::vector<Atom> ai = added(branches[i]);
        bool keep = true;
        for (size_t j = 0; j < branches.size() && keep; ++j) {
            if (i == j) continue;
            std::vector<Atom> aj = added(branches[j]);
            if (aj.size() < ai.size() &&
                std::includes(ai.begin(), ai.end(), aj.begin(), aj.end()))
                keep = false;
        }
        if (keep) minimal.push_back(branches[i]);
    }
    auto rank = [&](const ConstraintStore& s) {
        std::vector<Atom> extra = added(s);
        if (extra.empty()) return 2;
        for (const Atom& a : extra)
            if (a.is_eq) return 0;
        return 1;
    };
    std::stable_sort(minimal.begin(), minimal.end(),
                     [&](const ConstraintStore& a, const ConstraintStore& b) { return rank(a) < rank(b); });
    return minimal;
}

inline std::vector<ConstraintStore> unify_symbolic(const EventPattern& p, const EventPattern& q,
                                                   const ConstraintStore& store, const GuardEnv& env) {
    return feasible_event_branches({p, q}, store, env);
}

}  // namespace witgen
