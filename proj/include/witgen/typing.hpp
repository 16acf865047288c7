#pragma once

// Judgments and the variable bookkeeping around them.
//
// A judgment says: under the listed qualified variables, if the prior
// trace satisfies the context expression, then running the function
// appends events matching the effect expression.  Qualifiers are given
// per variable over `nu` and earlier variables only, so a judgment can
// be read (and checked) left to right.
//
// eliminate_locals removes call-local names (result binders and
// per-call ghost instances) from a constraint store and the context /
// effect expressions: a local pinned to a kept term by the store is
// substituted away; a completely unconstrained local that occurs in at
// most one pattern slot outside any star becomes a wildcard; anything
// else fails, and the caller must try a different hypothesis.
// project_context turns the surviving store into per-variable
// qualifiers, keeping only atoms not already implied by the ones
// emitted before.

#include "witgen/lang.hpp"
#include "witgen/sre.hpp"

namespace witgen {

// ---------------------------------------------------------------------------
// Substitution (nullopt target = erase the slot to a wildcard)

using Subst = std::map<std::string, std::optional<Term>>;

inline Term subst_term(const Term& t, const Subst& s) {
    if (!t.is_var) return t;
    auto it = s.find(t.name);
    if (it == s.end()) return t;
    if (!it->second) throw std::logic_error("cannot erase a term outside a pattern slot");
    Term out = *it->second;
    return out;
}

inline ArgConstraint subst_arg(const ArgConstraint& c, const Subst& s) {
    if (c.kind == ArgConstraint::Kind::Wildcard || !c.term.is_var) return c;
    auto it = s.find(c.term.name);
    if (it == s.end()) return c;
    if (!it->second) return ArgConstraint::wildcard();
    ArgConstraint out = c;
    out.term = *it->second;
    return out;
}

inline EventPattern subst_pattern(const EventPattern& p, const Subst& s) {
    EventPattern out = p;
    for (ArgConstraint& c : out.args) c = subst_arg(c, s);
    if (out.result) out.result = subst_arg(*out.result, s);
    return out;
}

inline Sre subst_sre(const Sre& r, const Subst& s) {
    switch (r->kind) {
        case SreKind::Empty:
        case SreKind::Epsilon: return r;
        case SreKind::Lit: return sre_lit(subst_pattern(r->lit, s));
        case SreKind::Concat: return sre_concat(subst_sre(r->left, s), subst_sre(r->right, s));
        case SreKind::Union: return sre_union(subst_sre(r->left, s), subst_sre(r->right, s));
        case SreKind::Star: return sre_star(subst_sre(r->left, s));
        case SreKind::Inter: return sre_inter(subst_sre(r->left, s), subst_sre(r->right, s));
    }
    return r;
}

// Substitutes into every atom and drops the ones that become trivially
// true.  The caller guarantees no erased variable occurs in an atom.
inline ConstraintStore subst_store(const ConstraintStore& store, const Subst& s) {
    std::vector<Atom> atoms;
    for (const Atom& a : store.atoms) {
        Atom b(a.is_eq, subst_term(a.lhs, s), subst_term(a.rhs, s));
        if (b.lhs == b.rhs && b.is_eq) continue;
        if (!b.lhs.is_var && !b.rhs.is_var && !b.is_eq && b.lhs.value != b.rhs.value) continue;
        atoms.push_back(std::move(b));
    }
    return ConstraintStore(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Local elimination

namespace detail {

struct Occurrence {
    int slots = 0;
    bool under_star = false;
};

inline void count_occurrences(const Sre& r, const std::string& name, int star_depth,
                              Occurrence& occ) {
    if (!r) return;
    if (r->kind == SreKind::Lit) {
        auto touch = [&](const ArgConstraint& c) {
            if (c.kind != ArgConstraint::Kind::Wildcard && c.term.is_var && c.term.name == name) {
                ++occ.slots;
                if (star_depth > 0) occ.under_star = true;
            }
        };
        for (const ArgConstraint& c : r->lit.args) touch(c);
        if (r->lit.result) touch(*r->lit.result);
        return;
    }
    int d = star_depth + (r->kind == SreKind::Star ? 1 : 0);
    count_occurrences(r->left, name, d, occ);
    count_occurrences(r->right, name, d, occ);
}

}  // namespace detail

struct Elimination {
    Subst subst;
    ConstraintStore store;
    Sre context, effect;
};

// Removes `locals` from the store and both expressions.  `kept_terms`
// lists candidate representatives in priority order (callers pass the
// visible variables first, then the domain constants).
inline std::optional<Elimination> eliminate_locals(const ConstraintStore& store, Sre context,
                                                   Sre effect,
                                                   const std::vector<std::string>& locals,
                                                   const std::vector<Term>& kept_terms,
                                                   int domain_size) {
    Elimination out;
    std::vector<std::string> free_locals;
    for (const std::string& name : locals) {
        Term local = Term::var(name);
        const Term* rep = nullptr;
        for (const Term& cand : kept_terms)
            if (entails(store, Atom::eq(local, cand), domain_size)) {
                rep = &cand;
                break;
            }
        if (rep) {
            out.subst[name] = *rep;
            continue;
        }
        for (const Atom& a : store.atoms)
            if ((a.lhs.is_var && a.lhs.name == name) || (a.rhs.is_var && a.rhs.name == name))
                return std::nullopt;  // constrained but not pinned to a kept term
        free_locals.push_back(name);
    }

    for (const std::string& name : free_locals) {
        detail::Occurrence occ;
        detail::count_occurrences(context, name, 0, occ);
        detail::count_occurrences(effect, name, 0, occ);
        if (occ.slots == 0) continue;
        if (occ.slots > 1 || occ.under_star) return std::nullopt;
        if (domain_size < 2) return std::nullopt;  // erased != needs a second value
        out.subst[name] = std::nullopt;
    }

    out.store = subst_store(store, out.subst);
    out.context = subst_sre(context, out.subst);
    out.effect = subst_sre(effect, out.subst);
    return out;
}

// ---------------------------------------------------------------------------
// Qualifier projection and checking

// Rewrites a store into per-variable qualifiers over `nu` and earlier
// variables.  For each variable in order: an equality to the earliest
// equal predecessor replaces everything else; otherwise a pinned
// constant, then disequalities (predecessors, then constants) that are
// not already implied by previously emitted qualifiers.
inline std::vector<QualifiedVar> project_context(
    const ConstraintStore& store, const std::vector<std::pair<std::string, Sort>>& ordered,
    int domain_size) {
    std::vector<QualifiedVar> out;
    ConstraintStore derived;  // atoms emitted so far, over the real names
    for (size_t i = 0; i < ordered.size(); ++i) {
        QualifiedVar qv;
        qv.name = ordered[i].first;
        qv.sort = ordered[i].second;
        Term self = Term::var(qv.name, qv.sort);
        Term nu = Term::var("nu", qv.sort);

        auto consider = [&](const Atom& real, const Atom& as_nu) {
            if (!entails(store, real, domain_size)) return false;
            if (entails(derived, real, domain_size)) return true;  // implied, skip
            derived = derived.with(real);
            qv.qual.push_back(as_nu);
            return true;
        };

        bool pinned_to_var = false;
        for (size_t j = 0; j < i && !pinned_to_var; ++j) {
            Term prev = Term::var(ordered[j].first, ordered[j].second);
            if (entails(store, Atom::eq(self, prev), domain_size)) {
                derived = derived.with(Atom::eq(self, prev));
                qv.qual.push_back(Atom::eq(nu, prev));
                pinned_to_var = true;
            }
        }
        if (!pinned_to_var) {
            for (int c = 0; c < domain_size; ++c)
                if (consider(Atom::eq(self, Term::constant(c)), Atom::eq(nu, Term::constant(c))))
                    break;
            for (size_t j = 0; j < i; ++j) {
                Term prev = Term::var(ordered[j].first, ordered[j].second);
                consider(Atom::neq(self, prev), Atom::neq(nu, prev));
            }
            for (int c = 0; c < domain_size; ++c)
                consider(Atom::neq(self, Term::constant(c)), Atom::neq(nu, Term::constant(c)));
        }
        out.push_back(std::move(qv));
    }
    return out;
}

// Checks a concrete binding against qualified variables: every variable
// bound, every qualifier atom true with `nu` mapped to its variable.
inline bool check_qualifiers(const std::vector<QualifiedVar>& vars, const Assignment& sigma,
                             std::string* why = nullptr) {
    for (const QualifiedVar& v : vars) {
        auto self = sigma.find(v.name);
        if (self == sigma.end()) {
            if (why) *why = "no binding for " + v.name;
            return false;
        }
        for (const Atom& a : v.qual) {
            auto value = [&](const Term& t) {
                if (!t.is_var) return t.value;
                if (t.name == "nu") return self->second;
                return eval_term(t, sigma);
            };
            bool holds = (value(a.lhs) == value(a.rhs)) == a.is_eq;
            if (!holds) {
                if (why)
                    *why = v.name + " violates " + to_string(a.lhs) +
                           (a.is_eq ? " = " : " != ") + to_string(a.rhs);
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Judgments

struct Judgment {
    std::vector<QualifiedVar> vars;  // property variables first, then parameters
    Sre context;                     // required prior trace
    Sre effect;                      // events the function appends
};

inline std::string to_string(const QualifiedVar& v) {
    std::string s = v.name + ": " + to_string(v.sort);
    if (!v.qual.empty()) {
        s += " where ";
        for (size_t i = 0; i < v.qual.size(); ++i) {
            if (i) s += ", ";
            s += to_string(v.qual[i]);
        }
    }
    return s;
}

inline std::string to_string(const Judgment& j) {
    std::string s = "(";
    for (size_t i = 0; i < j.vars.size(); ++i) {
        if (i) s += "; ";
        s += to_string(j.vars[i]);
    }
    s += ") |- <" + to_string(j.context) + "> ... <" + to_string(j.effect) + ">";
    return s;
}

}  // namespace witgen
