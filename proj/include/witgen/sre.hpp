#pragma once

// Symbolic regular expressions over qualified events.
//
// Grammar: Empty (0), Epsilon (1), Lit(pattern), Concat, Union, Star,
// Inter.  Nodes are immutable and shared; the factory functions apply the
// normalizations the rest of the code relies on:
//   - Empty absorbs Concat and Inter and is a Union identity
//   - Epsilon is a Concat identity
//   - Concat/Union/Inter chains are right-nested; Union/Inter alternatives
//     are deduplicated preserving first occurrence
//   - Star bodies are never Empty/Epsilon/Star
//   - Inter with the all-traces expression `.*` drops it
//
// Each node caches its nullability and a canonical key string, so
// structural equality is a string compare and derivative classes can be
// deduplicated by key.
//
// deriv_concrete is the single-event derivative under a concrete
// assignment; accepts() iterates it.  deriv_symbolic is the derivative
// with respect to a positive event pattern: it returns every residual
// expression together with the minimally extended constraint store that
// justifies consuming the event that way (including "skip" steps through
// complement or any-event loops, which leave the expression unchanged).

#include <memory>

#include "witgen/guards.hpp"

namespace witgen {

enum class SreKind { Empty, Epsilon, Lit, Concat, Union, Star, Inter };

struct SreNode;
using Sre = std::shared_ptr<const SreNode>;

struct SreNode {
    SreKind kind;
    EventPattern lit;   // Lit only
    Sre left, right;    // Concat/Union/Inter: both; Star: left
    bool nullable = false;
    std::string key;
};

namespace detail {
inline Sre make_node(SreKind k, EventPattern lit, Sre l, Sre r, bool nullable, std::string key) {
    auto n = std::make_shared<SreNode>();
    n->kind = k;
    n->lit = std::move(lit);
    n->left = std::move(l);
    n->right = std::move(r);
    n->nullable = nullable;
    n->key = std::move(key);
    return n;
}
}  // namespace detail

inline const Sre& sre_empty() {
    static const Sre n = detail::make_node(SreKind::Empty, {}, nullptr, nullptr, false, "0");
    return n;
}
inline const Sre& sre_epsilon() {
    static const Sre n = detail::make_node(SreKind::Epsilon, {}, nullptr, nullptr, true, "1");
    return n;
}
inline Sre sre_lit(EventPattern p) {
    std::string k = "(lit " + to_string(p) + ")";
    return detail::make_node(SreKind::Lit, std::move(p), nullptr, nullptr, false, std::move(k));
}
inline Sre sre_any() { return sre_lit(EventPattern::any_event()); }

inline bool sre_equal(const Sre& a, const Sre& b) {
    return a == b || a->key == b->key;
}
inline bool is_empty_sre(const Sre& r) { return r->kind == SreKind::Empty; }
inline bool is_epsilon_sre(const Sre& r) { return r->kind == SreKind::Epsilon; }
inline bool nullable(const Sre& r) { return r->nullable; }

// True for `.*`, which accepts every trace.
inline bool is_any_star(const Sre& r) {
    return r->kind == SreKind::Star && r->left->kind == SreKind::Lit && r->left->lit.any;
}

inline Sre sre_concat(Sre a, Sre b) {
    if (is_empty_sre(a) || is_empty_sre(b)) return sre_empty();
    if (is_epsilon_sre(a)) return b;
    if (is_epsilon_sre(b)) return a;
    if (a->kind == SreKind::Concat) return sre_concat(a->left, sre_concat(a->right, std::move(b)));
    std::string k = "(cat " + a->key + " " + b->key + ")";
    bool n = a->nullable && b->nullable;
    return detail::make_node(SreKind::Concat, {}, std::move(a), std::move(b), n, std::move(k));
}

namespace detail {
inline void collect(SreKind k, const Sre& r, std::vector<Sre>& out) {
    if (r->kind == k) {
        collect(k, r->left, out);
        collect(k, r->right, out);
    } else {
        out.push_back(r);
    }
}
inline std::vector<Sre> dedupe_alts(SreKind k, const Sre& a, const Sre& b) {
    std::vector<Sre> alts;
    collect(k, a, alts);
    collect(k, b, alts);
    std::vector<Sre> uniq;
    for (const Sre& x : alts) {
        bool dup = false;
        for (const Sre& y : uniq)
            if (sre_equal(x, y)) dup = true;
        if (!dup) uniq.push_back(x);
    }
    return uniq;
}
}  // namespace detail

inline Sre sre_union(Sre a, Sre b) {
    if (is_empty_sre(a)) return b;
    if (is_empty_sre(b)) return a;
    std::vector<Sre> alts = detail::dedupe_alts(SreKind::Union, a, b);
    Sre out = alts.back();
    for (size_t i = alts.size() - 1; i-- > 0;) {
        std::string k = "(alt " + alts[i]->key + " " + out->key + ")";
        bool n = alts[i]->nullable || out->nullable;
        out = detail::make_node(SreKind::Union, {}, alts[i], out, n, std::move(k));
    }
    return out;
}

inline Sre sre_inter(Sre a, Sre b) {
    if (is_empty_sre(a) || is_empty_sre(b)) return sre_empty();
    if (is_any_star(a)) return b;
    if (is_any_star(b)) return a;
    std::vector<Sre> alts = detail::dedupe_alts(SreKind::Inter, a, b);
    Sre out = alts.back();
    for (size_t i = alts.size() - 1; i-- > 0;) {
        std::string k = "(and " + alts[i]->key + " " + out->key + ")";
        bool n = alts[i]->nullable && out->nullable;
        out = detail::make_node(SreKind::Inter, {}, alts[i], out, n, std::move(k));
    }
    return out;
}

inline Sre sre_star(Sre a) {
    if (is_empty_sre(a) || is_epsilon_sre(a)) return sre_epsilon();
    if (a->kind == SreKind::Star) return a;
    std::string k = "(star " + a->key + ")";
    return detail::make_node(SreKind::Star, {}, std::move(a), nullptr, true, std::move(k));
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {
// precedence: Union 1 < Inter 2 < Concat 3 < atoms 4
inline int sre_prec(const Sre& r) {
    switch (r->kind) {
        case SreKind::Union: return 1;
        case SreKind::Inter: return 2;
        case SreKind::Concat: return 3;
        default: return 4;
    }
}
inline void print_sre(const Sre& r, int min_prec, std::string& out) {
    int prec = sre_prec(r);
    bool paren = prec < min_prec;
    if (paren) out += "(";
    switch (r->kind) {
        case SreKind::Empty: out += "0"; break;
        case SreKind::Epsilon: out += "1"; break;
        case SreKind::Lit: out += to_string(r->lit); break;
        case SreKind::Concat:
            print_sre(r->left, 4, out);
            out += " ";
            print_sre(r->right, 3, out);
            break;
        case SreKind::Union:
            print_sre(r->left, 2, out);
            out += " | ";
            print_sre(r->right, 1, out);
            break;
        case SreKind::Inter:
            print_sre(r->left, 3, out);
            out += " & ";
            print_sre(r->right, 2, out);
            break;
        case SreKind::Star: {
            const Sre& body = r->left;
            if (body->kind == SreKind::Lit && !body->lit.negated) {
                print_sre(body, 4, out);
            } else {
                out += "(";
                print_sre(body, 1, out);
                out += ")";
            }
            out += "*";
            break;
        }
    }
    if (paren) out += ")";
}
}  // namespace detail

inline std::string to_string(const Sre& r) {
    std::string out;
    detail::print_sre(r, 1, out);
    return out;
}

// ---------------------------------------------------------------------------
// Derivatives and membership

inline Sre deriv_concrete(const Sre& r, const Event& e, const Assignment& sigma,
                          const MatchOptions& opts = {}) {
    switch (r->kind) {
        case SreKind::Empty:
        case SreKind::Epsilon: return sre_empty();
        case SreKind::Lit:
            return match_concrete(r->lit, e, sigma, opts) ? sre_epsilon() : sre_empty();
        case SreKind::Concat: {
            Sre head = sre_concat(deriv_concrete(r->left, e, sigma, opts), r->right);
            if (!r->left->nullable) return head;
            return sre_union(std::move(head), deriv_concrete(r->right, e, sigma, opts));
        }
        case SreKind::Union:
            return sre_union(deriv_concrete(r->left, e, sigma, opts),
                             deriv_concrete(r->right, e, sigma, opts));
        case SreKind::Star:
            return sre_concat(deriv_concrete(r->left, e, sigma, opts), r);
        case SreKind::Inter:
            return sre_inter(deriv_concrete(r->left, e, sigma, opts),
                             deriv_concrete(r->right, e, sigma, opts));
    }
    return sre_empty();
}

inline bool accepts(const Sre& r, const Trace& t, const Assignment& sigma,
                    const MatchOptions& opts = {}) {
    Sre cur = r;
    for (const Event& e : t) {
        if (is_empty_sre(cur)) return false;
        cur = deriv_concrete(cur, e, sigma, opts);
    }
    return cur->nullable;
}

// One residual expression per way of consuming an event matching `p`,
// with the constraint-store extension that justifies it.
struct SymbolicBranch {
    Sre residual;
    ConstraintStore store;
};

inline std::vector<SymbolicBranch> deriv_symbolic(const Sre& r, const EventPattern& p,
                                                  const ConstraintStore& store,
                                                  const GuardEnv& env) {
    assert(!p.negated && !p.any);
    std::vector<SymbolicBranch> out;
    std::vector<std::string> seen;
    auto emit = [&](Sre residual, ConstraintStore s) {
        std::string k = residual->key + "|" + s.key();
        if (std::find(seen.begin(), seen.end(), k) != seen.end()) return;
        seen.push_back(std::move(k));
        out.push_back(SymbolicBranch{std::move(residual), std::move(s)});
    };
    std::function<void(const Sre&, const ConstraintStore&, const std::function<void(Sre, ConstraintStore)>&)>
        go = [&](const Sre& node, const ConstraintStore& st,
                 const std::function<void(Sre, ConstraintStore)>& k) {
            switch (node->kind) {
                case SreKind::Empty:
                case SreKind::Epsilon: return;
                case SreKind::Lit:
                    for (ConstraintStore& s : unify_symbolic(p, node->lit, st, env))
                        k(sre_epsilon(), std::move(s));
                    return;
                case SreKind::Concat:
                    go(node->left, st, [&](Sre res, ConstraintStore s) {
                        k(sre_concat(std::move(res), node->right), std::move(s));
                    });
                    if (node->left->nullable) go(node->right, st, k);
                    return;
                case SreKind::Union:
                    go(node->left, st, k);
                    go(node->right, st, k);
                    return;
                case SreKind::Star:
                    go(node->left, st, [&](Sre res, ConstraintStore s) {
                        k(sre_concat(std::move(res), node), std::move(s));
                    });
                    return;
                case SreKind::Inter:
                    go(node->left, st, [&](Sre lres, ConstraintStore ls) {
                        go(node->right, ls, [&](Sre rres, ConstraintStore rs) {
                            k(sre_inter(lres, std::move(rres)), std::move(rs));
                        });
                    });
                    return;
            }
        };
    go(r, store, [&](Sre res, ConstraintStore s) { emit(std::move(res), std::move(s)); });
    return out;
}

}  // namespace witgen
