#pragma once

// Hand-written recursive descent parsers for the surface syntax:
//
//   expressions   .* <put a b> (~<put a _>)* | <v <- get k> & 1
//   traces        <put 1 2>;<3 <- get 2>
//   bindings      a=1,b=2
//   programs      fun bad(n0: addr) = let n1 = get n0 in ... put n0 n2
//   api files     api get(k: addr) -> addr ... end
//   spec files    spec name var a: addr ... regex ... end
//
// `#` comments run to end of line.  Errors carry a 1-based line and
// column.  Variables in patterns and qualifiers must be declared; when
// an ApiTable is supplied, operation names, arities, and result use are
// checked as well.

#include <string_view>

#include "witgen/lang.hpp"

namespace witgen {

struct ParseError : std::runtime_error {
    size_t line = 0, col = 0;

    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
    ParseError(const std::string& msg, size_t line_, size_t col_)
        : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                             ": " + msg),
          line(line_),
          col(col_) {}
};

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline bool is_reserved(const std::string& s) {
    static const char* words[] = {"fun",     "let",    "in",     "api",   "spec",  "var",
                                  "regex",   "requires", "ensures", "effect", "ghost", "end",
                                  "where",   "nu",     "addr",   "int",   "unit",  "_"};
    for (const char* w : words)
        if (s == w) return true;
    return false;
}

class Cursor {
public:
    explicit Cursor(std::string_view src) : src_(src) {}

    struct State {
        size_t pos, line, col;
    };
    State save() const { return {pos_, line_, col_}; }
    void restore(State s) {
        pos_ = s.pos;
        line_ = s.line;
        col_ = s.col;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') step();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                step();
            } else {
                break;
            }
        }
    }
    bool at_end() {
        skip_ws();
        return pos_ >= src_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    // Literal punctuation; multi-character tokens match atomically.
    bool try_punct(std::string_view p) {
        skip_ws();
        if (src_.compare(pos_, p.size(), p) != 0) return false;
        for (size_t i = 0; i < p.size(); ++i) step();
        return true;
    }
    void expect_punct(std::string_view p) {
        if (!try_punct(p)) fail("expected '" + std::string(p) + "'");
    }

    std::optional<std::string> try_ident() {
        skip_ws();
        if (pos_ >= src_.size() || !ident_start(src_[pos_])) return std::nullopt;
        std::string s;
        while (pos_ < src_.size() && ident_char(src_[pos_])) {
            s += src_[pos_];
            step();
        }
        return s;
    }
    std::string expect_ident(const std::string& what) {
        auto id = try_ident();
        if (!id) fail("expected " + what);
        return *id;
    }
    bool try_keyword(std::string_view kw) {
        State s = save();
        auto id = try_ident();
        if (id && *id == kw) return true;
        restore(s);
        return false;
    }
    bool peek_keyword(std::string_view kw) {
        State s = save();
        bool hit = try_keyword(kw);
        restore(s);
        return hit;
    }

    std::optional<int> try_int() {
        skip_ws();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            return std::nullopt;
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1000000) fail("integer literal too large");
            step();
        }
        return static_cast<int>(v);
    }
    int expect_int(const std::string& what) {
        auto v = try_int();
        if (!v) fail("expected " + what);
        return *v;
    }

private:
    void step() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    size_t pos_ = 0;
    size_t line_ = 1, col_ = 1;
};

using VarSorts = std::map<std::string, Sort>;

inline Sort parse_sort(Cursor& c) {
    std::string s = c.expect_ident("a sort (addr, int, or unit)");
    if (s == "addr") return Sort::Addr;
    if (s == "int") return Sort::Int;
    if (s == "unit") return Sort::Unit;
    c.fail("unknown sort '" + s + "'");
}

inline Term parse_term(Cursor& c, const VarSorts& vars) {
    if (auto v = c.try_int()) return Term::constant(*v);
    auto id = c.try_ident();
    if (!id) c.fail("expected a variable or integer");
    auto it = vars.find(*id);
    if (it == vars.end()) c.fail("unknown variable '" + *id + "'");
    return Term::var(*id, it->second);
}

inline ArgConstraint parse_arg_constraint(Cursor& c, const VarSorts& vars) {
    if (c.try_punct("!")) return ArgConstraint::neq(parse_term(c, vars));
    Cursor::State s = c.save();
    if (auto id = c.try_ident()) {
        if (*id == "_") return ArgConstraint::wildcard();
        c.restore(s);
    }
    return ArgConstraint::eq(parse_term(c, vars));
}

// Body of `<...>`, cursor already past the opening bracket.
inline EventPattern parse_pattern_body(Cursor& c, const VarSorts& vars, const ApiTable* apis,
                                       bool negated) {
    EventPattern p;
    p.negated = negated;

    Cursor::State start = c.save();
    try {
        ArgConstraint res = parse_arg_constraint(c, vars);  // tentative result position
        if (c.try_punct("<-"))
            p.result = res;
        else
            c.restore(start);
    } catch (const ParseError&) {
        c.restore(start);  // first token was the operation name
    }

    p.op = c.expect_ident("an operation name");
    while (!c.try_punct(">")) {
        if (c.at_end()) c.fail("unterminated event pattern");
        p.args.push_back(parse_arg_constraint(c, vars));
    }

    if (apis) {
        const ApiSignature* api = apis->find(p.op);
        if (!api) c.fail("unknown operation '" + p.op + "'");
        if (api->params.size() != p.args.size())
            c.fail("operation '" + p.op + "' takes " + std::to_string(api->params.size()) +
                   " argument(s)");
        if (p.result && !api->has_result())
            c.fail("operation '" + p.op + "' has no result");
    }
    return p;
}

Sre parse_sre_expr(Cursor& c, const VarSorts& vars, const ApiTable* apis);

inline Sre parse_sre_primary(Cursor& c, const VarSorts& vars, const ApiTable* apis) {
    if (c.try_punct("~")) {
        if (!c.try_punct("<"))
            c.fail("complement applies to a single event pattern: ~<...>");
        return sre_lit(parse_pattern_body(c, vars, apis, true));
    }
    if (c.try_punct("<")) return sre_lit(parse_pattern_body(c, vars, apis, false));
    if (c.try_punct("(")) {
        Sre r = parse_sre_expr(c, vars, apis);
        c.expect_punct(")");
        return r;
    }
    if (c.try_punct(".")) return sre_any();
    if (auto v = c.try_int()) {
        if (*v == 0) return sre_empty();
        if (*v == 1) return sre_epsilon();
        c.fail("only 0 and 1 denote expressions");
    }
    c.fail("expected an event pattern, '.', '(', '0', or '1'");
}

inline Sre parse_sre_postfix(Cursor& c, const VarSorts& vars, const ApiTable* apis) {
    Sre r = parse_sre_primary(c, vars, apis);
    while (c.try_punct("*")) r = sre_star(std::move(r));
    return r;
}

inline bool starts_sre_atom(Cursor& c) {
    char ch = c.peek();
    return ch == '<' || ch == '~' || ch == '(' || ch == '.' ||
           std::isdigit(static_cast<unsigned char>(ch));
}

inline Sre parse_sre_cat(Cursor& c, const VarSorts& vars, const ApiTable* apis) {
    Sre r = parse_sre_postfix(c, vars, apis);
    while (starts_sre_atom(c)) r = sre_concat(std::move(r), parse_sre_postfix(c, vars, apis));
    return r;
}

inline Sre parse_sre_inter(Cursor& c, const VarSorts& vars, const ApiTable* apis) {
    Sre r = parse_sre_cat(c, vars, apis);
    while (c.try_punct("&")) r = sre_inter(std::move(r), parse_sre_cat(c, vars, apis));
    return r;
}

inline Sre parse_sre_expr(Cursor& c, const VarSorts& vars, const ApiTable* apis) {
    Sre r = parse_sre_inter(c, vars, apis);
    while (c.try_punct("|")) r = sre_union(std::move(r), parse_sre_inter(c, vars, apis));
    return r;
}

// Qualifier atoms: term (= | !=) term, comma separated.  `nu` must be
// bound in `vars` by the caller when it is in scope.
inline std::vector<Atom> parse_atom_list(Cursor& c, const VarSorts& vars) {
    std::vector<Atom> atoms;
    do {
        Term lhs = parse_term(c, vars);
        bool is_eq;
        if (c.try_punct("!=")) {
            is_eq = false;
        } else if (c.try_punct("=")) {
            is_eq = true;
        } else {
            c.fail("expected '=' or '!='");
        }
        Term rhs = parse_term(c, vars);
        try {
            atoms.emplace_back(is_eq, std::move(lhs), std::move(rhs));
        } catch (const SortError& e) {
            c.fail(e.what());
        }
    } while (c.try_punct(","));
    return atoms;
}

inline void declare(Cursor& c, VarSorts& vars, const std::string& name, Sort sort) {
    if (is_reserved(name)) c.fail("'" + name + "' is a reserved name");
    if (vars.count(name)) c.fail("duplicate name '" + name + "'");
    vars[name] = sort;
}

inline std::vector<std::pair<std::string, Sort>> parse_param_list(Cursor& c, VarSorts& vars) {
    std::vector<std::pair<std::string, Sort>> params;
    c.expect_punct("(");
    if (!c.try_punct(")")) {
        do {
            std::string name = c.expect_ident("a parameter name");
            c.expect_punct(":");
            Sort sort = parse_sort(c);
            declare(c, vars, name, sort);
            params.emplace_back(name, sort);
        } while (c.try_punct(","));
        c.expect_punct(")");
    }
    return params;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry points

inline Sre parse_sre(std::string_view text, const detail::VarSorts& vars = {},
                     const ApiTable* apis = nullptr) {
    detail::Cursor c(text);
    Sre r = detail::parse_sre_expr(c, vars, apis);
    if (!c.at_end()) c.fail("unexpected trailing input");
    return r;
}

inline std::vector<Atom> parse_atoms(std::string_view text, const detail::VarSorts& vars) {
    detail::Cursor c(text);
    std::vector<Atom> out = detail::parse_atom_list(c, vars);
    if (!c.at_end()) c.fail("unexpected trailing input");
    return out;
}

inline Trace parse_trace(std::string_view text) {
    detail::Cursor c(text);
    Trace t;
    if (c.at_end()) return t;
    do {
        c.expect_punct("<");
        Event e;
        detail::Cursor::State start = c.save();
        if (auto v = c.try_int()) {
            if (c.try_punct("<-"))
                e.result = *v;
            else
                c.restore(start);
        }
        e.op = c.expect_ident("an operation name");
        while (!c.try_punct(">")) {
            if (c.at_end()) c.fail("unterminated event");
            e.args.push_back(c.expect_int("an integer argument"));
        }
        t.push_back(std::move(e));
    } while (c.try_punct(";"));
    if (!c.at_end()) c.fail("unexpected trailing input");
    return t;
}

inline Assignment parse_bindings(std::string_view text) {
    detail::Cursor c(text);
    Assignment out;
    if (c.at_end()) return out;
    do {
        std::string name = c.expect_ident("a variable name");
        if (out.count(name)) c.fail("duplicate binding for '" + name + "'");
        c.expect_punct("=");
        out[name] = c.expect_int("an integer value");
    } while (c.try_punct(","));
    if (!c.at_end()) c.fail("unexpected trailing input");
    return out;
}

inline Program parse_program(std::string_view text) {
    detail::Cursor c(text);
    detail::VarSorts vars;
    Program prog;

    if (!c.try_keyword("fun")) c.fail("expected 'fun'");
    prog.name = c.expect_ident("a function name");
    prog.params = detail::parse_param_list(c, vars);
    c.expect_punct("=");

    auto parse_call_args = [&](Call& call) {
        while (true) {
            if (auto v = c.try_int()) {
                call.args.push_back(Term::constant(*v));
                continue;
            }
            if (c.peek_keyword("in") || c.peek_keyword("let")) break;
            detail::Cursor::State s = c.save();
            auto id = c.try_ident();
            if (!id) break;
            auto it = vars.find(*id);
            if (it == vars.end()) c.fail("unknown variable '" + *id + "'");
            call.args.push_back(Term::var(*id, it->second));
            (void)s;
        }
    };

    while (true) {
        if (c.try_keyword("let")) {
            Call call;
            call.bind = c.expect_ident("a binder name");
            c.expect_punct("=");
            call.op = c.expect_ident("an operation name");
            parse_call_args(call);
            if (!c.try_keyword("in")) c.fail("expected 'in'");
            detail::declare(c, vars, call.bind, Sort::Addr);
            prog.calls.push_back(std::move(call));
            continue;
        }
        std::string id = c.expect_ident("a call or result variable");
        if (vars.count(id) && c.at_end()) {
            prog.final_var = id;
        } else {
            Call call;
            call.op = id;
            parse_call_args(call);
            prog.calls.push_back(std::move(call));
        }
        break;
    }
    if (!c.at_end()) c.fail("unexpected trailing input");
    if (prog.calls.empty()) c.fail("a program needs at least one call");
    return prog;
}

// Checks a parsed program against an API table: every operation must
// exist with matching arity, and only value-returning calls may be let
// bound.
inline void check_program(const Program& prog, const ApiTable& apis) {
    for (const Call& call : prog.calls) {
        const ApiSignature* api = apis.find(call.op);
        if (!api) throw ParseError("unknown operation '" + call.op + "'");
        if (api->params.size() != call.args.size())
            throw ParseError("operation '" + call.op + "' takes " +
                             std::to_string(api->params.size()) + " argument(s)");
        if (!call.bind.empty() && !api->has_result())
            throw ParseError("operation '" + call.op + "' has no result to bind");
    }
}

inline ApiTable parse_apis(std::string_view text) {
    detail::Cursor c(text);
    ApiTable table;

    while (!c.at_end()) {
        if (!c.try_keyword("api")) c.fail("expected 'api'");
        ApiSignature api;
        api.name = c.expect_ident("an operation name");
        if (table.find(api.name)) c.fail("duplicate operation '" + api.name + "'");

        detail::VarSorts vars;
        api.params = detail::parse_param_list(c, vars);
        c.expect_punct("->");
        api.ret = detail::parse_sort(c);

        bool saw_requires = false, saw_ensures = false, saw_effect = false;
        while (!c.try_keyword("end")) {
            if (c.try_keyword("ghost")) {
                std::string name = c.expect_ident("a ghost variable name");
                c.expect_punct(":");
                Sort sort = detail::parse_sort(c);
                detail::declare(c, vars, name, sort);
                api.ghosts.emplace_back(name, sort);
            } else if (c.try_keyword("requires")) {
                if (saw_requires) c.fail("duplicate requires clause");
                saw_requires = true;
                api.requires_ctx = detail::parse_sre_expr(c, vars, nullptr);
            } else if (c.try_keyword("ensures")) {
                if (saw_ensures) c.fail("duplicate ensures clause");
                saw_ensures = true;
                detail::VarSorts qvars = vars;
                qvars["nu"] = api.ret;
                api.ensures = detail::parse_atom_list(c, qvars);
            } else if (c.try_keyword("effect")) {
                if (saw_effect) c.fail("duplicate effect clause");
                saw_effect = true;
                c.expect_punct("<");
                api.effect = detail::parse_pattern_body(c, vars, nullptr, false);
            } else {
                c.fail("expected ghost, requires, ensures, effect, or end");
            }
        }
        if (!saw_effect) c.fail("api '" + api.name + "' needs an effect clause");
        if (!saw_requires) api.requires_ctx = sre_star(sre_any());
        table.apis.push_back(std::move(api));
    }
    if (table.apis.empty()) throw ParseError("no api blocks found");

    // Operation references may be forward, so check after the whole file.
    GuardEnv env = table.guard_env(1);
    std::function<void(const Sre&, const std::string&)> walk = [&](const Sre& r,
                                                                   const std::string& where) {
        if (!r) return;
        if (r->kind == SreKind::Lit && !r->lit.any) {
            const ApiOp* op = env.find(r->lit.op);
            if (!op)
                throw ParseError("unknown operation '" + r->lit.op + "' in " + where);
            if (op->arity != static_cast<int>(r->lit.args.size()))
                throw ParseError("operation '" + r->lit.op + "' takes " +
                                 std::to_string(op->arity) + " argument(s) in " + where);
            if (r->lit.result && !op->has_result)
                throw ParseError("operation '" + r->lit.op + "' has no result in " + where);
        }
        walk(r->left, where);
        walk(r->right, where);
    };
    for (const ApiSignature& api : table.apis) {
        walk(api.requires_ctx, "requires of api '" + api.name + "'");
        walk(sre_lit(api.effect), "effect of api '" + api.name + "'");
    }
    return table;
}

inline SpecFile parse_spec(std::string_view text, const ApiTable* apis = nullptr) {
    detail::Cursor c(text);
    SpecFile spec;

    if (!c.try_keyword("spec")) c.fail("expected 'spec'");
    spec.name = c.expect_ident("a property name");

    detail::VarSorts vars;
    bool saw_regex = false;
    while (!c.try_keyword("end")) {
        if (c.try_keyword("var")) {
            if (saw_regex) c.fail("variable declared after regex");
            QualifiedVar v;
            v.name = c.expect_ident("a variable name");
            c.expect_punct(":");
            v.sort = detail::parse_sort(c);
            if (c.try_keyword("where")) {
                detail::VarSorts qvars = vars;  // earlier variables only
                qvars["nu"] = v.sort;
                v.qual = detail::parse_atom_list(c, qvars);
            }
            detail::declare(c, vars, v.name, v.sort);
            spec.vars.push_back(std::move(v));
        } else if (c.try_keyword("regex")) {
            if (saw_regex) c.fail("duplicate regex clause");
            saw_regex = true;
            spec.regex = detail::parse_sre_expr(c, vars, apis);
        } else {
            c.fail("expected var, regex, or end");
        }
    }
    if (!saw_regex) c.fail("spec '" + spec.name + "' needs a regex clause");
    if (!c.at_end()) c.fail("unexpected trailing input");
    return spec;
}

}  // namespace witgen
