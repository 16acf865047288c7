#include <catch2/catch_amalgamated.hpp>

#include "oracle_utils.hpp"
#include "witgen/parser.hpp"
#include "witgen/typing.hpp"

using namespace witgen;
using namespace witgen::testutil;

namespace {

Term v(const std::string& n) { return Term::var(n); }
Term c(int k) { return Term::constant(k); }

witgen::detail::VarSorts vars_of(std::initializer_list<const char*> names) {
    witgen::detail::VarSorts vs;
    for (const char* n : names) vs[n] = Sort::Addr;
    return vs;
}

}  // namespace

TEST_CASE("substitution over terms, patterns, and expressions") {
    Subst s;
    s["x"] = v("a");
    s["y"] = c(2);
    s["z"] = std::nullopt;  // erase: only legal in pattern slots

    CHECK(subst_term(v("x"), s) == v("a"));
    CHECK(subst_term(v("w"), s) == v("w"));
    CHECK(subst_term(c(1), s) == c(1));
    CHECK_THROWS_AS(subst_term(v("z"), s), std::logic_error);

    CHECK(subst_arg(ArgConstraint::eq(v("z")), s) == ArgConstraint::wildcard());
    CHECK(subst_arg(ArgConstraint::neq(v("z")), s) == ArgConstraint::wildcard());
    CHECK(subst_arg(ArgConstraint::eq(v("x")), s) == ArgConstraint::eq(v("a")));
    CHECK(subst_arg(ArgConstraint::wildcard(), s) == ArgConstraint::wildcard());

    auto vs = vars_of({"x", "y", "z", "a"});
    Sre r = parse_sre(".* <put x y> (~<put x _>)* <put !z _>", vs);
    Sre expect = parse_sre(".* <put a 2> (~<put a _>)* <put _ _>",
                           vars_of({"a"}));
    CHECK(sre_equal(subst_sre(r, s), expect));
}

TEST_CASE("substitution over stores drops trivial atoms") {
    Subst s;
    s["x"] = v("a");
    s["y"] = c(1);

    ConstraintStore st;
    st = st.with(Atom::eq(v("x"), v("a")));   // becomes a = a: dropped
    st = st.with(Atom::neq(v("y"), c(2)));    // becomes 1 != 2: dropped
    st = st.with(Atom::neq(v("x"), v("b")));  // stays as a != b
    ConstraintStore out = subst_store(st, s);
    CHECK(out.atoms.size() == 1);
    CHECK(out.contains(Atom::neq(v("a"), v("b"))));

    // a contradiction must survive so unsatisfiability stays visible
    ConstraintStore contra = subst_store(ConstraintStore{}.with(Atom::neq(v("x"), v("a"))), s);
    CHECK_FALSE(satisfiable(contra, 4));
}

TEST_CASE("local elimination pins locals to visible terms") {
    auto vs = vars_of({"a", "b", "n1"});
    ConstraintStore st;
    st = st.with(Atom::eq(v("n1"), v("a")));
    st = st.with(Atom::neq(v("b"), v("n1")));
    Sre ctx = parse_sre(".* <put n1 b> .*", vs);
    Sre eff = parse_sre("<put a n1>", vs);

    auto elim = eliminate_locals(st, ctx, eff, {"n1"}, {v("a"), v("b")}, 4);
    REQUIRE(elim.has_value());
    CHECK(sre_equal(elim->context, parse_sre(".* <put a b> .*", vs)));
    CHECK(sre_equal(elim->effect, parse_sre("<put a a>", vs)));
    CHECK(elim->store.contains(Atom::neq(v("b"), v("a"))));
    CHECK_FALSE(elim->store.contains(Atom::eq(v("n1"), v("a"))));
}

TEST_CASE("local elimination can pin to a constant") {
    auto vs = vars_of({"a", "n1"});
    ConstraintStore st;
    st = st.with(Atom::eq(v("n1"), c(2)));
    Sre eff = parse_sre("<put a n1>", vs);
    auto elim = eliminate_locals(st, parse_sre(".*"), eff, {"n1"},
                                 {v("a"), c(0), c(1), c(2), c(3)}, 4);
    REQUIRE(elim.has_value());
    CHECK(sre_equal(elim->effect, parse_sre("<put a 2>", vs)));
}

TEST_CASE("local elimination erases a free single-occurrence local") {
    auto vs = vars_of({"a", "n1"});
    // n1 is unconstrained and appears in one slot: the slot generalizes
    // to a wildcard, which is sound because some value always exists
    Sre eff = parse_sre("<put a n1>", vs);
    auto elim = eliminate_locals({}, parse_sre(".*"), eff, {"n1"}, {v("a")}, 4);
    REQUIRE(elim.has_value());
    CHECK(sre_equal(elim->effect, parse_sre("<put a _>", vs)));
}

TEST_CASE("local elimination refuses an unpinnable constrained local") {
    auto vs = vars_of({"a", "n1"});
    ConstraintStore st;
    st = st.with(Atom::neq(v("n1"), v("a")));  // constrained but not equated
    Sre eff = parse_sre("<put a n1> <put n1 a>", vs);
    CHECK_FALSE(eliminate_locals(st, parse_sre(".*"), eff, {"n1"}, {v("a")}, 4).has_value());
}

TEST_CASE("context projection orders and filters qualifiers") {
    ConstraintStore st;
    st = st.with(Atom::neq(v("b"), v("a")));
    st = st.with(Atom::neq(v("n0"), v("a")));
    auto vars = project_context(st, {{"a", Sort::Addr}, {"b", Sort::Addr}, {"n0", Sort::Addr}}, 4);

    REQUIRE(vars.size() == 3);
    CHECK(vars[0].name == "a");
    CHECK(vars[0].qual.empty());
    CHECK(vars[1].name == "b");
    REQUIRE(vars[1].qual.size() == 1);
    CHECK(vars[1].qual[0] == Atom::neq(v("nu"), v("a")));
    CHECK(vars[2].name == "n0");
    REQUIRE(vars[2].qual.size() == 1);
    CHECK(vars[2].qual[0] == Atom::neq(v("nu"), v("a")));
}

TEST_CASE("context projection: equality to a predecessor wins alone") {
    ConstraintStore st;
    st = st.with(Atom::eq(v("b"), v("a")));
    st = st.with(Atom::neq(v("b"), c(3)));  // implied by nu = a plus a != 3? no: kept only if new
    st = st.with(Atom::neq(v("a"), c(3)));
    auto vars = project_context(st, {{"a", Sort::Addr}, {"b", Sort::Addr}}, 4);
    REQUIRE(vars.size() == 2);
    REQUIRE(vars[0].qual.size() == 1);
    CHECK(vars[0].qual[0] == Atom::neq(v("nu"), c(3)));
    // b = a already entails b != 3, so the equality stands alone
    REQUIRE(vars[1].qual.size() == 1);
    CHECK(vars[1].qual[0] == Atom::eq(v("nu"), v("a")));
}

TEST_CASE("context projection drops entailed disequalities") {
    ConstraintStore st;
    st = st.with(Atom::eq(v("a"), c(1)));
    st = st.with(Atom::eq(v("b"), c(2)));
    st = st.with(Atom::neq(v("b"), v("a")));  // follows from the constants
    auto vars = project_context(st, {{"a", Sort::Addr}, {"b", Sort::Addr}}, 4);
    REQUIRE(vars[0].qual.size() == 1);
    CHECK(vars[0].qual[0] == Atom::eq(v("nu"), c(1)));
    REQUIRE(vars[1].qual.size() == 1);
    CHECK(vars[1].qual[0] == Atom::eq(v("nu"), c(2)));
}

TEST_CASE("projection round-trips through models") {
    // soundness of the projected form: an assignment satisfies the original
    // store iff it satisfies every projected qualifier in declaration order
    std::mt19937 rng(53);
    std::vector<std::pair<std::string, Sort>> ordered{
        {"a", Sort::Addr}, {"b", Sort::Addr}, {"c", Sort::Addr}};
    std::vector<std::string> names{"a", "b", "c"};

    for (int round = 0; round < 200; ++round) {
        ConstraintStore st;
        int natoms = 1 + (int)(rng() % 4);
        for (int i = 0; i < natoms; ++i) {
            Term lhs = v(names[rng() % 3]);
            Term rhs = rng() % 3 == 0 ? c((int)(rng() % 4)) : v(names[rng() % 3]);
            if (lhs == rhs) continue;
            st = st.with(rng() % 2 ? Atom::eq(lhs, rhs) : Atom::neq(lhs, rhs));
        }
        if (!satisfiable(st, 4)) continue;
        auto vars = project_context(st, ordered, 4);

        ConstraintStore empty;
        for (const Assignment& sigma : all_models(empty, names, 4)) {
            bool orig = store_holds(st, sigma);
            bool proj = check_qualifiers(vars, sigma);
            INFO(st.key());
            REQUIRE(orig == proj);
        }
    }
}

TEST_CASE("qualifier checking reports the failing variable") {
    std::vector<QualifiedVar> vars;
    QualifiedVar qa{"a", Sort::Addr, {}};
    QualifiedVar qb{"b", Sort::Addr, {Atom::neq(v("nu"), v("a"))}};
    vars.push_back(qa);
    vars.push_back(qb);

    std::string why;
    CHECK(check_qualifiers(vars, {{"a", 1}, {"b", 2}}, &why));
    CHECK_FALSE(check_qualifiers(vars, {{"a", 1}, {"b", 1}}, &why));
    CHECK(why.find("b") != std::string::npos);
    CHECK_FALSE(check_qualifiers(vars, {{"a", 1}}, &why));
}

TEST_CASE("judgment rendering") {
    std::vector<QualifiedVar> vars{{"a", Sort::Addr, {}},
                                   {"b", Sort::Addr, {Atom::neq(v("nu"), v("a"))}}};
    auto vs = vars_of({"a", "b"});
    Judgment j{vars, parse_sre(".* <put a b>", vs), parse_sre("<put b a>", vs)};
    std::string s = to_string(j);
    CHECK(s.find("a: addr") != std::string::npos);
    CHECK(s.find("where") != std::string::npos);
    CHECK(s.find("|-") != std::string::npos);
    CHECK(s.find("<put b a>") != std::string::npos);
}
