// witgen: trace-property witnesses for straight-line key-value programs.
//
//   witgen check PROPERTY PROGRAM APIS   infer and report a witness
//   witgen member --sre .. --trace ..    symbolic regex membership
//   witgen validate --report FILE        re-check a serialized witness

#include <CLI11.hpp>

#include "witgen/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"witness inference for key-value trace properties"};
    app.require_subcommand(1);

    witgen::CheckOptions check;
    CLI::App* c = app.add_subcommand("check", "infer a violation witness for a program");
    c->add_option("property", check.spec_path, "property file")->required();
    c->add_option("program", check.program_path, "program file")->required();
    c->add_option("apis", check.apis_path, "operation signatures file")->required();
    c->add_option("--domain", check.domain, "address domain size")->check(CLI::PositiveNumber);
    c->add_option("--max-prefix", check.max_prefix, "environment prefix length bound")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--max-hypotheses", check.max_hypotheses, "hypothesis budget")
        ->check(CLI::PositiveNumber);
    c->add_option("--max-branches", check.max_branches, "abduction branch budget")
        ->check(CLI::PositiveNumber);
    c->add_option("--timeout", check.timeout_s, "wall clock budget in seconds");
    c->add_flag("--complement-within-op", check.complement_within_op,
                "event complement ranges over the pattern's operation only");
    c->add_option("-o,--output", check.out_path, "write the report here instead of stdout");
    c->add_option("--emit-sfa", check.emit_sfa_dir, "dump compiled automata as DOT files");

    witgen::MemberOptions member;
    CLI::App* m = app.add_subcommand("member", "test a concrete trace against an expression");
    m->add_option("--sre", member.sre, "symbolic regular expression")->required();
    m->add_option("--trace", member.trace, "concrete trace, events separated by ';'");
    m->add_option("--bind", member.bind, "variable bindings, e.g. a=1,b=2");
    m->add_flag("--complement-within-op", member.complement_within_op,
                "event complement ranges over the pattern's operation only");

    witgen::ValidateOptions validate;
    CLI::App* v = app.add_subcommand("validate", "re-check the evidence in a witness report");
    v->add_option("--report", validate.report_path, "report file produced by check")->required();
    v->add_option("--domain", validate.domain, "override the report's domain size");
    v->add_option("--max-prefix", validate.max_prefix, "override the report's prefix bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand(c)) return witgen::cmd_check(check);
    if (app.got_subcommand(m)) return witgen::cmd_member(member);
    return witgen::cmd_validate(validate);
}
