// Command-line front end: compile formulas to bad-prefix automata, transform
// and compare automata, test membership, and run learning sessions.
// Exit codes: 0 affirmative, 1 negative verdict, 2 usage/parse/input error.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <hyperbpa/hyperbpa.hpp>

namespace {

using namespace hyperbpa;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

HyperFormula load_formula(const std::string& path) { return parse_hyper(read_file(path)); }

Dfa load_bpa(const std::string& path) { return parse_bpa(read_file(path)); }

void emit_automaton(const Dfa& d, const std::string& out_path, const std::string& dot_path) {
    write_file(out_path, format_bpa(d));
    if (!dot_path.empty()) write_file(dot_path, format_dot(d));
}

void info_line(const Dfa& d) {
    std::cout << "states " << d.state_count << " arity " << d.alphabet.arity << "\n";
}

void report_to_stderr(const std::string& name, const ConstructionReport& r) {
    std::cerr << name << ": " << r.input_states << " states in, " << r.output_states
              << " states out, " << r.copies << " copies, " << std::fixed
              << std::setprecision(2) << r.wall_ms << " ms\n";
}

int cmd_compile(const std::string& formula_path, int arity_flag, const std::string& out_path,
                const std::string& dot_path) {
    HyperFormula h = load_formula(formula_path);
    require_universally_safe(h);
    const int k = arity_flag > 0 ? arity_flag : h.width();
    Clock::time_point t0 = Clock::now();
    Dfa d = minimize(tighten(bad_prefix_dfa(assignment_closure(h, k), h.aps, k)));
    ConstructionReport r;
    r.input_states = 0;
    r.output_states = d.state_count;
    r.copies = 1;
    r.wall_ms = ms_since(t0);
    emit_automaton(d, out_path, dot_path);
    info_line(d);
    report_to_stderr("compile", r);
    return 0;
}

int cmd_member(const std::string& formula_path, const std::string& traces_path) {
    HyperFormula h = load_formula(formula_path);
    HyperTeacher teacher(h);
    TraceSet t = parse_trace_set(h.aps, read_file(traces_path));
    if (t.traces.empty()) {
        // The empty set satisfies every universal formula, so it is never bad.
        std::cout << "not-a-bad-prefix\n";
        return 1;
    }
    if (teacher.member(t)) {
        std::cout << "bad-prefix\n";
        return 0;
    }
    std::cout << "not-a-bad-prefix\n";
    return 1;
}

int cmd_equiv(const std::string& a_path, const std::string& b_path, const std::string& out_path) {
    Dfa a = load_bpa(a_path);
    Dfa b = load_bpa(b_path);
    const bool swapped = a.alphabet.arity > b.alphabet.arity;
    std::optional<EquivViolation> v =
        swapped ? representation_equivalent(b, a) : representation_equivalent(a, b);
    if (!v) {
        std::cout << "equivalent\n";
        return 0;
    }
    int dir = v->direction == EquivDirection::first_uncovered ? 1 : 2;
    if (swapped) dir = 3 - dir;
    std::cout << "not-equivalent direction " << dir << "\n";
    std::string witness = format_trace_set(v->bad_prefix);
    if (!out_path.empty()) write_file(out_path, witness);
    else std::cout << witness;
    return 1;
}

int cmd_tighten(const std::string& in_path, const std::string& out_path,
                const std::string& dot_path) {
    Dfa a = load_bpa(in_path);
    Clock::time_point t0 = Clock::now();
    Dfa d = tighten(a);
    ConstructionReport r{a.state_count, d.state_count, 1, ms_since(t0)};
    emit_automaton(d, out_path, dot_path);
    info_line(d);
    report_to_stderr("tighten", r);
    return 0;
}

int cmd_permclose(const std::string& in_path, const std::string& out_path,
                  const std::string& dot_path) {
    Dfa a = load_bpa(in_path);
    Clock::time_point t0 = Clock::now();
    Dfa d = permutation_complete(a);
    int copies = 1;
    for (int i = 0; i < a.alphabet.arity; ++i) copies *= a.alphabet.arity;
    ConstructionReport r{a.state_count, d.state_count, copies, ms_since(t0)};
    emit_automaton(d, out_path, dot_path);
    info_line(d);
    report_to_stderr("permclose", r);
    return 0;
}

int cmd_check_complete(const std::string& in_path) {
    Dfa a = load_bpa(in_path);
    if (std::optional<TupleWord> w = is_permutation_complete(a)) {
        std::cout << "not-permutation-complete\n";
        std::cout << format_word(a.alphabet, *w) << "\n";
        return 1;
    }
    std::cout << "permutation-complete\n";
    return 0;
}

int cmd_min(const std::string& in_path, const std::string& out_path,
            const std::string& dot_path) {
    Dfa a = load_bpa(in_path);
    Clock::time_point t0 = Clock::now();
    Dfa d = minimize(a);
    ConstructionReport r{a.state_count, d.state_count, 1, ms_since(t0)};
    emit_automaton(d, out_path, dot_path);
    info_line(d);
    report_to_stderr("min", r);
    return 0;
}

int cmd_classify(const std::string& formula_path) {
    HyperFormula h = load_formula(formula_path);
    if (is_universally_safe(h)) {
        std::cout << "universally-safe " << h.width() << "\n";
        return 0;
    }
    std::cout << "not-universally-safe " << h.width() << "\n";
    return 1;
}

int cmd_learn(const std::string& formula_path, int max_arity, int max_rounds, bool exact,
              const std::string& out_path, const std::string& stats_path,
              const std::string& dot_path) {
    HyperFormula h = load_formula(formula_path);
    HyperLtlTeacher teacher(std::move(h), exact);
    LearnConfig cfg;
    if (max_arity > 0) cfg.max_arity = max_arity;
    if (max_rounds > 0) cfg.max_rounds = max_rounds;
    Clock::time_point t0 = Clock::now();
    LearnReport rep = learn(teacher, cfg);
    double ms = ms_since(t0);
    emit_automaton(rep.automaton, out_path, dot_path);
    if (!stats_path.empty()) {
        std::ostringstream stats;
        stats << "membership_queries " << rep.membership_queries << "\n";
        stats << "equivalence_queries " << rep.equivalence_queries << "\n";
        stats << "final_arity " << rep.final_arity << "\n";
        stats << "final_states " << rep.final_states << "\n";
        stats << "rounds " << rep.rounds << "\n";
        write_file(stats_path, stats.str());
    }
    info_line(rep.automaton);
    std::cerr << "learn: " << rep.rounds << " rounds, " << rep.membership_queries
              << " membership queries, " << rep.equivalence_queries
              << " equivalence queries, " << std::fixed << std::setprecision(2) << ms << " ms\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bad-prefix automata for k-safety hyperproperties"};
    app.require_subcommand(1);

    std::string formula_path, traces_path, a_path, b_path, in_path;
    std::string out_path, dot_path, stats_path;
    int arity_flag = 0, max_arity = 0, max_rounds = 0;
    bool exact = false;

    CLI::App* compile = app.add_subcommand("compile", "formula to tight bad-prefix automaton");
    compile->add_option("formula", formula_path, "formula file")->required();
    compile->add_option("--arity", arity_flag, "assignment-closure arity override (>= 1)")
        ->check(CLI::PositiveNumber);
    compile->add_option("-o,--output", out_path, "automaton output file")->required();
    compile->add_option("--dot", dot_path, "DOT output file");

    CLI::App* member = app.add_subcommand("member", "is the trace set a bad prefix");
    member->add_option("formula", formula_path, "formula file")->required();
    member->add_option("traces", traces_path, "trace-set file")->required();

    CLI::App* equiv = app.add_subcommand("equiv", "representation equivalence of two automata");
    equiv->add_option("a", a_path, "first automaton")->required();
    equiv->add_option("b", b_path, "second automaton")->required();
    equiv->add_option("-o,--output", out_path, "witness trace-set output file");

    CLI::App* tighten_cmd = app.add_subcommand("tighten", "earliest-detection acceptance set");
    tighten_cmd->add_option("input", in_path, "automaton input file")->required();
    tighten_cmd->add_option("-o,--output", out_path, "automaton output file")->required();
    tighten_cmd->add_option("--dot", dot_path, "DOT output file");

    CLI::App* permclose = app.add_subcommand("permclose", "closure under component reorderings");
    permclose->add_option("input", in_path, "automaton input file")->required();
    permclose->add_option("-o,--output", out_path, "automaton output file")->required();
    permclose->add_option("--dot", dot_path, "DOT output file");

    CLI::App* check = app.add_subcommand("check-complete", "decide permutation-completeness");
    check->add_option("input", in_path, "automaton input file")->required();

    CLI::App* min_cmd = app.add_subcommand("min", "language-minimal automaton");
    min_cmd->add_option("input", in_path, "automaton input file")->required();
    min_cmd->add_option("-o,--output", out_path, "automaton output file")->required();
    min_cmd->add_option("--dot", dot_path, "DOT output file");

    CLI::App* classify = app.add_subcommand("classify", "universal-safety classification");
    classify->add_option("formula", formula_path, "formula file")->required();

    CLI::App* learn_cmd = app.add_subcommand("learn", "actively learn a bad-prefix automaton");
    learn_cmd->add_option("--formula", formula_path, "formula file")->required();
    learn_cmd->add_option("--max-arity", max_arity, "arity cap")->check(CLI::PositiveNumber);
    learn_cmd->add_option("--max-rounds", max_rounds, "hypothesis cap")
        ->check(CLI::PositiveNumber);
    learn_cmd->add_flag("--exact", exact, "exact counterexample minimization");
    learn_cmd->add_option("-o,--output", out_path, "automaton output file")->required();
    learn_cmd->add_option("--stats", stats_path, "stats output file");
    learn_cmd->add_option("--dot", dot_path, "DOT output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(compile))
            return cmd_compile(formula_path, arity_flag, out_path, dot_path);
        if (app.got_subcommand(member)) return cmd_member(formula_path, traces_path);
        if (app.got_subcommand(equiv)) return cmd_equiv(a_path, b_path, out_path);
        if (app.got_subcommand(tighten_cmd)) return cmd_tighten(in_path, out_path, dot_path);
        if (app.got_subcommand(permclose)) return cmd_permclose(in_path, out_path, dot_path);
        if (app.got_subcommand(check)) return cmd_check_complete(in_path);
        if (app.got_subcommand(min_cmd)) return cmd_min(in_path, out_path, dot_path);
        if (app.got_subcommand(classify)) return cmd_classify(formula_path);
        if (app.got_subcommand(learn_cmd))
            return cmd_learn(formula_path, max_arity, max_rounds, exact, out_path, stats_path,
                             dot_path);
    } catch (const budget_exceeded_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
