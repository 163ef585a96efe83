#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "planshield/benchgen.hpp"
#include "planshield/pddl.hpp"
#include "planshield/plan_enum.hpp"
#include "planshield/shield.hpp"
#include "planshield/task_json.hpp"

namespace {

using namespace planshield;

// nonzero process exit codes; 0 and 2 are shield outcomes
enum ExitCode {
    kError = 1,
    kNotShielded = 2,
    kParseError = 3,
    kGroundError = 4,
    kEnumBudget = 5,
    kIlpTimeout = 6,
    kVerifyBudget = 7,
    kUnshieldable = 8,
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

struct TaskInput {
    std::string domain_path;
    std::string problem_path;
    std::string task_path;

    void add_options(CLI::App& cmd) {
        cmd.add_option("--domain", domain_path, "PDDL domain file");
        cmd.add_option("--problem", problem_path, "PDDL problem file");
        cmd.add_option("--task", task_path, "task in the native JSON format");
    }

    PlanningTask load() const {
        const bool pddl = !domain_path.empty() || !problem_path.empty();
        const bool json = !task_path.empty();
        if (pddl == json)
            throw Error("give exactly one input form: --domain with --problem, or --task");
        if (json) return parse_task_json(read_file(task_path));
        if (domain_path.empty() || problem_path.empty())
            throw Error("--domain and --problem must be given together");
        const DomainAst domain = parse_domain(read_file(domain_path));
        const ProblemAst problem = parse_problem(read_file(problem_path));
        std::vector<std::string> warnings;
        GroundOptions opts;
        opts.warnings = &warnings;
        PlanningTask task = ground(domain, problem, opts);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        return task;
    }
};

EnumerationConfig parse_k(const std::string& k) {
    EnumerationConfig config;
    if (k != "all") {
        int value = 0;
        try {
            value = std::stoi(k);
        } catch (const std::exception&) {
            throw Error("--k expects 'all' or a positive integer, got '" + k + "'");
        }
        if (value < 1) throw Error("--k expects 'all' or a positive integer, got '" + k + "'");
        config.top_k = value;
    }
    return config;
}

int map_error_to_exit(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const UnsupportedFeatureError*>(&e) ||
        dynamic_cast<const SchemaError*>(&e))
        return kParseError;
    if (dynamic_cast<const GroundingError*>(&e)) return kGroundError;
    if (dynamic_cast<const UnshieldableError*>(&e)) return kUnshieldable;
    if (const auto* stage = dynamic_cast<const StageError*>(&e)) {
        if (stage->stage == "enum-budget") return kEnumBudget;
        if (stage->stage == "ilp-timeout") return kIlpTimeout;
        if (stage->stage == "verify-budget") return kVerifyBudget;
    }
    return kError;
}

int cmd_shield(const TaskInput& input, const std::string& k, double time_limit,
               const std::string& out_domain, const std::string& out_problem,
               const std::string& out_task, const std::string& report_path) {
    const PlanningTask task = input.load();
    {
        const auto violations = validate_task(task);
        if (!violations.empty()) throw Error("invalid task: " + violations.front());
    }
    Budgets budgets;
    budgets.time_limit_s = time_limit;
    const ShieldReport report = shield(task, parse_k(k), budgets);

    const PlanningTask modified = apply_modifications(task, report.modifications);
    if (!out_domain.empty()) write_file(out_domain, emit_grounded_domain(modified));
    if (!out_problem.empty()) write_file(out_problem, emit_grounded_problem(modified));
    if (!out_task.empty()) write_file(out_task, emit_task_json(modified));
    if (!report_path.empty()) write_file(report_path, report_to_json(task, report));

    std::cout << "plans: " << report.plans.size()
              << (report.enumeration_complete ? " (complete)" : " (truncated)") << "\n"
              << "modifications: " << report.modifications.cardinality() << "\n"
              << modifications_to_diff(task, report.modifications)
              << (report.success ? "shielded: task verified unsolvable"
                                 : "NOT shielded: modified task is still solvable")
              << "\n";
    return report.success ? 0 : kNotShielded;
}

int cmd_enumerate(const TaskInput& input, const std::string& k) {
    const PlanningTask task = input.load();
    PlanSet plans;
    try {
        plans = enumerate_simple_plans(task, parse_k(k));
    } catch (const BudgetExceededError& e) {
        throw StageError("enum-budget", e.what());
    }
    for (const Plan& p : plans.plans) {
        std::cout << "cost=" << p.cost << " len=" << p.steps.size() << ":";
        for (int s : p.steps) std::cout << " " << task.actions[static_cast<std::size_t>(s)].name;
        std::cout << "\n";
    }
    std::cout << "|Pi| = " << plans.size() << (plans.complete ? " (complete)" : " (truncated)")
              << "\n";
    return 0;
}

int cmd_verify(const TaskInput& input) {
    const PlanningTask task = input.load();
    std::cout << (goal_reachable(task) ? "SOLVABLE" : "UNSOLVABLE") << "\n";
    return 0;
}

int cmd_benchgen(const BenchConfig& config, const std::string& out) {
    const GeneratedBenchmark bench = generate(config);
    const std::string json = emit_task_json(bench.task);
    if (out.empty())
        std::cout << json;
    else
        write_file(out, json);
    std::cerr << "generated " << bench.expected_plan_count << " plans over "
              << bench.task.num_actions() << " actions, " << bench.task.num_fluents()
              << " fluents\n";
    return 0;
}

int cmd_experiment(const std::string& suite_path, const std::string& out, int jobs) {
    cli::ExperimentSuite suite = cli::load_suite(suite_path);
    if (jobs > 0) suite.jobs = jobs;
    const auto rows = cli::run_suite(suite);
    write_file(out, cli::rows_to_csv(rows));
    std::cout << cli::summarize(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planshield: find flaw-reaching plans in STRIPS tasks and compute the minimal "
                 "action edits that make the task unsolvable"};
    app.require_subcommand(1);

    // shield
    auto* shield_cmd = app.add_subcommand("shield", "run the full shielding pipeline");
    TaskInput shield_input;
    shield_input.add_options(*shield_cmd);
    std::string shield_k = "all";
    double time_limit = 1800.0;
    std::string out_domain, out_problem, out_task, report_path;
    shield_cmd->add_option("--k", shield_k, "number of plans to block: 'all' or an integer");
    shield_cmd->add_option("--time-limit", time_limit, "wall-clock limit in seconds");
    shield_cmd->add_option("--out-domain", out_domain, "write the modified grounded domain here");
    shield_cmd->add_option("--out-problem", out_problem, "write the grounded problem here");
    shield_cmd->add_option("--out-task", out_task, "write the modified task as JSON here");
    shield_cmd->add_option("--report", report_path, "write the JSON report here");

    // enumerate
    auto* enum_cmd = app.add_subcommand("enumerate", "list simple solution plans");
    TaskInput enum_input;
    enum_input.add_options(*enum_cmd);
    std::string enum_k = "all";
    enum_cmd->add_option("--k", enum_k, "'all' or an integer");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "BFS solvability check");
    TaskInput verify_input;
    verify_input.add_options(*verify_cmd);

    // benchgen
    auto* bench_cmd = app.add_subcommand("benchgen", "generate a synthetic graph task");
    BenchConfig bench_config;
    std::string bench_out;
    bench_cmd->add_option("--plans", bench_config.num_plans, "number of solution plans")->required();
    bench_cmd->add_option("--min", bench_config.min_len, "minimum plan length");
    bench_cmd->add_option("--max", bench_config.max_len, "maximum plan length");
    bench_cmd->add_option("--share", bench_config.share_fraction, "prefix-sharing probability");
    bench_cmd->add_option("--seed", bench_config.seed, "generator seed");
    bench_cmd->add_option("--out", bench_out, "output JSON task file (stdout when omitted)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "run an instance x variant grid");
    std::string suite_path, exp_out;
    int exp_jobs = 0;
    exp_cmd->add_option("--suite", suite_path, "suite description JSON")->required();
    exp_cmd->add_option("--out", exp_out, "results CSV path")->required();
    exp_cmd->add_option("--jobs", exp_jobs, "parallel worker count (overrides the suite file)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (shield_cmd->parsed())
            return cmd_shield(shield_input, shield_k, time_limit, out_domain, out_problem,
                              out_task, report_path);
        if (enum_cmd->parsed()) return cmd_enumerate(enum_input, enum_k);
        if (verify_cmd->parsed()) return cmd_verify(verify_input);
        if (bench_cmd->parsed()) return cmd_benchgen(bench_config, bench_out);
        if (exp_cmd->parsed()) return cmd_experiment(suite_path, exp_out, exp_jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error_to_exit(e);
    }
    return kError;
}
