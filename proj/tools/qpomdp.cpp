// Command-line front end: solve / verify / simulate / gen / bench.
//
// Exit codes: 0 success, 1 usage, 2 bad input, 3 NOT-FOUND-IN-CLASS (or a
// failed certificate), 4 resource cap or deadline, 70 internal error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qpomdp/bench.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/ingest.hpp"
#include "qpomdp/objective.hpp"
#include "qpomdp/oracle.hpp"
#include "qpomdp/policy.hpp"
#include "qpomdp/product.hpp"
#include "qpomdp/solve.hpp"
#include "qpomdp/verify.hpp"

namespace {

using namespace qpomdp;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

Caps make_caps(std::uint64_t cap_flag) {
    Caps caps = Caps::from_env();
    if (cap_flag) {
        caps.max_supports = cap_flag;
        caps.max_product_states = 4 * cap_flag;
    }
    return caps;
}

// The model a policy runs on: the input model itself for parity objectives,
// otherwise the automaton product in its reduced form. verify and simulate
// need the same --objective the policy was solved with.
Pomdp policy_model(const std::string& model_path, const std::string& objective_path,
                   const Caps& caps) {
    Pomdp input = load_model(read_text_file(model_path));
    if (objective_path.empty()) return input;
    Objective obj = parse_objective(read_text_file(objective_path));
    return prepare_solve_model(input, obj, caps).model;
}

int cmd_solve(const std::string& model_path, const std::string& objective_path,
              const std::string& policy_out, const std::string& dump_product_path,
              std::uint64_t cap_flag, bool quiet) {
    Timer timer;
    Caps caps = make_caps(cap_flag);
    Pomdp input = load_model(read_text_file(model_path));
    Objective obj = parse_objective(read_text_file(objective_path));

    if (!dump_product_path.empty()) {
        SolveModel prep = prepare_solve_model(input, obj, caps);
        BeliefObsPomdp g = build_product(prep.model, caps);
        write_text_file(dump_product_path, write_model(dump_product_model(g)));
    }
    SolveOutput out = solve(input, obj, caps);
    const char* verdict =
        out.solution.verdict == Verdict::AlmostSure ? "ALMOST-SURE" : "NOT-FOUND-IN-CLASS";
    std::cout << verdict << "\n";
    std::cout << "solve model: " << out.prep.model.num_states() << " states";
    switch (out.prep.reduce_case) {
        case ReduceCase::Identity: std::cout << " (already a 1/2-priority model)"; break;
        case ReduceCase::ReachSink: std::cout << " (reach shape, sink added)"; break;
        case ReduceCase::Unsupported: std::cout << " (solved as a direct parity model)"; break;
    }
    std::cout << "\n";
    std::cout << "product: " << out.product_states << " states, " << out.product_memories
              << " memories, max support " << out.max_support << "\n";
    if (out.policy) {
        std::cout << "policy memories: " << out.policy->num_memories() << "\n";
        if (!policy_out.empty())
            write_text_file(policy_out, write_policy(*out.policy, out.prep.model));
    }
    if (!quiet) std::cout << "time: " << timer.ms() << " ms\n";
    return out.solution.verdict == Verdict::AlmostSure ? 0 : 3;
}

int cmd_verify(const std::string& model_path, const std::string& objective_path,
               const std::string& policy_path, std::uint64_t cap_flag, bool quiet) {
    Timer timer;
    Caps caps = make_caps(cap_flag);
    Pomdp m = policy_model(model_path, objective_path, caps);
    Policy p = parse_policy(read_text_file(policy_path), m);
    Certificate cert = check(m, p);
    std::cout << format_certificate(cert, m, p);
    if (!quiet) std::cout << "time: " << timer.ms() << " ms\n";
    return cert.ok ? 0 : 3;
}

int cmd_simulate(const std::string& model_path, const std::string& objective_path,
                 const std::string& policy_path, long steps, long episodes, std::uint64_t seed,
                 std::uint64_t cap_flag, bool quiet) {
    Timer timer;
    Caps caps = make_caps(cap_flag);
    Pomdp m = policy_model(model_path, objective_path, caps);
    Policy p = parse_policy(read_text_file(policy_path), m);
    SimStats stats = simulate(m, p, steps, episodes, seed);
    std::cout << format_sim_stats(stats);
    if (!quiet) std::cout << "time: " << timer.ms() << " ms\n";
    return 0;
}

int cmd_gen(const std::string& family, const std::string& variant, const std::string& out_path,
            const std::string& objective_out) {
    BenchInstance inst = generate_bench(family, variant);
    std::string text = write_model(inst.model);
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
    if (!objective_out.empty()) write_text_file(objective_out, write_objective(inst.objective));
    return 0;
}

int cmd_bench(const std::string& suite, const std::string& family, const std::string& variant,
              const std::string& out_path, double timeout, int jobs) {
    std::vector<std::pair<std::string, std::string>> rows;
    if (!family.empty()) {
        rows.push_back({family, variant});
    } else if (suite == "table1") {
        rows = table1_rows();
    } else {
        throw InputError("unknown suite '" + suite + "' (try table1, or --family/--variant)");
    }
    std::vector<BenchRow> results = run_suite(rows, timeout, jobs);
    std::cout << format_table(results);
    if (!out_path.empty()) write_text_file(out_path, format_csv(results));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qualitative parity analysis for partially observable models"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --quiet appear after the subcommand name
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress the timing line");

    std::string model_path, objective_path, policy_path, policy_out, dump_product_path;
    std::uint64_t cap_flag = 0;

    auto* solve_cmd = app.add_subcommand("solve", "decide and extract a witness controller");
    solve_cmd->add_option("--model", model_path, "model file (.qpomdp)")->required();
    solve_cmd->add_option("--objective", objective_path, "objective file (.qobj)")->required();
    solve_cmd->add_option("--policy-out", policy_out, "write the witness here (.qpol)");
    solve_cmd->add_option("--dump-product", dump_product_path,
                          "write the belief-observation product as a model file");
    solve_cmd->add_option("--cap", cap_flag, "support cap (product cap = 4x)");

    auto* verify_cmd = app.add_subcommand("verify", "certify a controller exactly");
    verify_cmd->add_option("--model", model_path, "model file (.qpomdp)")->required();
    verify_cmd->add_option("--objective", objective_path,
                           "objective the policy was solved with (omit for parity models)");
    verify_cmd->add_option("--policy", policy_path, "controller file (.qpol)")->required();
    verify_cmd->add_option("--cap", cap_flag, "support cap (product cap = 4x)");

    long steps = 200, episodes = 1000;
    std::uint64_t seed = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo sanity statistics");
    sim_cmd->add_option("--model", model_path, "model file (.qpomdp)")->required();
    sim_cmd->add_option("--objective", objective_path,
                        "objective the policy was solved with (omit for parity models)");
    sim_cmd->add_option("--policy", policy_path, "controller file (.qpol)")->required();
    sim_cmd->add_option("--steps", steps, "steps per episode");
    sim_cmd->add_option("--episodes", episodes, "episode count");
    sim_cmd->add_option("--seed", seed, "master seed");
    sim_cmd->add_option("--cap", cap_flag, "support cap (product cap = 4x)");

    std::string family, variant, out_path, objective_out;
    auto* gen_cmd = app.add_subcommand("gen", "emit a benchmark instance");
    gen_cmd->add_option("--family", family, "benchmark family")->required();
    gen_cmd->add_option("--variant", variant, "family variant")->required();
    gen_cmd->add_option("--out", out_path, "model output path (default stdout)");
    gen_cmd->add_option("--objective-out", objective_out, "also write the objective file");

    std::string suite = "table1";
    double timeout = 120.0;
    int jobs = 1;
    auto* bench_cmd = app.add_subcommand("bench", "regenerate the benchmark table");
    bench_cmd->add_option("--suite", suite, "suite name (table1)");
    bench_cmd->add_option("--family", family, "run a single family instead of a suite");
    bench_cmd->add_option("--variant", variant, "variant for --family");
    bench_cmd->add_option("--out", out_path, "also write comma-separated results here");
    bench_cmd->add_option("--timeout", timeout, "per-row wall-clock budget in seconds");
    bench_cmd->add_option("--jobs", jobs, "rows solved concurrently");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(model_path, objective_path, policy_out, dump_product_path, cap_flag,
                             quiet);
        if (verify_cmd->parsed())
            return cmd_verify(model_path, objective_path, policy_path, cap_flag, quiet);
        if (sim_cmd->parsed())
            return cmd_simulate(model_path, objective_path, policy_path, steps, episodes, seed,
                                cap_flag, quiet);
        if (gen_cmd->parsed()) return cmd_gen(family, variant, out_path, objective_out);
        if (bench_cmd->parsed())
            return cmd_bench(suite, family, variant, out_path, timeout, jobs);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    } catch (const CapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
}
