// Compares the thread-parallel kernels against their serial reference
// implementations: Monte Carlo episodes, the brute-force policy search, and
// benchmark rows. Prints wall times and checks the outputs agree.

#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qpomdp/bench.hpp"
#include "qpomdp/oracle.hpp"
#include "qpomdp/randgen.hpp"
#include "qpomdp/solve.hpp"
#include "qpomdp/verify.hpp"

using namespace qpomdp;

namespace {

long run_ms(const std::function<void()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

void report(const std::string& what, long serial_ms, long parallel_ms, bool agree) {
    std::cout << what << ": serial " << serial_ms << " ms, parallel " << parallel_ms << " ms";
    if (parallel_ms > 0)
        std::cout << " (x" << static_cast<double>(serial_ms) / parallel_ms << ")";
    std::cout << (agree ? "" : "  OUTPUTS DIFFER") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernel comparison"};
    long episodes = 20000;
    long steps = 256;
    int oracle_instances = 24;
    int jobs = 4;
    app.add_option("--episodes", episodes, "episodes for the simulation kernel");
    app.add_option("--steps", steps, "steps per episode");
    app.add_option("--oracle-instances", oracle_instances, "instances for the search kernel");
    app.add_option("--jobs", jobs, "row concurrency for the benchmark kernel");
    CLI11_PARSE(app, argc, argv);

    bool all_agree = true;
    Caps caps = Caps::from_env();

    // episode kernel on a witness for the small shuttle
    {
        BenchInstance inst = generate_bench("shuttle", "small");
        SolveOutput out = solve(inst.model, inst.objective, caps);
        if (!out.policy) {
            std::cerr << "unexpected: shuttle small has no witness\n";
            return 1;
        }
        const Pomdp& m = out.prep.model;
        SimStats serial, parallel;
        long ms_s = run_ms([&] { serial = simulate_serial(m, *out.policy, steps, episodes, 7); });
        long ms_p = run_ms([&] { parallel = simulate(m, *out.policy, steps, episodes, 7); });
        bool agree = format_sim_stats(serial) == format_sim_stats(parallel);
        all_agree = all_agree && agree;
        report("simulate " + std::to_string(episodes) + "x" + std::to_string(steps), ms_s, ms_p,
               agree);
    }

    // policy search kernel on random tiny instances
    {
        bool agree = true;
        long ms_s = 0, ms_p = 0;
        for (int i = 0; i < oracle_instances; ++i) {
            Pomdp m = random_tiny_model(500 + static_cast<std::uint64_t>(i));
            OracleResult rs, rp;
            ms_s += run_ms([&] { rs = oracle_decide_serial(m, 3, caps); });
            ms_p += run_ms([&] { rp = oracle_decide(m, 3, caps); });
            agree = agree && rs.verdict == rp.verdict;
        }
        all_agree = all_agree && agree;
        report("search " + std::to_string(oracle_instances) + " instances", ms_s, ms_p, agree);
    }

    // benchmark rows solved sequentially vs concurrently
    {
        std::vector<std::pair<std::string, std::string>> rows = {
            {"shuttle", "large"}, {"cheese", "small_hard"}, {"grid", "4x4"},
            {"maze_c", "liveness"}};
        std::vector<BenchRow> serial, parallel;
        long ms_s = run_ms([&] { serial = run_suite(rows, 120, 1); });
        long ms_p = run_ms([&] { parallel = run_suite(rows, 120, jobs); });
        bool agree = serial.size() == parallel.size();
        for (std::size_t i = 0; agree && i < serial.size(); ++i)
            agree = serial[i].verdict == parallel[i].verdict &&
                    serial[i].product_states == parallel[i].product_states;
        all_agree = all_agree && agree;
        report("bench rows x" + std::to_string(rows.size()), ms_s, ms_p, agree);
    }

    if (!all_agree) {
        std::cerr << "serial and parallel outputs differ\n";
        return 1;
    }
    return 0;
}
