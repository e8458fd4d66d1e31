// Command-line front end: run, sweep-q and bound.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <coop_bandit/coop_bandit.hpp>

namespace cb = coop_bandit;

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad number in list: " + item);
    }
    if (out.empty()) throw std::invalid_argument("empty q list");
    return out;
}

void print_warnings(const cb::ExperimentConfig& c) {
    for (const auto& w : c.warnings()) std::cerr << "warning: " << w << '\n';
}

int cmd_run(cb::ExperimentConfig c) {
    print_warnings(c);
    const auto rep = cb::run_experiment(c);
    cb::write_outputs(c.out_dir, c, rep.results, rep.summary);
    const auto& s = rep.summary;
    std::cout << "policy " << cb::to_string(c.policy) << ": " << s.runs - s.failed << "/" << s.runs
              << " runs completed";
    if (s.failed) std::cout << " (" << s.failed << " INIT failures excluded)";
    std::cout << '\n';
    if (!s.checkpoint_t.empty()) {
        std::cout << "final t=" << s.checkpoint_t.back() << " RR=" << s.reward_regret.back().mean << " +- "
                  << s.reward_regret.back().stderr_ << " FR=" << s.fairness_regret.back().mean << " +- "
                  << s.fairness_regret.back().stderr_ << " collisions=" << s.collisions.back().mean << '\n';
    }
    std::cout << "outputs written to " << c.out_dir << '\n';
    return 0;
}

int cmd_sweep(cb::ExperimentConfig c, const std::string& qlist) {
    print_warnings(c);
    const auto rows = cb::sweep_q(c, parse_list(qlist));
    std::filesystem::create_directories(c.out_dir);
    std::ofstream f(std::filesystem::path(c.out_dir) / "sweep_q.csv", std::ios::binary);
    cb::write_sweep_csv(f, rows);
    cb::write_sweep_csv(std::cout, rows);
    return 0;
}

int cmd_bound(const cb::ExperimentConfig& c) {
    const auto means = c.effective_means();
    const double horizon = c.bound_horizon.value_or(static_cast<double>(c.horizon));
    std::printf("N=%zu M=%zu T=%.10g\n", c.n_sensors, c.n_servers, horizon);

    std::optional<double> eps;
    try {
        eps = cb::build_network(c).eps_g;
    } catch (const std::exception& e) {
        std::cerr << "warning: no graph index (" << e.what() << ")\n";
    }
    try {
        if (!eps) throw std::domain_error("graph index undefined without communication");
        const auto b = cb::theoretical_bounds(means, c.n_servers, c.n_sensors, horizon, *eps);
        std::printf("eps_g=%.12g\ndelta_min=%.12g\nZ=%.12g\nreward_regret_bound=%.12g\nfairness_regret_bound=%.12g\n",
                    *eps, b.delta_min, b.z, b.reward_bound, b.fairness_bound);
    } catch (const std::exception& e) {
        std::printf("distributed bounds: n/a (%s)\n", e.what());
    }

    double l_min = 0.0, l_max = 0.0;
    if (c.bound_l_min && c.bound_l_max) {
        l_min = *c.bound_l_min;
        l_max = *c.bound_l_max;
    } else {
        // Defaults: smallest gap, and the gap between the best and worst M-sets.
        std::vector<double> sorted = means;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const std::size_t m = std::min(c.n_servers, sorted.size());
        const double top = std::accumulate(sorted.begin(), sorted.begin() + m, 0.0);
        const double bottom = std::accumulate(sorted.end() - m, sorted.end(), 0.0);
        l_min = c.bound_l_min.value_or(means.size() > 1 ? cb::min_gap(means) : 1.0);
        l_max = c.bound_l_max.value_or(std::max(top - bottom, l_min));
    }
    std::printf("centralized_bound=%.12g\n", cb::centralized_bound(static_cast<double>(c.n_sensors), horizon, l_min, l_max));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair distributed cooperative multiplayer bandit simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::string out, policy, qlist = "0.2,0.4,0.6,0.8,1.0";

    auto* run = app.add_subcommand("run", "run a seeded multi-run experiment");
    run->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    run->add_option("--runs", runs, "number of runs");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--out", out, "output directory");
    run->add_option("--policy", policy, "dculcb | dcucb | static | dculcb-nocomm | cho | che");

    auto* sweep = app.add_subcommand("sweep-q", "sweep the ER connection probability");
    sweep->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--q", qlist, "comma-separated q values");
    sweep->add_option("--out", out, "output directory");
    sweep->add_option("--seed", seed, "master seed");

    auto* bound = app.add_subcommand("bound", "print the theoretical regret bounds");
    bound->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        auto c = cb::load_config(config_path);
        if (runs) c.runs = runs;
        if (run->count("--seed") || sweep->count("--seed")) c.seed = seed;
        if (!out.empty()) c.out_dir = out;
        if (!policy.empty()) c.policy = cb::parse_policy(policy);
        if (*run) return cmd_run(c);
        if (*sweep) return cmd_sweep(c, qlist);
        if (*bound) return cmd_bound(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
