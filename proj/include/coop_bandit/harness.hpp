#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "centralized.hpp"
#include "consensus.hpp"
#include "env.hpp"
#include "graph.hpp"
#include "init.hpp"
#include "metrics.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace coop_bandit {

struct GraphSpec {
    enum class Kind { er, edges, none };
    Kind kind = Kind::er;
    double q = 0.5;
    std::optional<std::uint64_t> seed; // defaults to a substream of the master seed
    std::size_t max_retries = 10000;
    std::vector<Edge> edges; // 0-based, Kind::edges only
};

/// Declarative description of one experiment.
struct ExperimentConfig {
    std::size_t n_sensors = 40;
    std::size_t n_servers = 10;
    std::size_t horizon = 10000;
    std::optional<std::vector<double>> means; // unset: mu_i = i / (N + 1)
    double concentration = 20.0;
    GraphSpec graph;
    PolicyKind policy = PolicyKind::dculcb;
    std::optional<double> delta0; // unset: 1 / (N T)
    bool fairness = true;
    bool include_init_in_regret = true;
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::size_t checkpoint_every = 100;
    std::optional<Matrix> user_means; // Che-UCB; unset: uniform draw from the master seed
    std::size_t graphs_per_q = 20;
    std::size_t runs_per_graph = 1;
    // `bound` subcommand overrides.
    std::optional<double> bound_horizon;
    std::optional<double> bound_l_min;
    std::optional<double> bound_l_max;

    std::vector<double> effective_means() const { return means ? *means : linear_means(n_sensors); }

    double effective_delta0() const {
        return delta0 ? *delta0 : 1.0 / (static_cast<double>(n_sensors) * static_cast<double>(horizon));
    }

    SelectionRule rule() const { return policy == PolicyKind::dcucb ? SelectionRule::ucb : SelectionRule::ulcb; }
    bool fair() const { return fairness && policy != PolicyKind::static_rank; }

    void validate() const {
        if (n_sensors == 0 || n_servers == 0) throw std::invalid_argument("config: need sensors and servers");
        if (n_servers >= n_sensors) throw std::invalid_argument("config: n_servers must be smaller than n_sensors");
        if (horizon < n_sensors) throw std::invalid_argument("config: horizon must be at least n_sensors");
        if (means && means->size() != n_sensors) throw std::invalid_argument("config: means length != n_sensors");
        if (!(concentration > 0.0)) throw std::invalid_argument("config: concentration must be positive");
        const double d = effective_delta0();
        if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("config: delta0 must lie in (0,1)");
        if (runs == 0) throw std::invalid_argument("config: runs must be positive");
        if (checkpoint_every == 0) throw std::invalid_argument("config: checkpoint_every must be positive");
        if (graph.kind == GraphSpec::Kind::er && !(graph.q >= 0.0 && graph.q <= 1.0))
            throw std::invalid_argument("config: graph q must lie in [0,1]");
        if (user_means && (user_means->rows() != n_servers || user_means->cols() != n_sensors))
            throw std::invalid_argument("config: user_means must be n_servers x n_sensors");
    }

    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (is_centralized(policy) && graph.kind != GraphSpec::Kind::none)
            w.emplace_back("centralized policy ignores the graph/gossip configuration");
        if (policy == PolicyKind::dculcb_nocomm && graph.kind != GraphSpec::Kind::none)
            w.emplace_back("dculcb-nocomm runs without communication; graph configuration ignored");
        return w;
    }
};

inline GraphSpec graph_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
    GraphSpec g;
    const std::string type = j.value("type", std::string("er"));
    if (type == "er") {
        g.kind = GraphSpec::Kind::er;
        g.q = j.value("q", 0.5);
        if (j.contains("seed")) g.seed = j.at("seed").get<std::uint64_t>();
        g.max_retries = j.value("max_retries", std::size_t{10000});
    } else if (type == "edges") {
        g.kind = GraphSpec::Kind::edges;
        if (j.contains("file")) {
            std::ifstream in(base / j.at("file").get<std::string>());
            if (!in) throw std::runtime_error("config: cannot open edge list file");
            const auto ng = read_edge_list(in);
            g.edges.assign(ng.edges().begin(), ng.edges().end());
        } else {
            for (const auto& e : j.at("edges")) {
                const auto a = e.at(0).get<std::size_t>();
                const auto b = e.at(1).get<std::size_t>();
                if (a == 0 || b == 0) throw std::invalid_argument("config: edge endpoints are 1-based");
                g.edges.emplace_back(a - 1, b - 1);
            }
        }
    } else if (type == "none") {
        g.kind = GraphSpec::Kind::none;
    } else {
        throw std::invalid_argument("config: unknown graph type '" + type + "'");
    }
    return g;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base = ".") {
    ExperimentConfig c;
    c.n_sensors = j.value("n_sensors", c.n_sensors);
    c.n_servers = j.value("n_servers", c.n_servers);
    c.horizon = j.value("horizon", c.horizon);
    if (j.contains("means")) {
        const auto& m = j.at("means");
        if (m.is_string()) {
            if (m.get<std::string>() != "linear") throw std::invalid_argument("config: means must be 'linear' or a list");
        } else {
            c.means = m.get<std::vector<double>>();
        }
    }
    c.concentration = j.value("concentration", c.concentration);
    if (j.contains("graph")) c.graph = graph_spec_from_json(j.at("graph"), base);
    if (j.contains("policy")) c.policy = parse_policy(j.at("policy").get<std::string>());
    if (j.contains("delta0")) {
        const auto& d = j.at("delta0");
        if (d.is_string()) {
            if (d.get<std::string>() != "auto") throw std::invalid_argument("config: delta0 must be 'auto' or a number");
        } else {
            c.delta0 = d.get<double>();
        }
    }
    c.fairness = j.value("fairness", c.fairness);
    c.include_init_in_regret = j.value("include_init_in_regret", c.include_init_in_regret);
    c.runs = j.value("runs", c.runs);
    c.seed = j.value("seed", c.seed);
    c.out_dir = j.value("out", c.out_dir);
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    if (j.contains("user_means")) c.user_means = Matrix::from_rows(j.at("user_means").get<std::vector<std::vector<double>>>());
    c.graphs_per_q = j.value("graphs_per_q", c.graphs_per_q);
    c.runs_per_graph = j.value("runs_per_graph", c.runs_per_graph);
    if (j.contains("bound")) {
        const auto& b = j.at("bound");
        if (b.contains("horizon")) c.bound_horizon = b.at("horizon").get<double>();
        if (b.contains("l_min")) c.bound_l_min = b.at("l_min").get<double>();
        if (b.contains("l_max")) c.bound_l_max = b.at("l_max").get<double>();
    }
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config parse error: " + std::string(e.what()));
    }
    return config_from_json(j, path.parent_path());
}

/// The communication layer a run sees.
struct Network {
    NetworkGraph graph;
    GossipMatrix gossip;
    std::optional<double> eps_g; // unset without communication
};

inline Network make_network(const NetworkGraph& g) {
    Network n{g, build_gossip(g), std::nullopt};
    n.eps_g = epsilon_g(n.gossip);
    return n;
}

inline Network isolated_network(std::size_t m) {
    Network n{NetworkGraph(m), isolated_gossip(m), std::nullopt};
    if (m == 1) n.eps_g = 0.0;
    return n;
}

inline std::uint64_t graph_seed(const ExperimentConfig& c) {
    return c.graph.seed.value_or(derive_seed(c.seed, Stream::graph));
}

inline Network build_network(const ExperimentConfig& c) {
    if (c.policy == PolicyKind::dculcb_nocomm || is_centralized(c.policy)) return isolated_network(c.n_servers);
    switch (c.graph.kind) {
    case GraphSpec::Kind::er:
        return make_network(generate_er(c.n_servers, c.graph.q, graph_seed(c), c.graph.max_retries));
    case GraphSpec::Kind::edges: return make_network(NetworkGraph(c.n_servers, c.graph.edges));
    case GraphSpec::Kind::none: return isolated_network(c.n_servers);
    }
    throw std::logic_error("unreachable");
}

inline Matrix che_user_means(const ExperimentConfig& c) {
    return c.user_means ? *c.user_means : random_user_means(c.n_servers, c.n_sensors, derive_seed(c.seed, Stream::user_means));
}

struct RunResult {
    std::size_t run = 0;
    bool init_failed = false;
    InitResult init;
    std::optional<ExperimentTrace> trace;
    RegretCurves curves;
    std::size_t init_rounds_recorded = 0;
    std::uint64_t coverage_hits = 0;  // (k, i, t) with mu_i in [L, U]
    std::uint64_t coverage_total = 0;
    std::uint64_t sweep_collisions = 0;
};

namespace detail {

inline RunResult run_distributed(const ExperimentConfig& c, const Network& net, std::size_t run_index, bool keep_trace) {
    const std::uint64_t rs = run_seed(c.seed, run_index);
    const auto means = c.effective_means();
    const std::size_t n = c.n_sensors;
    const std::size_t m = c.n_servers;
    Environment env(means, c.concentration, derive_seed(rs, Stream::environment));
    Engine policy_rng(derive_seed(rs, Stream::policy));
    ExperimentTrace trace(m, means);

    RunResult res;
    res.run = run_index;
    auto play_init = [&](std::span<const std::size_t> sel) {
        RoundOutcome out = env.play_round(sel);
        if (c.include_init_in_regret) trace.append(Phase::init, out);
        return out;
    };
    res.init = run_init(n, c.effective_delta0(), m, policy_rng, play_init);
    res.init_rounds_recorded = trace.n_rounds();
    if (!res.init.succeeded) {
        res.init_failed = true;
        return res;
    }

    std::vector<ServerPolicyState> servers(m);
    for (std::size_t k = 0; k < m; ++k) servers[k] = {k, res.init.rank[k], res.init.m_estimate[k], n};

    const SelectionRule rule = c.rule();
    const bool fair = c.fair();
    ConsensusState cs(m, n);
    std::vector<std::size_t> sel(m), ranks(m, 0);
    std::vector<double> observed(m);
    for (std::size_t t = 1; t <= c.horizon; ++t) {
        const bool sweep = t <= n;
        for (std::size_t k = 0; k < m; ++k) {
            if (sweep) {
                sel[k] = sweep_sensor(servers[k].rank0, t, n);
                ranks[k] = 0;
                continue;
            }
            const auto bounds = confidence_bounds(cs, servers[k], t);
            for (std::size_t i = 0; i < n; ++i) {
                ++res.coverage_total;
                if (means[i] >= bounds.lower[i] && means[i] <= bounds.upper[i]) ++res.coverage_hits;
            }
            sel[k] = select_distributed(cs, servers[k], t, rule, fair, &bounds);
            ranks[k] = effective_rank(servers[k], t, fair);
        }
        const RoundOutcome out = env.play_round(sel);
        trace.append(sweep ? Phase::sweep : Phase::main, out, ranks);
        if (sweep) res.sweep_collisions += out.collisions();
        for (std::size_t k = 0; k < m; ++k) observed[k] = out.servers[k].observed;
        cs.step(net.gossip, sel, observed);
    }
    res.curves = regret_curves(trace);
    if (keep_trace) res.trace = std::move(trace);
    return res;
}

inline RunResult run_centralized(const ExperimentConfig& c, std::size_t run_index, bool keep_trace) {
    const std::uint64_t rs = run_seed(c.seed, run_index);
    const std::size_t n = c.n_sensors;
    const std::size_t m = c.n_servers;
    RunResult res;
    res.run = run_index;
    res.init.succeeded = true;

    auto drive = [&](auto& env, ExperimentTrace& trace, bool homogeneous) {
        CentralState st(m, n, homogeneous);
        for (std::size_t t = 1; t <= c.horizon; ++t) {
            const std::vector<std::size_t> sel =
                homogeneous ? cho_ucb_round(st, t) : che_ucb_round(st, t).assignment;
            const RoundOutcome out = env.play_round(sel);
            trace.append(t <= n ? Phase::sweep : Phase::main, out);
            if (t <= n) res.sweep_collisions += out.collisions();
            for (std::size_t k = 0; k < m; ++k) st.update(k, sel[k], out.servers[k].reward);
        }
    };

    if (c.policy == PolicyKind::cho) {
        Environment env(c.effective_means(), c.concentration, derive_seed(rs, Stream::environment));
        ExperimentTrace trace(m, c.effective_means());
        drive(env, trace, true);
        res.curves = regret_curves(trace);
        if (keep_trace) res.trace = std::move(trace);
    } else {
        Matrix mu = che_user_means(c);
        HeterogeneousEnvironment env(mu, c.concentration, derive_seed(rs, Stream::environment));
        ExperimentTrace trace(mu);
        drive(env, trace, false);
        res.curves = regret_curves(trace);
        if (keep_trace) res.trace = std::move(trace);
    }
    return res;
}

} // namespace detail

/// One seeded run of the configured policy on a fixed network.
inline RunResult run_single(const ExperimentConfig& c, const Network& net, std::size_t run_index, bool keep_trace = true) {
    if (is_centralized(c.policy)) return detail::run_centralized(c, run_index, keep_trace);
    return detail::run_distributed(c, net, run_index, keep_trace);
}

// Worker count: COOP_BANDIT_THREADS caps hardware concurrency.
inline std::size_t worker_count(std::size_t jobs) {
    std::size_t w = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COOP_BANDIT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) w = std::min(w, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, std::min(w, jobs));
}

// Runs job(i) for i in [0, count) on a small worker pool.
template <class Job>
void parallel_for(std::size_t count, Job&& job) {
    const std::size_t workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::vector<RunResult> run_all(const ExperimentConfig& c, const Network& net, bool keep_traces = false) {
    std::vector<RunResult> results(c.runs);
    parallel_for(c.runs, [&](std::size_t r) { results[r] = run_single(c, net, r, keep_traces); });
    return results;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr m;
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return m;
}

// Checkpoint rounds (1-based): every `every` rounds plus the last one.
inline std::vector<std::size_t> checkpoints(std::size_t rounds, std::size_t every) {
    std::vector<std::size_t> cps;
    for (std::size_t t = every; t <= rounds; t += every) cps.push_back(t);
    if (rounds > 0 && (cps.empty() || cps.back() != rounds)) cps.push_back(rounds);
    return cps;
}

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline const char* kCsvHeader = "run,t,algo,reward_regret,fairness_regret,collisions\n";

inline void write_run_rows(std::ostream& os, const RunResult& r, std::string_view algo, std::size_t every) {
    const auto& cv = r.curves;
    for (std::size_t t : checkpoints(cv.reward_regret.size(), every))
        os << r.run << ',' << t << ',' << algo << ',' << format_number(cv.reward_regret[t - 1]) << ','
           << format_number(cv.fairness_regret[t - 1]) << ',' << cv.collisions[t - 1] << '\n';
}

struct ExperimentSummary {
    std::size_t runs = 0;
    std::size_t failed = 0;
    std::vector<std::size_t> failed_runs;
    std::optional<double> eps_g;
    std::size_t init_slots = 0;
    std::size_t rounds = 0;
    std::vector<std::size_t> checkpoint_t;
    std::vector<MeanStderr> reward_regret, fairness_regret, collisions;
    double coverage = 1.0;
    std::uint64_t sweep_collisions = 0;
};

/// Mean +- standard error across successful runs at each checkpoint.
inline ExperimentSummary summarize(const ExperimentConfig& c, const Network& net, const std::vector<RunResult>& results) {
    ExperimentSummary s;
    s.runs = results.size();
    s.eps_g = net.eps_g;
    if (!is_centralized(c.policy)) s.init_slots = init_horizon(c.n_sensors, c.effective_delta0());
    std::vector<const RunResult*> ok;
    std::uint64_t hits = 0, total = 0;
    for (const auto& r : results) {
        if (r.init_failed) {
            ++s.failed;
            s.failed_runs.push_back(r.run);
            continue;
        }
        ok.push_back(&r);
        hits += r.coverage_hits;
        total += r.coverage_total;
        s.sweep_collisions += r.sweep_collisions;
    }
    s.coverage = total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 1.0;
    if (ok.empty()) return s;
    s.rounds = ok.front()->curves.reward_regret.size();
    for (const auto* r : ok)
        if (r->curves.reward_regret.size() != s.rounds) throw std::logic_error("summarize: runs differ in length");
    s.checkpoint_t = checkpoints(s.rounds, c.checkpoint_every);
    std::vector<double> a(ok.size()), b(ok.size()), d(ok.size());
    for (std::size_t t : s.checkpoint_t) {
        for (std::size_t i = 0; i < ok.size(); ++i) {
            a[i] = ok[i]->curves.reward_regret[t - 1];
            b[i] = ok[i]->curves.fairness_regret[t - 1];
            d[i] = static_cast<double>(ok[i]->curves.collisions[t - 1]);
        }
        s.reward_regret.push_back(mean_stderr(a));
        s.fairness_regret.push_back(mean_stderr(b));
        s.collisions.push_back(mean_stderr(d));
    }
    return s;
}

inline nlohmann::json summary_json(const ExperimentConfig& c, const ExperimentSummary& s) {
    nlohmann::json j;
    j["policy"] = std::string(to_string(c.policy));
    j["n_sensors"] = c.n_sensors;
    j["n_servers"] = c.n_servers;
    j["horizon"] = c.horizon;
    j["seed"] = c.seed;
    j["runs"] = s.runs;
    j["failed_runs"] = s.failed_runs;
    j["init_slots"] = s.init_slots;
    j["rounds_recorded"] = s.rounds;
    j["eps_g"] = s.eps_g ? nlohmann::json(*s.eps_g) : nlohmann::json(nullptr);
    j["coverage"] = s.coverage;
    j["sweep_collisions"] = s.sweep_collisions;
    auto& cps = j["checkpoints"] = nlohmann::json::array();
    for (std::size_t i = 0; i < s.checkpoint_t.size(); ++i) {
        auto ms = [](const MeanStderr& m) { return nlohmann::json{{"mean", m.mean}, {"stderr", m.stderr_}}; };
        cps.push_back({{"t", s.checkpoint_t[i]},
                       {"reward_regret", ms(s.reward_regret[i])},
                       {"fairness_regret", ms(s.fairness_regret[i])},
                       {"collisions", ms(s.collisions[i])}});
    }
    return j;
}

/// Writes runs/run_XXXX.csv, curves.csv (all runs) and summary.json under
/// `dir`.
inline void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& c, const std::vector<RunResult>& results,
                          const ExperimentSummary& s) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "runs");
    const auto algo = to_string(c.policy);
    std::ofstream all(dir / "curves.csv", std::ios::binary);
    all << kCsvHeader;
    for (const auto& r : results) {
        if (r.init_failed) continue;
        char name[32];
        std::snprintf(name, sizeof name, "run_%04zu.csv", r.run);
        std::ofstream one(dir / "runs" / name, std::ios::binary);
        one << kCsvHeader;
        write_run_rows(one, r, algo, c.checkpoint_every);
        write_run_rows(all, r, algo, c.checkpoint_every);
    }
    std::ofstream js(dir / "summary.json", std::ios::binary);
    js << summary_json(c, s).dump(2) << '\n';
}

struct ExperimentReport {
    Network network;
    std::vector<RunResult> results;
    ExperimentSummary summary;
};

// Misconfiguration guard: more than half of the runs lost INIT.
inline void check_init_failures(const ExperimentSummary& s) {
    if (2 * s.failed > s.runs)
        throw std::runtime_error("INIT failed in " + std::to_string(s.failed) + " of " + std::to_string(s.runs) +
                                 " runs; delta0 misconfigured?");
}

/// Builds the network, executes every run, and guards against a broken INIT.
inline ExperimentReport run_experiment(const ExperimentConfig& c, bool keep_traces = false) {
    c.validate();
    ExperimentReport rep{build_network(c), {}, {}};
    rep.results = run_all(c, rep.network, keep_traces);
    rep.summary = summarize(c, rep.network, rep.results);
    check_init_failures(rep.summary);
    return rep;
}

struct SweepRow {
    double q = 0.0;
    std::size_t graphs = 0;
    std::size_t failed = 0;
    MeanStderr eps_g;
    MeanStderr reward_regret; // at the final round
    MeanStderr fairness_regret;
};

/// For every q: `graphs_per_q` connected ER graphs (graph g uses the same
/// seed for every q), `runs_per_graph` runs on each.
inline std::vector<SweepRow> sweep_q(ExperimentConfig c, const std::vector<double>& qs) {
    c.validate();
    if (is_centralized(c.policy) || c.policy == PolicyKind::dculcb_nocomm)
        throw std::invalid_argument("sweep-q needs a communicating distributed policy");
    const std::uint64_t base = graph_seed(c);
    std::vector<SweepRow> rows;
    for (double q : qs) {
        if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("sweep-q: q must lie in (0,1]");
        const std::size_t jobs = c.graphs_per_q * c.runs_per_graph;
        std::vector<Network> nets;
        nets.reserve(c.graphs_per_q);
        for (std::size_t g = 0; g < c.graphs_per_q; ++g)
            nets.push_back(make_network(generate_er(c.n_servers, q, derive_seed(base, g), c.graph.max_retries)));
        std::vector<RunResult> res(jobs);
        parallel_for(jobs, [&](std::size_t j) { res[j] = run_single(c, nets[j / c.runs_per_graph], j, false); });

        SweepRow row;
        row.q = q;
        row.graphs = c.graphs_per_q;
        std::vector<double> eps, rr, fr;
        for (const auto& n : nets) eps.push_back(*n.eps_g);
        for (const auto& r : res) {
            if (r.init_failed) {
                ++row.failed;
                continue;
            }
            rr.push_back(r.curves.reward_regret.back());
            fr.push_back(r.curves.fairness_regret.back());
        }
        row.eps_g = mean_stderr(eps);
        row.reward_regret = mean_stderr(rr);
        row.fairness_regret = mean_stderr(fr);
        rows.push_back(row);
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "q,graphs,failed_runs,mean_eps_g,mean_reward_regret,stderr_reward_regret,mean_fairness_regret,"
          "stderr_fairness_regret\n";
    for (const auto& r : rows)
        os << format_number(r.q) << ',' << r.graphs << ',' << r.failed << ',' << format_number(r.eps_g.mean) << ','
           << format_number(r.reward_regret.mean) << ',' << format_number(r.reward_regret.stderr_) << ','
           << format_number(r.fairness_regret.mean) << ',' << format_number(r.fairness_regret.stderr_) << '\n';
}

} // namespace coop_bandit
