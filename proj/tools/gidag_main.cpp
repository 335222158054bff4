// Command-line front end: simulate | fit | summarize | equiv | exact | score-run.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "gidag/equivalence.hpp"
#include "gidag/io.hpp"
#include "gidag/mcmc.hpp"
#include "gidag/metrics.hpp"
#include "gidag/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gidag;

namespace {

int worker_cap() {
    if (const char* env = std::getenv("GIDAG_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory: " + dir.string());
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return j;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    int q = 10;
    int k = 2;
    long long n = 100;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    ensure_dir(args.out);
    const GroundTruth truth = gen_truth(args.q, args.k, args.seed);
    const MultiEnvDataset data =
        simulate_dataset(truth, std::vector<long long>(static_cast<std::size_t>(args.k), args.n), args.seed);

    const fs::path dir(args.out);
    write_dataset_csv(dir / "data.csv", data);
    write_truth(dir / "truth.json", truth);

    json manifest;
    manifest["command"] = "simulate";
    manifest["version"] = kVersion;
    manifest["q"] = args.q;
    manifest["K"] = args.k;
    manifest["n_per_context"] = args.n;
    manifest["seed"] = args.seed;
    manifest["outputs"] = {{"data", "data.csv"}, {"truth", "truth.json"}};
    manifest["hashes"] = {{"data.csv", content_hash_hex(dir / "data.csv")},
                          {"truth.json", content_hash_hex(dir / "truth.json")}};
    write_json_file(dir / "manifest.json", manifest);
    std::cout << "wrote " << (dir / "data.csv").string() << " and truth.json\n";
    return 0;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
    std::string data;
    std::string config;
    std::string out;
    std::optional<long long> iters;
    std::optional<long long> burnin;
    std::optional<long long> thin;
    std::optional<std::uint64_t> seed;
    std::optional<int> chains;
    bool samples = false;
    bool state_table = false;
};

json sample_to_json(int chain, const StoredSample& s) {
    json edges = json::array();
    for (auto [u, v] : s.state.dag.edges()) edges.push_back({u + 1, v + 1});
    return json{{"chain", chain},
                {"s", s.iteration},
                {"dag", edges},
                {"interventions", interventions_to_json(s.state.interventions)}};
}

void write_summary_files(const fs::path& dir, const PosteriorSummary& summary) {
    const int K = static_cast<int>(summary.edge_ppi.size());
    for (int k = 1; k <= K; ++k) {
        write_matrix_csv(dir / ("ppi_" + std::to_string(k) + ".csv"),
                         summary.edge_ppi[static_cast<std::size_t>(k - 1)]);
        write_edge_list(dir / ("mpm_" + std::to_string(k) + ".edges"),
                        summary.mpm[static_cast<std::size_t>(k - 1)]);
        if (k >= 2) {
            write_matrix_csv(dir / ("diff_" + std::to_string(k) + ".csv"),
                             summary.diff_ppi[static_cast<std::size_t>(k - 2)]);
        }
    }
    write_matrix_csv(dir / "targets.csv", summary.target_prob);
}

int cmd_fit(const FitArgs& args) {
    std::vector<std::string> warnings;
    const MultiEnvDataset data = ingest(args.data, &warnings);
    print_warnings(warnings);
    const int q = data.q();
    const int K = data.context_count();

    RunConfig cfg = args.config.empty() ? RunConfig{} : read_config(args.config);
    if (args.iters) cfg.iterations = *args.iters;
    if (args.burnin) cfg.burn_in = *args.burnin;
    if (args.thin) cfg.thin = *args.thin;
    if (args.seed) cfg.seed = *args.seed;
    if (args.chains) cfg.chains = *args.chains;

    ChainSettings settings;
    settings.iterations = cfg.effective_iterations(q);
    settings.burn_in = cfg.effective_burn_in(q);
    settings.thin = cfg.thin;
    settings.seed = cfg.seed;
    settings.store_samples = args.samples;
    settings.track_states = args.state_table;
    settings.validate();

    const Hyperparams hyper = cfg.hyperparams(q);
    const auto outputs = run_chains(data, hyper, cfg.prior, settings, cfg.chains, worker_cap());

    const Tallies pooled = pool_tallies(outputs);
    const PosteriorSummary summary = summarize(pooled);

    ensure_dir(args.out);
    const fs::path dir(args.out);
    write_summary_files(dir, summary);

    if (cfg.chains > 1) {
        for (int c = 0; c < cfg.chains; ++c) {
            char name[16];
            std::snprintf(name, sizeof(name), "chain_%02d", c + 1);
            const fs::path cdir = dir / name;
            ensure_dir(cdir);
            write_summary_files(cdir, summarize(outputs[static_cast<std::size_t>(c)].tallies));
        }
    }

    if (args.samples) {
        std::ofstream out(dir / "samples.jsonl");
        if (!out) throw DataError("cannot write samples.jsonl");
        for (int c = 0; c < cfg.chains; ++c) {
            for (const auto& s : outputs[static_cast<std::size_t>(c)].samples) {
                out << sample_to_json(c, s).dump() << '\n';
            }
        }
    }
    if (args.state_table) {
        const auto counts = pool_state_counts(outputs);
        std::ofstream out(dir / "state_counts.csv");
        if (!out) throw DataError("cannot write state_counts.csv");
        out << "state,count\n";
        for (const auto& [key, cnt] : counts) out << '"' << key << "\"," << cnt << '\n';
    }

    json manifest;
    manifest["command"] = "fit";
    manifest["version"] = kVersion;
    manifest["data"] = {{"path", args.data},
                        {"hash", content_hash_hex(args.data)},
                        {"q", q},
                        {"K", K}};
    json ns = json::array();
    for (int k = 1; k <= K; ++k) ns.push_back(data.rows(k));
    manifest["data"]["n"] = ns;
    manifest["config"] = config_to_json(cfg);
    if (!args.config.empty()) manifest["config_hash"] = content_hash_hex(args.config);
    manifest["iters"] = settings.iterations;
    manifest["burnin"] = settings.burn_in;
    manifest["thin"] = settings.thin;
    manifest["seed"] = settings.seed;
    manifest["chains"] = cfg.chains;
    manifest["thresholds"] = {{"edge_ppi", "strictly greater than 0.5"},
                              {"target", "at least 0.5"},
                              {"diff", "strictly greater than 0.5"}};
    manifest["samples_stored"] = args.samples;
    manifest["state_table"] = args.state_table;
    json acyclic = json::array();
    for (bool a : summary.mpm_acyclic) acyclic.push_back(a);
    manifest["mpm_acyclic"] = acyclic;
    json rates = json::array();
    {
        std::vector<long long> props(static_cast<std::size_t>(K), 0), accs(static_cast<std::size_t>(K), 0);
        for (const auto& o : outputs) {
            for (int k = 0; k < K; ++k) {
                props[static_cast<std::size_t>(k)] += o.proposals[static_cast<std::size_t>(k)];
                accs[static_cast<std::size_t>(k)] += o.accepts[static_cast<std::size_t>(k)];
            }
        }
        for (int k = 0; k < K; ++k) {
            const double r = props[static_cast<std::size_t>(k)] == 0
                                 ? 0.0
                                 : static_cast<double>(accs[static_cast<std::size_t>(k)]) /
                                       static_cast<double>(props[static_cast<std::size_t>(k)]);
            rates.push_back(r);
        }
    }
    manifest["acceptance_rates"] = rates;
    write_json_file(dir / "manifest.json", manifest);
    std::cout << "fit complete: " << dir.string() << '\n';
    return 0;
}

// --------------------------------------------------------------- summarize

int cmd_summarize(const std::string& run) {
    const fs::path dir(run);
    const json manifest = read_json_file(dir / "manifest.json");
    if (!manifest.value("samples_stored", false)) {
        throw DataError("run has no samples.jsonl; re-run fit with --samples to enable revalidation");
    }
    const int q = manifest.at("data").at("q").get<int>();
    const int K = manifest.at("data").at("K").get<int>();
    const long long thin = manifest.at("thin").get<long long>();

    std::ifstream in(dir / "samples.jsonl");
    if (!in) throw DataError("cannot read samples.jsonl");
    Tallies rebuilt(q, K);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json js = json::parse(line);
        CausalPair state{Dag(q), interventions_from_json(js.at("interventions"), q)};
        for (const auto& je : js.at("dag")) {
            state.dag.add_edge(je.at(0).get<int>() - 1, je.at(1).get<int>() - 1);
        }
        rebuilt.accumulate(state);
    }
    if (rebuilt.s_eff == 0) throw DataError("samples.jsonl holds no samples");

    const PosteriorSummary summary = summarize(rebuilt);
    const fs::path outdir = dir / "summarize";
    ensure_dir(outdir);
    write_summary_files(outdir, summary);

    json report;
    report["command"] = "summarize";
    report["version"] = kVersion;
    report["samples_used"] = rebuilt.s_eff;
    if (thin == 1) {
        // Full samples: recomputed summaries must match the stored ones byte
        // for byte.
        bool match = true;
        std::vector<std::string> files;
        for (int k = 1; k <= K; ++k) {
            files.push_back("ppi_" + std::to_string(k) + ".csv");
            files.push_back("mpm_" + std::to_string(k) + ".edges");
            if (k >= 2) files.push_back("diff_" + std::to_string(k) + ".csv");
        }
        files.push_back("targets.csv");
        json mismatches = json::array();
        for (const auto& f : files) {
            const std::string a = content_hash_hex(dir / f);
            const std::string b = content_hash_hex(outdir / f);
            if (a != b) {
                match = false;
                mismatches.push_back(f);
            }
        }
        report["match"] = match;
        report["mismatched_files"] = mismatches;
        write_json_file(dir / "summarize.json", report);
        if (!match) {
            std::cerr << "summarize: stored tallies do not match replay\n";
            return 2;
        }
        std::cout << "summarize: stored tallies match replay\n";
    } else {
        report["match"] = nullptr;
        report["note"] = "samples are thinned; summaries recomputed without equality check";
        write_json_file(dir / "summarize.json", report);
        std::cout << "summarize: recomputed thinned summaries\n";
    }
    return 0;
}

// ------------------------------------------------------------------- equiv

struct EquivArgs {
    int q = 0;
    std::string dag1, dag2, iv1, iv2;
    bool sequence = false;
};

int cmd_equiv(const EquivArgs& args) {
    const Dag d1 = read_edge_list(args.dag1, args.q);
    const Dag d2 = read_edge_list(args.dag2, args.q);
    if (!is_acyclic(d1) || !is_acyclic(d2)) throw GraphError("input graphs must be acyclic");

    InterventionCollection iv1(1, args.q), iv2(1, args.q);
    if (!args.iv1.empty()) iv1 = interventions_from_json(read_json_file(args.iv1), args.q);
    if (!args.iv2.empty()) iv2 = interventions_from_json(read_json_file(args.iv2), args.q);

    const CausalPair p1{d1, iv1}, p2{d2, iv2};
    if (!is_valid(p1) || !is_valid(p2)) throw ValidityError("an intervention is invalid for its DAG");

    if (i_markov_equivalent(p1, p2)) {
        std::cout << "EQUIVALENT\n";
        if (args.sequence) {
            for (const auto& r : transform_sequence(p1, p2)) {
                std::cout << r.context << ' ' << (r.u + 1) << ' ' << (r.v + 1) << '\n';
            }
        }
    } else {
        std::cout << "NOT_EQUIVALENT\n";
    }
    return 0;
}

// ------------------------------------------------------------------- exact

struct ExactArgs {
    std::string data;
    std::string config;
    std::string out;
    std::string run;
    int max_q = 3;
};

int cmd_exact(const ExactArgs& args) {
    std::vector<std::string> warnings;
    const MultiEnvDataset data = ingest(args.data, &warnings);
    print_warnings(warnings);
    if (data.q() > args.max_q) {
        throw CapacityError("data has q = " + std::to_string(data.q()) +
                            " but exact enumeration is capped at --max-q = " + std::to_string(args.max_q));
    }
    RunConfig cfg = args.config.empty() ? RunConfig{} : read_config(args.config);
    const ExactPosterior exact = exact_posterior(data, cfg.hyperparams(data.q()), cfg.prior);

    json states = json::array();
    {
        std::vector<std::pair<std::string, double>> rows(exact.by_key.begin(), exact.by_key.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        for (const auto& [key, p] : rows) states.push_back({{"state", key}, {"probability", p}});
    }
    json out;
    out["command"] = "exact";
    out["version"] = kVersion;
    out["log_normalizer"] = exact.log_normalizer;
    out["state_count"] = exact.by_key.size();
    out["states"] = states;

    if (!args.run.empty()) {
        std::ifstream in(fs::path(args.run) / "state_counts.csv");
        if (!in) throw DataError("run has no state_counts.csv; re-run fit with --state-table");
        std::map<std::string, long long> counts;
        long long total = 0;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto quote_end = line.rfind('"');
            if (line.front() != '"' || quote_end == 0 || quote_end == std::string::npos) {
                throw DataError("malformed state_counts.csv line: " + line);
            }
            const std::string key = line.substr(1, quote_end - 1);
            const long long cnt = std::stoll(line.substr(quote_end + 2));
            counts[key] = cnt;
            total += cnt;
        }
        const double tv = total_variation(counts, total, exact);
        out["tv_against_run"] = tv;
        std::cout << "TV " << tv << '\n';
    }

    if (!args.out.empty()) {
        ensure_dir(args.out);
        write_json_file(fs::path(args.out) / "exact.json", out);
    } else {
        std::cout << out.dump(2) << '\n';
    }
    return 0;
}

// --------------------------------------------------------------- score-run

struct ScoreRunArgs {
    std::string truth;
    std::string run;
    std::string out;
};

int cmd_score_run(const ScoreRunArgs& args) {
    const GroundTruth truth = read_truth(args.truth);
    const int q = truth.dag.vertex_count();
    const int K = truth.interventions.context_count();
    const fs::path dir(args.run);

    // Estimated structures from the run outputs.
    std::vector<Digraph> mpm;
    for (int k = 1; k <= K; ++k) {
        mpm.push_back(read_edge_list(dir / ("mpm_" + std::to_string(k) + ".edges"), q));
    }
    const Eigen::MatrixXd target_prob = read_matrix_csv(dir / "targets.csv");
    if (target_prob.rows() != q || target_prob.cols() != K) {
        throw DataError("targets.csv does not match the truth dimensions");
    }

    InterventionCollection est_iv(K, q);
    for (int k = 2; k <= K; ++k) {
        const Bitset targets = mpm_targets(target_prob.col(k - 1));
        auto& c = est_iv.context(k);
        targets.for_each([&](int j) {
            c.set_target(j, mpm[static_cast<std::size_t>(k - 1)].parents(j));
        });
    }

    EvalReport report;
    // Representative I-EGs of truth and estimate; the estimate falls back to
    // its raw MPM graphs when it is not a valid pair.
    const auto truth_class = enumerate_class(CausalPair{truth.dag, truth.interventions});
    std::vector<Digraph> est_reps = mpm;
    report.estimate_valid = false;
    if (is_acyclic(mpm[0])) {
        const CausalPair est{mpm[0], est_iv};
        if (is_valid(est)) {
            try {
                est_reps = enumerate_class(est).representatives;
                report.estimate_valid = true;
            } catch (const CapacityError&) {
                // keep raw graphs
            }
        }
    }

    for (int k = 1; k <= K; ++k) {
        const Digraph true_dk = post_intervention_graph(truth.dag, truth.interventions.context(k));
        report.shd_mpm.push_back(shd(mpm[static_cast<std::size_t>(k - 1)], true_dk));
        report.shd_representative.push_back(shd(est_reps[static_cast<std::size_t>(k - 1)],
                                                truth_class.representatives[static_cast<std::size_t>(k - 1)]));
    }
    for (int k = 2; k <= K; ++k) {
        Bitset sym = truth.interventions.context(k).targets;
        Bitset both = sym;
        const Bitset est_t = est_iv.context(k).targets;
        sym |= est_t;
        both &= est_t;
        sym.subtract(both);
        report.target_errors.push_back(sym.count());

        const Digraph true_dk = post_intervention_graph(truth.dag, truth.interventions.context(k));
        const Digraph g_true = difference_graph(truth.dag, true_dk, truth.interventions.context(k).targets);
        const Eigen::MatrixXd diff_prob = read_matrix_csv(dir / ("diff_" + std::to_string(k) + ".csv"));
        report.diff_errors.push_back(diff_graph_errors(g_true, mpm_graph(diff_prob)));
    }

    json out;
    out["command"] = "score-run";
    out["version"] = kVersion;
    out["truth"] = args.truth;
    out["run"] = args.run;
    out["shd_mpm"] = report.shd_mpm;
    out["shd_ieg"] = report.shd_representative;
    out["shd_ieg_obs"] = report.shd_representative.front();
    out["target_errors"] = report.target_errors;
    out["target_errors_total"] =
        std::accumulate(report.target_errors.begin(), report.target_errors.end(), 0);
    out["diff_errors"] = report.diff_errors;
    out["estimate_valid"] = report.estimate_valid;

    const fs::path out_path = args.out.empty() ? dir / "eval.json" : fs::path(args.out);
    write_json_file(out_path, out);
    std::cout << "wrote " << out_path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian causal discovery under general interventions"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* sc_sim = app.add_subcommand("simulate", "generate ground truth and Gaussian data");
    sc_sim->add_option("--q", sim.q, "number of variables")->required();
    sc_sim->add_option("--k", sim.k, "number of contexts")->required();
    sc_sim->add_option("--n", sim.n, "samples per context")->required();
    sc_sim->add_option("--seed", sim.seed, "random seed");
    sc_sim->add_option("--out", sim.out, "output directory")->required();

    FitArgs fit;
    auto* sc_fit = app.add_subcommand("fit", "run the MCMC sampler on a dataset");
    sc_fit->add_option("--data", fit.data, "data CSV")->required();
    sc_fit->add_option("--config", fit.config, "run configuration JSON");
    long long fit_iters = -1, fit_burnin = -1, fit_thin = -1;
    std::int64_t fit_seed = -1;
    int fit_chains = -1;
    sc_fit->add_option("--iters", fit_iters, "MCMC iterations (default 3000q)");
    sc_fit->add_option("--burnin", fit_burnin, "burn-in iterations (default 1000q)");
    sc_fit->add_option("--thin", fit_thin, "sample thinning interval");
    sc_fit->add_option("--seed", fit_seed, "random seed");
    sc_fit->add_option("--chains", fit_chains, "number of chains");
    sc_fit->add_flag("--samples", fit.samples, "store thinned samples as samples.jsonl");
    sc_fit->add_flag("--state-table", fit.state_table, "tally full states (tiny problems)");
    sc_fit->add_option("--out", fit.out, "output directory")->required();

    std::string summarize_run;
    auto* sc_sum = app.add_subcommand("summarize", "recompute summaries from stored samples");
    sc_sum->add_option("--run", summarize_run, "fit output directory")->required();

    EquivArgs eq;
    auto* sc_eq = app.add_subcommand("equiv", "decide I-Markov equivalence of two pairs");
    sc_eq->add_option("--q", eq.q, "number of variables")->required();
    sc_eq->add_option("--dag1", eq.dag1, "edge list of the first DAG")->required();
    sc_eq->add_option("--dag2", eq.dag2, "edge list of the second DAG")->required();
    sc_eq->add_option("--iv1", eq.iv1, "intervention JSON of the first pair");
    sc_eq->add_option("--iv2", eq.iv2, "intervention JSON of the second pair");
    sc_eq->add_flag("--sequence", eq.sequence, "print the transformation sequence");

    ExactArgs ex;
    auto* sc_ex = app.add_subcommand("exact", "enumerate the exact posterior (tiny problems)");
    sc_ex->add_option("--data", ex.data, "data CSV")->required();
    sc_ex->add_option("--config", ex.config, "run configuration JSON");
    sc_ex->add_option("--max-q", ex.max_q, "refuse data with more variables than this");
    sc_ex->add_option("--out", ex.out, "output directory");
    sc_ex->add_option("--run", ex.run, "fit run to compare against (needs --state-table)");

    ScoreRunArgs sr;
    auto* sc_sr = app.add_subcommand("score-run", "evaluate a fit run against ground truth");
    sc_sr->add_option("--truth", sr.truth, "truth JSON from simulate")->required();
    sc_sr->add_option("--run", sr.run, "fit output directory")->required();
    sc_sr->add_option("--out", sr.out, "eval JSON path (default <run>/eval.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (sc_sim->parsed()) return cmd_simulate(sim);
        if (sc_fit->parsed()) {
            if (fit_iters >= 0) fit.iters = fit_iters;
            if (fit_burnin >= 0) fit.burnin = fit_burnin;
            if (fit_thin >= 1) fit.thin = fit_thin;
            if (fit_seed >= 0) fit.seed = static_cast<std::uint64_t>(fit_seed);
            if (fit_chains >= 1) fit.chains = fit_chains;
            return cmd_fit(fit);
        }
        if (sc_sum->parsed()) return cmd_summarize(summarize_run);
        if (sc_eq->parsed()) return cmd_equiv(eq);
        if (sc_ex->parsed()) return cmd_exact(ex);
        if (sc_sr->parsed()) return cmd_score_run(sr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const HyperparamError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
