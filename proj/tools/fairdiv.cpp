#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairdiv/errors.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/montecarlo.hpp"
#include "fairdiv/protocol.hpp"
#include "fairdiv/rng.hpp"
#include "fairdiv/sampling.hpp"
#include "fairdiv/webb_math.hpp"

namespace {

using namespace fairdiv;

struct ModelFlags {
    std::string model = "h1";
    int n = 2;
    double epsilon = 0.1;
    std::string base_file;
};

ModelConfig make_config(const ModelFlags& f, int n) {
    ModelConfig cfg;
    if (f.model == "h1")
        cfg.kind = ModelKind::H1;
    else if (f.model == "h2")
        cfg.kind = ModelKind::H2;
    else
        throw ConfigError("--model must be h1 or h2");
    cfg.n = n;
    cfg.epsilon = f.epsilon;
    if (!f.base_file.empty()) cfg.base = stochastic_from_json(load_json_file(f.base_file));
    cfg.validate();
    return cfg;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_atomic(out_path, j);
}

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool with_n) {
    cmd->add_option("--model", f.model, "Random model: h1 or h2")->required();
    if (with_n) cmd->add_option("--n", f.n, "Number of players")->required();
    cmd->add_option("--epsilon", f.epsilon, "H2 noise half-width (default 0.1)");
    cmd->add_option("--base", f.base_file, "H2 base matrix JSON file (default uniform)");
}

WebbReport run_protocol(const ModelConfig& cfg, std::uint64_t seed, EpsilonMode mode, long k_cap,
                        int retry_cap, std::vector<PiecewiseConstantMeasure>* measures_out) {
    Rng rng(derive_stream(seed, static_cast<std::uint64_t>(cfg.n), 0));
    const SampleRecord rec = sample(cfg, rng, {seed, 0});
    std::vector<PiecewiseConstantMeasure> measures =
        measures_from_matrix(rec.M, uniform_partition(cfg.n));
    auto ledger = std::make_shared<QueryLedger>(cfg.n);
    std::vector<MeasureOracle> oracles;
    oracles.reserve(measures.size());
    for (int i = 0; i < cfg.n; ++i)
        oracles.emplace_back(i, &measures[static_cast<std::size_t>(i)], ledger);
    NearExactConfig pcfg;
    pcfg.epsilon_mode = mode;
    pcfg.retry_cap = retry_cap;
    pcfg.k_cap = k_cap;
    pcfg.rng = &rng;
    WebbReport rep = envy_free(oracles, pcfg);
    if (measures_out) *measures_out = std::move(measures);
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairdiv: envy-free cake cutting in the Robertson-Webb query model"};
    app.require_subcommand(1);

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Draw one witness matrix sample");
    ModelFlags sample_flags;
    std::uint64_t sample_seed = 0;
    std::string sample_out, sample_measures_out;
    add_model_flags(sample_cmd, sample_flags, true);
    sample_cmd->add_option("--seed", sample_seed, "Experiment seed")->required();
    sample_cmd->add_option("--out", sample_out, "Output JSON file (default stdout)");
    sample_cmd->add_option("--measures-out", sample_measures_out,
                           "Also write the materialized measures JSON");

    // run
    auto* run_cmd = app.add_subcommand("run", "Run the envy-free protocol on one sampled instance");
    ModelFlags run_flags;
    std::uint64_t run_seed = 0;
    std::string run_out, run_measures_out, run_mode = "fast";
    long run_k_cap = 400000;
    int run_retry_cap = 64;
    add_model_flags(run_cmd, run_flags, true);
    run_cmd->add_option("--seed", run_seed, "Experiment seed")->required();
    run_cmd->add_option("--epsilon-mode", run_mode, "Near-exact epsilon rule: paper or fast");
    run_cmd->add_option("--k-cap", run_k_cap, "Refinement ceiling before censoring");
    run_cmd->add_option("--retry-cap", run_retry_cap, "Assignment redraws before K doubles");
    run_cmd->add_option("--out", run_out, "Report JSON file (default stdout)");
    run_cmd->add_option("--measures-out", run_measures_out, "Also write the measures JSON");

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "Re-verify a report's allocation offline");
    std::string audit_report, audit_measures, audit_out;
    audit_cmd->add_option("--report", audit_report, "Report JSON from `run`")->required();
    audit_cmd->add_option("--measures", audit_measures, "Measures JSON")->required();
    audit_cmd->add_option("--out", audit_out, "Output JSON file (default stdout)");

    // bound
    auto* bound_cmd = app.add_subcommand("bound", "Evaluate the query-bound calculators");
    int bound_n = 0;
    double bound_t = 0.0, bound_sigma = 0.0, bound_b = 0.0;
    bool has_t = false, has_sigma = false, has_b = false;
    bound_cmd->add_option("--n", bound_n, "Number of players")->required();
    bound_cmd->add_option("--t", bound_t, "Minimum entry of the inverted witness")
        ->each([&](const std::string&) { has_t = true; });
    bound_cmd->add_option("--sigma", bound_sigma, "Smallest singular value of the witness")
        ->each([&](const std::string&) { has_sigma = true; });
    bound_cmd->add_option("--b", bound_b, "Tail parameter b > 4")
        ->each([&](const std::string&) { has_b = true; });

    // mc-sigma / mc-queries
    auto* mcs_cmd = app.add_subcommand("mc-sigma", "Monte Carlo tails of the smallest singular value");
    auto* mcq_cmd = app.add_subcommand("mc-queries", "Monte Carlo distribution of protocol query counts");
    ModelFlags mcs_flags, mcq_flags;
    std::vector<int> mcs_grid, mcq_grid;
    double mcs_b = 5.0, mcq_b = 5.0;
    long mcs_trials = 0, mcq_trials = 0;
    std::uint64_t mcs_seed = 0, mcq_seed = 0;
    int mcs_threads = 1, mcq_threads = 1;
    std::string mcs_out, mcq_out, mcs_json, mcq_json, mcq_mode = "fast";
    long mcq_k_cap = 400000;
    int mcq_retry_cap = 64;
    for (auto [cmd, flags, grid, b, trials, seed, threads, out, jsonp] :
         {std::tuple{mcs_cmd, &mcs_flags, &mcs_grid, &mcs_b, &mcs_trials, &mcs_seed, &mcs_threads,
                     &mcs_out, &mcs_json},
          std::tuple{mcq_cmd, &mcq_flags, &mcq_grid, &mcq_b, &mcq_trials, &mcq_seed, &mcq_threads,
                     &mcq_out, &mcq_json}}) {
        add_model_flags(cmd, *flags, false);
        cmd->add_option("--n-grid", *grid, "Comma-separated list of player counts")
            ->required()
            ->delimiter(',');
        cmd->add_option("--b", *b, "Tail parameter b > 4");
        cmd->add_option("--trials", *trials, "Trials per grid point")->required();
        cmd->add_option("--seed", *seed, "Experiment seed")->required();
        cmd->add_option("--threads", *threads, "Worker threads");
        cmd->add_option("--out", *out, "Output CSV file")->required();
        cmd->add_option("--json", *jsonp, "Also write the JSON report");
    }
    mcq_cmd->add_option("--epsilon-mode", mcq_mode, "Near-exact epsilon rule: paper or fast");
    mcq_cmd->add_option("--k-cap", mcq_k_cap, "Refinement ceiling before censoring");
    mcq_cmd->add_option("--retry-cap", mcq_retry_cap, "Assignment redraws before K doubles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sample_cmd) {
            const ModelConfig cfg = make_config(sample_flags, sample_flags.n);
            Rng rng(derive_stream(sample_seed, static_cast<std::uint64_t>(cfg.n), 0));
            const SampleRecord rec = sample(cfg, rng, {sample_seed, 0});
            emit(sample_record_json(rec), sample_out);
            if (!sample_measures_out.empty())
                save_json_atomic(sample_measures_out,
                                 measures_json(measures_from_matrix(rec.M, uniform_partition(cfg.n))));
        } else if (*run_cmd) {
            const ModelConfig cfg = make_config(run_flags, run_flags.n);
            const EpsilonMode mode = run_mode == "paper" ? EpsilonMode::Paper
                                     : run_mode == "fast"
                                         ? EpsilonMode::Fast
                                         : throw ConfigError("--epsilon-mode must be paper or fast");
            std::vector<PiecewiseConstantMeasure> measures;
            const WebbReport rep = run_protocol(cfg, run_seed, mode, run_k_cap, run_retry_cap,
                                                run_measures_out.empty() ? nullptr : &measures);
            emit(report_json(rep), run_out);
            if (!run_measures_out.empty()) save_json_atomic(run_measures_out, measures_json(measures));
        } else if (*audit_cmd) {
            const ReportAuditView view = report_audit_view_from_json(load_json_file(audit_report));
            const std::vector<PiecewiseConstantMeasure> measures =
                measures_from_json(load_json_file(audit_measures));
            if (static_cast<int>(measures.size()) != view.n)
                throw DomainError("measure count differs from the report's player count");
            bool ne_pass = true;
            double ne_margin = view.epsilon;
            for (int j = 0; j < view.n; ++j) {
                std::vector<PieceSet> sub;
                sub.reserve(static_cast<std::size_t>(view.n));
                for (int k = 0; k < view.n; ++k)
                    sub.push_back(view.allocation.pieces[static_cast<std::size_t>(k)].clipped(
                        view.partition[static_cast<std::size_t>(j)]));
                const AuditRecord a = audit_near_exact(
                    measures, sub, view.ratio_rows[static_cast<std::size_t>(j)], view.epsilon);
                ne_pass = ne_pass && a.pass;
                ne_margin = std::min(ne_margin, a.worst_margin);
            }
            const AuditRecord ef = audit_envy_free(measures, view.allocation);
            const SuperEnvyAudit se = audit_super_envy_free(measures, view.allocation);
            const AuditRecord pr = audit_proportional(measures, view.allocation);
            emit(json{{"near_exact", json{{"pass", ne_pass}, {"worst_margin", ne_margin}}},
                      {"envy_free", json{{"pass", ef.pass}, {"worst_margin", ef.worst_margin}}},
                      {"super_envy_free", json{{"pass", se.pass},
                                               {"worst_margin", se.worst_margin},
                                               {"own_margin", se.own_margin},
                                               {"other_margin", se.other_margin}}},
                      {"proportional", json{{"pass", pr.pass}, {"worst_margin", pr.worst_margin}}}},
                 audit_out);
        } else if (*bound_cmd) {
            json out{{"n", bound_n}, {"sigma_bound_in_range", bound_n >= 19}};
            if (has_t) {
                out["t"] = bound_t;
                out["webb_query_bound"] = webb_query_bound(bound_n, bound_t);
            }
            if (has_sigma) {
                const SigmaQueryBound sb = sigma_query_bound(bound_n, bound_sigma);
                out["sigma"] = bound_sigma;
                out["sigma_query_bound"] = sb.value;
            }
            if (has_b) {
                out["b"] = bound_b;
                out["tail_exponent"] = tail_exponent(bound_b);
            }
            std::cout << out.dump(2) << "\n";
        } else if (*mcs_cmd) {
            ExperimentSpec spec;
            spec.model = make_config(mcs_flags, mcs_grid.empty() ? 1 : mcs_grid.front());
            spec.n_grid = mcs_grid;
            spec.b = mcs_b;
            spec.trials = mcs_trials;
            spec.seed = mcs_seed;
            spec.threads = mcs_threads;
            spec.mode = McMode::Sigma;
            const SigmaSummary summary = mc_sigma(spec);
            write_csv(summary, mcs_out);
            if (!mcs_json.empty()) write_json(summary, mcs_json);
        } else if (*mcq_cmd) {
            ExperimentSpec spec;
            spec.model = make_config(mcq_flags, mcq_grid.empty() ? 1 : mcq_grid.front());
            spec.n_grid = mcq_grid;
            spec.b = mcq_b;
            spec.trials = mcq_trials;
            spec.seed = mcq_seed;
            spec.threads = mcq_threads;
            spec.mode = McMode::Queries;
            spec.epsilon_mode = mcq_mode == "paper" ? EpsilonMode::Paper
                                : mcq_mode == "fast"
                                    ? EpsilonMode::Fast
                                    : throw ConfigError("--epsilon-mode must be paper or fast");
            spec.k_cap = mcq_k_cap;
            spec.retry_cap = mcq_retry_cap;
            const QueriesSummary summary = mc_queries(spec);
            write_csv(summary, mcq_out);
            if (!mcq_json.empty()) write_json(summary, mcq_json);
        }
        return 0;
    } catch (const SingularWitnessMatrix& e) {
        std::cerr << "error: " << e.what() << " (sigma_n " << e.first_sigma_n << ", retry sigma_n "
                  << e.retry_sigma_n << ")\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
