#include "fairdiv/json_io.hpp"

#include <fstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

json matrix_json(const SquareMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.n(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"n", m.n()}, {"rows", std::move(rows)}};
}

SquareMatrix matrix_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    const auto& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
        throw DomainError("matrix JSON needs n rows");
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            throw DomainError("matrix JSON needs n columns per row");
        for (int k = 0; k < n; ++k) m.at(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

StochasticMatrix stochastic_from_json(const json& j, double row_tol) {
    return StochasticMatrix(matrix_from_json(j), row_tol);
}

json measure_json(const PiecewiseConstantMeasure& m) {
    return json{{"breakpoints", m.breakpoints()}, {"densities", m.densities()}};
}

PiecewiseConstantMeasure measure_from_json(const json& j) {
    return PiecewiseConstantMeasure::renormalized(j.at("breakpoints").get<std::vector<double>>(),
                                                  j.at("densities").get<std::vector<double>>(), 1e-9);
}

json measures_json(const std::vector<PiecewiseConstantMeasure>& ms) {
    json arr = json::array();
    for (const auto& m : ms) arr.push_back(measure_json(m));
    return json{{"measures", std::move(arr)}};
}

std::vector<PiecewiseConstantMeasure> measures_from_json(const json& j) {
    const auto& arr = j.at("measures");
    if (!arr.is_array() || arr.empty()) throw DomainError("measures JSON needs a non-empty array");
    std::vector<PiecewiseConstantMeasure> out;
    out.reserve(arr.size());
    for (const auto& mj : arr) out.push_back(measure_from_json(mj));
    return out;
}

json interval_json(const Interval& w) { return json::array({w.lo, w.hi}); }

Interval interval_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw DomainError("interval JSON must be [lo, hi]");
    Interval w{j[0].get<double>(), j[1].get<double>()};
    require_valid(w);
    return w;
}

json piece_set_json(const PieceSet& ps) {
    json arr = json::array();
    for (const Interval& w : ps.intervals()) arr.push_back(interval_json(w));
    return arr;
}

PieceSet piece_set_from_json(const json& j) {
    std::vector<Interval> iv;
    for (const auto& wj : j) iv.push_back(interval_from_json(wj));
    return PieceSet(std::move(iv));
}

json allocation_json(const Allocation& a) {
    json arr = json::array();
    for (const PieceSet& ps : a.pieces) arr.push_back(piece_set_json(ps));
    return arr;
}

Allocation allocation_from_json(const json& j) {
    Allocation a;
    for (const auto& pj : j) a.pieces.push_back(piece_set_from_json(pj));
    return a;
}

json model_config_json(const ModelConfig& cfg) {
    json j{{"kind", cfg.kind == ModelKind::H1 ? "h1" : "h2"}, {"n", cfg.n}};
    if (cfg.kind == ModelKind::H2) {
        j["epsilon"] = cfg.epsilon;
        j["noise"] = cfg.noise;
        if (cfg.base) j["base"] = matrix_json(cfg.base->base());
    }
    return j;
}

ModelConfig model_config_from_json(const json& j) {
    ModelConfig cfg;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "h1")
        cfg.kind = ModelKind::H1;
    else if (kind == "h2")
        cfg.kind = ModelKind::H2;
    else
        throw ConfigError("model kind must be h1 or h2");
    cfg.n = j.at("n").get<int>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("noise")) cfg.noise = j.at("noise").get<std::string>();
    if (j.contains("base") && !j.at("base").is_null())
        cfg.base = stochastic_from_json(j.at("base"));
    cfg.validate();
    return cfg;
}

json sample_record_json(const SampleRecord& rec) {
    json j{{"seed_path", json{{"seed", rec.seed_path.seed}, {"trial", rec.seed_path.trial}}},
           {"X", matrix_json(rec.X)},
           {"D", matrix_json(rec.D)},
           {"M", matrix_json(rec.M.base())}};
    j["epsilon_effective"] = rec.epsilon_effective;
    return j;
}

json ledger_json(const LedgerSnapshot& s) {
    return json{{"evals", s.evals},
                {"cuts", s.cuts},
                {"eval_total", s.eval_total},
                {"cut_total", s.cut_total},
                {"total", s.total()}};
}

json cell_stats_json(const CellStats& st) {
    return json{{"cell", st.cell},
                {"K_first", st.k_first},
                {"K_final", st.k_final},
                {"doublings", st.doublings},
                {"attempts", st.attempts},
                {"pieces", st.pieces},
                {"vacuous_players", st.vacuous_players},
                {"shortcut", st.shortcut},
                {"new_eval_queries", st.new_eval_queries},
                {"new_cut_queries", st.new_cut_queries}};
}

namespace {

json audit_json(const AuditRecord& a) {
    return json{{"pass", a.pass}, {"worst_margin", a.worst_margin}};
}

json partition_json(const std::vector<Interval>& p) {
    json arr = json::array();
    for (const Interval& w : p) arr.push_back(interval_json(w));
    return arr;
}

}  // namespace

json report_json(const WebbReport& rep) {
    json cells = json::array();
    for (const CellStats& st : rep.cells) cells.push_back(cell_stats_json(st));
    return json{
        {"n", rep.n},
        {"partition", partition_json(rep.partition)},
        {"witness", matrix_json(rep.witness.base())},
        {"ratio_matrix", matrix_json(rep.ratios.base())},
        {"t", rep.t},
        {"delta", rep.delta_value},
        {"sigma_n", rep.sigma_n},
        {"epsilon", rep.epsilon},
        {"epsilon_mode", rep.epsilon_mode == EpsilonMode::Paper ? "paper" : "fast"},
        {"allocation", allocation_json(rep.allocation)},
        {"queries", ledger_json(rep.queries)},
        {"bounds", json{{"webb_query_bound", rep.bounds.webb_bound},
                        {"sigma_query_bound", rep.bounds.sigma_bound},
                        {"sigma_bound_in_range", rep.bounds.sigma_in_range}}},
        {"audits", json{{"near_exact", audit_json(rep.audits.near_exact)},
                        {"envy_free", audit_json(rep.audits.envy_free)},
                        {"super_envy_free", json{{"pass", rep.audits.super_envy_free.pass},
                                                 {"worst_margin", rep.audits.super_envy_free.worst_margin},
                                                 {"own_margin", rep.audits.super_envy_free.own_margin},
                                                 {"other_margin", rep.audits.super_envy_free.other_margin}}},
                        {"proportional", audit_json(rep.audits.proportional)}}},
        {"cells", std::move(cells)},
        {"jitter_retry_used", rep.jitter_retry_used}};
}

ReportAuditView report_audit_view_from_json(const json& j) {
    ReportAuditView v;
    v.n = j.at("n").get<int>();
    for (const auto& wj : j.at("partition")) v.partition.push_back(interval_from_json(wj));
    const SquareMatrix r = matrix_from_json(j.at("ratio_matrix"));
    if (r.n() != v.n) throw DomainError("report ratio matrix dimension mismatch");
    v.ratio_rows.resize(static_cast<std::size_t>(v.n));
    for (int i = 0; i < v.n; ++i) {
        v.ratio_rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(v.n));
        for (int k = 0; k < v.n; ++k) v.ratio_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = r.at(i, k);
    }
    v.epsilon = j.at("epsilon").get<double>();
    v.allocation = allocation_from_json(j.at("allocation"));
    return v;
}

json experiment_spec_json(const ExperimentSpec& spec) {
    const char* mode = spec.mode == McMode::Sigma ? "sigma"
                       : spec.mode == McMode::Queries ? "queries"
                                                      : "audit";
    return json{{"model", model_config_json(spec.model)},
                {"n_grid", spec.n_grid},
                {"b", spec.b},
                {"trials", spec.trials},
                {"seed", spec.seed},
                {"threads", spec.threads},
                {"mode", mode},
                {"epsilon_mode", spec.epsilon_mode == EpsilonMode::Paper ? "paper" : "fast"},
                {"k_cap", spec.k_cap},
                {"retry_cap", spec.retry_cap}};
}

json sigma_summary_json(const SigmaSummary& s) {
    json rows = json::array();
    for (const SigmaRow& r : s.rows)
        rows.push_back(json{{"model", r.model},
                            {"n", r.n},
                            {"b", r.b},
                            {"trials", r.trials},
                            {"hits_sigma_le", r.hits_sigma_le},
                            {"freq", r.freq},
                            {"wilson_lo", r.wilson_lo},
                            {"wilson_hi", r.wilson_hi},
                            {"freq_D_component", r.freq_d_component},
                            {"freq_X_event", r.freq_x_event},
                            {"sigma_median", r.sigma_median},
                            {"sigma_q01", r.sigma_q01},
                            {"ref_ne_sqrt", r.ref_ne_sqrt},
                            {"ref_tail_curve", r.ref_tail_curve}});
    return json{{"spec", experiment_spec_json(s.spec)},
                {"rows", std::move(rows)},
                {"invariant_violations", json{{"t_positive", s.violations.t_positive},
                                              {"t_vs_sigma", s.violations.t_vs_sigma},
                                              {"product_lemma", s.violations.product_lemma},
                                              {"det_product", s.violations.det_product},
                                              {"h2_d_component", s.violations.h2_d_component},
                                              {"b_subset_c", s.violations.b_subset_c}}}};
}

json queries_summary_json(const QueriesSummary& s) {
    json rows = json::array();
    for (const QueriesRow& r : s.rows)
        rows.push_back(json{{"model", r.model},
                            {"n", r.n},
                            {"b", r.b},
                            {"trials", r.trials},
                            {"censored", r.censored},
                            {"singular", r.singular},
                            {"C_min", r.c_min},
                            {"C_med", r.c_med},
                            {"C_max", r.c_max},
                            {"C_q99", r.c_q99},
                            {"hits_C_ge_n7b", r.hits_c_ge_n7b},
                            {"audit_pass_rate", r.audit_pass_rate},
                            {"webb_bound_med", r.webb_bound_med},
                            {"sigma_bound_med", r.sigma_bound_med}});
    return json{{"spec", experiment_spec_json(s.spec)}, {"rows", std::move(rows)}};
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_json_atomic(const std::string& path, const json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace fairdiv
