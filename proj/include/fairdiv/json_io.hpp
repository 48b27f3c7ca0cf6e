#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fairdiv/allocation.hpp"
#include "fairdiv/matrix.hpp"
#include "fairdiv/measure.hpp"
#include "fairdiv/montecarlo.hpp"
#include "fairdiv/protocol.hpp"
#include "fairdiv/sampling.hpp"

namespace fairdiv {

using json = nlohmann::json;

// Matrix JSON: {"n": int, "rows": [[...], ...]}
json matrix_json(const SquareMatrix& m);
SquareMatrix matrix_from_json(const json& j);
StochasticMatrix stochastic_from_json(const json& j, double row_tol = 1e-12);

// Measure JSON: {"breakpoints": [...], "densities": [...]}; the loader
// renormalizes the total mass and rejects totals off by more than 1e-9.
json measure_json(const PiecewiseConstantMeasure& m);
PiecewiseConstantMeasure measure_from_json(const json& j);
json measures_json(const std::vector<PiecewiseConstantMeasure>& ms);
std::vector<PiecewiseConstantMeasure> measures_from_json(const json& j);

json interval_json(const Interval& w);
Interval interval_from_json(const json& j);
json piece_set_json(const PieceSet& ps);
PieceSet piece_set_from_json(const json& j);
json allocation_json(const Allocation& a);
Allocation allocation_from_json(const json& j);

json model_config_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const json& j);

json sample_record_json(const SampleRecord& rec);
json ledger_json(const LedgerSnapshot& s);
json cell_stats_json(const CellStats& st);
json report_json(const WebbReport& rep);

/// The slice of a report the offline auditor needs.
struct ReportAuditView {
    int n = 0;
    std::vector<Interval> partition;
    std::vector<std::vector<double>> ratio_rows;
    double epsilon = 0.0;
    Allocation allocation;
};
ReportAuditView report_audit_view_from_json(const json& j);

json experiment_spec_json(const ExperimentSpec& spec);
json sigma_summary_json(const SigmaSummary& s);
json queries_summary_json(const QueriesSummary& s);

json load_json_file(const std::string& path);
void save_json_atomic(const std::string& path, const json& j);

}  // namespace fairdiv
