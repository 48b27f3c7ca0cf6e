#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairdiv/near_exact.hpp"
#include "fairdiv/sampling.hpp"

namespace fairdiv {

enum class McMode { Sigma, Queries, Audit };

struct ExperimentSpec {
    ModelConfig model;  // model.n is taken from n_grid per grid point
    std::vector<int> n_grid;
    double b = 5.0;
    long trials = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    McMode mode = McMode::Sigma;
    EpsilonMode epsilon_mode = EpsilonMode::Fast;  // Queries/Audit modes
    long k_cap = 400000;
    int retry_cap = 64;

    void validate() const;
};

/// Per-trial inequality checks; any nonzero total fails the test suite.
struct InvariantCounters {
    std::uint64_t t_positive = 0;            // t <= 0 violated
    std::uint64_t t_vs_sigma = 0;            // |t| <= (1+1e-9)/sigma_n(M) violated
    std::uint64_t product_lemma = 0;         // sigma(D) sigma(X) <= (1+1e-9) sigma(M) violated
    std::uint64_t det_product = 0;           // prod sigma_k vs |det M| (n <= 50) violated
    std::uint64_t h2_d_component = 0;        // H2, n >= 3: sigma(D) <= n^{-3/2} occurred
    std::uint64_t b_subset_c = 0;            // B-event trial escaping the C event
    std::uint64_t total() const {
        return t_positive + t_vs_sigma + product_lemma + det_product + h2_d_component + b_subset_c;
    }
};

struct SigmaRow {
    std::string model;
    int n = 0;
    double b = 0.0;
    long trials = 0;
    std::uint64_t hits_sigma_le = 0;  // sigma_n(M) <= n^-b
    double freq = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double freq_d_component = 0.0;  // sigma_n(D) <= n^-3/2
    double freq_x_event = 0.0;      // sigma_n(X) <= n^{-b+3/2}
    double sigma_median = 0.0;
    double sigma_q01 = 0.0;
    double ref_ne_sqrt = 0.0;     // n e^{-sqrt n}
    double ref_tail_curve = 0.0;  // n^{tail_exponent(b)}
};

struct QueriesRow {
    std::string model;
    int n = 0;
    double b = 0.0;
    long trials = 0;
    long censored = 0;  // ResourceError trials
    std::uint64_t c_min = 0;
    std::uint64_t c_med = 0;
    std::uint64_t c_max = 0;
    std::uint64_t c_q99 = 0;
    std::uint64_t hits_c_ge_n7b = 0;
    double audit_pass_rate = 0.0;
    double webb_bound_med = 0.0;
    double sigma_bound_med = 0.0;
    long singular = 0;  // probability-zero branch, kept out of the CSV
};

struct SigmaSummary {
    ExperimentSpec spec;
    std::vector<SigmaRow> rows;
    InvariantCounters violations;
};

struct QueriesSummary {
    ExperimentSpec spec;
    std::vector<QueriesRow> rows;
};

/// Tail frequencies of sigma_n(M) and the event decomposition, per grid n.
SigmaSummary mc_sigma(const ExperimentSpec& spec);

/// Full protocol runs and the distribution of measured query counts.
QueriesSummary mc_queries(const ExperimentSpec& spec);

/// Wilson score interval for hits/trials at the given confidence.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials,
                                          double confidence);

/// Two-sided standard normal quantile (Acklam's approximation).
double normal_quantile(double p);

std::string to_csv(const SigmaSummary& s);
std::string to_csv(const QueriesSummary& s);
void write_csv(const SigmaSummary& s, const std::string& path);
void write_csv(const QueriesSummary& s, const std::string& path);
void write_json(const SigmaSummary& s, const std::string& path);
void write_json(const QueriesSummary& s, const std::string& path);

/// Shortest round-trip decimal form; the one float format used in CSV output.
std::string format_double(double v);

/// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace fairdiv
