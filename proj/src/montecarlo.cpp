#include "fairdiv/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "fairdiv/errors.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/linalg.hpp"
#include "fairdiv/protocol.hpp"

namespace fairdiv {

void ExperimentSpec::validate() const {
    if (trials < 1) throw ConfigError("experiment needs trials >= 1");
    if (n_grid.empty()) throw ConfigError("experiment needs a non-empty n grid");
    for (int n : n_grid)
        if (n < 1) throw ConfigError("grid entries must be >= 1");
    if (!(b > 4.0) && mode == McMode::Sigma)
        throw ConfigError("tail-exponent reporting needs b > 4");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (model.kind == ModelKind::H2 && model.base)
        for (int n : n_grid)
            if (model.base->n() != n)
                throw ConfigError("a fixed H2 base pins the grid to its own dimension");
    ModelConfig probe = model;
    probe.n = n_grid.front();
    probe.validate();
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw DomainError("normal quantile needs p in (0,1)");
    // Acklam's rational approximation, |relative error| < 1.2e-9.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double bb[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((bb[0] * r + bb[1]) * r + bb[2]) * r + bb[3]) * r + bb[4]) * r + 1.0);
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials,
                                          double confidence) {
    if (trials < 1) throw DomainError("wilson interval needs trials >= 1");
    if (hits > trials) throw DomainError("wilson interval needs hits <= trials");
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw DomainError("confidence must lie in (0,1)");
    const double z = normal_quantile(0.5 * (1.0 + confidence));
    const double nn = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / nn;
    const double z2n = z * z / nn;
    const double denom = 1.0 + z2n;
    const double center = (phat + 0.5 * z2n) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + 0.25 * z2n / nn) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

// Nearest-rank quantile of a sorted sample; nan on empty input.
template <typename T>
double quantile_sorted(const std::vector<T>& v, double q) {
    if (v.empty()) return std::nan("");
    const double rank = std::ceil(q * static_cast<double>(v.size()));
    std::size_t idx = rank <= 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
    idx = std::min(idx, v.size() - 1);
    return static_cast<double>(v[idx]);
}

template <typename Fn>
void run_parallel(long trials, int threads, Fn&& fn) {
    threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, trials)));
    if (threads == 1) {
        for (long t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long t = next.fetch_add(1);
                if (t >= trials) return;
                try {
                    fn(t);
                } catch (...) {
                    std::scoped_lock lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

const char* model_name(ModelKind k) { return k == ModelKind::H1 ? "h1" : "h2"; }

struct SigmaTrial {
    double sigma_m = 0.0;
    bool hit_sigma = false;
    bool hit_d = false;
    bool hit_x = false;
    InvariantCounters viol;
};

SigmaTrial sigma_trial(const ExperimentSpec& spec, int n, long trial) {
    ModelConfig cfg = spec.model;
    cfg.n = n;
    Rng rng(derive_stream(spec.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)));
    const SampleRecord rec = sample(cfg, rng, {spec.seed, static_cast<std::uint64_t>(trial)});

    SigmaTrial out;
    const std::vector<double> sig = singular_values(rec.M.base());
    out.sigma_m = sig.back();
    double sigma_d = std::abs(rec.D.at(0, 0));  // singular values of a diagonal matrix
    for (int i = 1; i < n; ++i) sigma_d = std::min(sigma_d, std::abs(rec.D.at(i, i)));
    const double sigma_x = smallest_singular_value(rec.X);

    const double thr_m = std::pow(static_cast<double>(n), -spec.b);
    const double thr_d = std::pow(static_cast<double>(n), -1.5);
    const double thr_x = std::pow(static_cast<double>(n), -spec.b + 1.5);
    out.hit_sigma = out.sigma_m <= thr_m;
    out.hit_d = sigma_d <= thr_d;
    out.hit_x = sigma_x <= thr_x;

    try {
        const double t = min_entry(invert(rec.M.base()));
        if (t > 0.0) out.viol.t_positive += 1;
        if (!(std::abs(t) <= (1.0 + 1e-9) / out.sigma_m)) out.viol.t_vs_sigma += 1;
    } catch (const SingularError&) {
        // probability-zero branch; the sigma statistics above still stand
    }
    if (!(sigma_d * sigma_x <= out.sigma_m * (1.0 + 1e-9))) out.viol.product_lemma += 1;
    if (n <= 50) {
        double prod = 1.0;
        for (double s : sig) prod *= s;
        const double det = std::abs(determinant(rec.M.base()));
        const double scale = std::max({det, prod, 1e-300});
        if (std::abs(prod - det) > 1e-8 * scale) out.viol.det_product += 1;
    }
    if (spec.model.kind == ModelKind::H2 && n >= 3 && out.hit_d) out.viol.h2_d_component += 1;
    if (out.hit_sigma && !out.hit_d && !(sigma_x <= thr_x * (1.0 + 1e-9))) out.viol.b_subset_c += 1;
    return out;
}

struct QueriesTrial {
    std::uint64_t c = 0;
    double webb_bound = 0.0;
    double sigma_bound = 0.0;
    bool completed = false;
    bool censored = false;
    bool singular = false;
    bool audits_pass = false;
};

QueriesTrial queries_trial(const ExperimentSpec& spec, int n, long trial) {
    ModelConfig cfg = spec.model;
    cfg.n = n;
    Rng rng(derive_stream(spec.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)));
    const SampleRecord rec = sample(cfg, rng, {spec.seed, static_cast<std::uint64_t>(trial)});

    const std::vector<Interval> grid = uniform_partition(n);
    const std::vector<PiecewiseConstantMeasure> measures = measures_from_matrix(rec.M, grid);
    auto ledger = std::make_shared<QueryLedger>(n);
    std::vector<MeasureOracle> oracles;
    oracles.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) oracles.emplace_back(i, &measures[static_cast<std::size_t>(i)], ledger);

    NearExactConfig pcfg;
    pcfg.epsilon_mode = spec.epsilon_mode;
    pcfg.retry_cap = spec.retry_cap;
    pcfg.k_cap = spec.k_cap;
    pcfg.rng = &rng;

    QueriesTrial out;
    try {
        const WebbReport rep = envy_free(oracles, pcfg);
        out.c = rep.queries.total();
        out.webb_bound = rep.bounds.webb_bound;
        out.sigma_bound = rep.bounds.sigma_bound;
        out.audits_pass = rep.audits.near_exact.pass && rep.audits.envy_free.pass &&
                          rep.audits.super_envy_free.pass && rep.audits.proportional.pass;
        out.completed = true;
    } catch (const ResourceError&) {
        out.censored = true;
    } catch (const SingularWitnessMatrix&) {
        out.singular = true;
    }
    return out;
}

}  // namespace

SigmaSummary mc_sigma(const ExperimentSpec& spec_in) {
    ExperimentSpec spec = spec_in;
    spec.mode = McMode::Sigma;
    spec.validate();
    SigmaSummary summary;
    summary.spec = spec;

    std::vector<int> grid = spec.n_grid;
    std::stable_sort(grid.begin(), grid.end());
    for (int n : grid) {
        std::vector<SigmaTrial> results(static_cast<std::size_t>(spec.trials));
        run_parallel(spec.trials, spec.threads,
                     [&](long t) { results[static_cast<std::size_t>(t)] = sigma_trial(spec, n, t); });

        SigmaRow row;
        row.model = model_name(spec.model.kind);
        row.n = n;
        row.b = spec.b;
        row.trials = spec.trials;
        std::vector<double> sigmas;
        sigmas.reserve(results.size());
        std::uint64_t hits_d = 0, hits_x = 0;
        for (const SigmaTrial& r : results) {
            row.hits_sigma_le += r.hit_sigma ? 1 : 0;
            hits_d += r.hit_d ? 1 : 0;
            hits_x += r.hit_x ? 1 : 0;
            sigmas.push_back(r.sigma_m);
            summary.violations.t_positive += r.viol.t_positive;
            summary.violations.t_vs_sigma += r.viol.t_vs_sigma;
            summary.violations.product_lemma += r.viol.product_lemma;
            summary.violations.det_product += r.viol.det_product;
            summary.violations.h2_d_component += r.viol.h2_d_component;
            summary.violations.b_subset_c += r.viol.b_subset_c;
        }
        std::sort(sigmas.begin(), sigmas.end());
        const double nt = static_cast<double>(spec.trials);
        row.freq = static_cast<double>(row.hits_sigma_le) / nt;
        const auto wi = wilson_interval(row.hits_sigma_le, static_cast<std::uint64_t>(spec.trials), 0.95);
        row.wilson_lo = wi.first;
        row.wilson_hi = wi.second;
        row.freq_d_component = static_cast<double>(hits_d) / nt;
        row.freq_x_event = static_cast<double>(hits_x) / nt;
        row.sigma_median = quantile_sorted(sigmas, 0.5);
        row.sigma_q01 = quantile_sorted(sigmas, 0.01);
        row.ref_ne_sqrt = n * std::exp(-std::sqrt(static_cast<double>(n)));
        row.ref_tail_curve = std::pow(static_cast<double>(n), tail_exponent(spec.b));
        summary.rows.push_back(std::move(row));
    }
    return summary;
}

QueriesSummary mc_queries(const ExperimentSpec& spec_in) {
    ExperimentSpec spec = spec_in;
    if (spec.mode != McMode::Audit) spec.mode = McMode::Queries;
    spec.validate();
    QueriesSummary summary;
    summary.spec = spec;

    std::vector<int> grid = spec.n_grid;
    std::stable_sort(grid.begin(), grid.end());
    for (int n : grid) {
        std::vector<QueriesTrial> results(static_cast<std::size_t>(spec.trials));
        run_parallel(spec.trials, spec.threads,
                     [&](long t) { results[static_cast<std::size_t>(t)] = queries_trial(spec, n, t); });

        QueriesRow row;
        row.model = model_name(spec.model.kind);
        row.n = n;
        row.b = spec.b;
        row.trials = spec.trials;
        std::vector<std::uint64_t> cs;
        std::vector<double> webb_bounds, sigma_bounds;
        std::uint64_t pass = 0, completed = 0;
        const double c_threshold = std::pow(static_cast<double>(n), 7.0 + spec.b);
        for (const QueriesTrial& r : results) {
            if (r.censored) ++row.censored;
            if (r.singular) ++row.singular;
            if (!r.completed) continue;
            ++completed;
            cs.push_back(r.c);
            webb_bounds.push_back(r.webb_bound);
            sigma_bounds.push_back(r.sigma_bound);
            if (static_cast<double>(r.c) >= c_threshold) ++row.hits_c_ge_n7b;
            if (r.audits_pass) ++pass;
        }
        std::sort(cs.begin(), cs.end());
        std::sort(webb_bounds.begin(), webb_bounds.end());
        std::sort(sigma_bounds.begin(), sigma_bounds.end());
        row.c_min = cs.empty() ? 0 : cs.front();
        row.c_max = cs.empty() ? 0 : cs.back();
        row.c_med = cs.empty() ? 0 : static_cast<std::uint64_t>(quantile_sorted(cs, 0.5));
        row.c_q99 = cs.empty() ? 0 : static_cast<std::uint64_t>(quantile_sorted(cs, 0.99));
        row.audit_pass_rate =
            completed == 0 ? std::nan("") : static_cast<double>(pass) / static_cast<double>(completed);
        row.webb_bound_med = quantile_sorted(webb_bounds, 0.5);
        row.sigma_bound_med = quantile_sorted(sigma_bounds, 0.5);
        summary.rows.push_back(std::move(row));
    }
    return summary;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {
constexpr const char* kSigmaHeader =
    "model,n,b,trials,hits_sigma_le,freq,wilson_lo,wilson_hi,freq_D_component,"
    "freq_X_event,sigma_median,sigma_q01,ref_ne_sqrt,ref_tail_curve";
constexpr const char* kQueriesHeader =
    "model,n,b,trials,censored,C_min,C_med,C_max,C_q99,hits_C_ge_n7b,"
    "audit_pass_rate,webb_bound_med,sigma_bound_med";
}  // namespace

std::string to_csv(const SigmaSummary& s) {
    std::string out(kSigmaHeader);
    out += '\n';
    for (const SigmaRow& r : s.rows) {
        out += r.model;
        out += ',' + std::to_string(r.n) + ',' + format_double(r.b) + ',' + std::to_string(r.trials);
        out += ',' + std::to_string(r.hits_sigma_le) + ',' + format_double(r.freq);
        out += ',' + format_double(r.wilson_lo) + ',' + format_double(r.wilson_hi);
        out += ',' + format_double(r.freq_d_component) + ',' + format_double(r.freq_x_event);
        out += ',' + format_double(r.sigma_median) + ',' + format_double(r.sigma_q01);
        out += ',' + format_double(r.ref_ne_sqrt) + ',' + format_double(r.ref_tail_curve);
        out += '\n';
    }
    return out;
}

std::string to_csv(const QueriesSummary& s) {
    std::string out(kQueriesHeader);
    out += '\n';
    for (const QueriesRow& r : s.rows) {
        out += r.model;
        out += ',' + std::to_string(r.n) + ',' + format_double(r.b) + ',' + std::to_string(r.trials);
        out += ',' + std::to_string(r.censored);
        out += ',' + std::to_string(r.c_min) + ',' + std::to_string(r.c_med) + ',' +
               std::to_string(r.c_max) + ',' + std::to_string(r.c_q99);
        out += ',' + std::to_string(r.hits_c_ge_n7b) + ',' + format_double(r.audit_pass_rate);
        out += ',' + format_double(r.webb_bound_med) + ',' + format_double(r.sigma_bound_med);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) throw IoError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot rename " + tmp);
}

void write_csv(const SigmaSummary& s, const std::string& path) { write_file_atomic(path, to_csv(s)); }
void write_csv(const QueriesSummary& s, const std::string& path) { write_file_atomic(path, to_csv(s)); }

void write_json(const SigmaSummary& s, const std::string& path) {
    write_file_atomic(path, sigma_summary_json(s).dump(2) + "\n");
}

void write_json(const QueriesSummary& s, const std::string& path) {
    write_file_atomic(path, queries_summary_json(s).dump(2) + "\n");
}

}  // namespace fairdiv
