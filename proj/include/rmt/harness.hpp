#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/laws.hpp"

namespace rmt {

/// Finite-sample thresholds for the asymptotic claims. Every number here is a
/// desk-scale judgment; all of them can be overridden per run.
struct Tolerances {
    static constexpr std::string_view kVersion = "2026.1";

    double lsd_ks_wigner = 0.05;
    double lsd_ks_covariance = 0.06;
    double lsd_ks_deformed = 0.08;
    double spiked_variance_band = 0.15;  // relative
    double spiked_correlation_band = 0.1;
    double spiked_ks = 0.08;
    double clt_se_multiple = 3.0;
    double psd_floor = -1e-10;
};

struct SummaryEntry {
    std::string statistic;
    double estimate = 0.0;
    double std_error = 0.0;
    std::optional<double> theory;
    bool pass = true;
};

struct ExperimentReport {
    std::string experiment_name;
    std::uint64_t master_seed = 0;
    std::vector<std::string> columns;       // first column is the replicate index
    std::vector<std::vector<double>> rows;  // ordered by replicate index
    std::vector<SummaryEntry> summary;
    std::vector<std::string> notes;
    double wall_time_seconds = 0.0;  // not part of the CSV

    bool passed() const;
    const SummaryEntry& entry(std::string_view statistic) const;
};

/// Three CSV blocks separated by blank lines: a `key,value` header block,
/// the per-replicate rows, and the summary. Numbers are written in shortest
/// round-trip form, so summaries can be recomputed from the rows exactly.
void write_report_csv(std::ostream& os, const ExperimentReport& report);

/// Reads the per-replicate block of a report written by write_report_csv.
std::vector<std::vector<double>> read_report_rows(std::string_view csv);

struct Execution {
    std::size_t threads = 1;
};

/// Runs body(i) for i in [0, count) on `threads` workers. Each index is
/// handled exactly once; callers write into pre-sized slots, so the outcome
/// does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

// ---- limiting spectral distribution ----------------------------------------

struct EnsembleConfig {
    enum class Kind { Wigner, SampleCovariance, Deformed };
    Kind kind = Kind::Wigner;
    EntryLaw entry_law = EntryLaw::GaussianReal;
    double diag_variance = 1.0;
    AtomicDistribution population = AtomicDistribution::point_mass(1.0);
    double aspect_ratio = 0.5;  // y = p / n, sample covariance only
    PopulationMode mode = PopulationMode::Apportioned;
};

std::string_view to_string(EnsembleConfig::Kind kind) noexcept;

struct LsdOptions {
    std::vector<std::size_t> sizes;
    std::size_t reps = 1;
    std::uint64_t seed = 0;
    /// Smoothing half-width for limit CDFs obtained by inversion.
    double inversion_v = 1e-2;
    std::optional<double> ks_threshold;  // default from Tolerances by ensemble kind
    Tolerances tolerances;
    Execution execution;
};

/// Reference limit CDF of the ensemble: the closed-form semicircle for Wigner
/// matrices, otherwise the inverted solver transform.
std::function<double(double)> limit_cdf(const EnsembleConfig& ensemble, double inversion_v);

/// One draw of the ensemble at size n. For sample covariance n is the sample
/// count and p = round(y n).
HermitianMatrix draw_ensemble(const EnsembleConfig& ensemble, std::size_t n, std::uint64_t seed);

ExperimentReport run_lsd_experiment(const EnsembleConfig& ensemble, const LsdOptions& options);

/// Summary of LSD rows (replicate, n, ks). Pure.
std::vector<SummaryEntry> summarize_lsd(const std::vector<std::vector<double>>& rows,
                                        const std::vector<std::size_t>& sizes,
                                        double ks_threshold, bool use_median);

// ---- spiked covariance -----------------------------------------------------

struct SpikedOptions {
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    std::size_t nested_draws = 100000;
    Tolerances tolerances;
    Execution execution;
};

/// Sorted-descending eigenvalues of `nested_draws` Gaussian symmetric blocks
/// with the given variances: samples[t][r] is order statistic t of draw r.
std::vector<std::vector<double>> sample_block_order_statistics(const LimitBlock& block,
                                                               std::size_t draws,
                                                               std::uint64_t seed);

/// Summary of spiked rows (replicate, fluct_1, ..., fluct_d) against the
/// limiting blocks and their nested-MC order statistics. Pure.
std::vector<SummaryEntry> summarize_spiked(
    const std::vector<std::vector<double>>& rows, const std::vector<LimitBlock>& blocks,
    const std::vector<std::vector<std::vector<double>>>& nested, const Tolerances& tolerances);

/// The nested-MC order statistics run_spiked_experiment compares against,
/// indexed [block][order statistic][draw].
std::vector<std::vector<std::vector<double>>> spiked_nested_samples(const SpikedConfig& config,
                                                                    const SpikedOptions& options);

ExperimentReport run_spiked_experiment(const SpikedConfig& config, const SpikedOptions& options);

// ---- CLT for the derivative process ----------------------------------------

struct CltOptions {
    std::size_t n = 400;
    std::size_t reps = 200;
    std::vector<UpperHalfPoint> z_points;
    EntryLaw entry_law = EntryLaw::GaussianReal;
    double diag_variance = 1.0;
    std::uint64_t seed = 0;
    double v0 = kDefaultCltV0;
    Tolerances tolerances;
    Execution execution;
};

/// xi_n(z) = n [s'_ESD(z) - s'_sc(z)] for one spectrum.
cplx clt_statistic(const EmpiricalSpectrum& spec, UpperHalfPoint z);

ExperimentReport run_clt_experiment(const CltOptions& options);

/// Summary of CLT rows (replicate, re xi_1, im xi_1, re xi_2, ...). Pure.
std::vector<SummaryEntry> summarize_clt(const std::vector<std::vector<double>>& rows,
                                        const std::vector<UpperHalfPoint>& z_points,
                                        const CltConstants& constants, double v0,
                                        const Tolerances& tolerances);

/// `a+bi` with decimal reals; also `bi`, `a`.
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);

}  // namespace rmt
