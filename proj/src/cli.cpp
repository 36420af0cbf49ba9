#include "rmt/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rmt/errors.hpp"
#include "rmt/harness.hpp"
#include "rmt/union_metric.hpp"

namespace rmt {

namespace {

constexpr double kMetricSlack = 1e-12;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RMTK_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(fmt::format("RMTK_SEED='{}' is not an unsigned integer", env));
        }
    }
    return 0;
}

struct Common {
    std::string out_path;
    bool timing = false;
    std::size_t threads = 1;
    std::uint64_t seed = 0;
};

void add_common(CLI::App& sub, Common& c, bool experiment) {
    sub.add_option("--out", c.out_path, "write CSV to this path instead of standard output");
    sub.add_option("--seed", c.seed, "master seed (default: RMTK_SEED or 0)");
    if (experiment) {
        sub.add_flag("--timing", c.timing, "print wall time to standard error");
        sub.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    }
}

/// Writes `body` to --out or to `out`.
template <class Body>
void emit(const Common& c, std::ostream& out, Body&& body) {
    if (c.out_path.empty()) {
        body(out);
        return;
    }
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file) throw UsageError(fmt::format("cannot open '{}' for writing", c.out_path));
    body(file);
}

int finish_report(const ExperimentReport& report, const Common& c, std::ostream& out,
                  std::ostream& err) {
    emit(c, out, [&](std::ostream& os) { write_report_csv(os, report); });
    if (c.timing) err << fmt::format("wall_time_seconds={:.3f}\n", report.wall_time_seconds);
    return report.passed() ? 0 : 1;
}

std::vector<UpperHalfPoint> parse_z_list(const std::vector<std::string>& items) {
    std::vector<UpperHalfPoint> out;
    for (const auto& s : items) out.emplace_back(parse_complex(s));
    return out;
}

PopulationMode parse_population_mode(const std::string& s) {
    if (s == "apportioned") return PopulationMode::Apportioned;
    if (s == "iid") return PopulationMode::IidFromH;
    throw UsageError(fmt::format("unknown population mode '{}' (apportioned|iid)", s));
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random-matrix spectral-law toolkit", "rmtk"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    Common common;
    common.seed = 0;

    // metric-check
    auto* metric = app.add_subcommand("metric-check", "metric axioms on a disjoint union of spaces");
    std::size_t spaces = 0, samples = 0;
    std::string dims;
    metric->add_option("--spaces", spaces, "number of component spaces")->required()->check(CLI::PositiveNumber);
    metric->add_option("--dims", dims, "dimension rule: const:d | list:a,b,... | cycle:lo-hi | d")->required();
    metric->add_option("--samples", samples, "random triples")->required()->check(CLI::PositiveNumber);

    // solve
    auto* solve = app.add_subcommand("solve", "evaluate a limiting transform at one point");
    std::string law, h_text = "1:1", z_text;
    double y = 0.5;
    SolverSettings settings;
    solve->add_option("--law", law, "semicircle | silverstein | deformed")
        ->required()
        ->check(CLI::IsMember({"semicircle", "silverstein", "deformed"}));
    solve->add_option("--h", h_text, "population spectrum weight:location,...");
    solve->add_option("--y", y, "aspect ratio p/n");
    solve->add_option("--z", z_text, "point a+bi with b > 0")->required();
    solve->add_option("--tol", settings.tol, "convergence tolerance");
    solve->add_option("--max-iter", settings.max_iter, "iteration cap");

    // lsd
    auto* lsd = app.add_subcommand("lsd", "ESD convergence to the limiting law");
    std::string ensemble_kind, entry_law = "gauss-real", population_mode = "apportioned";
    std::string lsd_h = "1:1";
    double lsd_y = 0.5, diag_variance = 1.0, inversion_v = 1e-2;
    std::optional<double> ks_threshold;
    std::vector<std::size_t> sizes;
    std::size_t lsd_reps = 1;
    lsd->add_option("--ensemble", ensemble_kind, "wigner | covariance | deformed")
        ->required()
        ->check(CLI::IsMember({"wigner", "covariance", "deformed"}));
    lsd->add_option("--sizes", sizes, "increasing matrix sizes")->required()->delimiter(',');
    lsd->add_option("--reps", lsd_reps, "replicates per size")->check(CLI::PositiveNumber);
    lsd->add_option("--law", entry_law, "gauss-real | gauss-complex | rademacher | uniform");
    lsd->add_option("--h", lsd_h, "population spectrum weight:location,...");
    lsd->add_option("--y", lsd_y, "aspect ratio p/n (covariance)");
    lsd->add_option("--diag-variance", diag_variance, "diagonal variance of Wigner entries");
    lsd->add_option("--population-mode", population_mode, "apportioned | iid");
    lsd->add_option("--v", inversion_v, "smoothing half-width for inverted limit CDFs");
    lsd->add_option("--ks-threshold", ks_threshold, "KS bound at the largest size");

    // spiked
    auto* spiked = app.add_subcommand("spiked", "spiked covariance eigenvalue fluctuations");
    std::vector<double> eigenvalues;
    std::vector<std::size_t> multiplicities;
    std::size_t spiked_n = 0;
    SpikedOptions spiked_options;
    spiked->add_option("--eigenvalues", eigenvalues, "distinct population eigenvalues, decreasing")
        ->required()
        ->delimiter(',');
    spiked->add_option("--multiplicities", multiplicities, "multiplicity of each eigenvalue")
        ->delimiter(',');
    spiked->add_option("--n", spiked_n, "sample count")->required();
    spiked->add_option("--reps", spiked_options.reps, "replicates (>= 100)");
    spiked->add_option("--nested-draws", spiked_options.nested_draws, "draws of each limiting block");
    spiked->add_option("--variance-band", spiked_options.tolerances.spiked_variance_band, "relative variance band");
    spiked->add_option("--correlation-band", spiked_options.tolerances.spiked_correlation_band, "cross-group correlation band");
    spiked->add_option("--ks", spiked_options.tolerances.spiked_ks, "KS bound per order statistic");

    // clt
    auto* clt = app.add_subcommand("clt", "CLT for the derivative of the Stieltjes transform");
    CltOptions clt_options;
    std::vector<std::string> z_items;
    std::string clt_law = "gauss-real";
    clt->add_option("--n", clt_options.n, "matrix size")->required()->check(CLI::PositiveNumber);
    clt->add_option("--reps", clt_options.reps, "replicates (>= 200)")->required();
    clt->add_option("--z", z_items, "points a+bi")->required()->delimiter(',');
    clt->add_option("--law", clt_law, "gauss-real | gauss-complex | rademacher | uniform");
    clt->add_option("--diag-variance", clt_options.diag_variance, "diagonal variance");
    clt->add_option("--v0", clt_options.v0, "lower bound on Im z");
    clt->add_option("--se-multiple", clt_options.tolerances.clt_se_multiple, "pass band in standard errors");

    for (auto* sub : {metric, solve}) add_common(*sub, common, false);
    for (auto* sub : {lsd, spiked, clt}) add_common(*sub, common, true);

    try {
        common.seed = default_seed();
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        err << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (metric->parsed()) {
            UnionSpace space(parse_dimension_rule(dims), spaces);
            const auto report = metric_axiom_suite(space, common.seed, samples);
            emit(common, out, [&](std::ostream& os) {
                os << "max_triangle_violation,max_symmetry_violation,zero_distance_failures\n";
                os << fmt::format("{},{},{}\n", report.max_triangle_violation,
                                  report.max_symmetry_violation, report.zero_distance_failures);
            });
            const bool ok = report.max_triangle_violation <= kMetricSlack &&
                            report.max_symmetry_violation == 0.0 &&
                            report.zero_distance_failures == 0;
            return ok ? 0 : 1;
        }
        if (solve->parsed()) {
            settings.validate();
            const UpperHalfPoint z(parse_complex(z_text));
            emit(common, out, [&](std::ostream& os) {
                if (law == "semicircle") {
                    const cplx s = semicircle_stieltjes(z);
                    const double res = std::abs(s * s + z.value() * s + 1.0);
                    os << "s_re,s_im,residual,iters\n";
                    os << fmt::format("{},{},{},{}\n", s.real(), s.imag(), res, 0);
                } else if (law == "silverstein") {
                    const auto sol = solve_silverstein(AtomicDistribution::parse(h_text), y, z, settings);
                    os << "m_re,m_im,residual,iters\n";
                    os << fmt::format("{},{},{},{}\n", sol.m.real(), sol.m.imag(), sol.residual,
                                      sol.iterations);
                } else {
                    const auto sol = solve_deformed_wigner(AtomicDistribution::parse(h_text), z, settings);
                    os << "s_re,s_im,g_re,g_im,residual,iters\n";
                    os << fmt::format("{},{},{},{},{},{}\n", sol.s.real(), sol.s.imag(),
                                      sol.g.real(), sol.g.imag(), sol.residual, sol.iterations);
                }
            });
            return 0;
        }
        if (lsd->parsed()) {
            EnsembleConfig ensemble;
            ensemble.kind = ensemble_kind == "wigner"       ? EnsembleConfig::Kind::Wigner
                            : ensemble_kind == "covariance" ? EnsembleConfig::Kind::SampleCovariance
                                                            : EnsembleConfig::Kind::Deformed;
            ensemble.entry_law = parse_entry_law(entry_law);
            ensemble.diag_variance = diag_variance;
            ensemble.population = AtomicDistribution::parse(lsd_h);
            ensemble.aspect_ratio = lsd_y;
            ensemble.mode = parse_population_mode(population_mode);
            LsdOptions options;
            options.sizes = sizes;
            options.reps = lsd_reps;
            options.seed = common.seed;
            options.inversion_v = inversion_v;
            options.ks_threshold = ks_threshold;
            options.execution.threads = common.threads;
            return finish_report(run_lsd_experiment(ensemble, options), common, out, err);
        }
        if (spiked->parsed()) {
            if (multiplicities.empty()) multiplicities.assign(eigenvalues.size(), 1);
            if (multiplicities.size() != eigenvalues.size())
                throw UsageError("--multiplicities must have one entry per eigenvalue");
            SpikedConfig config;
            for (std::size_t j = 0; j < eigenvalues.size(); ++j)
                config.levels.push_back({eigenvalues[j], multiplicities[j]});
            config.n = spiked_n;
            spiked_options.seed = common.seed;
            spiked_options.execution.threads = common.threads;
            return finish_report(run_spiked_experiment(config, spiked_options), common, out, err);
        }
        if (clt->parsed()) {
            clt_options.z_points = parse_z_list(z_items);
            clt_options.entry_law = parse_entry_law(clt_law);
            clt_options.seed = common.seed;
            clt_options.execution.threads = common.threads;
            return finish_report(run_clt_experiment(clt_options), common, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientSamples& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, out, err);
}

}  // namespace rmt
