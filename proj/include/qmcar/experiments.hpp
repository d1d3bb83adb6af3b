#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmcar/density.hpp"
#include "qmcar/driver.hpp"

namespace qmcar {

struct ExperimentConfig {
    std::string density_name = "example1";  // built-in name
    std::optional<Density> density;         // overrides density_name when set
    Family family = Family::fibonacci;
    std::vector<std::int64_t> parameters;   // k values (fibonacci) or M values
    std::optional<double> l_override;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};  // random family
    bool measure_dstar = true;
    bool measure_accept_rate = true;
    bool measure_qr = false;
    bool measure_integration_error = false;
    std::optional<std::int64_t> r_fixed;    // criterion cutoff; empty = per-k default (fibonacci)
    std::string integrand = "x";
    std::int64_t fit_n_min = 100;           // rows below this N are excluded from the fit
};

struct ConvergenceRow {
    Family family;
    std::int64_t parameter;
    std::int64_t m;  // driver points actually proposed
    std::int64_t n;  // accepted (seed-averaged and rounded for the random family)
    double accept_rate;
    double dstar;    // NaN when not measured
    std::optional<double> qr;
    std::optional<double> integ_err;
    double wall_seconds;
};

struct SlopeFit {
    double slope;
    double stderr_;
    std::int64_t points_used;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;  // sorted by (family, N)
    double slope;                      // OLS on (ln N, ln dstar); NaN if unfittable
    double slope_stderr;
    std::int64_t fit_n_min;            // smallest N used by the fit
    std::int64_t fit_n_max;
    std::int64_t fit_rows;
};

// Ordinary least squares on (ln N, ln value). Requires >= 3 strictly positive
// points; the returned stderr is the standard error of the slope.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points);

// Sweeps the configured parameters: generate driver, sample, measure. Random
// family measures are averaged over the seeds before fitting. Deterministic
// for a fixed config. Parameter points run in a worker pool capped by the
// QMCAR_THREADS environment variable; rows are sorted regardless of
// completion order.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

struct FamilySlope {
    Family family;
    double slope;
    double stderr_;
    std::int64_t rows_used;
    std::int64_t n_min;
    std::int64_t n_max;
};

struct FigureSeries {
    std::string density;
    std::vector<ConvergenceRow> rows;  // all four families, sorted by (family, N)
    std::vector<FamilySlope> slopes;
    std::int64_t ordering_compared;     // fibonacci rows matched to a kronecker row
    std::int64_t ordering_fib_le_kron;  // of those, how often dstar(fib) <= dstar(kron)
};

struct FigureSummary {
    std::vector<FigureSeries> series;  // example1 then example2
};

// Reruns the discrepancy-convergence study for both built-in examples over
// the four driver families (fibonacci k = 10..25, the others M = 2^8..2^20,
// random averaged over seeds 1..10) and writes figure1.csv, figure2.csv and
// summary.json into out_dir.
FigureSummary reproduce_figures(const std::string& out_dir);

}  // namespace qmcar
