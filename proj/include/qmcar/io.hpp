#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmcar/ar_sampler.hpp"
#include "qmcar/density.hpp"
#include "qmcar/driver.hpp"
#include "qmcar/experiments.hpp"

namespace qmcar {

// %.17g (or %a when hexfloat): lossless double round trip.
std::string format_real(double x, bool hexfloat = false);

// CSV "j,x1,x2" with a header row, j 1-based.
void write_driver_csv(std::ostream& os, const DriverSet& t, bool hexfloat = false);
// Accepts "j,x1,x2" or bare "x1,x2" rows; a leading header row is skipped.
std::vector<Point2> read_points_csv(std::istream& is);

// CSV with a single "y" column.
void write_samples_csv(std::ostream& os, const SampleSet& s, bool hexfloat = false);
std::vector<double> read_samples_csv(std::istream& is);

// Density config forms: {"builtin": name}, {"form": "piecewise-polynomial",
// "pieces": [{"interval": [a,b], "coefficients": [c0,...]}, ...]} or
// {"form": "sine-poly", "amplitude": A, "frequency": w, "terms": [[c,p],...],
// "scale": s}. An optional "L" overrides the default bound.
Density density_from_json(const nlohmann::json& spec);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// Convergence rows as CSV. Measure columns follow the config; wall-clock
// times are deliberately excluded so identical configs give identical bytes.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep,
                           const ExperimentConfig& cfg);

nlohmann::json convergence_report_json(const ConvergenceReport& rep);
nlohmann::json figure_summary_json(const FigureSummary& summary);

}  // namespace qmcar
