#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qmcar {

enum class Curvature { strictly_concave, strictly_convex, mixed_or_vanishing };

struct CurvatureReport {
    Curvature classification;
    double min_abs_curvature;  // min |kappa| over the audit grid
    int grid;
};

/// Unnormalized target density psi: [0,1] -> R+, together with an upper bound
/// L >= sup psi and the cumulative integral G(t) = int_0^t psi. Immutable after
/// construction; the normalizing constant C = G(1) is computed once here and
/// never mutated, so values are safe to share across threads.
class Density {
public:
    using Fn = std::function<double(double)>;

    // `cumulative`, when present, must return int_0^t psi in closed form.
    // Without it, cdf() falls back to adaptive quadrature split at `breakpoints`.
    Density(std::string name, Fn eval, std::optional<Fn> cumulative, double bound_l,
            std::vector<double> breakpoints = {});

    const std::string& name() const { return name_; }
    double operator()(double x) const { return eval_(x); }
    double bound_l() const { return bound_l_; }
    double norm_c() const { return norm_c_; }
    bool has_closed_form_cdf() const { return cumulative_.has_value(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    // G(t) = int_0^t psi with |error| <= 1e-12; t must lie in [0,1].
    double cdf(double t) const;
    // Quadrature route regardless of the closed form (cross-check path).
    double cdf_by_quadrature(double t) const;

    // Same density with a different upper bound; audits psi <= L on a grid.
    Density with_bound(double l) const;

private:
    std::string name_;
    Fn eval_;
    std::optional<Fn> cumulative_;
    double bound_l_;
    std::vector<double> breakpoints_;
    double norm_c_;
};

// Registry of the built-in targets: "example1", "example2", "uniform".
Density make_builtin(const std::string& name);
const std::vector<std::string>& builtin_density_names();

// (1 + 1e-6) times the max of psi over the 100001-point uniform grid.
// Throws if psi is non-finite anywhere on the grid.
double default_bound(const std::function<double(double)>& eval);

// Classifies psi'' by central differences (h = 1e-5) at the interior grid
// points, skipping points within h of a breakpoint. grid >= 100, tol > 0.
CurvatureReport check_curvature(const Density& d, int grid, double tol);

// Building blocks shared by the registry and the JSON config forms.
struct PolySegment {
    double lo;
    double hi;
    std::vector<double> coefficients;  // ascending powers: c0 + c1 x + ...
};
struct PowerTerm {
    double coefficient;
    double power;  // >= 0, may be fractional
};

// Segments must tile [0,1] contiguously. Closed-form CDF is derived per piece.
Density make_piecewise_polynomial_density(std::string name, std::vector<PolySegment> segments,
                                          std::optional<double> bound_l = {});

// psi(x) = scale * (amplitude * sin(frequency x) + sum c_i x^{p_i}).
Density make_sine_poly_density(std::string name, double scale, double amplitude, double frequency,
                               std::vector<PowerTerm> terms, std::optional<double> bound_l = {});

const char* curvature_name(Curvature c);

}  // namespace qmcar
