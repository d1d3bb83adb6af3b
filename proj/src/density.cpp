#include "qmcar/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <utility>

#include "qmcar/errors.hpp"
#include "qmcar/quadrature.hpp"

namespace qmcar {

namespace {

constexpr int kAuditGrid = 100000;  // default_bound and construction audits
constexpr double kBoundSlack = 1e-6;

struct GridAudit {
    double max_value;
    double min_value;
};

GridAudit audit_on_grid(const std::function<double(double)>& eval) {
    GridAudit a{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (int i = 0; i <= kAuditGrid; ++i) {
        const double x = static_cast<double>(i) / kAuditGrid;
        const double v = eval(x);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "density evaluates to a non-finite value at x = " << x;
            throw DomainError(msg.str());
        }
        a.max_value = std::max(a.max_value, v);
        a.min_value = std::min(a.min_value, v);
    }
    return a;
}

double polynomial_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

// int_0^x of the polynomial with ascending coefficients c.
double polynomial_antiderivative(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i] / static_cast<double>(i + 1);
    return v * x;
}

double resolve_bound(const std::function<double(double)>& eval, std::optional<double> given) {
    const GridAudit audit = audit_on_grid(eval);
    if (audit.min_value < -1e-12) {
        std::ostringstream msg;
        msg << "density must be nonnegative on [0,1]; grid minimum " << audit.min_value;
        throw DomainError(msg.str());
    }
    if (given) {
        if (!(*given > 0.0) || !std::isfinite(*given))
            throw DomainError("density bound L must be positive and finite");
        if (audit.max_value > *given) {
            std::ostringstream msg;
            msg << "bound L = " << *given << " is below the density maximum (grid max "
                << audit.max_value << ")";
            throw DomainError(msg.str());
        }
        return *given;
    }
    return audit.max_value * (1.0 + kBoundSlack);
}

}  // namespace

Density::Density(std::string name, Fn eval, std::optional<Fn> cumulative, double bound_l,
                 std::vector<double> breakpoints)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      cumulative_(std::move(cumulative)),
      bound_l_(bound_l),
      breakpoints_(std::move(breakpoints)) {
    if (!(bound_l_ > 0.0) || !std::isfinite(bound_l_))
        throw DomainError("density bound L must be positive and finite");
    std::sort(breakpoints_.begin(), breakpoints_.end());
    norm_c_ = cumulative_ ? (*cumulative_)(1.0)
                          : integrate_with_breakpoints(eval_, 0.0, 1.0, breakpoints_);
    if (!(norm_c_ > 0.0) || !std::isfinite(norm_c_))
        throw DomainError("density must have positive normalizing constant");
}

double Density::cdf(double t) const {
    if (!(t >= 0.0) || !(t <= 1.0)) throw DomainError("cdf argument must lie in [0,1]");
    if (cumulative_) return (*cumulative_)(t);
    return integrate_with_breakpoints(eval_, 0.0, t, breakpoints_);
}

double Density::cdf_by_quadrature(double t) const {
    if (!(t >= 0.0) || !(t <= 1.0)) throw DomainError("cdf argument must lie in [0,1]");
    return integrate_with_breakpoints(eval_, 0.0, t, breakpoints_);
}

Density Density::with_bound(double l) const {
    const Fn eval = eval_;
    resolve_bound(eval, l);  // audits psi <= l
    Density d = *this;
    d.bound_l_ = l;
    return d;
}

double default_bound(const std::function<double(double)>& eval) {
    return audit_on_grid(eval).max_value * (1.0 + kBoundSlack);
}

Density make_piecewise_polynomial_density(std::string name, std::vector<PolySegment> segments,
                                          std::optional<double> bound_l) {
    if (segments.empty()) throw DomainError("piecewise density needs at least one segment");
    for (const auto& s : segments) {
        if (s.coefficients.empty()) throw DomainError("segment without coefficients");
        if (!(s.lo < s.hi)) throw DomainError("segment interval must have lo < hi");
    }
    if (segments.front().lo != 0.0 || segments.back().hi != 1.0)
        throw DomainError("segments must cover [0,1]");
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (segments[i].hi != segments[i + 1].lo)
            throw DomainError("segments must be contiguous");
    }

    auto segs = std::make_shared<const std::vector<PolySegment>>(std::move(segments));

    // cumulative integral up to the start of each segment
    std::vector<double> heads(segs->size(), 0.0);
    for (std::size_t i = 1; i < segs->size(); ++i) {
        const auto& p = (*segs)[i - 1];
        heads[i] = heads[i - 1] + polynomial_antiderivative(p.coefficients, p.hi) -
                   polynomial_antiderivative(p.coefficients, p.lo);
    }
    auto head_sums = std::make_shared<const std::vector<double>>(std::move(heads));

    auto segment_index = [segs](double x) {
        std::size_t i = 0;
        while (i + 1 < segs->size() && x >= (*segs)[i].hi) ++i;
        return i;
    };
    auto eval = [segs, segment_index](double x) {
        const auto& p = (*segs)[segment_index(x)];
        return polynomial_eval(p.coefficients, x);
    };
    auto cumulative = [segs, head_sums, segment_index](double t) {
        const std::size_t i = segment_index(t);
        const auto& p = (*segs)[i];
        return (*head_sums)[i] + polynomial_antiderivative(p.coefficients, t) -
               polynomial_antiderivative(p.coefficients, p.lo);
    };

    std::vector<double> breakpoints;
    for (std::size_t i = 0; i + 1 < segs->size(); ++i) breakpoints.push_back((*segs)[i].hi);

    const double l = resolve_bound(eval, bound_l);
    return Density(std::move(name), eval, cumulative, l, std::move(breakpoints));
}

Density make_sine_poly_density(std::string name, double scale, double amplitude, double frequency,
                               std::vector<PowerTerm> terms, std::optional<double> bound_l) {
    if (amplitude != 0.0 && !(frequency > 0.0))
        throw DomainError("sine-poly density needs frequency > 0 when amplitude != 0");
    for (const auto& t : terms) {
        if (!(t.power >= 0.0) || !std::isfinite(t.power) || !std::isfinite(t.coefficient))
            throw DomainError("sine-poly terms need finite coefficients and powers >= 0");
    }
    auto shared_terms = std::make_shared<const std::vector<PowerTerm>>(std::move(terms));

    auto eval = [scale, amplitude, frequency, shared_terms](double x) {
        double v = amplitude == 0.0 ? 0.0 : amplitude * std::sin(frequency * x);
        for (const auto& t : *shared_terms) v += t.coefficient * std::pow(x, t.power);
        return scale * v;
    };
    auto cumulative = [scale, amplitude, frequency, shared_terms](double t) {
        double v = amplitude == 0.0 ? 0.0 : amplitude * (1.0 - std::cos(frequency * t)) / frequency;
        for (const auto& term : *shared_terms)
            v += term.coefficient * std::pow(t, term.power + 1.0) / (term.power + 1.0);
        return scale * v;
    };

    const double l = resolve_bound(eval, bound_l);
    return Density(std::move(name), eval, cumulative, l, {});
}

Density make_builtin(const std::string& name) {
    if (name == "uniform") {
        return make_piecewise_polynomial_density("uniform", {{0.0, 1.0, {1.0}}}, 1.0);
    }
    if (name == "example1") {
        // (3/16) (4 sin(pi x / 2) - x^{5/2} - x^2)
        return make_sine_poly_density("example1", 3.0 / 16.0, 4.0, std::numbers::pi / 2.0,
                                      {{-1.0, 2.5}, {-1.0, 2.0}});
    }
    if (name == "example2") {
        // -x^4/2 - x^2/6 + 107/108 on [0, 1/3), -3x^4/4 - 2x/27 + 1 on [1/3, 1]
        const double third = 1.0 / 3.0;
        return make_piecewise_polynomial_density(
            "example2", {{0.0, third, {107.0 / 108.0, 0.0, -1.0 / 6.0, 0.0, -0.5}},
                         {third, 1.0, {1.0, -2.0 / 27.0, 0.0, 0.0, -0.75}}});
    }
    std::ostringstream msg;
    msg << "unknown density '" << name << "' (valid:";
    for (const auto& n : builtin_density_names()) msg << " " << n;
    msg << ")";
    throw DomainError(msg.str());
}

const std::vector<std::string>& builtin_density_names() {
    static const std::vector<std::string> names = {"example1", "example2", "uniform"};
    return names;
}

CurvatureReport check_curvature(const Density& d, int grid, double tol) {
    if (grid < 100) throw DomainError("curvature audit grid must be >= 100");
    if (!(tol > 0.0)) throw DomainError("curvature tolerance must be positive");
    const double h = 1e-5;
    bool all_below = true;
    bool all_above = true;
    double min_abs_kappa = std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        bool near_break = false;
        for (double b : d.breakpoints()) {
            if (std::abs(x - b) <= h) near_break = true;
        }
        if (near_break) continue;
        const double fp = (d(x + h) - d(x - h)) / (2.0 * h);
        const double fpp = (d(x + h) - 2.0 * d(x) + d(x - h)) / (h * h);
        const double kappa = fpp / std::pow(1.0 + fp * fp, 1.5);
        min_abs_kappa = std::min(min_abs_kappa, std::abs(kappa));
        if (!(fpp < -tol)) all_below = false;
        if (!(fpp > tol)) all_above = false;
    }
    Curvature c = Curvature::mixed_or_vanishing;
    if (all_below) c = Curvature::strictly_concave;
    else if (all_above) c = Curvature::strictly_convex;
    return CurvatureReport{c, min_abs_kappa, grid};
}

const char* curvature_name(Curvature c) {
    switch (c) {
        case Curvature::strictly_concave: return "strictly-concave";
        case Curvature::strictly_convex: return "strictly-convex";
        case Curvature::mixed_or_vanishing: return "mixed/vanishing";
    }
    return "?";
}

}  // namespace qmcar
