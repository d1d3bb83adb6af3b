#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmcar/ar_sampler.hpp"
#include "qmcar/density.hpp"

namespace qmcar {

struct Integrand {
    std::string name;
    std::function<double(double)> eval;
    std::optional<std::function<double(double)>> derivative;
};

struct IntegrationReport {
    double estimate;   // (1/N) sum f(y_j)
    double reference;  // (1/C) int f psi
    double abs_error;
    double variation;  // total variation int |f'|
    double dstar;      // weighted star-discrepancy of the samples
    double bound;      // variation * dstar
    std::int64_t n;
};

// Registry: "one", "x", "x2", "centered_square" ((x-0.5)^2), "sinpi" (sin(pi x)).
Integrand make_builtin_integrand(const std::string& name);
const std::vector<std::string>& builtin_integrand_names();

// Equal-weight average of f over the accepted samples. N >= 1.
double qmc_estimate(const Integrand& f, const SampleSet& s);

// (1/C) int_0^1 f psi by adaptive quadrature to 1e-12, split at the density's
// breakpoints. Throws with the achieved tolerance if quadrature cannot converge.
double reference_integral(const Integrand& f, const Density& d);

// Total variation int_0^1 |f'|, splitting at sign changes of f' located by a
// 1000-point scan plus bisection. Requires the derivative.
double hk_variation(const Integrand& f);

// Bundles estimate, reference, variation and the discrepancy-based error bound.
IntegrationReport integration_report(const Integrand& f, const Density& d, const SampleSet& s);

}  // namespace qmcar
