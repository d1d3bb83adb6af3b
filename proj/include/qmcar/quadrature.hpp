#pragma once

#include <functional>
#include <vector>

namespace qmcar {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    int max_depth = 60;
};

// Adaptive Simpson with Richardson extrapolation. If `unresolved` is given it
// receives the summed error estimates of panels that hit the depth cap
// (0 when fully converged).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opt = {}, double* unresolved = nullptr);

// Integrates piece by piece so the rule never straddles a breakpoint. Only
// breakpoints strictly inside (a, b) are used; they may be unsorted.
double integrate_with_breakpoints(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breakpoints,
                                  const QuadratureOptions& opt = {}, double* unresolved = nullptr);

}  // namespace qmcar
