#include "qmcar/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace qmcar {

namespace {

double simpson_rule(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double refine(const std::function<double(double)>& f, double a, double m, double b, double fa,
              double fm, double fb, double whole, double tol, int depth, double& unresolved) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(fa, flm, fm, m - a);
    const double right = simpson_rule(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
        if (std::abs(delta) > 15.0 * tol) unresolved += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return refine(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, unresolved) +
           refine(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, unresolved);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opt, double* unresolved) {
    if (unresolved) *unresolved = 0.0;
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson_rule(fa, fm, fb, b - a);
    double bad = 0.0;
    const double result = refine(f, a, m, b, fa, fm, fb, whole, opt.abs_tol, opt.max_depth, bad);
    if (unresolved) *unresolved = bad;
    return result;
}

double integrate_with_breakpoints(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breakpoints,
                                  const QuadratureOptions& opt, double* unresolved) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    QuadratureOptions piece_opt = opt;
    piece_opt.abs_tol = opt.abs_tol / static_cast<double>(cuts.size() - 1);
    double total = 0.0;
    double bad_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double bad = 0.0;
        total += adaptive_simpson(f, cuts[i], cuts[i + 1], piece_opt, &bad);
        bad_total += bad;
    }
    if (unresolved) *unresolved = bad_total;
    return total;
}

}  // namespace qmcar
