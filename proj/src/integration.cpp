#include "qmcar/integration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmcar/discrepancy.hpp"
#include "qmcar/errors.hpp"
#include "qmcar/quadrature.hpp"

namespace qmcar {

Integrand make_builtin_integrand(const std::string& name) {
    if (name == "one") return {"one", [](double) { return 1.0; }, [](double) { return 0.0; }};
    if (name == "x") return {"x", [](double x) { return x; }, [](double) { return 1.0; }};
    if (name == "x2") return {"x2", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }};
    if (name == "centered_square")
        return {"centered_square", [](double x) { return (x - 0.5) * (x - 0.5); },
                [](double x) { return 2.0 * x - 1.0; }};
    if (name == "sinpi")
        return {"sinpi", [](double x) { return std::sin(std::numbers::pi * x); },
                [](double x) { return std::numbers::pi * std::cos(std::numbers::pi * x); }};
    std::ostringstream msg;
    msg << "unknown integrand '" << name << "' (valid:";
    for (const auto& n : builtin_integrand_names()) msg << " " << n;
    msg << ")";
    throw DomainError(msg.str());
}

const std::vector<std::string>& builtin_integrand_names() {
    static const std::vector<std::string> names = {"one", "x", "x2", "centered_square", "sinpi"};
    return names;
}

double qmc_estimate(const Integrand& f, const SampleSet& s) {
    if (s.n_accepted == 0) throw DomainError("empty sample set");
    double sum = 0.0;
    double comp = 0.0;
    for (double y : s.samples) {
        const double v = f.eval(y);
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(s.n_accepted);
}

double reference_integral(const Integrand& f, const Density& d) {
    double unresolved = 0.0;
    const double raw = integrate_with_breakpoints(
        [&](double x) { return f.eval(x) * d(x); }, 0.0, 1.0, d.breakpoints(), {}, &unresolved);
    if (unresolved > 1e-10) {
        std::ostringstream msg;
        msg << "reference quadrature did not converge; achieved tolerance ~" << unresolved;
        throw DomainError(msg.str());
    }
    return raw / d.norm_c();
}

double hk_variation(const Integrand& f) {
    if (!f.derivative) throw DomainError("variation needs the derivative of the integrand");
    const auto& df = *f.derivative;

    // locate sign changes of f' on a coarse scan, then bisect
    constexpr int kScan = 1000;
    std::vector<double> cuts;
    double prev_x = 0.0;
    double prev_v = df(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double x = static_cast<double>(i) / kScan;
        const double v = df(x);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
            double lo = prev_x, hi = x, flo = prev_v;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = df(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_v = v;
    }
    return integrate_with_breakpoints([&](double x) { return std::abs(df(x)); }, 0.0, 1.0, cuts);
}

IntegrationReport integration_report(const Integrand& f, const Density& d, const SampleSet& s) {
    IntegrationReport rep{};
    rep.n = s.n_accepted;
    rep.estimate = qmc_estimate(f, s);
    rep.reference = reference_integral(f, d);
    rep.abs_error = std::abs(rep.estimate - rep.reference);
    rep.variation = hk_variation(f);
    rep.dstar = star_discrepancy_1d(d, s).value;
    rep.bound = rep.variation * rep.dstar;
    return rep;
}

}  // namespace qmcar
