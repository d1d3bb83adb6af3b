#include "qmcar/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "qmcar/errors.hpp"

namespace qmcar {

namespace {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

std::int64_t FrequencyVector::sup_norm() const { return std::max(std::abs(n1), std::abs(n2)); }

double frequency_weight(const FrequencyVector& n) {
    if (n.n1 == 0 && n.n2 == 0) throw DomainError("frequency weight undefined at (0,0)");
    const double sup = static_cast<double>(n.sup_norm());
    const double a1 = static_cast<double>(std::abs(n.n1));
    const double a2 = static_cast<double>(std::abs(n.n2));
    return 1.0 / (sup * std::sqrt(sup)) + 1.0 / ((1.0 + a1) * (1.0 + a2));
}

double exp_sum(const DriverSet& t, const FrequencyVector& n) {
    const std::int64_t m = static_cast<std::int64_t>(t.points.size());
    if (m == 0) throw DomainError("empty point set");
    const double f1 = static_cast<double>(n.n1);
    const double f2 = static_cast<double>(n.n2);
    double re = 0.0;
    double im = 0.0;
    for (const Point2& p : t.points) {
        const double phase = 2.0 * std::numbers::pi * (f1 * p.x1 + f2 * p.x2);
        re += std::cos(phase);
        im += std::sin(phase);
    }
    return std::hypot(re, im) / static_cast<double>(m);
}

CriterionResult qr_general(const DriverSet& t, std::int64_t r, double cost_cap) {
    if (r < 2) throw DomainError("criterion cutoff R must be >= 2");
    const std::int64_t m = static_cast<std::int64_t>(t.points.size());
    if (m == 0) throw DomainError("empty point set");
    const double cost = 4.0 * static_cast<double>(r) * static_cast<double>(r) *
                        static_cast<double>(m);
    if (cost > cost_cap) {
        std::ostringstream msg;
        msg << "criterion cost (2R)^2 M = " << cost << " exceeds the cap " << cost_cap
            << "; use the fibonacci fast path, a smaller R, or raise the cap";
        throw DomainError(msg.str());
    }
    CompensatedSum acc;
    for (std::int64_t n1 = -(r - 1); n1 <= r - 1; ++n1) {
        for (std::int64_t n2 = -(r - 1); n2 <= r - 1; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            const FrequencyVector n{n1, n2};
            acc.add(frequency_weight(n) * exp_sum(t, n));
        }
    }
    return CriterionResult{1.0 / static_cast<double>(r) + acc.value(), r, m,
                           CriterionMethod::general};
}

CriterionResult qr_fibonacci(int k, std::int64_t r) {
    const std::int64_t fk = fibonacci_number(k);  // validates k
    if (k < 3) throw DomainError("fibonacci fast path requires k >= 3");
    if (r < 2) throw DomainError("criterion cutoff R must be >= 2");
    if (r > fk) throw DomainError("fibonacci fast path requires R <= F_k");
    const std::int64_t fkm1 = fibonacci_number(k - 1);

    CompensatedSum acc;
    for (std::int64_t n2 = -(r - 1); n2 <= r - 1; ++n2) {
        if (n2 == 0) continue;
        // n1 must satisfy n1 + n2 F_{k-1} = 0 (mod F_k); with |n1| < R <= F_k at
        // most the two residue representatives straddling zero can qualify.
        std::int64_t residue = n2 % fk;
        if (residue < 0) residue += fk;
        const std::int64_t s = static_cast<std::int64_t>(
            (static_cast<__int128>(residue) * fkm1) % fk);
        const std::int64_t candidates[2] = {-s, fk - s};
        for (std::int64_t n1 : candidates) {
            if (n1 == 0) continue;  // unreachable for n2 != 0 since gcd(F_{k-1}, F_k) = 1
            if (std::abs(n1) <= r - 1) acc.add(frequency_weight({n1, n2}));
        }
    }
    return CriterionResult{1.0 / static_cast<double>(r) + acc.value(), r, fk,
                           CriterionMethod::fibonacci_fast};
}

std::int64_t default_r_for_fibonacci(int k) {
    if (k < 3) throw DomainError("fibonacci criterion cutoff requires k >= 3");
    const int idx = (2 * k + 2) / 3;  // ceil(2k/3)
    return fibonacci_number(idx);
}

const char* criterion_method_name(CriterionMethod m) {
    switch (m) {
        case CriterionMethod::general: return "general";
        case CriterionMethod::fibonacci_fast: return "fibonacci-fast";
    }
    return "?";
}

}  // namespace qmcar
