#include "qmcar/discrepancy.hpp"

#include <algorithm>
#include <cmath>

#include "qmcar/errors.hpp"

namespace qmcar {

DiscrepancyResult star_discrepancy_1d(const Density& d, const SampleSet& s) {
    const std::int64_t n = s.n_accepted;
    if (n == 0) throw DomainError("empty sample set");
    std::vector<double> ys = s.samples;
    std::sort(ys.begin(), ys.end());
    const double c = d.norm_c();
    const double dn = static_cast<double>(n);

    double best = -1.0;
    double arg = ys.front();
    for (std::int64_t j = 1; j <= n; ++j) {
        const double y = ys[static_cast<std::size_t>(j - 1)];
        const double gbar = d.cdf(y) / c;
        const double over = static_cast<double>(j) / dn - gbar;
        const double under = gbar - static_cast<double>(j - 1) / dn;
        if (over > best) {
            best = over;
            arg = y;
        }
        if (under > best) {
            best = under;
            arg = y;
        }
    }
    best = std::clamp(best, 0.0, 1.0);
    return DiscrepancyResult{best, arg, 1.0, DiscrepancyMethod::exact_1d, n};
}

std::pair<double, double> local_discrepancy_1d(const Density& d, const SampleSet& s, double t) {
    const std::int64_t n = s.n_accepted;
    if (n == 0) throw DomainError("empty sample set");
    std::vector<double> ys = s.samples;
    std::sort(ys.begin(), ys.end());
    const double gbar = d.cdf(t) / d.norm_c();
    const double below = static_cast<double>(std::lower_bound(ys.begin(), ys.end(), t) - ys.begin());
    const double below_eq =
        static_cast<double>(std::upper_bound(ys.begin(), ys.end(), t) - ys.begin());
    const double dn = static_cast<double>(n);
    return {below / dn - gbar, below_eq / dn - gbar};
}

namespace {

void insert_sorted(std::vector<double>& v, double x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

}  // namespace

DiscrepancyResult star_discrepancy_2d_uniform(const DriverSet& t, std::int64_t size_cap) {
    const auto& pts = t.points;
    const std::int64_t m = static_cast<std::int64_t>(pts.size());
    if (m == 0) throw DomainError("empty point set");
    if (m > size_cap)
        throw DomainError("point set exceeds the exact-sweep cap; use a grid oracle or raise "
                          "the cap");

    // Candidate box edges: the coordinates themselves plus 1. The supremum over
    // anchored boxes is attained at such a pair, either exactly (volume-heavy
    // branch) or as a one-sided limit (count-heavy branch).
    std::vector<double> xc, yc;
    xc.reserve(pts.size() + 1);
    yc.reserve(pts.size() + 1);
    for (const Point2& p : pts) {
        xc.push_back(p.x1);
        yc.push_back(p.x2);
    }
    xc.push_back(1.0);
    yc.push_back(1.0);
    std::sort(xc.begin(), xc.end());
    xc.erase(std::unique(xc.begin(), xc.end()), xc.end());
    std::sort(yc.begin(), yc.end());
    yc.erase(std::unique(yc.begin(), yc.end()), yc.end());

    std::vector<Point2> byx = pts;
    std::sort(byx.begin(), byx.end(), [](const Point2& a, const Point2& b) { return a.x1 < b.x1; });

    std::vector<double> y_strict;  // x < a
    std::vector<double> y_weak;    // x <= a
    y_strict.reserve(pts.size());
    y_weak.reserve(pts.size());
    std::size_t next_strict = 0;
    std::size_t next_weak = 0;

    const double invm = 1.0 / static_cast<double>(m);
    double best = -1.0;
    double bt1 = 1.0;
    double bt2 = 1.0;

    for (double a : xc) {
        while (next_strict < byx.size() && byx[next_strict].x1 < a)
            insert_sorted(y_strict, byx[next_strict++].x2);
        while (next_weak < byx.size() && byx[next_weak].x1 <= a)
            insert_sorted(y_weak, byx[next_weak++].x2);
        // Count-heavy boxes can absorb points sitting on the edge only while the
        // edge can still move; at a = 1 it cannot.
        const std::vector<double>& relaxed = (a < 1.0) ? y_weak : y_strict;

        std::size_t p_strict = 0;
        std::size_t p_relaxed = 0;
        for (double b : yc) {
            while (p_strict < y_strict.size() && y_strict[p_strict] < b) ++p_strict;
            const double volume = a * b;
            const double d1 = volume - static_cast<double>(p_strict) * invm;
            std::size_t count2;
            if (b < 1.0) {
                while (p_relaxed < relaxed.size() && relaxed[p_relaxed] <= b) ++p_relaxed;
                count2 = p_relaxed;
            } else {
                count2 = static_cast<std::size_t>(
                    std::lower_bound(relaxed.begin(), relaxed.end(), 1.0) - relaxed.begin());
            }
            const double d2 = static_cast<double>(count2) * invm - volume;
            if (d1 > best) {
                best = d1;
                bt1 = a;
                bt2 = b;
            }
            if (d2 > best) {
                best = d2;
                bt1 = a;
                bt2 = b;
            }
        }
    }
    best = std::clamp(best, 0.0, 1.0);
    return DiscrepancyResult{best, bt1, bt2, DiscrepancyMethod::exact_2d, m};
}

std::pair<double, double> local_discrepancy_2d(const DriverSet& t, double t1, double t2) {
    const auto& pts = t.points;
    const std::int64_t m = static_cast<std::int64_t>(pts.size());
    if (m == 0) throw DomainError("empty point set");
    std::int64_t strict = 0;
    std::int64_t relaxed = 0;
    for (const Point2& p : pts) {
        if (p.x1 < t1 && p.x2 < t2) ++strict;
        const bool cx = (t1 < 1.0) ? (p.x1 <= t1) : (p.x1 < t1);
        const bool cy = (t2 < 1.0) ? (p.x2 <= t2) : (p.x2 < t2);
        if (cx && cy) ++relaxed;
    }
    const double invm = 1.0 / static_cast<double>(m);
    const double volume = t1 * t2;
    return {volume - static_cast<double>(strict) * invm,
            static_cast<double>(relaxed) * invm - volume};
}

DiscrepancyResult grid_oracle_1d(const Density& d, const SampleSet& s, std::int64_t grid) {
    if (grid < 1000) throw DomainError("oracle grid must be >= 1000");
    const std::int64_t n = s.n_accepted;
    if (n == 0) throw DomainError("empty sample set");
    std::vector<double> ys = s.samples;
    std::sort(ys.begin(), ys.end());
    const double c = d.norm_c();
    const double dn = static_cast<double>(n);

    double best = -1.0;
    double arg = 0.0;
    auto consider = [&](double t, double count) {
        const double delta = std::abs(count / dn - d.cdf(t) / c);
        if (delta > best) {
            best = delta;
            arg = t;
        }
    };
    for (std::int64_t i = 0; i <= grid; ++i) {
        const double tgrid = static_cast<double>(i) / static_cast<double>(grid);
        const double below =
            static_cast<double>(std::lower_bound(ys.begin(), ys.end(), tgrid) - ys.begin());
        consider(tgrid, below);
    }
    // one-sided limits at the sample points themselves
    for (double y : ys) {
        const double below =
            static_cast<double>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
        const double below_eq =
            static_cast<double>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
        consider(y, below);
        consider(y, below_eq);
    }
    best = std::clamp(best, 0.0, 1.0);
    return DiscrepancyResult{best, arg, 1.0, DiscrepancyMethod::grid_oracle, n};
}

const char* discrepancy_method_name(DiscrepancyMethod m) {
    switch (m) {
        case DiscrepancyMethod::exact_1d: return "exact-1d";
        case DiscrepancyMethod::exact_2d: return "exact-2d";
        case DiscrepancyMethod::grid_oracle: return "grid-oracle";
    }
    return "?";
}

}  // namespace qmcar
