#pragma once

#include <cstdint>
#include <utility>

#include "qmcar/ar_sampler.hpp"
#include "qmcar/driver.hpp"

namespace qmcar {

enum class DiscrepancyMethod { exact_1d, exact_2d, grid_oracle };

struct DiscrepancyResult {
    double value;       // in [0,1]
    double argmax_t1;   // a supremum witness (one-sided limits at that t)
    double argmax_t2;   // 1.0 for one-dimensional results
    DiscrepancyMethod method;
    std::int64_t n;     // number of samples / points measured
};

// Exact density-weighted star-discrepancy of a 1-D sample set: with sorted
// samples y_(1) <= ... <= y_(N) and normalized CDF Gbar = G/C,
//   D* = max_j max{ j/N - Gbar(y_(j)), Gbar(y_(j)) - (j-1)/N },
// the exact supremum over anchored half-open boxes for continuous Gbar.
DiscrepancyResult star_discrepancy_1d(const Density& d, const SampleSet& s);

// Local discrepancy at t as (left limit, right limit):
//   left  = #{y < t}/N - Gbar(t),  right = #{y <= t}/N - Gbar(t).
std::pair<double, double> local_discrepancy_1d(const Density& d, const SampleSet& s, double t);

// Exact uniform star-discrepancy of a 2-D point set over boxes [0,t1)x[0,t2).
// Candidate coordinates are the point coordinates and 1; both closure
// conventions are evaluated at every candidate pair. O(M^2) sweep; refuses
// point sets larger than `size_cap`.
DiscrepancyResult star_discrepancy_2d_uniform(const DriverSet& t, std::int64_t size_cap = 10000);

// Signed branch values at (t1, t2): first = t1 t2 - #{x < t1, y < t2}/M,
// second = lim-from-above count/M - t1 t2 (strict comparison on a coordinate
// that equals 1, where the box edge cannot move further).
std::pair<double, double> local_discrepancy_2d(const DriverSet& t, double t1, double t2);

// Grid-scan cross-check for the 1-D value: local discrepancy on {i/grid}
// plus both one-sided evaluations at every sample point. grid >= 1000;
// guaranteed >= exact - (sup psi / C + 1)/grid.
DiscrepancyResult grid_oracle_1d(const Density& d, const SampleSet& s, std::int64_t grid);

const char* discrepancy_method_name(DiscrepancyMethod m);

}  // namespace qmcar
