#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmcar/density.hpp"
#include "qmcar/driver.hpp"

namespace qmcar {

struct SampleSet {
    std::vector<double> samples;  // accepted first coordinates, driver order
    std::int64_t m_proposed = 0;
    std::int64_t n_accepted = 0;
    double l_used = 0.0;
    std::string density_name;
};

// Accept (x1, x2) iff psi(x1) >= L * x2 (boundary ties accept) and project to
// the first coordinate. An empty result is valid output.
SampleSet ar_deterministic(const Density& d, const DriverSet& t);

// Classical rejection sampling with a uniform proposal: accept X when
// u <= psi(X)/L. Identical to ar_deterministic over random_driver(m, seed),
// and implemented through that equivalence.
SampleSet ar_randomized(const Density& d, std::int64_t m, std::uint64_t seed);

// Wraps externally supplied samples (e.g. read from CSV) for the discrepancy
// and integration routines; m_proposed is unknown and set to the count.
SampleSet sample_set_from_values(std::vector<double> ys, const Density& d);

}  // namespace qmcar
