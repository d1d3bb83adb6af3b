#pragma once

#include <cstdint>

#include "qmcar/driver.hpp"

namespace qmcar {

struct FrequencyVector {
    std::int64_t n1;
    std::int64_t n2;
    std::int64_t sup_norm() const;
};

enum class CriterionMethod { general, fibonacci_fast };

struct CriterionResult {
    double value;  // >= 1/R
    std::int64_t r_used;
    std::int64_t m;
    CriterionMethod method;
};

// |n|^{-3/2} + 1/((1+|n1|)(1+|n2|)) with |n| = max(|n1|, |n2|); n != (0,0).
double frequency_weight(const FrequencyVector& n);

// Modulus of the mean of exp(2 pi i (n1 x1 + n2 x2)) over the point set,
// accumulated over j = 1..M in definitional order. Result in [0, 1 + 1e-12].
double exp_sum(const DriverSet& t, const FrequencyVector& n);

// Driver-quality criterion: 1/R + sum over 0 < |n| < R of weight(n) * exp_sum.
// Frequencies are enumerated row-major (n1 outer ascending, n2 inner) and
// accumulated with compensated summation, so results are bit-reproducible.
// Refuses when (2R)^2 M exceeds `cost_cap` elementary operations.
CriterionResult qr_general(const DriverSet& t, std::int64_t r, double cost_cap = 1e10);

// Exact fast path for the Fibonacci lattice: the exponential sum is 1 when
// F_k divides n1 + n2 F_{k-1} and 0 otherwise, so only the (at most two)
// residue representatives per n2 contribute. Requires R <= F_k, which also
// rules out surviving frequencies with a zero component. Cost O(R).
CriterionResult qr_fibonacci(int k, std::int64_t r);

// F_{ceil(2k/3)}, the cutoff under which the criterion of the Fibonacci
// lattice scales like F_k^{-2/3}.
std::int64_t default_r_for_fibonacci(int k);

const char* criterion_method_name(CriterionMethod m);

}  // namespace qmcar
