#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmcar {

struct Point2 {
    double x1;  // in [0,1]
    double x2;  // in [0,1); the grid family may reach 1
};

enum class Family { fibonacci, kronecker, grid, random };

struct DriverSet {
    std::vector<Point2> points;
    Family family;
    std::int64_t parameter;             // k for fibonacci, requested M otherwise
    std::optional<std::uint64_t> seed;  // random family only
};

// F_1 = F_2 = 1. Valid for 1 <= k <= 87 (stays well inside int64).
std::int64_t fibonacci_number(int k);

// Basis 1, xi, xi^2 of the degree-3 field Q(xi), xi the real root of x^3 + 2x + 2.
struct CubicBasis {
    long double xi;
    long double alpha() const { return xi; }
    long double beta() const { return xi * xi; }
};

// Newton iteration from -0.75; the result satisfies |xi^3 + 2 xi + 2| <= 1e-15.
CubicBasis root_of_cubic();

// The F_k points (j/F_k, {j F_{k-1} / F_k}), j = 1..F_k. The second coordinate
// is reduced in integer arithmetic, never by floating multiply-then-frac, so
// coordinates are exact rationals-to-float for every admissible k. 3 <= k <= 87.
DriverSet fibonacci_lattice(int k);

// ({j alpha}, {j beta}) for j = 1..M with {x} = x - floor(x) in [0,1), correct
// for negative arguments. Products are formed in long double.
DriverSet kronecker(std::int64_t m, const CubicBasis& basis);
DriverSet kronecker(std::int64_t m);

// All pairs (j/n, m/n), j,m = 1..n with n = floor(sqrt(M)); keeps the x2 = 1 row.
DriverSet regular_grid(std::int64_t m);

// M i.i.d.-uniform pairs from mt19937_64; bit-reproducible for a given seed.
DriverSet random_driver(std::int64_t m, std::uint64_t seed);

// Dispatch on family; `seed` is required for the random family.
DriverSet make_driver(Family f, std::int64_t parameter, std::optional<std::uint64_t> seed = {});

const char* family_name(Family f);
Family family_from_name(const std::string& s);

}  // namespace qmcar
