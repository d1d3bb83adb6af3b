#include "qmcar/driver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qmcar/errors.hpp"

namespace qmcar {

std::int64_t fibonacci_number(int k) {
    if (k < 1 || k > 87) throw DomainError("fibonacci index must lie in [1, 87]");
    std::int64_t a = 1, b = 1;  // F_1, F_2
    for (int i = 3; i <= k; ++i) {
        const std::int64_t c = a + b;
        a = b;
        b = c;
    }
    return b;
}

CubicBasis root_of_cubic() {
    long double x = -0.75L;
    for (int it = 0; it < 100; ++it) {
        const long double fx = x * x * x + 2.0L * x + 2.0L;
        const long double dfx = 3.0L * x * x + 2.0L;
        const long double step = fx / dfx;
        x -= step;
        if (std::abs(step) <= 4.0L * std::numeric_limits<long double>::epsilon())
            return CubicBasis{x};
    }
    throw std::logic_error("Newton iteration for x^3 + 2x + 2 did not converge");
}

DriverSet fibonacci_lattice(int k) {
    if (k < 3 || k > 87) throw DomainError("fibonacci lattice requires 3 <= k <= 87");
    const std::int64_t fk = fibonacci_number(k);
    const std::uint64_t fkm1 = static_cast<std::uint64_t>(fibonacci_number(k - 1));
    DriverSet t{{}, Family::fibonacci, k, std::nullopt};
    t.points.reserve(static_cast<std::size_t>(fk));
    const double inv = 1.0 / static_cast<double>(fk);
    std::uint64_t r = 0;  // j * F_{k-1} mod F_k, carried exactly
    for (std::int64_t j = 1; j <= fk; ++j) {
        r += fkm1;
        if (r >= static_cast<std::uint64_t>(fk)) r -= static_cast<std::uint64_t>(fk);
        t.points.push_back({static_cast<double>(j) * inv, static_cast<double>(r) * inv});
    }
    return t;
}

namespace {

double fractional_part(long double x) {
    long double f = x - std::floor(x);
    double d = static_cast<double>(f);
    if (d >= 1.0) d = std::nextafter(1.0, 0.0);
    if (d < 0.0) d = 0.0;
    return d;
}

}  // namespace

DriverSet kronecker(std::int64_t m, const CubicBasis& basis) {
    if (m < 1) throw DomainError("kronecker driver requires M >= 1");
    DriverSet t{{}, Family::kronecker, m, std::nullopt};
    t.points.reserve(static_cast<std::size_t>(m));
    const long double a = basis.alpha();
    const long double b = basis.beta();
    for (std::int64_t j = 1; j <= m; ++j) {
        const long double lj = static_cast<long double>(j);
        t.points.push_back({fractional_part(lj * a), fractional_part(lj * b)});
    }
    return t;
}

DriverSet kronecker(std::int64_t m) { return kronecker(m, root_of_cubic()); }

DriverSet regular_grid(std::int64_t m) {
    if (m < 1) throw DomainError("grid driver requires M >= 1");
    std::int64_t n = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
    while (n > 1 && n * n > m) --n;
    while ((n + 1) * (n + 1) <= m) ++n;
    DriverSet t{{}, Family::grid, m, std::nullopt};
    t.points.reserve(static_cast<std::size_t>(n * n));
    const double inv = 1.0 / static_cast<double>(n);
    for (std::int64_t j = 1; j <= n; ++j) {
        for (std::int64_t mm = 1; mm <= n; ++mm) {
            t.points.push_back({static_cast<double>(j) * inv, static_cast<double>(mm) * inv});
        }
    }
    return t;
}

DriverSet random_driver(std::int64_t m, std::uint64_t seed) {
    if (m < 1) throw DomainError("random driver requires M >= 1");
    DriverSet t{{}, Family::random, m, seed};
    t.points.reserve(static_cast<std::size_t>(m));
    std::mt19937_64 gen(seed);
    // top 53 bits -> [0,1); avoids the unspecified std distributions
    auto canonical = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (std::int64_t j = 0; j < m; ++j) {
        const double x1 = canonical();
        const double x2 = canonical();
        t.points.push_back({x1, x2});
    }
    return t;
}

DriverSet make_driver(Family f, std::int64_t parameter, std::optional<std::uint64_t> seed) {
    switch (f) {
        case Family::fibonacci:
            if (parameter < 3 || parameter > 87)
                throw DomainError("fibonacci lattice requires 3 <= k <= 87");
            return fibonacci_lattice(static_cast<int>(parameter));
        case Family::kronecker: return kronecker(parameter);
        case Family::grid: return regular_grid(parameter);
        case Family::random:
            if (!seed) throw DomainError("random driver requires a seed");
            return random_driver(parameter, *seed);
    }
    throw DomainError("unknown driver family");
}

const char* family_name(Family f) {
    switch (f) {
        case Family::fibonacci: return "fibonacci";
        case Family::kronecker: return "kronecker";
        case Family::grid: return "grid";
        case Family::random: return "random";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    if (s == "fibonacci") return Family::fibonacci;
    if (s == "kronecker") return Family::kronecker;
    if (s == "grid") return Family::grid;
    if (s == "random") return Family::random;
    std::ostringstream msg;
    msg << "unknown driver family '" << s << "' (valid: fibonacci kronecker grid random)";
    throw DomainError(msg.str());
}

}  // namespace qmcar
