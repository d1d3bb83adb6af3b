#include "qmcar/ar_sampler.hpp"

namespace qmcar {

SampleSet ar_deterministic(const Density& d, const DriverSet& t) {
    SampleSet s;
    s.m_proposed = static_cast<std::int64_t>(t.points.size());
    s.l_used = d.bound_l();
    s.density_name = d.name();
    s.samples.reserve(t.points.size());
    for (const Point2& p : t.points) {
        if (d(p.x1) >= s.l_used * p.x2) s.samples.push_back(p.x1);
    }
    s.n_accepted = static_cast<std::int64_t>(s.samples.size());
    return s;
}

SampleSet ar_randomized(const Density& d, std::int64_t m, std::uint64_t seed) {
    return ar_deterministic(d, random_driver(m, seed));
}

SampleSet sample_set_from_values(std::vector<double> ys, const Density& d) {
    SampleSet s;
    s.samples = std::move(ys);
    s.n_accepted = static_cast<std::int64_t>(s.samples.size());
    s.m_proposed = s.n_accepted;
    s.l_used = d.bound_l();
    s.density_name = d.name();
    return s;
}

}  // namespace qmcar
