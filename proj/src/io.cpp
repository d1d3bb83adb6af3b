#include "qmcar/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "qmcar/errors.hpp"

namespace qmcar {

std::string format_real(double x, bool hexfloat) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), hexfloat ? "%a" : "%.17g", x);
    return buf;
}

void write_driver_csv(std::ostream& os, const DriverSet& t, bool hexfloat) {
    os << "j,x1,x2\n";
    std::int64_t j = 1;
    for (const Point2& p : t.points) {
        os << j++ << ',' << format_real(p.x1, hexfloat) << ',' << format_real(p.x2, hexfloat)
           << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_real(const std::string& s, double& out) {
    const char* b = s.c_str();
    char* e = nullptr;
    out = std::strtod(b, &e);
    while (e && *e == ' ') ++e;
    return e != b && e && *e == '\0';
}

}  // namespace

std::vector<Point2> read_points_csv(std::istream& is) {
    std::vector<Point2> pts;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        double x1 = 0.0, x2 = 0.0;
        bool ok = false;
        if (fields.size() == 3) {
            double j = 0.0;
            ok = parse_real(fields[0], j) && parse_real(fields[1], x1) && parse_real(fields[2], x2);
        } else if (fields.size() == 2) {
            ok = parse_real(fields[0], x1) && parse_real(fields[1], x2);
        }
        if (!ok) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw IoError("malformed point row: " + line);
        }
        first = false;
        pts.push_back({x1, x2});
    }
    return pts;
}

void write_samples_csv(std::ostream& os, const SampleSet& s, bool hexfloat) {
    os << "y\n";
    for (double y : s.samples) os << format_real(y, hexfloat) << '\n';
}

std::vector<double> read_samples_csv(std::istream& is) {
    std::vector<double> ys;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        double y = 0.0;
        if (!parse_real(split_csv_line(line)[0], y)) {
            if (first) {
                first = false;
                continue;
            }
            throw IoError("malformed sample row: " + line);
        }
        first = false;
        ys.push_back(y);
    }
    return ys;
}

Density density_from_json(const nlohmann::json& spec) {
    if (spec.is_string()) return make_builtin(spec.get<std::string>());
    if (!spec.is_object()) throw DomainError("density spec must be a name or an object");
    std::optional<double> bound_l;
    if (spec.contains("L")) bound_l = spec.at("L").get<double>();

    if (spec.contains("builtin")) {
        Density d = make_builtin(spec.at("builtin").get<std::string>());
        return bound_l ? d.with_bound(*bound_l) : d;
    }

    const std::string form = spec.value("form", "");
    const std::string name = spec.value("name", form);
    if (form == "piecewise-polynomial") {
        std::vector<PolySegment> segments;
        for (const auto& piece : spec.at("pieces")) {
            PolySegment seg;
            const auto& iv = piece.at("interval");
            seg.lo = iv.at(0).get<double>();
            seg.hi = iv.at(1).get<double>();
            seg.coefficients = piece.at("coefficients").get<std::vector<double>>();
            segments.push_back(std::move(seg));
        }
        return make_piecewise_polynomial_density(name, std::move(segments), bound_l);
    }
    if (form == "sine-poly") {
        std::vector<PowerTerm> terms;
        if (spec.contains("terms")) {
            for (const auto& t : spec.at("terms")) {
                terms.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
            }
        }
        return make_sine_poly_density(name, spec.value("scale", 1.0),
                                      spec.value("amplitude", 0.0), spec.value("frequency", 0.0),
                                      std::move(terms), bound_l);
    }
    throw DomainError("density spec needs \"builtin\" or \"form\" of piecewise-polynomial / "
                      "sine-poly");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.contains("density")) throw DomainError("experiment config needs \"density\"");
    if (j.at("density").is_string()) {
        cfg.density_name = j.at("density").get<std::string>();
        make_builtin(cfg.density_name);  // validate early
    } else {
        cfg.density = density_from_json(j.at("density"));
        cfg.density_name = cfg.density->name();
    }
    cfg.family = family_from_name(j.value("family", "fibonacci"));

    if (j.contains("k_range")) {
        const auto lo = j.at("k_range").at(0).get<std::int64_t>();
        const auto hi = j.at("k_range").at(1).get<std::int64_t>();
        for (std::int64_t k = lo; k <= hi; ++k) cfg.parameters.push_back(k);
    } else if (j.contains("m_list")) {
        cfg.parameters = j.at("m_list").get<std::vector<std::int64_t>>();
    } else if (j.contains("m_pow2_range")) {
        const auto lo = j.at("m_pow2_range").at(0).get<int>();
        const auto hi = j.at("m_pow2_range").at(1).get<int>();
        for (int p = lo; p <= hi; ++p) cfg.parameters.push_back(std::int64_t{1} << p);
    } else {
        throw DomainError("experiment config needs k_range, m_list, or m_pow2_range");
    }

    if (j.contains("L")) cfg.l_override = j.at("L").get<double>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("measures")) {
        cfg.measure_dstar = false;
        cfg.measure_accept_rate = false;
        cfg.measure_qr = false;
        cfg.measure_integration_error = false;
        for (const auto& m : j.at("measures")) {
            const std::string name = m.get<std::string>();
            if (name == "dstar") cfg.measure_dstar = true;
            else if (name == "accept_rate") cfg.measure_accept_rate = true;
            else if (name == "qr") cfg.measure_qr = true;
            else if (name == "integration_error") cfg.measure_integration_error = true;
            else throw DomainError("unknown measure '" + name + "'");
        }
    }
    if (j.contains("R")) {
        if (j.at("R").is_string()) {
            if (j.at("R").get<std::string>() != "auto")
                throw DomainError("R must be an integer or \"auto\"");
        } else {
            cfg.r_fixed = j.at("R").get<std::int64_t>();
        }
    }
    if (j.contains("integrand")) cfg.integrand = j.at("integrand").get<std::string>();
    if (j.contains("n_min_fit")) cfg.fit_n_min = j.at("n_min_fit").get<std::int64_t>();
    return cfg;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep,
                           const ExperimentConfig& cfg) {
    os << "family,param,M,N";
    if (cfg.measure_accept_rate) os << ",accept_rate";
    if (cfg.measure_dstar) os << ",dstar";
    if (cfg.measure_qr) os << ",qr";
    if (cfg.measure_integration_error) os << ",integ_err";
    os << '\n';
    for (const auto& row : rep.rows) {
        os << family_name(row.family) << ',' << row.parameter << ',' << row.m << ',' << row.n;
        if (cfg.measure_accept_rate) os << ',' << format_real(row.accept_rate);
        if (cfg.measure_dstar) os << ',' << format_real(row.dstar);
        if (cfg.measure_qr) os << ',' << format_real(row.qr.value_or(0.0));
        if (cfg.measure_integration_error) os << ',' << format_real(row.integ_err.value_or(0.0));
        os << '\n';
    }
}

namespace {

nlohmann::json slope_json(double slope, double stderr_, std::int64_t rows, std::int64_t n_min,
                          std::int64_t n_max) {
    nlohmann::json j;
    if (std::isfinite(slope)) {
        j["slope"] = slope;
        j["stderr"] = stderr_;
    } else {
        j["slope"] = nullptr;
        j["stderr"] = nullptr;
    }
    j["rows_used"] = rows;
    j["n_min"] = n_min;
    j["n_max"] = n_max;
    return j;
}

}  // namespace

nlohmann::json convergence_report_json(const ConvergenceReport& rep) {
    nlohmann::json j;
    j["rows"] = static_cast<std::int64_t>(rep.rows.size());
    j["fit"] = slope_json(rep.slope, rep.slope_stderr, rep.fit_rows, rep.fit_n_min, rep.fit_n_max);
    return j;
}

nlohmann::json figure_summary_json(const FigureSummary& summary) {
    nlohmann::json j;
    for (const auto& series : summary.series) {
        nlohmann::json s;
        for (const auto& fs : series.slopes) {
            s["slopes"][family_name(fs.family)] =
                slope_json(fs.slope, fs.stderr_, fs.rows_used, fs.n_min, fs.n_max);
        }
        s["ordering"]["compared"] = series.ordering_compared;
        s["ordering"]["fibonacci_le_kronecker"] = series.ordering_fib_le_kron;
        s["ordering"]["fraction"] =
            series.ordering_compared > 0
                ? static_cast<double>(series.ordering_fib_le_kron) /
                      static_cast<double>(series.ordering_compared)
                : 0.0;
        j[series.density] = std::move(s);
    }
    return j;
}

}  // namespace qmcar
