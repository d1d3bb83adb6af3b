#include "qmcar/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qmcar/ar_sampler.hpp"
#include "qmcar/criterion.hpp"
#include "qmcar/discrepancy.hpp"
#include "qmcar/errors.hpp"
#include "qmcar/integration.hpp"
#include "qmcar/io.hpp"

namespace qmcar {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

unsigned worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("QMCAR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return std::max<unsigned>(1, std::min<unsigned>(hw, static_cast<unsigned>(jobs)));
}

struct Measures {
    double n = 0.0;
    double m = 0.0;
    double accept_rate = 0.0;
    double dstar = 0.0;
    double qr = 0.0;
    double integ_err = 0.0;
};

}  // namespace

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("slope fit needs at least 3 points");
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& [n, v] : points) {
        if (!(n > 0.0) || !(v > 0.0))
            throw DomainError("slope fit needs strictly positive coordinates");
        xs.push_back(std::log(n));
        ys.push_back(std::log(v));
    }
    const double cnt = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= cnt;
    my /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("slope fit needs distinct N values");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        sse += r * r;
    }
    const double stderr_ = std::sqrt(std::max(0.0, sse / (cnt - 2.0)) / sxx);
    return SlopeFit{slope, stderr_, static_cast<std::int64_t>(xs.size())};
}

namespace {

Measures measure_one(const Density& d, const ExperimentConfig& cfg, const DriverSet& driver,
                     const Integrand* f, const double* reference) {
    Measures out;
    const SampleSet s = ar_deterministic(d, driver);
    out.m = static_cast<double>(s.m_proposed);
    out.n = static_cast<double>(s.n_accepted);
    out.accept_rate = out.m > 0.0 ? out.n / out.m : 0.0;
    if (cfg.measure_dstar) out.dstar = star_discrepancy_1d(d, s).value;
    if (cfg.measure_qr) {
        if (driver.family == Family::fibonacci) {
            const int k = static_cast<int>(driver.parameter);
            const std::int64_t r = cfg.r_fixed ? *cfg.r_fixed : default_r_for_fibonacci(k);
            out.qr = (r <= fibonacci_number(k)) ? qr_fibonacci(k, r).value
                                                : qr_general(driver, r).value;
        } else {
            if (!cfg.r_fixed)
                throw DomainError("criterion measure needs an explicit R for this family");
            out.qr = qr_general(driver, *cfg.r_fixed).value;
        }
    }
    if (cfg.measure_integration_error) out.integ_err = std::abs(qmc_estimate(*f, s) - *reference);
    return out;
}

ConvergenceRow compute_row(const Density& d, const ExperimentConfig& cfg, std::int64_t param,
                           const Integrand* f, const double* reference) {
    const auto start = std::chrono::steady_clock::now();
    Measures acc;
    if (cfg.family == Family::random) {
        for (std::uint64_t seed : cfg.seeds) {
            const DriverSet driver = random_driver(param, seed);
            const Measures one = measure_one(d, cfg, driver, f, reference);
            acc.n += one.n;
            acc.m = one.m;
            acc.accept_rate += one.accept_rate;
            acc.dstar += one.dstar;
            acc.qr += one.qr;
            acc.integ_err += one.integ_err;
        }
        const double k = static_cast<double>(cfg.seeds.size());
        acc.n /= k;
        acc.accept_rate /= k;
        acc.dstar /= k;
        acc.qr /= k;
        acc.integ_err /= k;
    } else {
        acc = measure_one(d, cfg, make_driver(cfg.family, param), f, reference);
    }
    ConvergenceRow row{};
    row.family = cfg.family;
    row.parameter = param;
    row.m = static_cast<std::int64_t>(acc.m);
    row.n = std::llround(acc.n);
    row.accept_rate = acc.accept_rate;
    row.dstar = cfg.measure_dstar ? acc.dstar : kNan;
    if (cfg.measure_qr) row.qr = acc.qr;
    if (cfg.measure_integration_error) row.integ_err = acc.integ_err;
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

}  // namespace

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
    if (cfg.parameters.empty()) throw DomainError("experiment parameter range must be nonempty");
    if (cfg.family == Family::random && cfg.seeds.empty())
        throw DomainError("random family needs at least one seed");

    Density d = cfg.density ? *cfg.density : make_builtin(cfg.density_name);
    if (cfg.l_override) d = d.with_bound(*cfg.l_override);

    std::optional<Integrand> f;
    double reference = 0.0;
    if (cfg.measure_integration_error) {
        f = make_builtin_integrand(cfg.integrand);
        reference = reference_integral(*f, d);
    }

    std::vector<ConvergenceRow> rows(cfg.parameters.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.parameters.size()) return;
            try {
                rows[i] = compute_row(d, cfg, cfg.parameters[i], f ? &*f : nullptr,
                                      f ? &reference : nullptr);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    try {
                        std::ostringstream msg;
                        msg << "parameter " << cfg.parameters[i] << ": ";
                        try {
                            throw;
                        } catch (const std::exception& e) {
                            msg << e.what();
                        }
                        failure = std::make_exception_ptr(DomainError(msg.str()));
                    } catch (...) {
                        failure = std::current_exception();
                    }
                }
                return;
            }
        }
    };
    const unsigned workers = worker_count(cfg.parameters.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
        if (a.family != b.family) return a.family < b.family;
        if (a.n != b.n) return a.n < b.n;
        return a.parameter < b.parameter;
    });

    ConvergenceReport rep{};
    rep.rows = std::move(rows);
    rep.slope = kNan;
    rep.slope_stderr = kNan;
    rep.fit_n_min = 0;
    rep.fit_n_max = 0;
    rep.fit_rows = 0;
    if (cfg.measure_dstar) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : rep.rows) {
            if (row.n >= cfg.fit_n_min && std::isfinite(row.dstar) && row.dstar > 0.0 && row.n > 0)
                pts.emplace_back(static_cast<double>(row.n), row.dstar);
        }
        if (pts.size() >= 3) {
            const SlopeFit fit = fit_slope(pts);
            rep.slope = fit.slope;
            rep.slope_stderr = fit.stderr_;
            rep.fit_rows = fit.points_used;
            rep.fit_n_min = static_cast<std::int64_t>(pts.front().first);
            rep.fit_n_max = static_cast<std::int64_t>(pts.back().first);
        }
    }
    return rep;
}

namespace {

std::vector<std::int64_t> figure_params(Family f) {
    if (f == Family::fibonacci) {
        std::vector<std::int64_t> ks;
        for (std::int64_t k = 10; k <= 25; ++k) ks.push_back(k);
        return ks;
    }
    std::vector<std::int64_t> ms;
    for (int p = 8; p <= 20; ++p) ms.push_back(std::int64_t{1} << p);
    return ms;
}

}  // namespace

FigureSummary reproduce_figures(const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

    const Family families[] = {Family::fibonacci, Family::kronecker, Family::grid, Family::random};
    const std::pair<const char*, const char*> figures[] = {{"example1", "figure1.csv"},
                                                           {"example2", "figure2.csv"}};
    FigureSummary summary;
    for (const auto& [density_name, csv_name] : figures) {
        FigureSeries series;
        series.density = density_name;
        for (Family fam : families) {
            ExperimentConfig cfg;
            cfg.density_name = density_name;
            cfg.family = fam;
            cfg.parameters = figure_params(fam);
            cfg.measure_dstar = true;
            cfg.measure_accept_rate = true;
            const ConvergenceReport rep = run_convergence(cfg);
            series.slopes.push_back(FamilySlope{fam, rep.slope, rep.slope_stderr, rep.fit_rows,
                                                rep.fit_n_min, rep.fit_n_max});
            series.rows.insert(series.rows.end(), rep.rows.begin(), rep.rows.end());
        }
        std::sort(series.rows.begin(), series.rows.end(),
                  [](const ConvergenceRow& a, const ConvergenceRow& b) {
                      if (a.family != b.family) return a.family < b.family;
                      if (a.n != b.n) return a.n < b.n;
                      return a.parameter < b.parameter;
                  });

        // ordering stat: how often the fibonacci curve lies below the kronecker
        // one. The two series sample different N, so a fibonacci row is compared
        // against the kronecker series interpolated log-log at that row's N;
        // rows outside the kronecker N range have no comparable size and are
        // skipped.
        std::vector<const ConvergenceRow*> fib, kron;
        for (const auto& row : series.rows) {
            if (row.n <= 0) continue;
            if (row.family == Family::fibonacci) fib.push_back(&row);
            if (row.family == Family::kronecker) kron.push_back(&row);
        }
        series.ordering_compared = 0;
        series.ordering_fib_le_kron = 0;
        for (const ConvergenceRow* fr : fib) {
            if (kron.size() < 2) continue;
            if (fr->n < kron.front()->n || fr->n > kron.back()->n) continue;
            std::size_t hi = 1;
            while (hi + 1 < kron.size() && kron[hi]->n < fr->n) ++hi;
            const ConvergenceRow* a = kron[hi - 1];
            const ConvergenceRow* b = kron[hi];
            const double t = (std::log(static_cast<double>(fr->n)) -
                              std::log(static_cast<double>(a->n))) /
                             (std::log(static_cast<double>(b->n)) -
                              std::log(static_cast<double>(a->n)));
            const double kron_at_n =
                std::exp(std::log(a->dstar) + t * (std::log(b->dstar) - std::log(a->dstar)));
            ++series.ordering_compared;
            if (fr->dstar <= kron_at_n) ++series.ordering_fib_le_kron;
        }

        const fs::path csv_path = fs::path(out_dir) / csv_name;
        std::ofstream os(csv_path);
        if (!os) throw IoError("cannot write " + csv_path.string());
        os << "family,param,M,N,dstar\n";
        for (const auto& row : series.rows) {
            os << family_name(row.family) << ',' << row.parameter << ',' << row.m << ',' << row.n
               << ',' << format_real(row.dstar) << '\n';
        }
        if (!os.good()) throw IoError("failed while writing " + csv_path.string());
        summary.series.push_back(std::move(series));
    }

    const fs::path summary_path = fs::path(out_dir) / "summary.json";
    std::ofstream os(summary_path);
    if (!os) throw IoError("cannot write " + summary_path.string());
    os << figure_summary_json(summary).dump(2) << '\n';
    if (!os.good()) throw IoError("failed while writing " + summary_path.string());
    return summary;
}

}  // namespace qmcar
