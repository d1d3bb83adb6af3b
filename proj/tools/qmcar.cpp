#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmcar/ar_sampler.hpp"
#include "qmcar/criterion.hpp"
#include "qmcar/density.hpp"
#include "qmcar/discrepancy.hpp"
#include "qmcar/driver.hpp"
#include "qmcar/errors.hpp"
#include "qmcar/experiments.hpp"
#include "qmcar/integration.hpp"
#include "qmcar/io.hpp"

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw qmcar::IoError("cannot open " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw qmcar::IoError("cannot parse " + path + ": " + e.what());
    }
}

qmcar::Density resolve_density(const std::string& name, const std::string& json_path,
                               std::optional<double> l_override) {
    if (name.empty() && json_path.empty())
        throw qmcar::DomainError("a density is required (--density or --density-json)");
    qmcar::Density d = json_path.empty() ? qmcar::make_builtin(name)
                                         : qmcar::density_from_json(load_json_file(json_path));
    if (l_override) d = d.with_bound(*l_override);
    return d;
}

struct DriverFlags {
    std::string family;
    int k = -1;
    std::int64_t m = -1;
    std::uint64_t seed = 1;
};

void add_driver_flags(CLI::App* cmd, DriverFlags& f) {
    cmd->add_option("--family", f.family, "fibonacci | kronecker | grid | random")->required();
    cmd->add_option("--k", f.k, "fibonacci index (3..87)");
    cmd->add_option("--m", f.m, "point count parameter M");
    cmd->add_option("--seed", f.seed, "seed for the random family (default 1)");
}

qmcar::DriverSet driver_from_flags(const DriverFlags& f) {
    const qmcar::Family fam = qmcar::family_from_name(f.family);
    if (fam == qmcar::Family::fibonacci) {
        if (f.k < 0) throw qmcar::DomainError("--k is required for the fibonacci family");
        return qmcar::fibonacci_lattice(f.k);
    }
    if (f.m < 0) throw qmcar::DomainError("--m is required for this family");
    return qmcar::make_driver(fam, f.m, f.seed);
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw qmcar::IoError("cannot write " + path);
    fn(os);
    if (!os.good()) throw qmcar::IoError("failed while writing " + path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw qmcar::IoError("cannot open " + path);
    return is;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance-rejection sampling with low-discrepancy driver sequences"};
    app.require_subcommand(1);

    // driver
    auto* drv = app.add_subcommand("driver", "emit a driver point set as CSV (j,x1,x2)");
    DriverFlags drv_flags;
    add_driver_flags(drv, drv_flags);
    bool drv_hex = false;
    std::string drv_out;
    drv->add_flag("--hexfloat", drv_hex, "serialize reals as hex floats");
    drv->add_option("--out", drv_out, "output file (default stdout)");
    drv->callback([&] {
        const qmcar::DriverSet t = driver_from_flags(drv_flags);
        with_output(drv_out, [&](std::ostream& os) { qmcar::write_driver_csv(os, t, drv_hex); });
    });

    // sample
    auto* smp = app.add_subcommand("sample", "run the sampler; emit accepted values as CSV");
    DriverFlags smp_flags;
    add_driver_flags(smp, smp_flags);
    std::string smp_density, smp_density_json, smp_out, smp_meta;
    double smp_l = 0.0;
    bool smp_hex = false;
    smp->add_option("--density", smp_density, "built-in density name");
    smp->add_option("--density-json", smp_density_json, "density config file");
    smp->add_option("--L", smp_l, "override the density bound L");
    smp->add_flag("--hexfloat", smp_hex, "serialize reals as hex floats");
    smp->add_option("--out", smp_out, "samples CSV (default stdout)");
    smp->add_option("--meta", smp_meta, "JSON sidecar path (default <out>.json when --out given)");
    smp->callback([&] {
        const qmcar::Density d = resolve_density(
            smp_density, smp_density_json,
            smp->count("--L") ? std::optional<double>(smp_l) : std::nullopt);
        const qmcar::DriverSet t = driver_from_flags(smp_flags);
        const qmcar::SampleSet s = qmcar::ar_deterministic(d, t);
        with_output(smp_out, [&](std::ostream& os) { qmcar::write_samples_csv(os, s, smp_hex); });
        std::string meta = smp_meta;
        if (meta.empty() && !smp_out.empty()) meta = smp_out + ".json";
        if (!meta.empty()) {
            json j;
            j["M"] = s.m_proposed;
            j["N"] = s.n_accepted;
            j["L"] = s.l_used;
            j["C"] = d.norm_c();
            j["rate"] = s.m_proposed > 0 ? static_cast<double>(s.n_accepted) /
                                               static_cast<double>(s.m_proposed)
                                         : 0.0;
            with_output(meta, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
        }
    });

    // discrepancy
    auto* dsc = app.add_subcommand("discrepancy", "star-discrepancy of samples or 2-D points");
    std::string dsc_mode, dsc_input, dsc_density, dsc_density_json;
    std::int64_t dsc_grid = 100000;
    std::int64_t dsc_cap = 10000;
    dsc->add_option("--mode", dsc_mode, "1d | 2d | oracle")->required();
    dsc->add_option("--input", dsc_input, "CSV input (samples for 1d/oracle, points for 2d)")
        ->required();
    dsc->add_option("--density", dsc_density, "built-in density name (1d/oracle)");
    dsc->add_option("--density-json", dsc_density_json, "density config file (1d/oracle)");
    dsc->add_option("--grid", dsc_grid, "oracle grid size (default 100000)");
    dsc->add_option("--size-cap", dsc_cap, "exact 2d sweep size cap (default 10000)");
    dsc->callback([&] {
        qmcar::DiscrepancyResult r{};
        if (dsc_mode == "2d") {
            auto is = open_input(dsc_input);
            const auto pts = qmcar::read_points_csv(is);
            qmcar::DriverSet t{pts, qmcar::Family::random,
                               static_cast<std::int64_t>(pts.size()), std::nullopt};
            r = qmcar::star_discrepancy_2d_uniform(t, dsc_cap);
        } else if (dsc_mode == "1d" || dsc_mode == "oracle") {
            const qmcar::Density d = resolve_density(dsc_density, dsc_density_json, std::nullopt);
            auto is = open_input(dsc_input);
            const qmcar::SampleSet s =
                qmcar::sample_set_from_values(qmcar::read_samples_csv(is), d);
            r = dsc_mode == "1d" ? qmcar::star_discrepancy_1d(d, s)
                                 : qmcar::grid_oracle_1d(d, s, dsc_grid);
        } else {
            throw qmcar::DomainError("unknown mode '" + dsc_mode + "' (valid: 1d 2d oracle)");
        }
        json j;
        j["value"] = r.value;
        if (r.method == qmcar::DiscrepancyMethod::exact_2d)
            j["argmax_t"] = {r.argmax_t1, r.argmax_t2};
        else
            j["argmax_t"] = r.argmax_t1;
        j["method"] = qmcar::discrepancy_method_name(r.method);
        j["N"] = r.n;
        std::cout << j.dump(2) << '\n';
    });

    // criterion
    auto* crt = app.add_subcommand("criterion", "driver-quality criterion of a point set");
    DriverFlags crt_flags;
    add_driver_flags(crt, crt_flags);
    std::string crt_r = "auto", crt_method = "auto";
    double crt_cost_cap = 1e10;
    crt->add_option("--R", crt_r, "frequency cutoff R, or \"auto\" (fibonacci only)");
    crt->add_option("--method", crt_method, "auto | general | fast");
    crt->add_option("--cost-cap", crt_cost_cap, "elementary-op cap for the general path");
    crt->callback([&] {
        const qmcar::Family fam = qmcar::family_from_name(crt_flags.family);
        if (crt_method != "auto" && crt_method != "general" && crt_method != "fast")
            throw qmcar::DomainError("--method must be auto, general, or fast");
        std::optional<std::int64_t> r_explicit;
        if (crt_r != "auto") {
            try {
                r_explicit = std::stoll(crt_r);
            } catch (const std::exception&) {
                throw qmcar::DomainError("--R must be an integer or \"auto\"");
            }
        }
        qmcar::CriterionResult res{};
        if (fam == qmcar::Family::fibonacci) {
            if (crt_flags.k < 0)
                throw qmcar::DomainError("--k is required for the fibonacci family");
            const std::int64_t r =
                r_explicit ? *r_explicit : qmcar::default_r_for_fibonacci(crt_flags.k);
            const bool fast = crt_method == "fast" ||
                              (crt_method == "auto" &&
                               r <= qmcar::fibonacci_number(crt_flags.k));
            res = fast ? qmcar::qr_fibonacci(crt_flags.k, r)
                       : qmcar::qr_general(qmcar::fibonacci_lattice(crt_flags.k), r, crt_cost_cap);
        } else {
            if (!r_explicit)
                throw qmcar::DomainError("--R auto is only defined for the fibonacci family");
            if (crt_method == "fast")
                throw qmcar::DomainError("the fast path applies to the fibonacci family only");
            res = qmcar::qr_general(driver_from_flags(crt_flags), *r_explicit, crt_cost_cap);
        }
        json j;
        j["value"] = res.value;
        j["R"] = res.r_used;
        j["M"] = res.m;
        j["method"] = qmcar::criterion_method_name(res.method);
        std::cout << j.dump(2) << '\n';
    });

    // integrate
    auto* itg = app.add_subcommand("integrate", "QMC integration report against a density");
    DriverFlags itg_flags;
    add_driver_flags(itg, itg_flags);
    std::string itg_f = "x", itg_density, itg_density_json;
    double itg_l = 0.0;
    itg->add_option("--f", itg_f, "integrand: one | x | x2 | centered_square | sinpi");
    itg->add_option("--density", itg_density, "built-in density name");
    itg->add_option("--density-json", itg_density_json, "density config file");
    itg->add_option("--L", itg_l, "override the density bound L");
    itg->callback([&] {
        const qmcar::Density d = resolve_density(
            itg_density, itg_density_json,
            itg->count("--L") ? std::optional<double>(itg_l) : std::nullopt);
        const qmcar::Integrand f = qmcar::make_builtin_integrand(itg_f);
        const qmcar::SampleSet s = qmcar::ar_deterministic(d, driver_from_flags(itg_flags));
        const qmcar::IntegrationReport rep = qmcar::integration_report(f, d, s);
        json j;
        j["estimate"] = rep.estimate;
        j["reference"] = rep.reference;
        j["abs_error"] = rep.abs_error;
        j["variation"] = rep.variation;
        j["dstar"] = rep.dstar;
        j["bound"] = rep.bound;
        j["N"] = rep.n;
        std::cout << j.dump(2) << '\n';
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "convergence sweeps and figure reproduction");
    std::string exp_config, exp_out;
    bool exp_figures = false;
    exp->add_option("--config", exp_config, "experiment config JSON");
    exp->add_flag("--figures", exp_figures, "rerun the built-in two-figure study");
    exp->add_option("--out", exp_out, "output directory")->required();
    exp->callback([&] {
        if (!exp_figures && exp_config.empty())
            throw qmcar::DomainError("provide --config FILE or --figures");
        if (exp_figures && !exp_config.empty())
            throw qmcar::DomainError("--config and --figures are mutually exclusive");
        if (exp_figures) {
            const qmcar::FigureSummary summary = qmcar::reproduce_figures(exp_out);
            std::cout << qmcar::figure_summary_json(summary).dump(2) << '\n';
            return;
        }
        const qmcar::ExperimentConfig cfg =
            qmcar::experiment_config_from_json(load_json_file(exp_config));
        const qmcar::ConvergenceReport rep = qmcar::run_convergence(cfg);
        std::error_code ec;
        std::filesystem::create_directories(exp_out, ec);
        if (ec) throw qmcar::IoError("cannot create " + exp_out + ": " + ec.message());
        const std::string rows_path = exp_out + "/rows.csv";
        with_output(rows_path,
                    [&](std::ostream& os) { qmcar::write_convergence_csv(os, rep, cfg); });
        const json report = qmcar::convergence_report_json(rep);
        with_output(exp_out + "/report.json",
                    [&](std::ostream& os) { os << report.dump(2) << '\n'; });
        std::cout << report.dump(2) << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        return 1;
    } catch (const qmcar::DomainError& e) {
        std::cerr << "error: domain: " << e.what() << '\n';
        return 2;
    } catch (const qmcar::IoError& e) {
        std::cerr << "error: io: " << e.what() << '\n';
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error: domain: config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
