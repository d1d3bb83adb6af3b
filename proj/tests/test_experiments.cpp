#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qmcar/errors.hpp"
#include "qmcar/experiments.hpp"
#include "qmcar/io.hpp"

using namespace qmcar;

TEST_CASE("slope fit on exact and noisy power laws") {
    const SlopeFit perfect = fit_slope({{10.0, 1e-1}, {100.0, 1e-2}, {1000.0, 1e-3}});
    CHECK(perfect.slope == doctest::Approx(-1.0).epsilon(1e-12));

    const SlopeFit flat = fit_slope({{10.0, 0.4}, {100.0, 0.4}, {1000.0, 0.4}, {5000.0, 0.4}});
    CHECK(flat.slope == doctest::Approx(0.0));
    CHECK(flat.stderr_ == doctest::Approx(0.0));

    std::mt19937_64 gen(5150);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i) {
        const double n = 100.0 * std::pow(1.35, i);
        const double noise = 1.0 + 0.05 * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
        pts.emplace_back(n, std::pow(n, -2.0 / 3.0) * noise);
    }
    const SlopeFit noisy = fit_slope(pts);
    CHECK(std::abs(noisy.slope - (-2.0 / 3.0)) <= 3.0 * noisy.stderr_);

    CHECK_THROWS_AS(fit_slope({{10.0, 1.0}, {20.0, 0.5}}), DomainError);
    CHECK_THROWS_AS(fit_slope({{10.0, 1.0}, {20.0, -0.5}, {30.0, 0.1}}), DomainError);
    CHECK_THROWS_AS(fit_slope({{10.0, 1.0}, {10.0, 1.0}, {10.0, 1.0}}), DomainError);
}

TEST_CASE("convergence run over a small fibonacci sweep") {
    ExperimentConfig cfg;
    cfg.density_name = "example1";
    cfg.family = Family::fibonacci;
    cfg.parameters = {8, 9, 10, 11, 12, 13, 14, 15};
    const ConvergenceReport rep = run_convergence(cfg);
    REQUIRE(rep.rows.size() == cfg.parameters.size());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        CHECK(row.n <= row.m);
        CHECK(row.accept_rate == doctest::Approx(0.7235).epsilon(0.12));
        CHECK(row.dstar > 0.0);
        if (i > 0) CHECK(rep.rows[i - 1].n <= row.n);
    }
    CHECK(std::isfinite(rep.slope));
    CHECK(rep.fit_n_min >= 100);

    // byte-identical CSV on a rerun
    const ConvergenceReport rep2 = run_convergence(cfg);
    std::ostringstream a, b;
    write_convergence_csv(a, rep, cfg);
    write_convergence_csv(b, rep2, cfg);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, a.str().find('\n')) == "family,param,M,N,accept_rate,dstar");
}

TEST_CASE("random family averages over seeds deterministically") {
    ExperimentConfig cfg;
    cfg.density_name = "example2";
    cfg.family = Family::random;
    cfg.parameters = {512, 1024, 2048};
    cfg.seeds = {1, 2, 3};
    const ConvergenceReport rep = run_convergence(cfg);
    const ConvergenceReport rep2 = run_convergence(cfg);
    REQUIRE(rep.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rep.rows[i].dstar == rep2.rows[i].dstar);
        CHECK(rep.rows[i].n == rep2.rows[i].n);
    }

    cfg.seeds.clear();
    CHECK_THROWS_AS(run_convergence(cfg), DomainError);
    cfg.seeds = {1};
    cfg.parameters.clear();
    CHECK_THROWS_AS(run_convergence(cfg), DomainError);
}

TEST_CASE("qr measure rides along for the fibonacci family") {
    ExperimentConfig cfg;
    cfg.density_name = "example1";
    cfg.family = Family::fibonacci;
    cfg.parameters = {9, 10, 11, 12};
    cfg.measure_qr = true;
    const ConvergenceReport rep = run_convergence(cfg);
    for (const auto& row : rep.rows) {
        REQUIRE(row.qr.has_value());
        CHECK(*row.qr > 0.0);
    }
    // non-fibonacci families refuse the per-k default cutoff
    cfg.family = Family::kronecker;
    cfg.parameters = {128};
    CHECK_THROWS_WITH_AS(run_convergence(cfg), doctest::Contains("128"), DomainError);
    cfg.r_fixed = 8;
    cfg.parameters = {128, 256, 512};
    const ConvergenceReport kr = run_convergence(cfg);
    CHECK(kr.rows.front().qr.has_value());
}

TEST_CASE("failures name the offending parameter") {
    ExperimentConfig cfg;
    cfg.density_name = "example1";
    cfg.family = Family::fibonacci;
    cfg.parameters = {12, 90, 13};  // 90 is out of range
    CHECK_THROWS_WITH_AS(run_convergence(cfg), doctest::Contains("90"), DomainError);
}

TEST_CASE("experiment config parsing") {
    const nlohmann::json j = {
        {"density", "example2"},
        {"family", "random"},
        {"m_pow2_range", {8, 10}},
        {"seeds", {1, 2, 3, 4}},
        {"measures", {"dstar", "accept_rate", "integration_error"}},
        {"integrand", "sinpi"},
        {"n_min_fit", 50},
    };
    const ExperimentConfig cfg = experiment_config_from_json(j);
    CHECK(cfg.density_name == "example2");
    CHECK(cfg.family == Family::random);
    CHECK(cfg.parameters == std::vector<std::int64_t>{256, 512, 1024});
    CHECK(cfg.seeds.size() == 4);
    CHECK(cfg.measure_integration_error);
    CHECK_FALSE(cfg.measure_qr);
    CHECK(cfg.integrand == "sinpi");
    CHECK(cfg.fit_n_min == 50);

    const nlohmann::json k = {{"density", "example1"}, {"family", "fibonacci"},
                              {"k_range", {10, 12}}, {"R", "auto"}};
    CHECK(experiment_config_from_json(k).parameters == std::vector<std::int64_t>{10, 11, 12});

    const nlohmann::json ml = {{"density", "example1"}, {"family", "kronecker"},
                               {"m_list", {100, 300}}, {"R", 32}};
    const ExperimentConfig mcfg = experiment_config_from_json(ml);
    CHECK(mcfg.r_fixed == 32);

    CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"density", "example1"}}),
                    DomainError);
    CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{
                        {"density", "example1"}, {"family", "fibonacci"},
                        {"k_range", {5, 8}}, {"measures", {"speed"}}}),
                    DomainError);
    // custom density object passes through
    const nlohmann::json custom = {
        {"density", {{"form", "piecewise-polynomial"},
                     {"pieces", {{{"interval", {0.0, 1.0}}, {"coefficients", {0.5, 0.5}}}}}}},
        {"family", "grid"},
        {"m_list", {64, 256}},
    };
    const ExperimentConfig ccfg = experiment_config_from_json(custom);
    REQUIRE(ccfg.density.has_value());
    CHECK(ccfg.density->norm_c() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("integration-error measure decays for the fibonacci family") {
    ExperimentConfig cfg;
    cfg.density_name = "example1";
    cfg.family = Family::fibonacci;
    for (std::int64_t k = 10; k <= 22; ++k) cfg.parameters.push_back(k);
    cfg.measure_integration_error = true;
    cfg.integrand = "x";
    const ConvergenceReport rep = run_convergence(cfg);
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rep.rows) {
        REQUIRE(row.integ_err.has_value());
        if (*row.integ_err > 0.0) pts.emplace_back(static_cast<double>(row.n), *row.integ_err);
    }
    REQUIRE(pts.size() >= 4);
    CHECK(fit_slope(pts).slope <= -0.5);
}
