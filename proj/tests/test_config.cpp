#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ssv/config.hpp"
#include "ssv/errors.hpp"
#include "ssv/runner.hpp"

using namespace ssv;
using namespace ssv::cli;

TEST_CASE("config round trip is lossless") {
    ExperimentConfig cfg;
    cfg.N = 120;
    cfg.n = 40;
    cfg.params.r = 2.75;
    cfg.params.a3 = 0.9125;
    cfg.family = ensemble::FamilyKind::Rademacher;
    cfg.profile.kind = ProfileSpec::Kind::Sparse;
    cfg.profile.row_fill = 0.95;
    cfg.profile.column_target = 0.9;
    cfg.profile.gen_seed = 31;
    cfg.sweep_param = "a4";
    cfg.sweep_values = {1.0, 0.95, 0.9};
    cfg.seed = 987654321;
    cfg.trials = 2500;
    cfg.uconst.c_abs = 1.5;
    auto text = serialize_config(cfg);
    auto back = parse_config(text);
    CHECK(back == cfg);

    SUBCASE("dense rows round trip too") {
        ExperimentConfig d;
        d.N = 2;
        d.n = 3;
        d.profile.kind = ProfileSpec::Kind::Dense;
        d.profile.rows = {{1.0, 0.0, 0.5}, {0.25, 1.0, 0.0}};
        auto t2 = serialize_config(d);
        CHECK(parse_config(t2) == d);
    }
}

TEST_CASE("unknown keys are rejected with their line") {
    std::string bad = "[shape]\nN = 4\nn = 2\nbogus = 7\n";
    try {
        parse_config(bad);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 4") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[nope]\n"), config_error);
    CHECK_THROWS_AS(parse_config("N = 4\n"), config_error); // key before section
    CHECK_THROWS_AS(parse_config("[shape]\nN = four\n"), config_error);
    CHECK_THROWS_AS(parse_config("[run]\nalpha 0.05\n"), config_error);
}

TEST_CASE("build_ensemble_spec materializes profiles") {
    ExperimentConfig cfg;
    cfg.N = 12;
    cfg.n = 4;
    cfg.params.mu = 2.0;
    cfg.params.a3 = 0.9;
    auto spec = build_ensemble_spec(cfg);
    CHECK(spec.profile(0, 0) == 1.0);

    cfg.profile.kind = ProfileSpec::Kind::Dense;
    cfg.profile.rows.assign(12, std::vector<double>{1, 0, 1, 0.5});
    auto spec2 = build_ensemble_spec(cfg);
    CHECK(spec2.profile(3, 1) == 0.0);
    CHECK(spec2.profile(3, 3) == 0.5);

    cfg.profile.rows.assign(3, std::vector<double>{1, 0, 1, 0.5});
    CHECK_THROWS_AS(build_ensemble_spec(cfg), config_error);
}

TEST_CASE("check-conditions report renders both verdicts") {
    ExperimentConfig cfg;
    cfg.N = 10;
    cfg.n = 5;
    cfg.params.mu = 2.0;
    cfg.params.a3 = 1.0;
    auto json = render_check_conditions(cfg);
    CHECK(json.find("\"cond_iii\":{\"pass\":true") != std::string::npos);
    CHECK(json.find("\"cond_ii\":\"empirical\"") != std::string::npos);
    CHECK(json.find("universal_constants") != std::string::npos);
}

TEST_CASE("constants table carries fixtures and gates") {
    ExperimentConfig cfg;
    cfg.N = 20;
    cfg.n = 10;
    cfg.params.r = 3;
    cfg.params.mu = 1;
    cfg.params.a1 = 2;
    cfg.params.a3 = 1;
    cfg.params.a4 = 1;
    auto json = render_constants(cfg, true);
    CHECK(json.find("\"b1\":9.5367431640625e-07") != std::string::npos);
    CHECK(json.find("\"gates\"") != std::string::npos);
    CHECK(json.find("\"delta_ge_delta0\":false") != std::string::npos); // delta = 1 << 8.57e6
    auto text = render_constants(cfg, false);
    CHECK(text.find("UNMET") != std::string::npos);

    cfg.params.a4 = 0.9999999; // almost-square gate unmet, reported not thrown
    auto json2 = render_constants(cfg, true);
    CHECK(json2.find("a4 > 1 - gamma") != std::string::npos);
}

TEST_CASE("tail sweep validates grids") {
    ExperimentConfig cfg;
    cfg.N = 20;
    cfg.n = 10;
    cfg.params.mu = 2.0;
    cfg.trials = 10;
    cfg.sweep_param = "delta";
    cfg.sweep_values = {};
    CHECK_THROWS_AS(render_tail_sweep_csv(cfg), config_error);
    cfg.sweep_values = {0.31}; // (1+0.31)*10 is not an integer
    CHECK_THROWS_AS(render_tail_sweep_csv(cfg), config_error);
    cfg.sweep_values = {1.0, 2.0};
    auto csv = render_tail_sweep_csv(cfg);
    CHECK(csv.find("# ssv tail-sweep v") == 0);
    CHECK(csv.find("param,value,N,n,trials") != std::string::npos);
    // deterministic rerun
    CHECK(render_tail_sweep_csv(cfg) == csv);

    cfg.sweep_values.assign(5000, 1.0);
    CHECK_THROWS_AS(render_tail_sweep_csv(cfg), config_error); // cap refusal names the count
}

TEST_CASE("gaussian tall sweep: mean s_n/sqrt(N) climbs toward 1 with delta") {
    ExperimentConfig cfg;
    cfg.N = 20;
    cfg.n = 10;
    cfg.params.mu = 2.0;
    cfg.params.a3 = 1.0;
    cfg.family = ensemble::FamilyKind::Gaussian;
    cfg.trials = 300;
    cfg.seed = 404;
    cfg.sweep_param = "delta";
    cfg.sweep_values = {1.0, 4.0, 19.0};
    auto csv = render_tail_sweep_csv(cfg);

    std::istringstream in(csv);
    std::string line;
    std::vector<double> means;
    std::vector<double> deltas = {1.0, 4.0, 19.0};
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("param", 0) == 0) continue;
        // column 10 is mean_min_sv_over_sqrtN
        std::stringstream ss(line);
        std::string cell;
        for (int c = 0; c < 10; ++c) std::getline(ss, cell, ',');
        means.push_back(std::stod(cell));
    }
    REQUIRE(means.size() == 3);
    CHECK(means[0] < means[1]);
    CHECK(means[1] < means[2]);
    // the rectangular envelope: s_n/sqrt(N) near 1 - 1/sqrt(1+delta)
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(means[i] - (1.0 - 1.0 / std::sqrt(1.0 + deltas[i]))) < 0.15);
}

TEST_CASE("small-ball sweep runs and holds") {
    ExperimentConfig cfg;
    cfg.small_ball_configs = 25;
    cfg.small_ball_max_n = 10;
    cfg.seed = 5;
    auto csv = render_small_ball_csv(cfg);
    CHECK(csv.find("config,n,lambda") != std::string::npos);
    // every row holds
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("config", 0) == 0) continue;
        ++rows;
        CHECK(line.find(",true,") != std::string::npos);
    }
    CHECK(rows == 25);
}

TEST_CASE("verify suite has no failures on a sane config") {
    ExperimentConfig cfg;
    cfg.N = 30;
    cfg.n = 10;
    cfg.params.mu = 2.0;
    cfg.params.a3 = 1.0;
    cfg.params.a1 = 4.0;
    cfg.params.a2 = 0.05;
    cfg.trials = 200;
    cfg.small_ball_configs = 50;
    std::ostringstream out;
    auto vs = run_verify(cfg, out);
    CHECK(vs.fail == 0);
    CHECK(vs.pass > 0);
    CHECK(out.str().find("verify:") != std::string::npos);
}
