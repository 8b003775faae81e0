#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "rogue/errors.hpp"
#include "rogue/json_io.hpp"
#include "test_support.hpp"

using namespace rogue;
using test_support::make_arm;

namespace {

ScenarioConfig demo_scenario() {
    ScenarioConfig sc;
    sc.arms = {make_arm(0.7, -0.5, 0.3, 1.0, 1.0, 0.5, 0.4, 0.2),
               make_arm(0.8, 0.2, 0.1, 0.9, 1.1, 0.6, 0.2, 0.2)};
    sc.box = StateBox{0.0, 1.0, -2.0, 3.0, -3.0, 5.0};
    sc.horizon = 25;
    sc.n_users = 2;
    sc.master_seed = 77;
    return sc;
}

bool message_contains(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

#define CHECK_CONFIG_ERROR(expr, needle)                          \
    do {                                                          \
        try {                                                     \
            (void)(expr);                                         \
            FAIL("expected ConfigError from " #expr);             \
        } catch (const ConfigError& e) {                          \
            CHECK_MESSAGE(message_contains(e, needle), e.what()); \
        }                                                         \
    } while (0)

}  // namespace

// --- scenarios ---------------------------------------------------------------

TEST_CASE("scenario JSON round-trips bit for bit") {
    ScenarioConfig sc = demo_scenario();
    sc.oracle_mode = OracleMode::exhaustive;
    sc.oracle_depth = 3;
    const ScenarioConfig back = parse_scenario(scenario_to_json(sc));
    REQUIRE(back.arms.size() == sc.arms.size());
    for (std::size_t i = 0; i < sc.arms.size(); ++i) {
        CHECK(back.arms[i].a_coef == sc.arms[i].a_coef);
        CHECK(back.arms[i].b_coef == sc.arms[i].b_coef);
        CHECK(back.arms[i].k_coef == sc.arms[i].k_coef);
        CHECK(back.arms[i].state_coef == sc.arms[i].state_coef);
        CHECK(back.arms[i].effect_coef == sc.arms[i].effect_coef);
        CHECK(back.arms[i].theta_true == sc.arms[i].theta_true);
        CHECK(back.arms[i].x0_true == sc.arms[i].x0_true);
        CHECK(back.arms[i].sigma == sc.arms[i].sigma);
    }
    CHECK(back.box.x_min == sc.box.x_min);
    CHECK(back.box.g_max == sc.box.g_max);
    CHECK(back.horizon == sc.horizon);
    CHECK(back.n_users == sc.n_users);
    CHECK(back.master_seed == sc.master_seed);
    CHECK(back.oracle_mode == OracleMode::exhaustive);
    CHECK(back.oracle_depth == 3);

    const ScenarioConfig greedy = parse_scenario(scenario_to_json(demo_scenario()));
    CHECK(greedy.oracle_mode == OracleMode::greedy);
}

TEST_CASE("parse_scenario reports the offending field path") {
    json j = scenario_to_json(demo_scenario());
    j["arms"][0].erase("a_coef");
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.arms[1].a_coef");

    j = scenario_to_json(demo_scenario());
    j["arms"][1]["surprise"] = 1.0;
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.arms[2].surprise");

    j = scenario_to_json(demo_scenario());
    j["box"]["g_min"] = "low";
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.box.g_min");

    j = scenario_to_json(demo_scenario());
    j["extra"] = true;
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.extra");

    j = scenario_to_json(demo_scenario());
    j["master_seed"] = 1.5;
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.master_seed");

    j = scenario_to_json(demo_scenario());
    j["arms"] = json::array();
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.arms");

    j = scenario_to_json(demo_scenario());
    j["oracle_mode"] = "psychic";
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario.oracle_mode");

    // Structurally fine but semantically invalid: g bounds too tight.
    j = scenario_to_json(demo_scenario());
    j["box"]["g_max"] = 0.1;
    CHECK_CONFIG_ERROR(parse_scenario(j), "scenario:");
}

// --- policies ----------------------------------------------------------------

TEST_CASE("parse_policy: kinds, clip flag and per-kind parameters") {
    const PolicySpec ts = parse_policy(
        json{{"kind", "rogue_ts"},
             {"clip", true},
             {"params", {{"n_prob_samples", 250}, {"jitter", 1e-9}}}},
        "p");
    CHECK(ts.kind == "rogue_ts");
    CHECK(ts.clip);
    CHECK(ts.n_prob_samples == 250);
    CHECK(ts.jitter == doctest::Approx(1e-9));
    CHECK(ts.display_name() == "rogue_ts_clip");

    const PolicySpec nts = parse_policy(
        json{{"kind", "naive_ts"}, {"params", {{"prior_mean", 0.5}, {"prior_var", 2.0}}}},
        "p");
    CHECK(nts.prior_mean.value() == doctest::Approx(0.5));
    CHECK(nts.prior_var.value() == doctest::Approx(2.0));
    CHECK_FALSE(nts.clip);

    const PolicySpec rexp3 = parse_policy(
        json{{"kind", "rexp3"}, {"params", {{"gamma", 0.2}, {"batch", 50}}}}, "p");
    CHECK(rexp3.gamma.value() == doctest::Approx(0.2));
    CHECK(rexp3.batch.value() == 50);

    const PolicySpec ucb = parse_policy(
        json{{"kind", "rogue_ucb"},
             {"params",
              {{"confidence_scale", 2.0}, {"lipschitz_g", 1.5}, {"sigma", 0.7}}}},
        "p");
    CHECK(ucb.confidence_scale.value() == doctest::Approx(2.0));
    CHECK(ucb.lipschitz_g.value() == doctest::Approx(1.5));
    CHECK(ucb.ucb_sigma.value() == doctest::Approx(0.7));

    const PolicySpec uni = parse_policy(json{{"kind", "uniform"}}, "p");
    CHECK(uni.display_name() == "uniform");
}

TEST_CASE("parse_policy rejects unknown kinds and stray parameters") {
    CHECK_CONFIG_ERROR(parse_policy(json{{"kind", "egreedy"}}, "p"), "p.kind");
    CHECK_CONFIG_ERROR(parse_policy(json{{"clip", true}}, "p"), "p.kind");
    CHECK_CONFIG_ERROR(
        parse_policy(json{{"kind", "rogue_ts"}, {"params", {{"gamma", 0.1}}}}, "p"),
        "p.params.gamma");
    CHECK_CONFIG_ERROR(
        parse_policy(json{{"kind", "uniform"}, {"params", {{"n", 3}}}}, "p"),
        "p.params.n");
    CHECK_CONFIG_ERROR(parse_policy(json{{"kind", "uniform"}, {"verbose", true}}, "p"),
                       "p.verbose");
}

// --- experiments -------------------------------------------------------------

TEST_CASE("parse_experiment: scenario seed fallback and explicit override") {
    json j{{"scenario", scenario_to_json(demo_scenario())},
           {"policies", json::array({json{{"kind", "uniform"}}})}};
    const ExperimentConfig cfg = parse_experiment(j);
    CHECK(cfg.master_seed == 77);  // inherited from the scenario
    CHECK(cfg.n_replications == 20);
    CHECK(cfg.threads == 1);
    CHECK(cfg.clipping == ClippingMode::off);

    j["master_seed"] = 1234;
    j["n_replications"] = 5;
    j["threads"] = 2;
    const ExperimentConfig cfg2 = parse_experiment(j);
    CHECK(cfg2.master_seed == 1234);
    CHECK(cfg2.n_replications == 5);
    CHECK(cfg2.threads == 2);
}

TEST_CASE("parse_experiment: generator block with overrides") {
    json j{{"generator",
            {{"kind", "glm_uniform"}, {"n_arms", 4}, {"horizon", 500}, {"a_max", 0.8}}},
           {"policies", json::array({json{{"kind", "rexp3"}}})},
           {"master_seed", 3}};
    const ExperimentConfig cfg = parse_experiment(j);
    REQUIRE(cfg.generator.has_value());
    CHECK(cfg.generator->kind == "glm_uniform");
    CHECK(cfg.generator->n_arms == 4);
    CHECK(cfg.generator->horizon == 500);
    CHECK(cfg.generator->a_max == doctest::Approx(0.8));
    CHECK(cfg.generator->sigma_min == doctest::Approx(2.0));  // default preserved

    json pw{{"generator",
             {{"kind", "power_multiuser"},
              {"n_arms", 3},
              {"horizon", 90},
              {"n_users", 15},
              {"theta", {0.4, 0.9, 0.4}}}},
            {"policies", json::array({json{{"kind", "uniform"}}})},
            {"master_seed", 9}};
    const ExperimentConfig pcfg = parse_experiment(pw);
    REQUIRE(pcfg.generator.has_value());
    CHECK(pcfg.generator->n_users == 15);
    REQUIRE(pcfg.generator->theta.size() == 3);
    CHECK(pcfg.generator->theta[1] == doctest::Approx(0.9));

    pw["generator"]["theta"] = {0.4, 0.9};
    CHECK_CONFIG_ERROR(parse_experiment(pw), "experiment.generator.theta");

    pw["generator"]["theta"] = {0.4, 0.9, 0.4};
    pw["generator"]["kind"] = "mystery";
    CHECK_CONFIG_ERROR(parse_experiment(pw), "experiment.generator.kind");
}

TEST_CASE("parse_experiment: clipping and power blocks") {
    json base{{"generator", {{"kind", "power_multiuser"}, {"horizon", 90}, {"n_users", 4}}},
              {"policies",
               json::array({json{{"kind", "uniform"}},
                            json{{"kind", "rogue_ts"}, {"clip", true}}})},
              {"master_seed", 2},
              {"power", {{"alpha0", 0.1}, {"beta0", 0.25}, {"delta0", 0.8}}}};

    json manual = base;
    manual["clipping"] = {{"manual", 0.15}};
    const ExperimentConfig mcfg = parse_experiment(manual);
    CHECK(mcfg.clipping == ClippingMode::manual);
    CHECK(mcfg.manual_p_min == doctest::Approx(0.15));
    REQUIRE(mcfg.power.has_value());
    CHECK(mcfg.power->alpha0 == doctest::Approx(0.1));
    CHECK(mcfg.power->beta0 == doctest::Approx(0.25));
    CHECK(mcfg.power->delta0 == doctest::Approx(0.8));

    json floor = base;
    floor["clipping"] = "power_floor";
    CHECK(parse_experiment(floor).clipping == ClippingMode::power_floor);

    json off = base;
    off["clipping"] = "off";
    CHECK_CONFIG_ERROR(parse_experiment(off), "experiment.clipping");  // clip policy present

    json bad = base;
    bad["clipping"] = "sometimes";
    CHECK_CONFIG_ERROR(parse_experiment(bad), "experiment.clipping");

    json nopower = base;
    nopower.erase("power");
    nopower["clipping"] = "power_floor";
    CHECK_CONFIG_ERROR(parse_experiment(nopower), "experiment.power");

    json both = base;
    both["clipping"] = {{"manual", 0.15}};
    both["scenario"] = scenario_to_json(demo_scenario());
    CHECK_CONFIG_ERROR(parse_experiment(both), "experiment");
}

// --- logs --------------------------------------------------------------------

TEST_CASE("interaction logs round-trip through JSON with 1-based arms") {
    InteractionLog log;
    UserLog u1;
    u1.records = {{1, 0, 0.5}, {2, 2, -0.25}, {3, 1, 1.75}};
    UserLog u2;
    u2.records = {{1, 1, 0.125}};
    log.users = {u1, u2};

    const json j = log_to_json(log);
    CHECK(j[0][0]["arm"] == 1);  // serialized 1-based
    CHECK(j[0][1]["arm"] == 3);

    const InteractionLog back = parse_log(j);
    REQUIRE(back.users.size() == 2);
    REQUIRE(back.users[0].records.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(back.users[0].records[r].t == log.users[0].records[r].t);
        CHECK(back.users[0].records[r].arm == log.users[0].records[r].arm);
        CHECK(back.users[0].records[r].reward == log.users[0].records[r].reward);
    }
}

TEST_CASE("parse_log rejects zero-based arms and round gaps") {
    json zero = json::array(
        {json::array({json{{"t", 1}, {"arm", 0}, {"reward", 0.5}}})});
    CHECK_CONFIG_ERROR(parse_log(zero), "arm");

    json gap = json::array({json::array({json{{"t", 1}, {"arm", 1}, {"reward", 0.5}},
                                         json{{"t", 3}, {"arm", 1}, {"reward", 0.5}}})});
    CHECK_CONFIG_ERROR(parse_log(gap), "contiguous");

    json late_start = json::array(
        {json::array({json{{"t", 2}, {"arm", 1}, {"reward", 0.5}}})});
    CHECK_CONFIG_ERROR(parse_log(late_start), "contiguous");

    json stray = json::array({json::array(
        {json{{"t", 1}, {"arm", 1}, {"reward", 0.5}, {"note", "hi"}}})});
    CHECK_CONFIG_ERROR(parse_log(stray), "note");

    CHECK_CONFIG_ERROR(parse_log(json{{"users", 1}}), "log");
}

// --- power spec and estimate params ------------------------------------------

TEST_CASE("parse_power_spec fills documented defaults") {
    const PowerSpec full = parse_power_spec(json{{"alpha0", 0.05},
                                                 {"beta0", 0.2},
                                                 {"delta0", 1.0},
                                                 {"n_users", 15},
                                                 {"horizon", 90},
                                                 {"n_arms", 3},
                                                 {"a_abs", 0.5},
                                                 {"sigma", 1.0},
                                                 {"effect_coef", 1.0}});
    CHECK(full.n_users == 15);
    CHECK(full.horizon == 90);

    const PowerSpec defaults = parse_power_spec(json{{"alpha0", 0.05},
                                                     {"beta0", 0.2},
                                                     {"delta0", 1.0},
                                                     {"horizon", 90},
                                                     {"n_arms", 3},
                                                     {"a_abs", 0.5},
                                                     {"sigma", 1.0}});
    CHECK(defaults.n_users == 15);
    CHECK(defaults.effect_coef == doctest::Approx(1.0));

    CHECK_CONFIG_ERROR(parse_power_spec(json{{"alpha0", 0.05}, {"beta", 0.2}}, "power_spec"),
                       "power_spec.beta");
}

TEST_CASE("parse_estimate_params maps the baseline arm to 0-based") {
    json arms = json::array({json{{"a_coef", 0.5},
                                  {"b_coef", 0.1},
                                  {"k_coef", 0.0},
                                  {"state_coef", 1.0},
                                  {"effect_coef", 1.0},
                                  {"sigma", 1.0}},
                             json{{"a_coef", 0.6},
                                  {"b_coef", 0.2},
                                  {"k_coef", 0.1},
                                  {"state_coef", 1.0},
                                  {"effect_coef", 1.0},
                                  {"sigma", 1.2}}});
    const EstimateParams defaults = parse_estimate_params(json{{"arms", arms}});
    CHECK(defaults.alpha0 == doctest::Approx(0.05));
    CHECK(defaults.baseline == 0);
    REQUIRE(defaults.arms.size() == 2);
    CHECK(defaults.arms[1].sigma == doctest::Approx(1.2));

    const EstimateParams explicit_base = parse_estimate_params(
        json{{"arms", arms}, {"alpha0", 0.1}, {"baseline_arm", 2}});
    CHECK(explicit_base.baseline == 1);
    CHECK(explicit_base.alpha0 == doctest::Approx(0.1));

    CHECK_CONFIG_ERROR(parse_estimate_params(json{{"arms", arms}, {"baseline_arm", 3}}),
                       "params.baseline_arm");
    CHECK_CONFIG_ERROR(parse_estimate_params(json{{"arms", json::array()}}), "params.arms");
}

// --- fitted parameters and file loading --------------------------------------

TEST_CASE("fitted_params_to_json: 1-based arm, fixed k, null for non-finite x0") {
    FittedArmParams fit;
    fit.a_coef = 0.6;
    fit.b_coef = 0.3;
    fit.theta = 0.45;
    fit.sigma = 0.05;
    fit.x0 = {0.2, std::numeric_limits<double>::quiet_NaN(), 0.8};
    fit.b_dropped = false;
    fit.rss = 0.125;

    const json j = fitted_params_to_json(fit, 2, 0.1);
    CHECK(j.at("arm") == 2);
    CHECK(j.at("k_coef").get<double>() == doctest::Approx(0.1));
    CHECK(j.at("a_coef").get<double>() == doctest::Approx(0.6));
    CHECK(j.at("b_dropped") == false);
    REQUIRE(j.at("x0").size() == 3);
    CHECK(j.at("x0")[0].get<double>() == doctest::Approx(0.2));
    CHECK(j.at("x0")[1].is_null());
    CHECK(j.at("x0")[2].get<double>() == doctest::Approx(0.8));
}

TEST_CASE("load_json_file surfaces missing files and parse errors with the path") {
    CHECK_CONFIG_ERROR(load_json_file("/nonexistent/rogue.json"), "/nonexistent/rogue.json");

    const auto dir = std::filesystem::temp_directory_path() / "rogue_test_json";
    std::filesystem::create_directories(dir);
    const auto bad = dir / "broken.json";
    std::ofstream(bad) << "{ not json";
    CHECK_CONFIG_ERROR(load_json_file(bad.string()), "broken.json");

    const auto good = dir / "ok.json";
    std::ofstream(good) << R"({"a": [1, 2.5]})";
    const json j = load_json_file(good.string());
    CHECK(j.at("a")[1].get<double>() == doctest::Approx(2.5));
    std::filesystem::remove_all(dir);
}
