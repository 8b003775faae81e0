// rogue-bandit: command-line front end for the ROGUE bandit library.
//
// Subcommands: simulate-regret, power-experiment, compute-pmin, clip,
// fit-em, estimate.  Exit codes: 0 success, 2 configuration/usage errors,
// 3 infeasible power designs, 1 anything else.
//
// Within a replication all policies face identical environment parameter
// draws, but reward-noise streams are independent per policy: each policy
// induces a different state trajectory, so common random numbers cannot be
// aligned state-for-state anyway.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rogue/errors.hpp"
#include "rogue/harness.hpp"
#include "rogue/inference.hpp"
#include "rogue/json_io.hpp"
#include "rogue/power.hpp"

namespace {

using namespace rogue;

struct RunFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<long> reps;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

ExperimentConfig load_experiment(const RunFlags& flags) {
    ExperimentConfig cfg = parse_experiment(load_json_file(flags.config_path));
    if (flags.reps) cfg.n_replications = *flags.reps;
    if (flags.seed) cfg.master_seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    return cfg;
}

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", flags.out_dir, "output directory for CSV reports")->required();
    cmd->add_option("--reps", flags.reps, "override n_replications");
    cmd->add_option("--seed", flags.seed, "override master_seed");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
}

std::vector<double> parse_prob_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InvalidDistribution("--p: '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw InvalidDistribution("--p: empty probability list");
    return out;
}

int cmd_simulate_regret(const RunFlags& flags) {
    const ExperimentConfig cfg = load_experiment(flags);
    const std::vector<RegretReport> reports = run_regret_experiment(cfg);
    emit_regret_reports(flags.out_dir, reports);
    for (const RegretReport& r : reports)
        std::cout << r.policy << ": final mean cumulative regret "
                  << format_value(r.final_mean_cum_regret()) << "\n";
    return 0;
}

int cmd_power_experiment(const RunFlags& flags) {
    const ExperimentConfig cfg = load_experiment(flags);
    const PowerOutcome outcome = run_power_experiment(cfg);
    emit_power_report(flags.out_dir, outcome.report);
    for (const PowerReport::Row& row : outcome.report.rows)
        std::cout << row.policy << ": power " << format_value(row.power) << ", type1 "
                  << format_value(row.type1) << "\n";
    return 0;
}

int cmd_compute_pmin(const std::string& spec_path) {
    const PowerSpec spec = parse_power_spec(load_json_file(spec_path));
    double term_dynamics = 0.0, term_power = 0.0;
    const double p_min = required_p_min(spec, &term_dynamics, &term_power);
    const double p_max = p_max_from(p_min, spec.n_arms);
    std::cout << "p_min = " << format_value(p_min) << "\n"
              << "p_max = " << format_value(p_max) << "\n"
              << "term_dynamics = " << format_value(term_dynamics) << "\n"
              << "term_power = " << format_value(term_power) << "\n";
    return 0;
}

int cmd_clip(const std::string& p_text, double p_min, double p_max) {
    const std::vector<double> p = parse_prob_list(p_text);
    const std::vector<double> q = clip_probabilities(p, ClipBounds{p_min, p_max});
    for (std::size_t i = 0; i < q.size(); ++i)
        std::cout << (i ? "," : "") << format_value(q[i]);
    std::cout << "\n";
    return 0;
}

struct FitFlags {
    std::string log_path;
    std::string out_path;
    long arm = 1;  // 1-based
    FitConfig cfg;
};

int cmd_fit(const FitFlags& flags) {
    const InteractionLog log = parse_log(load_json_file(flags.log_path));
    std::size_t n_arms = 0;
    for (const UserLog& u : log.users)
        for (const PullRecord& r : u.records)
            n_arms = std::max(n_arms, static_cast<std::size_t>(r.arm) + 1);
    if (flags.arm < 1 || static_cast<std::size_t>(flags.arm) > n_arms)
        throw ConfigError("--arm: log has no arm " + std::to_string(flags.arm));
    const FittedArmParams fit =
        fit_arm_parameters(log, static_cast<std::size_t>(flags.arm - 1), flags.cfg);
    std::ofstream out(flags.out_path);
    if (!out) throw ConfigError(flags.out_path + ": cannot open for writing");
    out << fitted_params_to_json(fit, flags.arm, flags.cfg.k_known).dump(2) << "\n";
    std::cout << "arm " << flags.arm << ": a = " << format_value(fit.a_coef)
              << ", theta = " << format_value(fit.theta)
              << ", sigma = " << format_value(fit.sigma) << "\n";
    return 0;
}

struct EstimateFlags {
    std::string log_path;
    std::string params_path;
    std::string out_path;
};

int cmd_estimate(const EstimateFlags& flags) {
    const InteractionLog log = parse_log(load_json_file(flags.log_path));
    const EstimateParams params = parse_estimate_params(load_json_file(flags.params_path));
    const std::size_t n_arms = params.arms.size();
    const std::size_t n_users = log.users.size();

    std::vector<std::optional<PooledEstimate>> pooled(n_arms);
    std::vector<std::vector<std::optional<UserArmEstimate>>> per_user(
        n_arms, std::vector<std::optional<UserArmEstimate>>(n_users));
    for (std::size_t a = 0; a < n_arms; ++a) {
        for (std::size_t u = 0; u < n_users; ++u) {
            try {
                per_user[a][u] = user_arm_least_squares(log.users[u], params.arms[a], a);
            } catch (const SingularDesign&) {
                per_user[a][u] = std::nullopt;
            }
        }
        try {
            pooled[a] = pooled_estimate(per_user[a]);
        } catch (const NoDataError&) {
            pooled[a] = std::nullopt;
        }
    }
    const std::vector<TestOutcome> tests =
        family_test(pooled, params.baseline, params.alpha0);

    std::ofstream out(flags.out_path);
    if (!out) throw ConfigError(flags.out_path + ": cannot open for writing");
    out << "arm,theta_hat,variance,z,adjusted_alpha,reject\n";
    for (std::size_t a = 0; a < n_arms; ++a) {
        out << (a + 1) << ',';
        if (pooled[a]) {
            out << format_value(pooled[a]->theta_hat) << ','
                << format_value(pooled[a]->variance);
        } else {
            out << ',';
        }
        if (a == params.baseline) {
            out << ",,,\n";
            continue;
        }
        const TestOutcome* hit = nullptr;
        for (const TestOutcome& t : tests)
            if (t.arm == a) hit = &t;
        if (hit)
            out << ',' << format_value(hit->z) << ',' << format_value(hit->adjusted_alpha)
                << ',' << (hit->reject ? 1 : 0) << "\n";
        else
            out << ",,,\n";
    }
    out.close();

    std::filesystem::path detail = flags.out_path;
    detail.replace_filename(detail.stem().string() + "_users" + detail.extension().string());
    std::ofstream du(detail);
    if (!du) throw ConfigError(detail.string() + ": cannot open for writing");
    du << "user,arm,theta_hat,x0_hat,variance,n_pulls\n";
    for (std::size_t u = 0; u < n_users; ++u)
        for (std::size_t a = 0; a < n_arms; ++a) {
            if (!per_user[a][u]) continue;
            const UserArmEstimate& e = *per_user[a][u];
            du << (u + 1) << ',' << (a + 1) << ',' << format_value(e.theta_hat) << ','
               << format_value(e.x0_hat) << ',' << format_value(e.variance) << ','
               << e.n_pulls << "\n";
        }

    for (const TestOutcome& t : tests)
        std::cout << "arm " << (t.arm + 1) << " vs arm " << (params.baseline + 1) << ": z = "
                  << format_value(t.z) << (t.reject ? " (reject)" : " (no reject)") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ROGUE bandit simulator: nonstationary bandit policies with "
                 "power-constrained action clipping"};
    app.require_subcommand(1);

    RunFlags regret_flags;
    CLI::App* regret = app.add_subcommand(
        "simulate-regret", "run a regret experiment and emit regret_<policy>.csv");
    add_run_flags(regret, regret_flags);

    RunFlags power_flags;
    CLI::App* power = app.add_subcommand(
        "power-experiment", "run a multi-user power experiment and emit power_summary.csv");
    add_run_flags(power, power_flags);

    std::string pmin_spec;
    CLI::App* pmin = app.add_subcommand(
        "compute-pmin", "evaluate the exploration floor for a trial design");
    pmin->add_option("--spec", pmin_spec, "power design spec (JSON)")->required();

    std::string clip_p;
    double clip_lo = 0.0, clip_hi = 1.0;
    CLI::App* clip = app.add_subcommand(
        "clip", "project a probability vector onto [pmin, pmax] box constraints");
    clip->add_option("--p", clip_p, "comma-separated probabilities")->required();
    clip->add_option("--pmin", clip_lo, "probability floor")->required();
    clip->add_option("--pmax", clip_hi, "probability ceiling")->required();

    FitFlags fit_flags;
    CLI::App* fit = app.add_subcommand(
        "fit-em", "fit one arm's dynamics from an interaction log by profile likelihood");
    fit->add_option("--log", fit_flags.log_path, "interaction log (JSON)")->required();
    fit->add_option("--out", fit_flags.out_path, "fitted parameters (JSON)")->required();
    fit->add_option("--arm", fit_flags.arm, "1-based arm index (default 1)");
    fit->add_option("--k", fit_flags.cfg.k_known, "known drift constant K (default 0)");
    fit->add_option("--grid-min", fit_flags.cfg.grid_min, "smallest candidate A");
    fit->add_option("--grid-max", fit_flags.cfg.grid_max, "largest candidate A");
    fit->add_option("--grid-step", fit_flags.cfg.grid_step, "candidate A spacing");

    EstimateFlags est_flags;
    CLI::App* est = app.add_subcommand(
        "estimate", "pooled treatment-effect estimates and family-wise tests from a log");
    est->add_option("--log", est_flags.log_path, "interaction log (JSON)")->required();
    est->add_option("--params", est_flags.params_path, "true arm parameters + test config (JSON)")
        ->required();
    est->add_option("--out", est_flags.out_path, "pooled estimates (CSV); per-user detail "
                    "goes to <out-stem>_users.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (regret->parsed()) return cmd_simulate_regret(regret_flags);
        if (power->parsed()) return cmd_power_experiment(power_flags);
        if (pmin->parsed()) return cmd_compute_pmin(pmin_spec);
        if (clip->parsed()) return cmd_clip(clip_p, clip_lo, clip_hi);
        if (fit->parsed()) return cmd_fit(fit_flags);
        if (est->parsed()) return cmd_estimate(est_flags);
    } catch (const InfeasibleDesign& e) {
        std::cerr << "infeasible design: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidDistribution& e) {
        std::cerr << "invalid distribution: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
