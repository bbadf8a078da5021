// fracadapt: simulate fractional series, estimate them with one-step adaptive
// updates, and run the Monte Carlo efficiency study.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracadapt/adapt.hpp"
#include "fracadapt/initial.hpp"
#include "fracadapt/innovations.hpp"
#include "fracadapt/mc.hpp"
#include "fracadapt/model.hpp"
#include "fracadapt/residuals.hpp"
#include "fracadapt/score.hpp"
#include "fracadapt/series_io.hpp"

using namespace fracadapt;

namespace {

std::string num(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string vec(const Eigen::VectorXd& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i));
    return s + "]";
}

// "farima:p,q"
ModelSpec parse_model(const std::string& text) {
    const std::string prefix = "farima:";
    if (text.rfind(prefix, 0) != 0) throw InvalidArgument("model must look like farima:p,q");
    const auto body = text.substr(prefix.size());
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw InvalidArgument("model must look like farima:p,q");
    int p = 0, q = 0;
    try {
        p = std::stoi(body.substr(0, comma));
        q = std::stoi(body.substr(comma + 1));
    } catch (const std::exception&) {
        throw InvalidArgument("model must look like farima:p,q");
    }
    return ModelSpec::farima(p, q);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Common {
    int threads = 0;
    std::string format = "text";
};

struct SimulateArgs {
    double xi = 0.0;
    int n = 64;
    std::uint64_t seed = 1;
    std::string out;
    std::string dist = "gaussian";
    std::string model = "farima:0,0";
    std::vector<double> ar, ma, trend, mu;
    double sigma2 = 1.0;
    int burn_in = 5000;
};

int run_simulate(const SimulateArgs& a) {
    ModelSpec spec = parse_model(a.model);
    if (static_cast<int>(a.ar.size()) != spec.p11 || static_cast<int>(a.ma.size()) != spec.p12)
        throw InvalidArgument("--ar/--ma counts must match the model orders");
    spec.ar = to_vector(a.ar);
    spec.ma = to_vector(a.ma);
    spec.regression_exponents = a.trend;
    spec.validate();
    if (a.mu.size() != a.trend.size()) throw InvalidArgument("--mu needs one coefficient per --trend exponent");

    Eigen::VectorXd nu(spec.p11 + spec.p12);
    nu << spec.ar, spec.ma;
    const ThetaFull theta{a.xi, nu, Eigen::VectorXd(0), a.sigma2};
    Engine rng = make_stream(a.seed, {0x73696dULL});
    const Eigen::VectorXd eps = sample(InnovationDist::parse(a.dist), a.n + a.burn_in, rng);
    Series y = simulate(theta, spec, a.n, eps, a.burn_in);
    if (!a.trend.empty()) {
        const RegressionDesign d = regressors(a.trend, a.xi, a.n);
        y += d.z * to_vector(a.mu);
    }
    const std::string header = "fracadapt simulate xi=" + num(a.xi, "%.17g") + " n=" + std::to_string(a.n) +
                               " dist=" + a.dist + " seed=" + std::to_string(a.seed);
    if (a.out.empty())
        write_series(std::cout, y, header);
    else
        write_series_file(a.out, y, header);
    return 0;
}

struct EstimateArgs {
    std::string in;
    std::string model = "farima:0,0";
    std::vector<double> trend;
    std::string phi = "id";
    int L = 1;
    std::string initial = "whittle";
    double grid_lo = -0.4, grid_hi = 1.75, grid_step = 0.01;
    int taper_order = 2;
    std::string parametric;
    std::vector<double> wald_xi;
    bool wald_trend_zero = false;
    bool one_sided = false;
};

int run_estimate(const EstimateArgs& a, const Common& c) {
    const Eigen::VectorXd y = read_series_file(a.in);
    if (y.size() < 2) throw DegenerateData("series '" + a.in + "' has " + std::to_string(y.size()) + " observations");
    ModelSpec spec = parse_model(a.model);
    spec.regression_exponents = a.trend;
    spec.validate();
    const XiGrid grid{a.grid_lo, a.grid_hi, a.grid_step};
    const InitialMethod method = parse_initial_method(a.initial);
    const Eigen::Index n = y.size();

    // Trend terms are classified against a preliminary memory estimate.
    double xi_class = 0.0;
    std::optional<InitialFit> whittle;
    if (method == InitialMethod::tapered_whittle || (!a.trend.empty() && n >= 32)) {
        whittle = tapered_whittle_fit(y, spec, WhittleOptions{a.taper_order, grid});
        xi_class = whittle->theta1.xi;
    }
    const RegressionDesign design = regressors(a.trend, xi_class, n);

    InitialFit init;
    if (method == InitialMethod::css) {
        init = css_fit(y, design, spec, grid);
    } else {
        init = *whittle;
        init.theta2 = profile_trend(y, design, spec, init.theta1);
    }

    EstimationResult est;
    std::string label;
    if (!a.parametric.empty()) {
        est = one_step_parametric(y, design, spec, init, ParametricFamily::parse(a.parametric));
        label = "parametric (" + a.parametric + ")";
    } else {
        const BasisConfig basis{BasisConfig::parse_phi(a.phi), a.L};
        est = one_step_adaptive(y, design, spec, init, basis);
        label = "adaptive (phi=" + BasisConfig::phi_name(basis.phi) + ", L=" + std::to_string(a.L) + ")";
    }
    const double xi_raw = est.theta1_hat.xi;
    const bool trimmed = xi_raw < grid.lo || xi_raw > grid.hi;
    Eigen::VectorXd th1 = est.theta1_hat.packed();
    th1(0) = std::clamp(xi_raw, grid.lo, grid.hi);

    std::vector<std::string> names{"xi"};
    for (int k = 1; k <= spec.p11; ++k) names.push_back("ar" + std::to_string(k));
    for (int k = 1; k <= spec.p12; ++k) names.push_back("ma" + std::to_string(k));
    std::vector<std::string> trend_names;
    for (double chi : design.chi) trend_names.push_back("trend[t^" + num(chi) + "]");

    if (c.format == "csv") {
        std::cout << "param,initial,estimate,std_error\n";
        const Eigen::VectorXd init1 = init.theta1.packed();
        for (std::size_t i = 0; i < names.size(); ++i)
            std::cout << names[i] << ',' << num(init1(i), "%.17g") << ',' << num(th1(i), "%.17g") << ','
                      << num(std::sqrt(est.cov1(i, i)), "%.17g") << '\n';
        for (std::size_t j = 0; j < trend_names.size(); ++j)
            std::cout << trend_names[j] << ',' << num(init.theta2(j), "%.17g") << ','
                      << num(est.theta2_hat(j), "%.17g") << ',' << num(std::sqrt(est.cov2(j, j)), "%.17g") << '\n';
        std::cout << "sigma2," << num(init.sigma2, "%.17g") << ",,\n";
    } else {
        std::cout << "observations: " << n << '\n';
        if (!a.trend.empty()) {
            std::cout << "trend exponents estimated: " << design.p2() << ", dropped (tau < xi - 1/2): "
                      << design.t1.size() << ", absorbed (tau = xi): " << design.t2.size() << '\n';
        }
        std::cout << "initial (" << initial_method_name(init.method) << "): xi = " << num(init.theta1.xi)
                  << (init.hit_boundary ? " [boundary]" : "") << ", nu = " << vec(init.theta1.nu)
                  << ", theta2 = " << vec(init.theta2) << ", sigma2 = " << num(init.sigma2) << '\n';
        std::cout << "one-step " << label << ": J = " << num(est.J_used) << '\n';
        for (std::size_t i = 0; i < names.size(); ++i)
            std::cout << "  " << names[i] << " = " << num(th1(i)) << "  (se " << num(std::sqrt(est.cov1(i, i)))
                      << ")" << (i == 0 && trimmed ? "  [trimmed from " + num(xi_raw) + "]" : "") << '\n';
        for (std::size_t j = 0; j < trend_names.size(); ++j)
            std::cout << "  " << trend_names[j] << " = " << num(est.theta2_hat(j)) << "  (se "
                      << num(std::sqrt(est.cov2(j, j))) << ", D_n " << num(est.dn.diagonal(j)) << ")\n";
        if (est.theta3_hat.size() > 0) std::cout << "  theta3 = " << vec(est.theta3_hat) << '\n';
        std::cout << "cov(theta1):\n" << est.cov1 << '\n';
        if (est.cov2.size() > 0) std::cout << "cov(theta2):\n" << est.cov2 << '\n';
    }

    if (!a.wald_xi.empty()) {
        LinearRestriction restr;
        restr.R = Eigen::MatrixXd::Zero(1, spec.p1());
        restr.R(0, 0) = 1.0;
        restr.r = Eigen::VectorXd::Constant(1, a.wald_xi.front());
        const WaldResult w = wald_test(est, restr, a.one_sided);
        std::cout << "wald xi = " << num(a.wald_xi.front()) << (a.one_sided ? " (one-sided >)" : "")
                  << ": statistic = " << num(w.statistic) << ", p-value = " << num(w.p_value) << '\n';
    }
    if (a.wald_trend_zero) {
        if (design.p2() == 0) throw InvalidRestriction("no estimable trend terms to test");
        LinearRestriction restr{LinearRestriction::Block::theta2, Eigen::MatrixXd::Identity(design.p2(), design.p2()),
                                Eigen::VectorXd::Zero(design.p2())};
        const WaldResult w = wald_test(est, restr, false);
        std::cout << "wald theta2 = 0: statistic = " << num(w.statistic) << ", df = " << w.df
                  << ", p-value = " << num(w.p_value) << '\n';
    }
    return 0;
}

struct McArgs {
    std::string dist;
    int table = 0;
    int n = 64;
    int reps = 1000;
    std::uint64_t seed = 1;
    std::string out;
    std::string initial = "whittle";
    std::vector<double> xi0;
    std::vector<std::string> phi;
    std::vector<int> L;
    int burn_in = 5000;
    int taper_order = 2;
    double grid_step = 0.01;
};

int run_mc(const McArgs& a, const Common& c) {
    McConfig cfg = a.table > 0 ? table_preset(a.table) : McConfig{};
    if (!a.dist.empty()) cfg.dist = InnovationDist::parse(a.dist);
    if (a.table == 0 && a.dist.empty()) throw InvalidArgument("mc needs --table or --dist");
    cfg.n = a.n;
    cfg.reps = a.reps;
    cfg.base_seed = a.seed;
    cfg.initial = parse_initial_method(a.initial);
    cfg.burn_in = a.burn_in;
    cfg.taper_order = a.taper_order;
    cfg.grid_step = a.grid_step;
    cfg.threads = c.threads;
    if (!a.xi0.empty()) cfg.xi0_list = a.xi0;
    if (!a.phi.empty()) {
        cfg.phi_kinds.clear();
        for (const auto& p : a.phi) cfg.phi_kinds.push_back(BasisConfig::parse_phi(p));
    }
    if (!a.L.empty()) cfg.L_list = a.L;

    const McTables tables = run_tables(cfg);
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw IoError("cannot open '" + a.out + "' for writing");
        f << tables.to_csv();
        if (!f) throw IoError("write to '" + a.out + "' failed");
    }
    std::cout << (c.format == "csv" ? tables.to_csv() : tables.to_text());
    return 0;
}

struct ScoreDemoArgs {
    std::string dist = "gaussian";
    int n = 100000;
    std::uint64_t seed = 1;
    std::string phi = "id";
    int L = 4;
};

int run_score_demo(const ScoreDemoArgs& a, const Common& c) {
    const InnovationDist dist = InnovationDist::parse(a.dist);
    Engine rng = make_stream(a.seed, {0x73636f7265ULL});
    const Eigen::VectorXd h = sample(dist, a.n, rng);
    const PhiKind phi = BasisConfig::parse_phi(a.phi);
    const bool csv = c.format == "csv";
    if (csv)
        std::cout << "L,J_L,rcond,a_hat\n";
    else
        std::cout << "distribution " << dist.name() << ", n = " << a.n << ", true information " << num(true_info(dist))
                  << '\n';
    for (int L = 1; L <= a.L; ++L) {
        try {
            const ScoreFit fit = fit_score(h, {phi, L});
            if (csv) {
                std::cout << L << ',' << num(fit.J_L, "%.17g") << ',' << num(fit.rcond, "%.6g") << ',';
                for (Eigen::Index i = 0; i < fit.a_hat.size(); ++i) std::cout << (i ? ";" : "") << num(fit.a_hat(i), "%.17g");
                std::cout << '\n';
            } else {
                std::cout << "L = " << L << ": J_L = " << num(fit.J_L) << ", a_hat = " << vec(fit.a_hat)
                          << ", rcond(W) = " << num(fit.rcond, "%.3g") << '\n';
            }
        } catch (const SingularBasis& e) {
            std::cout << (csv ? "" : "L = " + std::to_string(L) + ": ") << e.what() << '\n';
        }
    }
    return 0;
}

// Expands "<command> --config FILE" into the flags it names. Keys already given
// on the command line win; "key=true" becomes a bare flag and "key=false" is dropped.
std::vector<std::string> expand_command_config(std::vector<std::string> args, const std::vector<std::string>& commands) {
    auto cmd = std::find_if(args.begin() + 1, args.end(), [&](const std::string& a) {
        return std::find(commands.begin(), commands.end(), a) != commands.end();
    });
    if (cmd == args.end()) return args;
    const auto first = cmd + 1;
    std::string path;
    auto it = first;
    for (; it != args.end(); ++it) {
        if (*it == "--config" && it + 1 != args.end()) {
            path = *(it + 1);
            it = args.erase(it, it + 2);
            break;
        }
        if (it->rfind("--config=", 0) == 0) {
            path = it->substr(9);
            it = args.erase(it);
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        const auto e = v.find_last_not_of(" \t\r");
        v = b == std::string::npos ? "" : v.substr(b, e - b + 1);
        if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
        return v;
    };
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("config line without '=': " + line);
        const std::string flag = "--" + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (given(flag) || value == "false") continue;
        extra.push_back(flag);
        if (value != "true") extra.push_back(value);
    }
    const auto pos = std::find_if(args.begin() + 1, args.end(), [&](const std::string& a) {
        return std::find(commands.begin(), commands.end(), a) != commands.end();
    });
    args.insert(pos + 1, extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive estimation of fractional time series"};
    app.set_config("--config", "", "key=value file for the global flags ([command] sections reach subcommands)");
    app.require_subcommand(1);
    Common common;
    app.add_option("--threads", common.threads, "Worker threads for Monte Carlo runs (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "text"}));

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a type-II FARIMA series");
    simulate_cmd->add_option("--xi", sim.xi, "Memory parameter");
    simulate_cmd->add_option("--n", sim.n, "Sample size")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sim.seed, "Random seed");
    simulate_cmd->add_option("--out", sim.out, "Output series file (stdout if omitted)");
    simulate_cmd->add_option("--dist", sim.dist, "Innovation law")
        ->check(CLI::IsMember({"gaussian", "mixsym", "mixasym", "laplace", "t5"}));
    simulate_cmd->add_option("--model", sim.model, "farima:p,q");
    simulate_cmd->add_option("--ar", sim.ar, "AR coefficients")->delimiter(',');
    simulate_cmd->add_option("--ma", sim.ma, "MA coefficients")->delimiter(',');
    simulate_cmd->add_option("--trend", sim.trend, "Trend exponents tau1,tau2,...")->delimiter(',');
    simulate_cmd->add_option("--mu", sim.mu, "Trend coefficients, one per exponent")->delimiter(',');
    simulate_cmd->add_option("--sigma2", sim.sigma2, "Innovation variance")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--burn-in", sim.burn_in, "Pre-sample length")->check(CLI::NonNegativeNumber);

    EstimateArgs est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Initial and one-step efficient estimates");
    estimate_cmd->add_option("--in", est.in, "Input series file")->required();
    estimate_cmd->add_option("--model", est.model, "farima:p,q");
    estimate_cmd->add_option("--trend", est.trend, "Trend exponents tau1,tau2,...")->delimiter(',');
    estimate_cmd->add_option("--phi", est.phi, "Score basis")->check(CLI::IsMember({"id", "identity", "bounded"}));
    estimate_cmd->add_option("--L", est.L, "Number of basis functions")->check(CLI::PositiveNumber);
    estimate_cmd->add_option("--initial", est.initial, "Initial estimator")->check(CLI::IsMember({"css", "whittle"}));
    estimate_cmd->add_option("--grid-lo", est.grid_lo, "Lower end of the xi search interval");
    estimate_cmd->add_option("--grid-hi", est.grid_hi, "Upper end of the xi search interval");
    estimate_cmd->add_option("--grid-step", est.grid_step, "xi grid step")->check(CLI::PositiveNumber);
    estimate_cmd->add_option("--taper-order", est.taper_order, "Whittle frequency spacing")->check(CLI::PositiveNumber);
    estimate_cmd->add_option("--parametric", est.parametric, "Use a parametric innovation family instead")
        ->check(CLI::IsMember({"gaussian", "laplace", "t"}));
    estimate_cmd->add_option("--wald-xi", est.wald_xi, "Wald test of xi = value")->expected(1);
    estimate_cmd->add_flag("--wald-trend-zero", est.wald_trend_zero, "Wald test of theta2 = 0");
    estimate_cmd->add_flag("--one-sided", est.one_sided, "One-sided alternative xi > value");

    McArgs mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo relative-efficiency tables");
    mc_cmd->add_option("--table", mc.table, "Preset 1..5 (gaussian, mixsym, mixasym, laplace, t5)")
        ->check(CLI::Range(1, 5));
    mc_cmd->add_option("--dist", mc.dist, "Innovation law")
        ->check(CLI::IsMember({"gaussian", "mixsym", "mixasym", "laplace", "t5"}));
    mc_cmd->add_option("--n", mc.n, "Sample size")->check(CLI::Range(32, 1 << 20));
    mc_cmd->add_option("--reps", mc.reps, "Replications per cell");
    mc_cmd->add_option("--seed", mc.seed, "Base seed");
    mc_cmd->add_option("--out", mc.out, "CSV output path");
    mc_cmd->add_option("--initial", mc.initial, "Initial estimator")->check(CLI::IsMember({"css", "whittle"}));
    mc_cmd->add_option("--xi0", mc.xi0, "True memory values")->delimiter(',');
    mc_cmd->add_option("--phi", mc.phi, "Score bases")->delimiter(',')->check(CLI::IsMember({"id", "identity", "bounded"}));
    mc_cmd->add_option("--L", mc.L, "Basis sizes")->delimiter(',');
    mc_cmd->add_option("--burn-in", mc.burn_in, "Pre-sample length")->check(CLI::NonNegativeNumber);
    mc_cmd->add_option("--taper-order", mc.taper_order, "Whittle frequency spacing")->check(CLI::PositiveNumber);
    mc_cmd->add_option("--grid-step", mc.grid_step, "xi grid step")->check(CLI::PositiveNumber);

    ScoreDemoArgs demo;
    auto* demo_cmd = app.add_subcommand("score-demo", "Fit the series score estimate to a simulated sample");
    demo_cmd->add_option("--dist", demo.dist, "Innovation law")
        ->check(CLI::IsMember({"gaussian", "mixsym", "mixasym", "laplace", "t5"}));
    demo_cmd->add_option("--n", demo.n, "Sample size")->check(CLI::PositiveNumber);
    demo_cmd->add_option("--seed", demo.seed, "Random seed");
    demo_cmd->add_option("--phi", demo.phi, "Score basis")->check(CLI::IsMember({"id", "identity", "bounded"}));
    demo_cmd->add_option("--L", demo.L, "Largest basis size")->check(CLI::PositiveNumber);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_command_config(std::move(args), {"simulate", "estimate", "mc", "score-demo"});
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (*simulate_cmd) return run_simulate(sim);
        if (*estimate_cmd) return run_estimate(est, common);
        if (*mc_cmd) return run_mc(mc, common);
        if (*demo_cmd) return run_score_demo(demo, common);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
