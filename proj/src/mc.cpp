#include "fracadapt/mc.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace fracadapt {

namespace {

std::string fmt_num(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

void McConfig::validate() const {
    if (reps < 1) throw InvalidArgument("reps must be at least 1");
    if (n < 32) throw InvalidArgument("n must be at least 32");
    if (!(trim_lo < trim_hi)) throw InvalidArgument("trim interval needs lo < hi");
    if (burn_in < 0) throw InvalidArgument("burn-in must be nonnegative");
    for (int L : L_list)
        if (L < 1) throw InvalidArgument("L must be at least 1");
}

McConfig table_preset(int table) {
    static const InnovationKind kinds[] = {InnovationKind::gaussian, InnovationKind::sym_mixture,
                                           InnovationKind::asym_mixture_scaled, InnovationKind::laplace_scaled,
                                           InnovationKind::t5_scaled};
    if (table < 1 || table > 5) throw InvalidArgument("table preset must be 1..5");
    McConfig cfg;
    cfg.dist = {kinds[table - 1]};
    return cfg;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

std::vector<McReplication> run_replications(const McConfig& cfg, double xi0, PhiKind phi, int L) {
    cfg.validate();
    const ModelSpec spec = ModelSpec::farima(0, 0);
    const ThetaFull theta0{xi0, Eigen::VectorXd(0), Eigen::VectorXd(0), 1.0};
    theta0.validate(spec);
    const XiGrid grid{cfg.trim_lo, cfg.trim_hi, cfg.grid_step};
    const BasisConfig basis{phi, L};
    const RegressionDesign design = no_trend(cfg.n);

    std::vector<McReplication> out(static_cast<std::size_t>(cfg.reps));
    parallel_for(cfg.reps, cfg.threads, [&](int r) {
        Engine rng = make_stream(cfg.base_seed, {static_cast<std::uint64_t>(cfg.dist.kind), std::bit_cast<std::uint64_t>(xi0),
                                                 static_cast<std::uint64_t>(phi), static_cast<std::uint64_t>(L),
                                                 static_cast<std::uint64_t>(r)});
        const Eigen::VectorXd eps = sample(cfg.dist, cfg.n + cfg.burn_in, rng);
        const Series y = simulate(theta0, spec, cfg.n, eps, cfg.burn_in);
        McReplication& rep = out[static_cast<std::size_t>(r)];
        try {
            const InitialFit init = cfg.initial == InitialMethod::css
                                        ? css_fit(y, design, spec, grid)
                                        : tapered_whittle_fit(y, spec, WhittleOptions{cfg.taper_order, grid});
            const EstimationResult est = one_step_adaptive(y, design, spec, init, basis);
            double xi_hat = est.theta1_hat.xi;
            if (!std::isfinite(xi_hat)) return;
            const bool trimmed = xi_hat < cfg.trim_lo || xi_hat > cfg.trim_hi;
            xi_hat = std::clamp(xi_hat, cfg.trim_lo, cfg.trim_hi);
            rep = {true, init.theta1.xi, xi_hat, init.hit_boundary || trimmed};
        } catch (const Error&) {
            rep.ok = false;
        }
    });
    return out;
}

McCell run_cell(const McConfig& cfg, double xi0, PhiKind phi, int L) {
    const auto reps = run_replications(cfg, xi0, phi, L);
    McCell cell;
    double se_init = 0.0, se_adapt = 0.0;
    for (const auto& r : reps) {
        if (!r.ok) {
            ++cell.failures;
            continue;
        }
        ++cell.used;
        if (r.boundary) ++cell.boundary_hits;
        se_init += (r.xi_initial - xi0) * (r.xi_initial - xi0);
        se_adapt += (r.xi_adaptive - xi0) * (r.xi_adaptive - xi0);
    }
    if (cell.used == 0) throw CellFailed("every replication failed");
    cell.mse_initial = se_init / cell.used;
    cell.mse_adaptive = se_adapt / cell.used;
    cell.ratio = cell.mse_adaptive / cell.mse_initial;
    return cell;
}

McTables run_tables(const McConfig& cfg) {
    cfg.validate();
    McTables tables;
    for (double xi0 : cfg.xi0_list)
        for (PhiKind phi : cfg.phi_kinds)
            for (int L : cfg.L_list) tables.rows.push_back({cfg.dist.name(), xi0, phi, L, run_cell(cfg, xi0, phi, L)});
    return tables;
}

const McRow* McTables::find(double xi0, PhiKind phi, int L) const {
    for (const auto& row : rows)
        if (std::abs(row.xi0 - xi0) < 1e-12 && row.phi == phi && row.L == L) return &row;
    return nullptr;
}

std::string McTables::to_csv() const {
    std::ostringstream os;
    os << "dist,xi0,phi,L,mse_initial,mse_adaptive,ratio,boundary_hits,failures\n";
    for (const auto& r : rows) {
        os << r.dist << ',' << fmt_num(r.xi0) << ',' << BasisConfig::phi_name(r.phi) << ',' << r.L << ','
           << fmt_num(r.cell.mse_initial, "%.17g") << ',' << fmt_num(r.cell.mse_adaptive, "%.17g") << ','
           << fmt_num(r.cell.ratio, "%.17g") << ',' << r.cell.boundary_hits << ',' << r.cell.failures << '\n';
    }
    return os.str();
}

std::string McTables::to_text() const {
    // rows: xi0; column groups: phi; columns: L
    std::vector<double> xis;
    std::vector<PhiKind> phis;
    std::vector<int> Ls;
    for (const auto& r : rows) {
        if (std::find(xis.begin(), xis.end(), r.xi0) == xis.end()) xis.push_back(r.xi0);
        if (std::find(phis.begin(), phis.end(), r.phi) == phis.end()) phis.push_back(r.phi);
        if (std::find(Ls.begin(), Ls.end(), r.L) == Ls.end()) Ls.push_back(r.L);
    }
    std::ostringstream os;
    if (!rows.empty()) os << "MSE(xi_hat)/MSE(xi_tilde), innovations: " << rows.front().dist << '\n';
    os << "        ";
    for (PhiKind phi : phis) {
        std::string label = phi == PhiKind::identity ? "phi=s" : "phi=s/sqrt(1+s^2)";
        label.resize(std::max<std::size_t>(label.size(), 7 * Ls.size()), ' ');
        os << " | " << label;
    }
    os << "\n   xi0  ";
    for (std::size_t g = 0; g < phis.size(); ++g) {
        os << " |";
        for (int L : Ls) os << "   L=" << L << ' ';
    }
    os << '\n';
    for (double xi : xis) {
        os << fmt_num(xi, "%6.2f") << "  ";
        for (PhiKind phi : phis) {
            os << " |";
            for (int L : Ls) {
                const McRow* r = find(xi, phi, L);
                os << ' ' << (r ? fmt_num(r->cell.ratio, "%6.2f") : std::string("     -"));
            }
        }
        os << '\n';
    }
    return os.str();
}

std::vector<DeltaPoint> delta_diagnostic(double xi0, const InnovationDist& dist, int n, int reps,
                                         std::uint64_t base_seed, const ModelSpec& spec, int burn_in, int threads) {
    if (reps < 1) throw InvalidArgument("reps must be at least 1");
    if (n < 1) throw InvalidArgument("n must be positive");
    spec.validate();
    Eigen::VectorXd nu(spec.p11 + spec.p12);
    nu << spec.ar, spec.ma;
    const ThetaFull theta0{xi0, nu, Eigen::VectorXd(0), 1.0};
    theta0.validate(spec);
    const FilterCoeffs alpha = ar_coeffs(theta0.theta1(), spec, n);
    const double sigma0 = std::sqrt(theta0.sigma2);

    Eigen::MatrixXd sq(n, reps);
    parallel_for(reps, threads, [&](int r) {
        Engine rng = make_stream(base_seed, {0x64656c7461ULL, static_cast<std::uint64_t>(dist.kind),
                                             std::bit_cast<std::uint64_t>(xi0), static_cast<std::uint64_t>(r)});
        const Eigen::VectorXd eps = sample(dist, n + burn_in, rng);
        const Series x = simulate(theta0, spec, n, eps, burn_in);
        const Series e = apply_filter(alpha, x);
        sq.col(r) = (e - sigma0 * eps.tail(n)).array().square().matrix();
    });

    std::vector<DeltaPoint> out(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        const double m = sq.row(t).sum() / reps;
        out[static_cast<std::size_t>(t)] = {t + 1, m, (t + 1) * m};
    }
    return out;
}

}  // namespace fracadapt
