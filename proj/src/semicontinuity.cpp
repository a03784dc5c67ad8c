#include "stochrd/semicontinuity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "stochrd/errors.hpp"
#include "stochrd/parallel.hpp"
#include "stochrd/solver.hpp"

namespace stochrd {

double noise_deviation_bound(double alpha, double tau, double T, const WienerPath& w) {
    const std::ptrdiff_t first = w.grid_index(tau);
    const std::ptrdiff_t last = w.grid_index(tau + T);
    double eps = 0.0;
    for (std::ptrdiff_t k = first; k <= last; ++k) {
        const double aw = alpha * w.value_at_index(k);
        eps = std::max(eps, std::abs(std::exp(aw) - 1.0) + std::abs(std::exp(-aw) - 1.0));
    }
    return eps;
}

CertificateReport deviation_check(double alpha, double tau, const WienerPath& w, double T,
                                  const Field& u_tau, const ModelSpec& spec, double dt) {
    if (!(T > 0.0)) throw InvalidArgument("deviation_check: T must be > 0");
    const double eps = noise_deviation_bound(alpha, tau, T, w);

    SolveOptions options;
    options.ledger = false;
    options.snapshot_every = 1;
    const TrajectoryRecord noisy = solve_u_transform(u_tau, tau, tau + T, w, spec.with_alpha(alpha), dt, options);
    const TrajectoryRecord plain = solve_deterministic(u_tau, tau, tau + T, spec.with_alpha(0.0), dt, options);

    double sup_sq = 0.0;
    double at = tau;
    for (std::size_t k = 0; k < noisy.snapshots.size(); ++k) {
        const double d = l2_distance(noisy.snapshots[k].u, plain.snapshots[k].u);
        if (d * d > sup_sq) {
            sup_sq = d * d;
            at = noisy.snapshots[k].t;
        }
    }

    CertificateReport report;
    report.name = "deviation";
    report.tolerance = 0.0;
    report.location_t = at;
    report.metrics["alpha"] = alpha;
    report.metrics["epsilon"] = eps;
    report.metrics["sup_deviation_sq"] = sup_sq;
    report.metrics["ratio_sq"] = eps > 0.0 ? sup_sq / eps : 0.0;
    report.metrics["ratio"] = eps > 0.0 ? std::sqrt(sup_sq) / eps : 0.0;
    report.passed = std::isfinite(report.metrics["ratio_sq"]) && std::isfinite(report.metrics["ratio"]);
    report.worst_margin = report.passed ? 0.0 : -std::numeric_limits<double>::infinity();
    return report;
}

CertificateReport deviation_sweep(const std::vector<double>& alphas, double tau,
                                  const WienerPath& w, double T, const Field& u_tau,
                                  const ModelSpec& spec, double dt, double band) {
    if (alphas.empty()) throw InvalidArgument("deviation_sweep: empty alpha list");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0 && alphas[i] <= 1.0) || (i > 0 && !(alphas[i] < alphas[i - 1]))) {
            throw InvalidArgument("deviation_sweep: alphas must be decreasing in (0, 1]");
        }
    }
    CertificateReport report;
    report.name = "deviation_sweep";
    report.checks.resize(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
        report.checks[i] = deviation_check(alphas[i], tau, w, T, u_tau, spec, dt);
    });

    bool monotone = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const auto& m = report.checks[i].metrics;
        if (i > 0 && !(m.at("sup_deviation_sq") < report.checks[i - 1].metrics.at("sup_deviation_sq"))) {
            monotone = false;
        }
        lo = std::min(lo, m.at("ratio"));
        hi = std::max(hi, m.at("ratio"));
    }
    report.tolerance = 0.0;
    report.worst_margin = band * lo - hi;
    report.passed = monotone && report.worst_margin >= 0.0;
    report.metrics["monotone"] = monotone ? 1.0 : 0.0;
    report.metrics["ratio_min"] = lo;
    report.metrics["ratio_max"] = hi;
    report.metrics["band"] = band;
    return report;
}

CertificateReport uniform_bound_check(const std::vector<double>& alphas, double tau,
                                      const WienerPath& w, const ModelSpec& spec,
                                      const Grid& grid, const AbsorbingSpec& abs,
                                      double gap_rtol) {
    std::vector<double> sorted = alphas;
    for (double a : sorted) {
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("uniform_bound_check: alpha outside [0, 1]");
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    const double R = uniform_radius(tau, w, spec, grid, abs);
    const double M0 = deterministic_radius(tau, spec, grid, abs);

    CertificateReport dominated;
    dominated.name = "dominated_by_uniform_radius";
    dominated.worst_margin = std::numeric_limits<double>::infinity();
    CertificateReport converging;
    converging.name = "gap_to_deterministic";
    converging.worst_margin = std::numeric_limits<double>::infinity();

    bool strict = true;
    double previous_gap = std::numeric_limits<double>::infinity();
    for (double a : sorted) {
        const double M = absorbing_radius(tau, w, a, spec, grid, abs);
        const double gap = std::abs(M - M0);
        if (R - M < dominated.worst_margin) {
            dominated.worst_margin = R - M;
            dominated.metrics["worst_alpha"] = a;
        }
        if (!(gap < previous_gap)) strict = false;
        converging.worst_margin = std::min(converging.worst_margin, previous_gap - gap);
        previous_gap = gap;
    }
    dominated.passed = dominated.worst_margin >= 0.0;
    converging.metrics["final_gap"] = previous_gap;
    converging.metrics["gap_tolerance"] = gap_rtol * M0;
    converging.passed = converging.worst_margin >= 0.0 && previous_gap <= gap_rtol * M0;

    CertificateReport report;
    report.name = "uniform_bounds";
    report.metrics["R"] = R;
    report.metrics["M0"] = M0;
    report.metrics["strictly_decreasing"] = strict ? 1.0 : 0.0;
    report.worst_margin = std::min(dominated.worst_margin, converging.worst_margin);
    report.passed = dominated.passed && converging.passed;
    report.checks = {dominated, converging};
    return report;
}

double required_path_window(double tau, const AttractorConfig& config) {
    const double deepest = config.horizons.empty() ? 0.0 : config.horizons.back();
    return std::abs(tau) + deepest + config.absorbing.S + 1.0;
}

SweepResult sweep_alpha(double tau, std::uint64_t seed, const std::vector<double>& alphas,
                        const ModelSpec& spec, const AttractorConfig& config,
                        const TemperedFamilySpec& sampler, const SweepOptions& options) {
    if (alphas.empty()) throw InvalidArgument("sweep_alpha: empty alpha list");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0 && alphas[i] <= 1.0) || (i > 0 && !(alphas[i] < alphas[i - 1]))) {
            throw InvalidArgument("sweep_alpha: alphas must be decreasing in (0, 1]");
        }
    }
    const double window = options.path_window > 0.0 ? options.path_window
                                                    : required_path_window(tau, config);
    const WienerPath w = sample_two_sided_path(seed, window, options.path_step);
    const double k_tail = 0.5 * config.grid.half_width;

    SweepResult result;
    result.tau = tau;
    result.seed = seed;
    result.eps_semi = options.eps_semi > 0.0 ? options.eps_semi : 5.0 * config.eps_att;

    auto max_tail = [&](const AttractorApprox& a) {
        double worst = 0.0;
        for (const auto& e : a.endpoints) worst = std::max(worst, tail_mass(e, k_tail));
        return worst;
    };

    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    const AttractorApprox reference = pullback_ensemble(tau, w, 0.0, spec, config, sampler);
    SweepRow ref_row;
    ref_row.alpha = 0.0;
    ref_row.dist = 0.0;
    ref_row.absorbing_radius = deterministic_radius(tau, spec, config.grid, config.absorbing);
    ref_row.max_tail = max_tail(reference);
    ref_row.converged = reference.converged;
    ref_row.runtime_s = std::chrono::duration<double>(clock::now() - start).count();

    result.rows.resize(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
        const auto t0 = clock::now();
        const AttractorApprox approx = pullback_ensemble(tau, w, alphas[i], spec, config, sampler);
        SweepRow& row = result.rows[i];
        row.alpha = alphas[i];
        row.dist = hausdorff_semidist(approx.endpoints, reference.endpoints);
        row.absorbing_radius = absorbing_radius(tau, w, alphas[i], spec, config.grid, config.absorbing);
        row.max_tail = max_tail(approx);
        row.converged = approx.converged;
        row.runtime_s = std::chrono::duration<double>(clock::now() - t0).count();
    });
    result.rows.push_back(ref_row);

    const std::size_t n = alphas.size();
    CertificateReport smallest;
    smallest.name = "smallest_alpha_distance";
    smallest.tolerance = 0.0;
    smallest.worst_margin = result.eps_semi - result.rows[n - 1].dist;
    smallest.passed = smallest.worst_margin > 0.0;
    smallest.metrics["eps_semi"] = result.eps_semi;
    smallest.metrics["dist"] = result.rows[n - 1].dist;

    CertificateReport envelope;
    envelope.name = "suffix_max";
    envelope.tolerance = config.eps_att;
    envelope.worst_margin = std::numeric_limits<double>::infinity();
    double suffix = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) envelope.worst_margin = std::min(envelope.worst_margin, result.rows[i].dist - suffix);
        suffix = std::max(suffix, result.rows[i].dist);
    }
    if (n == 1) envelope.worst_margin = 0.0;
    envelope.passed = envelope.worst_margin >= -envelope.tolerance;

    bool all_converged = true;
    for (const auto& row : result.rows) all_converged = all_converged && row.converged;

    CertificateReport& contract = result.contract;
    contract.name = "sweep_alpha";
    contract.passed = smallest.passed && envelope.passed;
    contract.worst_margin = std::min(smallest.worst_margin, envelope.worst_margin + envelope.tolerance);
    contract.metrics["seed"] = static_cast<double>(seed);
    contract.metrics["all_converged"] = all_converged ? 1.0 : 0.0;
    contract.checks = {smallest, envelope};
    return result;
}

}  // namespace stochrd
