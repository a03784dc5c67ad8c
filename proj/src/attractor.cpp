#include "stochrd/attractor.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "stochrd/cocycle.hpp"
#include "stochrd/errors.hpp"
#include "stochrd/parallel.hpp"

namespace stochrd {

namespace {

double weighted_radius(double tau, const ModelSpec& spec, const Grid& grid,
                       const AbsorbingSpec& abs, const std::function<double(double)>& weight) {
    if (!(abs.c_abs > 0.0)) throw InvalidArgument("absorbing radius: c_abs must be > 0");
    const bool separable = spec.g.family != ForcingFamily::custom;
    const double profile_sq = (separable && spec.g.family != ForcingFamily::zero)
                                  ? l2_squared(Field::from_function(grid, spec.g.profile))
                                  : 0.0;
    auto g_sq = [&](double t) {
        if (!separable) return forcing_norm_sq(spec.g, t, grid);
        const double a = spec.g.amplitude * spec.g.modulation(t);
        return a * a * profile_sq;
    };
    auto h = [&](double s) { return weight(s) * (1.0 + g_sq(s + tau)); };
    return abs.c_abs * std::sqrt(quad_exp(h, spec.lambda, abs.S, abs.step));
}

void require_window(const WienerPath& w, double depth) {
    if (w.t_min() > -depth + 1e-9) {
        throw WindowExceeded("path window [" + std::to_string(w.t_min()) + ", " +
                             std::to_string(w.t_max()) + "] does not reach back to " +
                             std::to_string(-depth));
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t stream_id(std::size_t horizon_index, std::size_t member, double tau) {
    std::uint64_t tau_bits;
    static_assert(sizeof(tau_bits) == sizeof(tau));
    std::memcpy(&tau_bits, &tau, sizeof(tau));
    return splitmix64(splitmix64(horizon_index) ^ splitmix64(member + 0x51ed27ull) ^ tau_bits);
}

}  // namespace

double absorbing_radius(double tau, const WienerPath& w, double alpha, const ModelSpec& spec,
                        const Grid& grid, const AbsorbingSpec& abs) {
    require_window(w, abs.S);
    return weighted_radius(tau, spec, grid, abs,
                           [&](double s) { return std::exp(-2.0 * alpha * w.value_at(s)); });
}

double deterministic_radius(double tau, const ModelSpec& spec, const Grid& grid,
                            const AbsorbingSpec& abs) {
    return weighted_radius(tau, spec, grid, abs, [](double) { return 1.0; });
}

double uniform_radius(double tau, const WienerPath& w, const ModelSpec& spec, const Grid& grid,
                      const AbsorbingSpec& abs) {
    require_window(w, abs.S);
    return weighted_radius(tau, spec, grid, abs,
                           [&](double s) { return std::exp(2.0 * std::abs(w.value_at(s))); });
}

double TemperedFamilySpec::radius(double tau, const WienerPath& w, double alpha,
                                  const ModelSpec& spec, const Grid& grid,
                                  const AbsorbingSpec& abs) const {
    double r = 0.0;
    switch (kind) {
        case Radius::constant:
            r = value;
            break;
        case Radius::absorbing_ball:
            r = value * absorbing_radius(tau, w, alpha, spec, grid, abs);
            break;
        case Radius::custom:
            if (!custom) throw InvalidArgument("tempered family: custom radius without a function");
            r = custom(tau, w);
            break;
    }
    if (!(r > 0.0)) throw InvalidArgument("tempered family: radius must be > 0");
    return r;
}

Field TemperedFamilySpec::draw(const Grid& grid, double r, std::uint64_t stream) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> fraction(min_fraction, 1.0);

    std::vector<double> coefficients(std::max<std::size_t>(modes, 1));
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        coefficients[k] = normal(engine) / static_cast<double>(k + 1);
    }
    const double target = fraction(engine) * r;
    const double L = grid.half_width;
    Field field = Field::from_function(grid, [&](double x) {
        double sum = 0.0;
        for (std::size_t k = 0; k < coefficients.size(); ++k) {
            sum += coefficients[k] *
                   std::sin(static_cast<double>(k + 1) * std::numbers::pi * (x + L) / (2.0 * L));
        }
        return sum;
    });
    const double norm = std::sqrt(l2_squared(field));
    if (norm > 0.0) field *= target / norm;
    return field;
}

double hausdorff_semidist(const std::vector<Field>& a, const std::vector<Field>& b) {
    if (a.empty() || b.empty()) throw InvalidArgument("hausdorff_semidist: sets must be nonempty");
    const Grid& grid = a.front().grid();
    for (const auto& f : a) {
        if (!(f.grid() == grid)) throw InvalidArgument("hausdorff_semidist: grid mismatch");
    }
    for (const auto& f : b) {
        if (!(f.grid() == grid)) throw InvalidArgument("hausdorff_semidist: grid mismatch");
    }
    std::vector<double> nearest(a.size(), 0.0);
    parallel_for(a.size(), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b) best = std::min(best, l2_distance(a[i], y));
        nearest[i] = best;
    });
    double worst = 0.0;
    for (double d : nearest) worst = std::max(worst, d);
    return worst;
}

double hausdorff_distance(const std::vector<Field>& a, const std::vector<Field>& b) {
    return std::max(hausdorff_semidist(a, b), hausdorff_semidist(b, a));
}

AttractorApprox pullback_ensemble(double tau, const WienerPath& w, double alpha,
                                  const ModelSpec& spec, const AttractorConfig& config,
                                  const TemperedFamilySpec& sampler) {
    const auto& horizons = config.horizons;
    if (horizons.empty()) throw InvalidArgument("pullback_ensemble: no horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(horizons[i] > 0.0) || (i > 0 && !(horizons[i] > horizons[i - 1]))) {
            throw InvalidArgument("pullback_ensemble: horizons must be positive and increasing");
        }
    }
    if (config.members < 1) throw InvalidArgument("pullback_ensemble: need at least one member");
    const double extra = sampler.kind == TemperedFamilySpec::Radius::absorbing_ball ? config.absorbing.S : 0.0;
    require_window(w, horizons.back() + extra);

    AttractorApprox out;
    out.tau = tau;
    out.seed = w.seed();
    out.alpha = alpha;
    out.horizons = horizons;
    out.members = config.members;

    std::vector<Field> previous;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        const double t = horizons[i];
        const WienerPath pulled = w.shifted(-t);
        const double r = sampler.radius(tau - t, pulled, alpha, spec, config.grid, config.absorbing);
        out.initial_radii.push_back(r);
        std::vector<Field> current(config.members, Field(config.grid));
        parallel_for(config.members, [&](std::size_t m) {
            const Field u0 = sampler.draw(config.grid, r, stream_id(i, m, tau));
            current[m] = phi({t, tau - t, pulled, alpha, u0}, spec, config.dt);
        });
        if (!previous.empty()) out.set_distances.push_back(hausdorff_distance(previous, current));
        previous = std::move(current);
    }
    for (auto& f : previous) {
        bool duplicate = false;
        for (const auto& kept : out.endpoints) {
            if (l2_distance(f, kept) <= config.dedup) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) out.endpoints.push_back(std::move(f));
    }
    out.converged = !out.set_distances.empty() && out.set_distances.back() < config.eps_att;
    return out;
}

double attractor_periodicity_check(double tau, double period, const WienerPath& w, double alpha,
                                   const ModelSpec& spec, const AttractorConfig& config,
                                   const TemperedFamilySpec& sampler) {
    if (!(period > 0.0) || !w.on_grid(period)) {
        throw InvalidArgument("attractor_periodicity_check: period must be positive and on the time grid");
    }
    const double steps = period / config.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
        throw InvalidArgument("attractor_periodicity_check: period must be a multiple of dt");
    }
    if (!spec.g.has_period(period)) {
        throw InvalidArgument("attractor_periodicity_check: forcing is not periodic with this period");
    }
    const AttractorApprox a = pullback_ensemble(tau, w, alpha, spec, config, sampler);
    const AttractorApprox b = pullback_ensemble(tau + period, w, alpha, spec, config, sampler);
    return hausdorff_distance(a.endpoints, b.endpoints);
}

CertificateReport absorption_report(double tau, const WienerPath& w, double alpha,
                                    const ModelSpec& spec, const AttractorConfig& config,
                                    const TemperedFamilySpec& sampler) {
    const AttractorApprox approx = pullback_ensemble(tau, w, alpha, spec, config, sampler);
    const double radius = absorbing_radius(tau, w, alpha, spec, config.grid, config.absorbing);
    double largest = 0.0;
    for (const auto& e : approx.endpoints) largest = std::max(largest, std::sqrt(l2_squared(e)));
    CertificateReport report;
    report.name = "absorption";
    report.tolerance = 0.0;
    report.worst_margin = radius - largest;
    report.passed = report.worst_margin >= 0.0;
    report.location_t = tau;
    report.metrics["absorbing_radius"] = radius;
    report.metrics["max_endpoint_norm"] = largest;
    report.metrics["initial_radius"] = approx.initial_radii.back();
    report.metrics["alpha"] = alpha;
    return report;
}

double calibrate_c(const ModelSpec& spec, const AttractorConfig& config,
                   const CalibrationConfig& calibration) {
    AttractorConfig run = config;
    run.horizons = {calibration.horizon};
    run.members = calibration.members;
    AbsorbingSpec unit = config.absorbing;
    unit.c_abs = 1.0;

    TemperedFamilySpec sampler;
    sampler.kind = TemperedFamilySpec::Radius::constant;
    sampler.value = calibration.initial_radius;

    double needed = 0.0;
    for (std::uint64_t seed : calibration.seeds) {
        const WienerPath w = sample_two_sided_path(seed, calibration.path_window, calibration.path_step);
        sampler.seed = seed;
        for (double alpha : calibration.alphas) {
            const AttractorApprox approx =
                pullback_ensemble(calibration.tau, w, alpha, spec, run, sampler);
            const double m1 = absorbing_radius(calibration.tau, w, alpha, spec, config.grid, unit);
            for (const auto& e : approx.endpoints) needed = std::max(needed, std::sqrt(l2_squared(e)) / m1);
        }
    }
    for (int k = 0;; ++k) {
        const double c = calibration.c_start * std::pow(2.0, 0.5 * k);
        if (c > calibration.c_cap) {
            throw CalibrationFailure("calibrate_c: no constant below the cap absorbs the ensemble");
        }
        if (c >= needed) return calibration.safety * c;
    }
}

namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

CertificateReport tail_uniformity_report(double tau, const WienerPath& w,
                                         const std::vector<double>& alphas, const ModelSpec& spec,
                                         const std::vector<double>& ks,
                                         const AttractorConfig& config,
                                         const TemperedFamilySpec& sampler,
                                         const TailTargets& targets) {
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("tail_uniformity_report: alpha outside [0, 1]");
    }
    CertificateReport report;
    report.name = "tail_uniformity";
    report.tolerance = 0.0;
    std::vector<double> worst_over_alpha(ks.size(), 0.0);
    for (double alpha : alphas) {
        const AttractorApprox approx = pullback_ensemble(tau, w, alpha, spec, config, sampler);
        for (std::size_t j = 0; j < ks.size(); ++j) {
            double tail = 0.0;
            for (const auto& e : approx.endpoints) tail = std::max(tail, tail_mass(e, ks[j]));
            report.metrics["tail[alpha=" + fmt_g(alpha) + ",k=" + fmt_g(ks[j]) + "]"] = tail;
            worst_over_alpha[j] = std::max(worst_over_alpha[j], tail);
        }
    }
    report.passed = true;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (double eta : targets.etas) {
        double best_tail = std::numeric_limits<double>::infinity();
        double smallest_k = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 0; j < ks.size(); ++j) {
            best_tail = std::min(best_tail, worst_over_alpha[j]);
            if (worst_over_alpha[j] <= eta && !(ks[j] >= smallest_k)) smallest_k = ks[j];
        }
        CertificateReport c;
        c.name = "eta=" + fmt_g(eta);
        c.worst_margin = eta - best_tail;
        c.passed = c.worst_margin >= 0.0;
        c.metrics["smallest_k"] = smallest_k;
        report.passed = report.passed && c.passed;
        report.worst_margin = std::min(report.worst_margin, c.worst_margin);
        report.checks.push_back(std::move(c));
    }
    return report;
}

}  // namespace stochrd
