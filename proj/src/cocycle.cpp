#include "stochrd/cocycle.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "stochrd/errors.hpp"

namespace stochrd {

TrajectoryRecord phi_trajectory(const CocycleQuery& q, const ModelSpec& spec, double dt,
                                const SolveOptions& options) {
    if (!(q.elapsed > 0.0)) throw InvalidArgument("phi_trajectory: elapsed time must be > 0");
    const WienerPath driven = q.omega.shifted(-q.tau);
    return solve_u_transform(q.u_tau, q.tau, q.tau + q.elapsed, driven, spec.with_alpha(q.alpha),
                             dt, options);
}

Field phi(const CocycleQuery& q, const ModelSpec& spec, double dt) {
    if (q.elapsed < 0.0) throw InvalidArgument("phi: elapsed time must be >= 0");
    if (q.elapsed == 0.0) return q.u_tau;
    SolveOptions options;
    options.ledger = false;
    return phi_trajectory(q, spec, dt, options).final_u;
}

double cocycle_composition_defect(const ModelSpec& spec, double r, double s, double t,
                                  const WienerPath& omega, double alpha, const Field& u,
                                  double dt) {
    const Field one_leg = phi({t + s, r, omega, alpha, u}, spec, dt);
    const Field first = phi({s, r, omega, alpha, u}, spec, dt);
    const Field two_leg = phi({t, s + r, omega.shifted(s), alpha, first}, spec, dt);
    return l2_distance(one_leg, two_leg);
}

namespace {

double uniform_spacing(const std::vector<LedgerEntry>& ledger) {
    if (ledger.size() < 2) throw InvalidArgument("certificate: ledger needs at least two entries");
    const double dt = ledger[1].t - ledger[0].t;
    for (std::size_t k = 1; k < ledger.size(); ++k) {
        const double d = ledger[k].t - ledger[k - 1].t;
        if (!(d > 0.0) || std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(ledger[k].t))) {
            throw InvalidArgument("certificate: ledger times must be uniform and increasing");
        }
    }
    return dt;
}

double psi1_integral(const ModelSpec& spec, const Grid& grid) {
    if (spec.psi1.is_zero()) return 0.0;
    const Field psi = Field::from_function(grid, spec.psi1);
    double sum = 0.0;
    for (double v : psi.values()) sum += v;
    return sum * grid.spacing();
}

}  // namespace

CertificateReport energy_certificate(const TrajectoryRecord& rec, const ModelSpec& spec,
                                     double c_cert) {
    const auto& L = rec.ledger;
    const double dt = uniform_spacing(L);
    const double lambda = spec.lambda;
    const double c1 = 2.0 * psi1_integral(spec, rec.final_u.grid());
    const double decay = std::exp(-lambda * dt);

    // Quadrature matches the stepper: linear terms at the new level
    // (backward Euler), reaction and forcing at the old one.
    auto linear = [&](const LedgerEntry& e) { return 0.5 * lambda * e.v_sq + 2.0 * e.grad_v_sq; };
    auto reaction = [&](const LedgerEntry& e) { return 2.0 * spec.alpha1 * e.z2_u_pp; };
    auto supplied = [&](const LedgerEntry& e) { return (2.0 / lambda) * e.z2 * e.g_sq + c1 * e.z2; };

    CertificateReport report;
    report.name = "energy";
    report.tolerance = c_cert * rec.dt;
    report.worst_margin = std::numeric_limits<double>::infinity();

    double lhs_integral = 0.0;
    double rhs_integral = 0.0;
    double initial = L[0].v_sq;
    double lhs = L[0].v_sq, rhs = L[0].v_sq;
    for (std::size_t k = 0; k < L.size(); ++k) {
        if (k > 0) {
            lhs_integral = decay * lhs_integral + dt * (linear(L[k]) + decay * reaction(L[k - 1]));
            rhs_integral = decay * rhs_integral + dt * decay * supplied(L[k - 1]);
            initial *= decay;
        }
        lhs = L[k].v_sq + lhs_integral;
        rhs = initial + rhs_integral;
        const double margin = rhs - lhs;
        if (margin < report.worst_margin || std::isnan(margin)) {
            report.worst_margin = margin;
            report.location_t = L[k].t;
        }
    }
    report.passed = report.worst_margin >= -report.tolerance;
    report.metrics["final_lhs"] = lhs;
    report.metrics["final_rhs"] = rhs;
    report.metrics["c1"] = c1;
    return report;
}

namespace {

struct H1Audit {
    double margin;
    double lhs;
    double rhs;
};

H1Audit audit_h1(const std::vector<LedgerEntry>& L, std::size_t k, std::size_t window, double dt,
                 double c1) {
    double grad = 0.0, zg = 0.0, zz = 0.0;
    for (std::size_t j = k - window; j < k; ++j) {
        grad += 0.5 * dt * (L[j].grad_v_sq + L[j + 1].grad_v_sq);
        zg += 0.5 * dt * (L[j].z2 * L[j].g_sq + L[j + 1].z2 * L[j + 1].g_sq);
        zz += 0.5 * dt * (L[j].z2 + L[j + 1].z2);
    }
    const double rhs = (1.0 + c1) * grad + zg + zz;
    return {rhs - L[k].grad_v_sq, L[k].grad_v_sq, rhs};
}

}  // namespace

CertificateReport h1_certificate(const TrajectoryRecord& rec, const ModelSpec& spec,
                                 double t_audit, double c_cert) {
    const auto& L = rec.ledger;
    const double dt = uniform_spacing(L);
    const auto window = static_cast<std::size_t>(std::llround(1.0 / dt));
    const double pos = (t_audit - L.front().t) / dt;
    const auto k = static_cast<std::ptrdiff_t>(std::llround(pos));
    if (std::abs(pos - static_cast<double>(k)) > 1e-6 || k < static_cast<std::ptrdiff_t>(window) ||
        k >= static_cast<std::ptrdiff_t>(L.size())) {
        throw InvalidArgument("h1_certificate: t_audit needs one time unit of recorded history");
    }
    const double c1 = 1.0 + 2.0 * spec.alpha3;
    const H1Audit a = audit_h1(L, static_cast<std::size_t>(k), window, dt, c1);
    CertificateReport report;
    report.name = "h1";
    report.tolerance = c_cert * rec.dt;
    report.worst_margin = a.margin;
    report.location_t = L[static_cast<std::size_t>(k)].t;
    report.passed = a.margin >= -report.tolerance;
    report.metrics["lhs"] = a.lhs;
    report.metrics["rhs"] = a.rhs;
    report.metrics["c1"] = c1;
    return report;
}

CertificateReport h1_certificate_all(const TrajectoryRecord& rec, const ModelSpec& spec,
                                     double c_cert) {
    const auto& L = rec.ledger;
    const double dt = uniform_spacing(L);
    const auto window = static_cast<std::size_t>(std::llround(1.0 / dt));
    if (L.size() <= window) {
        throw InvalidArgument("h1_certificate: trajectory shorter than one time unit");
    }
    const double c1 = 1.0 + 2.0 * spec.alpha3;
    CertificateReport report;
    report.name = "h1";
    report.tolerance = c_cert * rec.dt;
    report.worst_margin = std::numeric_limits<double>::infinity();

    // Sliding trapezoid sums over the last `window` cells.
    auto cell = [&](std::size_t j) {
        return std::array<double, 3>{0.5 * dt * (L[j].grad_v_sq + L[j + 1].grad_v_sq),
                                     0.5 * dt * (L[j].z2 * L[j].g_sq + L[j + 1].z2 * L[j + 1].g_sq),
                                     0.5 * dt * (L[j].z2 + L[j + 1].z2)};
    };
    std::array<double, 3> sums{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < window; ++j) {
        const auto c = cell(j);
        for (std::size_t i = 0; i < 3; ++i) sums[i] += c[i];
    }
    for (std::size_t k = window; k < L.size(); ++k) {
        if (k > window) {
            const auto add = cell(k - 1);
            const auto drop = cell(k - 1 - window);
            for (std::size_t i = 0; i < 3; ++i) sums[i] += add[i] - drop[i];
        }
        const double rhs = (1.0 + c1) * sums[0] + sums[1] + sums[2];
        const double margin = rhs - L[k].grad_v_sq;
        if (margin < report.worst_margin || std::isnan(margin)) {
            report.worst_margin = margin;
            report.location_t = L[k].t;
            report.metrics["lhs"] = L[k].grad_v_sq;
            report.metrics["rhs"] = rhs;
        }
    }
    report.passed = report.worst_margin >= -report.tolerance;
    report.metrics["c1"] = c1;
    return report;
}

double periodic_cocycle_check(const ModelSpec& spec, double period, double t, double tau,
                              const WienerPath& omega, const Field& u, double dt) {
    if (!spec.g.has_period(period)) {
        throw InvalidArgument("periodic_cocycle_check: forcing is not periodic with the given period");
    }
    if (!omega.on_grid(period)) throw InvalidArgument("periodic_cocycle_check: period off the time grid");
    const Field shifted = phi({t, tau + period, omega, spec.alpha, u}, spec, dt);
    const Field base = phi({t, tau, omega, spec.alpha, u}, spec, dt);
    return l2_distance(shifted, base);
}

}  // namespace stochrd
