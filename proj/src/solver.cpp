#include "stochrd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochrd/errors.hpp"

namespace stochrd {

std::size_t step_count(double tau, double t_end, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("solver: dt must be positive");
    if (!(t_end > tau)) throw InvalidArgument("solver: need tau < t_end");
    const double ratio = (t_end - tau) / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-8 * std::max(1.0, ratio)) {
        throw InvalidArgument("solver: (t_end - tau) must be an integer multiple of dt");
    }
    return static_cast<std::size_t>(rounded);
}

ImplicitLinearSolve::ImplicitLinearSolve(const Grid& grid, double lambda, double dt, bool diffusion)
    : n_(grid.size() - 2) {
    if (!(lambda >= 0.0)) throw InvalidArgument("solver: lambda must be >= 0");
    const double h = grid.spacing();
    const double r = diffusion ? dt / (h * h) : 0.0;
    const double diag = 1.0 + dt * lambda + 2.0 * r;
    off_ = -r;
    c_prime_.assign(n_, 0.0);
    inv_denom_.assign(n_, 0.0);
    double c_prev = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double denom = diag - off_ * c_prev;
        inv_denom_[i] = 1.0 / denom;
        c_prime_[i] = off_ * inv_denom_[i];
        c_prev = c_prime_[i];
    }
}

void ImplicitLinearSolve::apply(std::span<double> values) const {
    double* d = values.data() + 1;
    double prev = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        d[i] = (d[i] - off_ * prev) * inv_denom_[i];
        prev = d[i];
    }
    for (std::size_t i = n_ - 1; i-- > 0;) d[i] -= c_prime_[i] * d[i + 1];
    values.front() = 0.0;
    values.back() = 0.0;
}

TransformStepper::TransformStepper(const ModelSpec& spec, const Grid& grid, double dt,
                                   const WienerPath* path, bool diffusion)
    : spec_(spec),
      grid_(grid),
      dt_(dt),
      path_(path),
      linear_(grid, spec.lambda, dt, diffusion),
      xs_(grid.size()),
      separable_(spec.g.family != ForcingFamily::custom) {
    if (!(dt > 0.0)) throw InvalidArgument("solver: dt must be positive");
    for (std::size_t i = 0; i < grid.size(); ++i) xs_[i] = grid.x(i);
    if (separable_) {
        profile_.assign(grid.size(), 0.0);
        if (spec.g.family != ForcingFamily::zero) {
            for (std::size_t i = 1; i + 1 < grid.size(); ++i) profile_[i] = spec.g.profile(xs_[i]);
        }
    }
}

double TransformStepper::z(double t) const {
    if (path_ == nullptr) return 1.0;
    return z_value(*path_, spec_.alpha, t);
}

void TransformStepper::forcing(double t, std::vector<double>& out) const {
    out.assign(grid_.size(), 0.0);
    if (spec_.g.family == ForcingFamily::zero) return;
    if (separable_) {
        const double a = spec_.g.amplitude * spec_.g.modulation(t);
        for (std::size_t i = 1; i + 1 < out.size(); ++i) out[i] = a * profile_[i];
    } else {
        for (std::size_t i = 1; i + 1 < out.size(); ++i) out[i] = spec_.g(t, xs_[i]);
    }
}

namespace {

void check_finite(const Field& f, double t) {
    if (!f.all_finite()) {
        throw DivergenceError("solver produced non-finite values at t = " + std::to_string(t), t);
    }
}

// Reaction and forcing update for one point of the transformed equation,
// linearly implicit in the dissipative part of f: with J = min(d_s f, 0),
//   v+ = (v + dt (z f(x, v / z) - J v + z g)) / (1 - dt J).
// J = 0 recovers the explicit update.
double reaction_update(const Nonlinearity& f, double x, double v, double z, double g, double dt) {
    const double s = v / z;
    double ds = 0.0;
    if (auto exact = f.exact_ds(x, s)) {
        ds = *exact;
    } else {
        const double h = 1e-6 * std::max(1.0, std::abs(s));
        ds = (f(x, s + h) - f(x, s - h)) / (2.0 * h);
    }
    const double J = std::isfinite(ds) ? std::min(ds, 0.0) : 0.0;
    return (v + dt * (z * f(x, s) - J * v + z * g)) / (1.0 - dt * J);
}

}  // namespace

Field TransformStepper::step(const Field& v, double t) const {
    if (!(v.grid() == grid_)) throw InvalidArgument("step: field grid mismatch");
    const double zt = z(t);
    if (path_ != nullptr) (void)path_->value_at(t + dt_);
    std::vector<double> g;
    forcing(t, g);
    Field out(grid_);
    auto o = out.values();
    const auto& f = spec_.f;
    for (std::size_t i = 1; i + 1 < grid_.size(); ++i) {
        o[i] = reaction_update(f, xs_[i], v[i], zt, g[i], dt_);
    }
    linear_.apply(o);
    check_finite(out, t + dt_);
    return out;
}

DirectStepper::DirectStepper(const ModelSpec& spec, const Grid& grid, double dt,
                             const WienerPath& path, bool diffusion)
    : drift_(spec, grid, dt, nullptr, diffusion), path_(path), dt_(dt) {}

Field DirectStepper::step(const Field& u, double t) const {
    const Grid& grid = drift_.grid_;
    if (!(u.grid() == grid)) throw InvalidArgument("step: field grid mismatch");
    const double alpha = drift_.spec_.alpha;
    const double dw = path_.value_at(t + dt_) - path_.value_at(t);
    std::vector<double> g;
    drift_.forcing(t, g);
    Field out(grid);
    auto o = out.values();
    const auto& f = drift_.spec_.f;
    const double zt = 1.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double ui = u[i];
        const double predictor = ui + alpha * ui * dw;
        o[i] = reaction_update(f, drift_.xs_[i], ui, zt, g[i], dt_);
        o[i] += alpha * 0.5 * (ui + predictor) * dw;
    }
    drift_.linear_.apply(o);
    check_finite(out, t + dt_);
    return out;
}

Field step_v(const Field& v, double t, double dt, const WienerPath& w, const ModelSpec& spec) {
    return TransformStepper(spec, v.grid(), dt, &w).step(v, t);
}

namespace {

LedgerEntry ledger_entry(double t, const Field& v, double z, double p, double g_sq) {
    LedgerEntry e;
    e.t = t;
    e.v_sq = l2_squared(v);
    e.grad_v_sq = grad_squared(v);
    e.z2 = z * z;
    // z^2 ||u||_p^p with u = v / z
    e.z2_u_pp = e.z2 * lp_power(v, p) / std::pow(z, p);
    e.g_sq = g_sq;
    return e;
}

Field divided(const Field& v, double z) {
    Field u = v;
    for (double& x : u.values()) x /= z;
    return u;
}

Field scaled(const Field& u, double z) {
    Field v = u;
    for (double& x : v.values()) x *= z;
    return v;
}

double norm_sq(const std::vector<double>& g, double h) {
    double s = 0.0;
    for (double x : g) s += x * x;
    return s * h;
}

struct Recorder {
    const SolveOptions& options;
    TrajectoryRecord& rec;
    std::size_t n_steps;
    double p;
    double h;

    void at(std::size_t n, double t, const Field& u, const Field& v, double z,
            const std::vector<double>& g) {
        if (options.ledger) rec.ledger.push_back(ledger_entry(t, v, z, p, norm_sq(g, h)));
        const bool keep = n == 0 || n == n_steps ||
                          (options.snapshot_every > 0 && n % options.snapshot_every == 0);
        if (keep) rec.snapshots.push_back({t, u});
    }
};

TrajectoryRecord run_transform(const Field& u_tau, double tau, double t_end, const WienerPath* w,
                               const ModelSpec& spec, double dt, const SolveOptions& options) {
    const std::size_t n_steps = step_count(tau, t_end, dt);
    if (w != nullptr) {
        (void)w->value_at(tau);
        (void)w->value_at(t_end);
    }
    const Grid& grid = u_tau.grid();
    TransformStepper stepper(spec, grid, dt, w, options.diffusion);
    TrajectoryRecord rec{{}, {}, u_tau, u_tau, dt, w != nullptr ? spec.alpha : 0.0};
    if (options.ledger) rec.ledger.reserve(n_steps + 1);
    Recorder recorder{options, rec, n_steps, spec.p, grid.spacing()};

    std::vector<double> g;
    double z = stepper.z(tau);
    Field v = scaled(u_tau, z);
    stepper.forcing(tau, g);
    recorder.at(0, tau, u_tau, v, z, g);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = tau + static_cast<double>(n) * dt;
        v = stepper.step(v, t);
        const double t_next = tau + static_cast<double>(n + 1) * dt;
        z = stepper.z(t_next);
        const bool need_u = n + 1 == n_steps ||
                            (options.snapshot_every > 0 && (n + 1) % options.snapshot_every == 0);
        if (options.ledger) stepper.forcing(t_next, g);
        if (need_u) {
            recorder.at(n + 1, t_next, divided(v, z), v, z, g);
        } else if (options.ledger) {
            rec.ledger.push_back(ledger_entry(t_next, v, z, spec.p, norm_sq(g, grid.spacing())));
        }
    }
    rec.final_v = v;
    rec.final_u = rec.snapshots.back().u;
    return rec;
}

}  // namespace

TrajectoryRecord solve_u_transform(const Field& u_tau, double tau, double t_end,
                                   const WienerPath& w, const ModelSpec& spec, double dt,
                                   const SolveOptions& options) {
    return run_transform(u_tau, tau, t_end, &w, spec, dt, options);
}

TrajectoryRecord solve_deterministic(const Field& u_tau, double tau, double t_end,
                                     const ModelSpec& spec, double dt, const SolveOptions& options) {
    return run_transform(u_tau, tau, t_end, nullptr, spec, dt, options);
}

TrajectoryRecord solve_u_direct(const Field& u_tau, double tau, double t_end, const WienerPath& w,
                                const ModelSpec& spec, double dt, const SolveOptions& options) {
    const std::size_t n_steps = step_count(tau, t_end, dt);
    (void)w.value_at(tau);
    (void)w.value_at(t_end);
    const Grid& grid = u_tau.grid();
    DirectStepper stepper(spec, grid, dt, w, options.diffusion);
    TransformStepper forcing_source(spec, grid, dt, nullptr, options.diffusion);
    TrajectoryRecord rec{{}, {}, u_tau, u_tau, dt, spec.alpha};
    if (options.ledger) rec.ledger.reserve(n_steps + 1);
    Recorder recorder{options, rec, n_steps, spec.p, grid.spacing()};

    std::vector<double> g;
    Field u = u_tau;
    auto record = [&](std::size_t n, double t) {
        const double z = z_value(w, spec.alpha, t);
        if (options.ledger) forcing_source.forcing(t, g);
        recorder.at(n, t, u, scaled(u, z), z, g);
    };
    record(0, tau);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = tau + static_cast<double>(n) * dt;
        u = stepper.step(u, t);
        record(n + 1, tau + static_cast<double>(n + 1) * dt);
    }
    rec.final_u = u;
    rec.final_v = scaled(u, z_value(w, spec.alpha, t_end));
    return rec;
}

}  // namespace stochrd
