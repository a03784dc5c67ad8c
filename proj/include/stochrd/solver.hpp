#pragma once

#include <optional>
#include <vector>

#include "stochrd/field.hpp"
#include "stochrd/model.hpp"
#include "stochrd/stochastic_driver.hpp"

namespace stochrd {

struct SolveOptions {
    /// Store every k-th snapshot of u; 0 keeps only the endpoints.
    std::size_t snapshot_every = 0;
    /// Fill the per-step scalar ledger.
    bool ledger = true;
    /// false switches off the Laplacian (single-point ODE mode).
    bool diffusion = true;
};

/// Scalars recorded at every time level. `v` is the transformed variable
/// z(t) u(t); for alpha = 0 it coincides with u.
struct LedgerEntry {
    double t = 0.0;
    double v_sq = 0.0;      // ||v||^2
    double grad_v_sq = 0.0; // ||grad v||^2
    double z2_u_pp = 0.0;   // z^2 ||u||_p^p
    double z2 = 0.0;        // z^2
    double g_sq = 0.0;      // ||g(t)||^2
};

struct Snapshot {
    double t;
    Field u;
};

struct TrajectoryRecord {
    std::vector<Snapshot> snapshots;
    std::vector<LedgerEntry> ledger;
    Field final_u;
    Field final_v;
    double dt = 0.0;
    double alpha = 0.0;

    double t_start() const { return snapshots.front().t; }
    double t_end() const { return snapshots.back().t; }
};

/// Tridiagonal solve of (1 + dt (lambda - laplacian)) y = rhs on interior
/// points, factored once (constant coefficients, Thomas algorithm).
class ImplicitLinearSolve {
public:
    ImplicitLinearSolve(const Grid& grid, double lambda, double dt, bool diffusion);
    /// In place on the interior of `values`; boundary entries set to 0.
    void apply(std::span<double> values) const;

private:
    std::size_t n_ = 0;  // interior unknowns
    double off_ = 0.0;
    std::vector<double> c_prime_;
    std::vector<double> inv_denom_;
};

/// One IMEX step of the transformed equation
///   v_t + lambda v - laplacian v = z f(x, v / z) + z g(t, x)
/// with the linear part backward Euler. The reaction and forcing are taken
/// at the left endpoint, linearly implicit in the dissipative part of f
/// (J = min(d_s f, 0) frozen at the old value), so stiff cubic terms do not
/// limit dt. Without a path, z == 1 and this is the deterministic stepper.
class TransformStepper {
public:
    TransformStepper(const ModelSpec& spec, const Grid& grid, double dt,
                     const WienerPath* path, bool diffusion = true);

    double z(double t) const;
    Field step(const Field& v, double t) const;
    /// Forcing snapshot; reuses the cached profile for separable families.
    void forcing(double t, std::vector<double>& out) const;

private:
    friend class DirectStepper;
    ModelSpec spec_;
    Grid grid_;
    double dt_;
    const WienerPath* path_;
    ImplicitLinearSolve linear_;
    std::vector<double> xs_;
    std::vector<double> profile_;
    bool separable_;
};

/// Euler-Heun treatment of the Stratonovich term alpha u o dW, IMEX for the
/// rest, applied to u directly (no transform).
class DirectStepper {
public:
    DirectStepper(const ModelSpec& spec, const Grid& grid, double dt, const WienerPath& path,
                  bool diffusion = true);
    Field step(const Field& u, double t) const;

private:
    TransformStepper drift_;  // pathless: z == 1
    const WienerPath& path_;
    double dt_;
};

Field step_v(const Field& v, double t, double dt, const WienerPath& w, const ModelSpec& spec);

TrajectoryRecord solve_u_transform(const Field& u_tau, double tau, double t_end,
                                   const WienerPath& w, const ModelSpec& spec, double dt,
                                   const SolveOptions& options = {});

TrajectoryRecord solve_u_direct(const Field& u_tau, double tau, double t_end,
                                const WienerPath& w, const ModelSpec& spec, double dt,
                                const SolveOptions& options = {});

/// The alpha = 0 problem; same code path as solve_u_transform with z == 1.
TrajectoryRecord solve_deterministic(const Field& u_tau, double tau, double t_end,
                                     const ModelSpec& spec, double dt,
                                     const SolveOptions& options = {});

/// Number of steps of size dt covering [tau, t_end]; throws if not integral.
std::size_t step_count(double tau, double t_end, double dt);

}  // namespace stochrd
