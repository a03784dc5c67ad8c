#pragma once

#include "stochrd/certificate.hpp"
#include "stochrd/field.hpp"
#include "stochrd/model.hpp"
#include "stochrd/solver.hpp"
#include "stochrd/stochastic_driver.hpp"

namespace stochrd {

/// Arguments of Phi(t, tau, w, u_tau).
///
/// The deterministic symbol space is the real line with the translation
/// flow tau -> tau + t; it needs no data structure, so shifting the symbol
/// is plain arithmetic on `tau`.
struct CocycleQuery {
    double elapsed = 0.0;  // t >= 0
    double tau = 0.0;      // initial symbol time, on the path grid
    WienerPath omega;
    double alpha = 0.0;
    Field u_tau;
};

/// Default time step for cocycle evaluations.
inline constexpr double kDefaultDt = 1e-3;

/// Phi(t, tau, w, u) = u(t + tau, tau, theta_{-tau} w, u): solves the
/// transformed equation on [tau, tau + t] driven by theta_{-tau} w and
/// undoes the transform. t = 0 returns u_tau unchanged.
Field phi(const CocycleQuery& q, const ModelSpec& spec, double dt = kDefaultDt);

/// Same run as phi, keeping the full record (ledger, final v).
TrajectoryRecord phi_trajectory(const CocycleQuery& q, const ModelSpec& spec,
                                double dt = kDefaultDt, const SolveOptions& options = {});

/// || Phi(t + s, r, w, u) - Phi(t, s + r, theta_s w, Phi(s, r, w, u)) ||.
double cocycle_composition_defect(const ModelSpec& spec, double r, double s, double t,
                                  const WienerPath& omega, double alpha, const Field& u,
                                  double dt = kDefaultDt);

/// Integrated energy inequality along a recorded trajectory, checked at
/// every ledger time t_k (weights exp(lambda (s - t_k)); linear terms at the
/// right end of each step, reaction and forcing at the left, as in the stepper):
///
///   ||v(t_k)||^2 + int [ lambda/2 ||v||^2 + 2 ||grad v||^2 + 2 alpha1 z^2 ||u||_p^p ]
///     <= exp(-lambda (t_k - t_0)) ||v(t_0)||^2 + int [ (2/lambda) z^2 ||g||^2 + c1 z^2 ]
///
/// with c1 = 2 int psi1. Passes iff the worst margin >= -c_cert * dt.
CertificateReport energy_certificate(const TrajectoryRecord& rec, const ModelSpec& spec,
                                     double c_cert = 10.0);

/// ||grad v(t_a)||^2 <= (1 + c1) int_{t_a-1}^{t_a} ||grad v||^2 + int z^2 ||g||^2 + int z^2,
/// c1 = 1 + 2 alpha3. Requires t_a - 1 >= t_0.
CertificateReport h1_certificate(const TrajectoryRecord& rec, const ModelSpec& spec,
                                 double t_audit, double c_cert = 10.0);

/// h1_certificate at every ledger time with at least one time unit of history.
CertificateReport h1_certificate_all(const TrajectoryRecord& rec, const ModelSpec& spec,
                                     double c_cert = 10.0);

/// || Phi(t, tau + T, w, u) - Phi(t, tau, w, u) || for T-periodic forcing.
double periodic_cocycle_check(const ModelSpec& spec, double period, double t, double tau,
                              const WienerPath& omega, const Field& u, double dt = kDefaultDt);

}  // namespace stochrd
