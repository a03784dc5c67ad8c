#pragma once

#include <cstdint>
#include <vector>

#include "stochrd/attractor.hpp"
#include "stochrd/certificate.hpp"
#include "stochrd/field.hpp"
#include "stochrd/model.hpp"
#include "stochrd/stochastic_driver.hpp"

namespace stochrd {

/// epsilon(alpha) = max over grid times t in [tau, tau + T] of
/// |e^{alpha w(t)} - 1| + |e^{-alpha w(t)} - 1|.
double noise_deviation_bound(double alpha, double tau, double T, const WienerPath& w);

/// Runs the alpha-system and the deterministic system from the same u_tau
/// over [tau, tau + T] and records sup_t ||u_alpha - u||^2 against epsilon.
/// Metrics: sup_deviation_sq, epsilon, ratio_sq (= sup_deviation_sq / eps),
/// ratio (= sqrt(sup_deviation_sq) / eps). Passes iff both are finite.
CertificateReport deviation_check(double alpha, double tau, const WienerPath& w, double T,
                                  const Field& u_tau, const ModelSpec& spec, double dt);

/// deviation_check over a decreasing list of alpha > 0. Passes iff the sup
/// deviation decreases strictly along the list and max(ratio) <= band *
/// min(ratio).
CertificateReport deviation_sweep(const std::vector<double>& alphas, double tau,
                                  const WienerPath& w, double T, const Field& u_tau,
                                  const ModelSpec& spec, double dt, double band = 4.0);

/// (a) M_alpha <= R for every alpha; (b) |M_alpha - M_0| nonincreasing as
/// alpha decreases through the list, with the gap at the smallest alpha at
/// most gap_rtol * M_0. Metric strictly_decreasing is 1 when every step of
/// (b) is a strict decrease.
CertificateReport uniform_bound_check(const std::vector<double>& alphas, double tau,
                                      const WienerPath& w, const ModelSpec& spec,
                                      const Grid& grid, const AbsorbingSpec& abs,
                                      double gap_rtol = 0.05);

struct SweepRow {
    double alpha = 0.0;
    double dist = 0.0;              // dist(A_alpha(tau, w), A_0(tau)), one-sided
    double absorbing_radius = 0.0;  // M_alpha(tau, w)
    double max_tail = 0.0;          // max tail mass at k = L/2 over members
    bool converged = false;
    double runtime_s = 0.0;         // wall clock, not part of serialized output
};

struct SweepOptions {
    /// Threshold for the distance at the smallest alpha; <= 0 means 5 * eps_att.
    double eps_semi = 0.0;
    double path_step = 1e-3;
    /// Window of the sampled path; <= 0 picks the smallest admissible one.
    double path_window = 0.0;
};

struct SweepResult {
    double tau = 0.0;
    std::uint64_t seed = 0;
    double eps_semi = 0.0;
    /// Decreasing alpha, then the alpha = 0 reference row.
    std::vector<SweepRow> rows;
    CertificateReport contract;
};

/// Upper semicontinuity experiment for one Brownian path shared by every
/// alpha. Contract: d at the smallest alpha < eps_semi, and for every row i,
/// max_{j > i} d_j <= d_i + eps_att.
SweepResult sweep_alpha(double tau, std::uint64_t seed, const std::vector<double>& alphas,
                        const ModelSpec& spec, const AttractorConfig& config,
                        const TemperedFamilySpec& sampler, const SweepOptions& options = {});

/// Pulled-back window needed by sweep_alpha for the given configuration.
double required_path_window(double tau, const AttractorConfig& config);

}  // namespace stochrd
