#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stochrd/certificate.hpp"
#include "stochrd/field.hpp"
#include "stochrd/model.hpp"
#include "stochrd/stochastic_driver.hpp"

namespace stochrd {

/// Constant and quadrature settings for the absorbing radius
///   M_alpha(tau, w) = c_abs * ( int_{-S}^0 e^{lambda s} e^{-2 alpha w(s)} (1 + ||g(s + tau)||^2) ds )^{1/2}.
struct AbsorbingSpec {
    double c_abs = 2.0;
    double S = 30.0;
    double step = 1e-3;  // must be a multiple of the path grid step
};

double absorbing_radius(double tau, const WienerPath& w, double alpha, const ModelSpec& spec,
                        const Grid& grid, const AbsorbingSpec& abs);

/// M_0(tau): the weight exp(-2 alpha w) replaced by 1.
double deterministic_radius(double tau, const ModelSpec& spec, const Grid& grid,
                            const AbsorbingSpec& abs);

/// R(tau, w): the weight replaced by exp(2 |w(s)|), which dominates every
/// alpha in [0, 1] pointwise.
double uniform_radius(double tau, const WienerPath& w, const ModelSpec& spec, const Grid& grid,
                      const AbsorbingSpec& abs);

/// A tempered family of balls D(tau, w) and a sampler of their members.
struct TemperedFamilySpec {
    enum class Radius { constant, absorbing_ball, custom };

    Radius kind = Radius::absorbing_ball;
    /// constant: the radius; absorbing_ball: multiple of M_alpha(tau, w).
    double value = 4.0;
    std::function<double(double tau, const WienerPath& w)> custom;
    /// Samples are random combinations of the first `modes` Dirichlet sine
    /// modes (coefficients N(0, 1/k^2)) rescaled to norm U[min_fraction, 1] * r.
    std::size_t modes = 8;
    double min_fraction = 0.5;
    std::uint64_t seed = 0;

    double radius(double tau, const WienerPath& w, double alpha, const ModelSpec& spec,
                  const Grid& grid, const AbsorbingSpec& abs) const;
    Field draw(const Grid& grid, double r, std::uint64_t stream) const;
};

struct AttractorConfig {
    Grid grid;
    std::vector<double> horizons = {12.0, 16.0, 20.0};
    std::size_t members = 4;
    double eps_att = 1e-3;
    double dt = 1e-3;
    double dedup = 1e-9;
    AbsorbingSpec absorbing;
};

/// Finite approximation of A(tau, w): endpoints of pullback runs
/// Phi(t, tau - t, theta_{-t} w, u0), u0 drawn from D(tau - t, theta_{-t} w).
struct AttractorApprox {
    double tau = 0.0;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    std::vector<double> horizons;
    std::size_t members = 0;
    std::vector<Field> endpoints;        // largest horizon, deduplicated
    std::vector<double> set_distances;   // symmetric Hausdorff, consecutive horizons
    std::vector<double> initial_radii;   // sampler radius per horizon
    bool converged = false;
};

AttractorApprox pullback_ensemble(double tau, const WienerPath& w, double alpha,
                                  const ModelSpec& spec, const AttractorConfig& config,
                                  const TemperedFamilySpec& sampler);

/// max_{a in A} min_{b in B} ||a - b||.
double hausdorff_semidist(const std::vector<Field>& a, const std::vector<Field>& b);
double hausdorff_distance(const std::vector<Field>& a, const std::vector<Field>& b);

/// Symmetric distance between the approximations at tau and tau + T.
double attractor_periodicity_check(double tau, double period, const WienerPath& w, double alpha,
                                   const ModelSpec& spec, const AttractorConfig& config,
                                   const TemperedFamilySpec& sampler);

/// Every endpoint of a pullback ensemble lies in the ball of radius
/// M_alpha(tau, w). Margin is M_alpha - max endpoint norm.
CertificateReport absorption_report(double tau, const WienerPath& w, double alpha,
                                    const ModelSpec& spec, const AttractorConfig& config,
                                    const TemperedFamilySpec& sampler);

struct CalibrationConfig {
    std::vector<std::uint64_t> seeds = {101, 102, 103};
    std::vector<double> alphas = {0.0, 0.5, 1.0};
    double horizon = 20.0;
    std::size_t members = 4;
    double initial_radius = 20.0;
    double path_window = 64.0;
    double path_step = 1e-3;
    double c_start = 1.0;
    double c_cap = 1024.0;
    double safety = 2.0;
    double tau = 0.0;
};

/// Smallest c on the grid c_start * sqrt(2)^k with every pullback endpoint
/// inside the ball of radius c * M_alpha(c = 1), times `safety`.
/// Throws CalibrationFailure if c would exceed c_cap.
double calibrate_c(const ModelSpec& spec, const AttractorConfig& config,
                   const CalibrationConfig& calibration);

struct TailTargets {
    std::vector<double> etas = {1e-4};
};

/// Max tail mass over attractor members for every (alpha, k); for each eta
/// the smallest k whose tail stays below eta for all alphas. Passes iff
/// every eta is met by some k.
CertificateReport tail_uniformity_report(double tau, const WienerPath& w,
                                         const std::vector<double>& alphas, const ModelSpec& spec,
                                         const std::vector<double>& ks,
                                         const AttractorConfig& config,
                                         const TemperedFamilySpec& sampler,
                                         const TailTargets& targets = {});

}  // namespace stochrd
