#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stochrd/certificate.hpp"
#include "stochrd/field.hpp"

namespace stochrd {

/// Spatial profile on the real line.
struct SpatialProfile {
    enum class Kind { zero, gaussian, compact_bump, table };

    Kind kind = Kind::zero;
    double width = 1.0;          // gaussian: exp(-x^2/width^2); bump: support |x| < width
    std::vector<double> xs;      // table nodes, strictly increasing
    std::vector<double> values;  // table values; zero outside [xs.front(), xs.back()]

    static SpatialProfile gaussian(double width) { return {Kind::gaussian, width, {}, {}}; }
    static SpatialProfile compact_bump(double width) { return {Kind::compact_bump, width, {}, {}}; }
    static SpatialProfile table(std::vector<double> xs, std::vector<double> values);

    double operator()(double x) const;
    bool is_zero() const noexcept { return kind == Kind::zero; }
};

enum class ForcingFamily { zero, constant_profile, periodic, table, custom };

/// g(t, x) = amplitude * m(t) * profile(x) for the built-in families, with
/// m = 1 for constant_profile/table and m(t) = 1 + depth * sin(2 pi t / T)
/// for periodic. The periodic phase is reduced into [0, 1) before the sine,
/// so g(t + T) and g(t) agree to rounding in t + T.
struct ForcingSpec {
    ForcingFamily family = ForcingFamily::zero;
    double amplitude = 0.0;
    std::optional<double> period;
    double depth = 0.5;
    SpatialProfile profile;
    std::function<double(double t, double x)> custom;

    static ForcingSpec zero() { return {}; }
    static ForcingSpec constant(double amplitude, SpatialProfile profile);
    static ForcingSpec periodic(double amplitude, double period, double depth, SpatialProfile profile);
    static ForcingSpec from_function(std::function<double(double, double)> fn);

    double modulation(double t) const;
    double operator()(double t, double x) const;

    /// True when g(t + T) = g(t) holds for the built-in family.
    bool has_period(double T) const;
    void validate() const;
};

enum class NonlinearityFamily { cubic, anti_cubic, zero, custom };

/// f(x, s). cubic: -a s^3 + b s; anti_cubic: +a s^3 (negative tests only).
struct Nonlinearity {
    NonlinearityFamily family = NonlinearityFamily::cubic;
    double coefficient = 1.0;  // a
    double linear = 0.0;       // b
    std::function<double(double x, double s)> custom;
    std::function<double(double x, double s)> custom_ds;  // optional exact derivative
    std::function<double(double x, double s)> custom_dx;  // optional exact derivative

    double operator()(double x, double s) const;
    /// Exact derivatives when the family provides them.
    std::optional<double> exact_ds(double x, double s) const;
    std::optional<double> exact_dx(double x, double s) const;
};

/// Problem constants and function families.
struct ModelSpec {
    double lambda = 1.0;
    double alpha = 0.0;
    double p = 4.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double alpha3 = 0.0;
    double growth_c = 3.0;
    double delta = 0.5;
    SpatialProfile psi1, psi2, psi3, psi4;
    Nonlinearity f;
    ForcingSpec g;

    /// Throws InvalidArgument naming the first violated constraint.
    void validate() const;
    ModelSpec with_alpha(double a) const;

    /// Declared integrability class of psi4: "Linf" for p = 2, else "L^q" with q = p / (p - 2).
    std::string psi4_class() const;

    /// f = -s^3, p = 4, alpha1 = alpha2 = 1, alpha3 = 0, c = 3, psi = 0, g = 0.
    static ModelSpec canonical_cubic();
    /// canonical_cubic with g = 0.1 (1 + 0.5 sin(2 pi t / 2)) bump(|x| < 2).
    static ModelSpec canonical_periodic();
};

double f_eval(const ModelSpec& spec, double x, double s);

struct SampleBox {
    double x_lo = -10.0, x_hi = 10.0;
    double s_lo = -10.0, s_hi = 10.0;
};

/// Checks the five structural conditions on an n x n sample grid; one
/// sub-check per condition with its worst margin. Passes iff every margin
/// is >= -1e-9 * max(1, |bound| + |value|). Failures are reported, never
/// thrown.
CertificateReport validate_dissipativity(const ModelSpec& spec, const SampleBox& box,
                                         std::size_t n_samples);

Field g_eval(const ForcingSpec& spec, double t, const Grid& grid);

/// ||g(t)||^2 on the grid, using the separable structure where available.
double forcing_norm_sq(const ForcingSpec& spec, double t, const Grid& grid);

struct TemperedProbe {
    double S = 40.0;                        // truncation; raised to 36 / delta if larger
    double step = 0.01;                     // quadrature step
    std::vector<double> decay_times = {-10, -20, -30, -40, -50, -60};
    double decay_tolerance = 1e-6;
    double divergence_rtol = 1e-6;          // allowed relative growth S -> 2S
};

/// Integrability of g against exp(delta s) at each probe time, and decay of
/// the pulled-back weighted integral under exp(c t) as t -> -infinity.
CertificateReport check_g_tempered(const ForcingSpec& spec, double delta, double c_probe,
                                   const std::vector<double>& probe_times, const Grid& grid,
                                   const TemperedProbe& probe = {});

}  // namespace stochrd
