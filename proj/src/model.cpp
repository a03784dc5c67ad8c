#include "stochrd/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "stochrd/errors.hpp"

namespace stochrd {

SpatialProfile SpatialProfile::table(std::vector<double> xs, std::vector<double> values) {
    if (xs.size() != values.size() || xs.size() < 2) {
        throw InvalidArgument("profile table: need >= 2 nodes and matching value count");
    }
    if (!std::is_sorted(xs.begin(), xs.end(), std::less_equal<>{}) ||
        std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throw InvalidArgument("profile table: nodes must be strictly increasing");
    }
    return {Kind::table, 1.0, std::move(xs), std::move(values)};
}

double SpatialProfile::operator()(double x) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::gaussian:
            return std::exp(-(x * x) / (width * width));
        case Kind::compact_bump: {
            if (std::abs(x) >= width) return 0.0;
            const double c = std::cos(std::numbers::pi * x / (2.0 * width));
            return c * c;
        }
        case Kind::table: {
            if (x < xs.front() || x > xs.back()) return 0.0;
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            if (it == xs.end()) return values.back();
            const auto i = static_cast<std::size_t>(it - xs.begin());
            const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return (1.0 - w) * values[i - 1] + w * values[i];
        }
    }
    return 0.0;
}

ForcingSpec ForcingSpec::constant(double amplitude, SpatialProfile profile) {
    ForcingSpec g;
    g.family = profile.kind == SpatialProfile::Kind::table ? ForcingFamily::table
                                                           : ForcingFamily::constant_profile;
    g.amplitude = amplitude;
    g.profile = std::move(profile);
    return g;
}

ForcingSpec ForcingSpec::periodic(double amplitude, double period, double depth,
                                  SpatialProfile profile) {
    ForcingSpec g;
    g.family = ForcingFamily::periodic;
    g.amplitude = amplitude;
    g.period = period;
    g.depth = depth;
    g.profile = std::move(profile);
    return g;
}

ForcingSpec ForcingSpec::from_function(std::function<double(double, double)> fn) {
    ForcingSpec g;
    g.family = ForcingFamily::custom;
    g.custom = std::move(fn);
    return g;
}

double ForcingSpec::modulation(double t) const {
    switch (family) {
        case ForcingFamily::zero:
            return 0.0;
        case ForcingFamily::periodic: {
            const double cycles = t / *period;
            const double phase = cycles - std::floor(cycles);
            return 1.0 + depth * std::sin(2.0 * std::numbers::pi * phase);
        }
        default:
            return 1.0;
    }
}

double ForcingSpec::operator()(double t, double x) const {
    switch (family) {
        case ForcingFamily::zero:
            return 0.0;
        case ForcingFamily::custom:
            return custom(t, x);
        default:
            return amplitude * modulation(t) * profile(x);
    }
}

bool ForcingSpec::has_period(double T) const {
    if (!(T > 0.0)) return false;
    switch (family) {
        case ForcingFamily::zero:
        case ForcingFamily::constant_profile:
        case ForcingFamily::table:
            return true;
        case ForcingFamily::periodic: {
            const double k = T / *period;
            return k >= 1.0 - 1e-9 && std::abs(k - std::round(k)) <= 1e-9 * k;
        }
        case ForcingFamily::custom:
            return false;
    }
    return false;
}

void ForcingSpec::validate() const {
    if (family == ForcingFamily::periodic && (!period || !(*period > 0.0))) {
        throw InvalidArgument("forcing: periodic family needs a positive period");
    }
    if (family == ForcingFamily::custom && !custom) {
        throw InvalidArgument("forcing: custom family needs a function");
    }
    if (family == ForcingFamily::table && profile.kind != SpatialProfile::Kind::table) {
        throw InvalidArgument("forcing: table family needs a table profile");
    }
    if (!std::isfinite(amplitude)) throw InvalidArgument("forcing: amplitude must be finite");
}

double Nonlinearity::operator()(double x, double s) const {
    switch (family) {
        case NonlinearityFamily::cubic:
            return -coefficient * s * s * s + linear * s;
        case NonlinearityFamily::anti_cubic:
            return coefficient * s * s * s;
        case NonlinearityFamily::zero:
            return 0.0;
        case NonlinearityFamily::custom:
            if (!custom) throw InvalidArgument("nonlinearity: custom family without a function");
            return custom(x, s);
    }
    throw InvalidArgument("nonlinearity: unknown family");
}

std::optional<double> Nonlinearity::exact_ds(double x, double s) const {
    switch (family) {
        case NonlinearityFamily::cubic:
            return -3.0 * coefficient * s * s + linear;
        case NonlinearityFamily::anti_cubic:
            return 3.0 * coefficient * s * s;
        case NonlinearityFamily::zero:
            return 0.0;
        case NonlinearityFamily::custom:
            if (custom_ds) return custom_ds(x, s);
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> Nonlinearity::exact_dx(double x, double s) const {
    if (family == NonlinearityFamily::custom) {
        if (custom_dx) return custom_dx(x, s);
        return std::nullopt;
    }
    return 0.0;
}

void ModelSpec::validate() const {
    if (!(lambda > 0.0)) throw InvalidArgument("model: lambda must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("model: alpha must lie in [0, 1]");
    if (!(p >= 2.0)) throw InvalidArgument("model: p must be >= 2");
    if (!(delta >= 0.0 && delta < lambda)) throw InvalidArgument("model: delta must lie in [0, lambda)");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) throw InvalidArgument("model: alpha1, alpha2 must be > 0");
    if (!(alpha3 >= 0.0)) throw InvalidArgument("model: alpha3 must be >= 0");
    if (!(growth_c > 0.0)) throw InvalidArgument("model: growth_c must be > 0");
    if (f.family == NonlinearityFamily::custom && !f.custom) {
        throw InvalidArgument("model: custom nonlinearity without a function");
    }
    g.validate();
}

ModelSpec ModelSpec::with_alpha(double a) const {
    ModelSpec out = *this;
    out.alpha = a;
    return out;
}

std::string ModelSpec::psi4_class() const {
    if (p == 2.0) return "Linf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "L^%g", p / (p - 2.0));
    return buf;
}

ModelSpec ModelSpec::canonical_cubic() { return ModelSpec{}; }

ModelSpec ModelSpec::canonical_periodic() {
    ModelSpec spec;
    spec.g = ForcingSpec::periodic(0.1, 2.0, 0.5, SpatialProfile::compact_bump(2.0));
    return spec;
}

double f_eval(const ModelSpec& spec, double x, double s) { return spec.f(x, s); }

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kMarginFloor = -1e-9;

// Rounding in |s|^p grows with the size of the terms, so the floor is
// relative to max(1, |bound| + |value|) at each sample.
struct Worst {
    double margin = std::numeric_limits<double>::infinity();
    double x = 0.0;
    double s = 0.0;
    bool violated = false;
    void update(double bound, double value, double xv, double sv) {
        const double m = bound - value;
        if (!(m >= kMarginFloor * std::max(1.0, std::abs(bound) + std::abs(value)))) violated = true;
        if (m < margin || std::isnan(m)) {
            margin = m;
            x = xv;
            s = sv;
        }
    }
};

}  // namespace

CertificateReport validate_dissipativity(const ModelSpec& spec, const SampleBox& box,
                                         std::size_t n_samples) {
    const std::size_t n = std::max<std::size_t>(n_samples, 2);
    Worst w[5];
    const auto& f = spec.f;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = box.x_lo + (box.x_hi - box.x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double psi1 = spec.psi1(x), psi2 = spec.psi2(x), psi3 = spec.psi3(x), psi4 = spec.psi4(x);
        for (std::size_t j = 0; j < n; ++j) {
            const double s = box.s_lo + (box.s_hi - box.s_lo) * static_cast<double>(j) / static_cast<double>(n - 1);
            const double fv = f(x, s);
            const double as = std::abs(s);
            const double dfds = f.exact_ds(x, s).value_or(
                (f(x, s + kFdStep) - f(x, s - kFdStep)) / (2.0 * kFdStep));
            const double dfdx = f.exact_dx(x, s).value_or(
                (f(x + kFdStep, s) - f(x - kFdStep, s)) / (2.0 * kFdStep));
            w[0].update(-spec.alpha1 * std::pow(as, spec.p) + psi1, fv * s, x, s);
            w[1].update(spec.alpha2 * std::pow(as, spec.p - 1.0) + psi2, std::abs(fv), x, s);
            w[2].update(spec.alpha3, dfds, x, s);
            w[3].update(psi3, std::abs(dfdx), x, s);
            w[4].update(spec.growth_c * std::pow(as, spec.p - 2.0) + psi4, std::abs(dfds), x, s);
        }
    }
    static const char* names[5] = {"f1_dissipation", "f2_growth", "f3_ds_upper", "f4_dx_bound",
                                   "f5_ds_growth"};
    CertificateReport report;
    report.name = "dissipativity";
    report.tolerance = -kMarginFloor;
    report.passed = true;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 5; ++k) {
        CertificateReport c;
        c.name = names[k];
        c.worst_margin = w[k].margin;
        c.tolerance = -kMarginFloor;
        c.passed = !w[k].violated;
        c.metrics["worst_x"] = w[k].x;
        c.metrics["worst_s"] = w[k].s;
        report.passed = report.passed && c.passed;
        report.worst_margin = std::min(report.worst_margin, c.worst_margin);
        report.checks.push_back(std::move(c));
    }
    report.metrics["samples_per_axis"] = static_cast<double>(n);
    return report;
}

Field g_eval(const ForcingSpec& spec, double t, const Grid& grid) {
    if (spec.family == ForcingFamily::zero) return Field(grid);
    return Field::from_function(grid, [&](double x) { return spec(t, x); });
}

double forcing_norm_sq(const ForcingSpec& spec, double t, const Grid& grid) {
    switch (spec.family) {
        case ForcingFamily::zero:
            return 0.0;
        case ForcingFamily::custom:
            return l2_squared(g_eval(spec, t, grid));
        default: {
            const double profile_sq = l2_squared(Field::from_function(grid, spec.profile));
            const double a = spec.amplitude * spec.modulation(t);
            return a * a * profile_sq;
        }
    }
}

namespace {

// Trapezoid of exp(rate s) * ||g(s + shift)||^2 over [-S, 0]; rate may be 0.
double weighted_forcing_integral(const ForcingSpec& g, const Grid& grid, double rate, double shift,
                                 double S, double step) {
    const auto n = static_cast<std::ptrdiff_t>(std::llround(S / step));
    const bool separable = g.family != ForcingFamily::custom && g.family != ForcingFamily::zero;
    const double profile_sq = separable ? l2_squared(Field::from_function(grid, g.profile)) : 0.0;
    double sum = 0.0;
    for (std::ptrdiff_t j = 0; j <= n; ++j) {
        const double s = -static_cast<double>(j) * step;
        double gsq = 0.0;
        if (separable) {
            const double a = g.amplitude * g.modulation(s + shift);
            gsq = a * a * profile_sq;
        } else if (g.family == ForcingFamily::custom) {
            gsq = forcing_norm_sq(g, s + shift, grid);
        }
        const double w = (j == 0 || j == n) ? 0.5 * step : step;
        sum += w * (std::exp(rate * s) * gsq);
    }
    return sum;
}

}  // namespace

CertificateReport check_g_tempered(const ForcingSpec& spec, double delta, double c_probe,
                                   const std::vector<double>& probe_times, const Grid& grid,
                                   const TemperedProbe& probe) {
    spec.validate();
    if (!(delta >= 0.0)) throw InvalidArgument("check_g_tempered: delta must be >= 0");
    if (!(c_probe > 0.0)) throw InvalidArgument("check_g_tempered: c_probe must be > 0");

    auto relative_growth = [](double short_v, double long_v) {
        if (!std::isfinite(long_v)) return std::numeric_limits<double>::infinity();
        const double scale = std::max(std::abs(long_v), 1e-300);
        return (long_v - short_v) / scale;
    };

    // e^{-delta S} must be negligible before doubling S says anything
    const double S = delta > 0.0 ? std::max(probe.S, 36.0 / delta) : probe.S;

    CertificateReport gcon1;
    gcon1.name = "gcon1_integrable";
    gcon1.tolerance = 0.0;
    double worst_growth = 0.0;
    for (double tau : probe_times) {
        const double j_short = weighted_forcing_integral(spec, grid, delta, tau, S, probe.step);
        const double j_long = weighted_forcing_integral(spec, grid, delta, tau, 2.0 * S, probe.step);
        const double growth = relative_growth(j_short, j_long);
        if (growth > worst_growth || std::isnan(growth)) {
            worst_growth = growth;
            gcon1.location_t = tau;
        }
        gcon1.metrics["value_at_tau=" + std::to_string(tau)] = std::exp(delta * tau) * j_long;
    }
    gcon1.worst_margin = probe.divergence_rtol - worst_growth;
    gcon1.passed = gcon1.worst_margin >= 0.0;

    CertificateReport gcon2;
    gcon2.name = "gcon2_pullback_decay";
    gcon2.tolerance = 0.0;
    bool monotone = true;
    bool finite = true;
    double previous = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double t : probe.decay_times) {
        const double j_short = weighted_forcing_integral(spec, grid, delta, t, S, probe.step);
        const double j_long = weighted_forcing_integral(spec, grid, delta, t, 2.0 * S, probe.step);
        if (relative_growth(j_short, j_long) > probe.divergence_rtol) finite = false;
        const double value = std::exp(c_probe * t) * j_long;
        if (!std::isfinite(value)) finite = false;
        if (value > previous * (1.0 + 1e-9)) monotone = false;
        previous = value;
        last = value;
        gcon2.metrics["value_at_t=" + std::to_string(t)] = value;
    }
    gcon2.location_t = probe.decay_times.empty() ? 0.0 : probe.decay_times.back();
    gcon2.worst_margin = probe.decay_tolerance - last;
    gcon2.passed = finite && monotone && gcon2.worst_margin >= 0.0;
    gcon2.metrics["monotone"] = monotone ? 1.0 : 0.0;

    CertificateReport report;
    report.name = "g_tempered";
    report.passed = gcon1.passed && gcon2.passed;
    report.worst_margin = std::min(gcon1.worst_margin, gcon2.worst_margin);
    report.tolerance = 0.0;
    report.metrics["delta"] = delta;
    report.metrics["c_probe"] = c_probe;
    report.checks = {std::move(gcon1), std::move(gcon2)};
    return report;
}

}  // namespace stochrd
