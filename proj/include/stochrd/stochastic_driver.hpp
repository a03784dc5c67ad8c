#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

namespace stochrd {

/// Two-sided Brownian path sampled on a uniform grid with w(0) = 0.
///
/// Values between grid points are piecewise-linear. A path returned by
/// shifted() is a view onto the same samples, so the shift group law
/// holds bit-exactly on grid points: every view evaluates
/// base[offset + k] - base[offset] against the original samples.
class WienerPath {
public:
    /// Samples independent N(0, step) increments forward on [0, s_max] and
    /// backward on [-s_max, 0], from two streams derived from `seed`.
    static WienerPath sample(std::uint64_t seed, double s_max, double step);

    /// Builds a path from explicit grid values on [first*step, last*step].
    /// The value at index 0 must be exactly zero.
    static WienerPath from_samples(double step, std::ptrdiff_t first_index,
                                   std::vector<double> values);

    /// Path value at time t. Throws WindowExceeded outside [t_min, t_max].
    double value_at(double t) const;

    /// Value at grid index k (time k * step). Throws WindowExceeded.
    double value_at_index(std::ptrdiff_t k) const;

    /// theta_t w: s -> w(s + t) - w(t). `t` must lie on the grid.
    WienerPath shifted(double t) const;

    bool on_grid(double t) const noexcept;
    /// Grid index of t; throws InvalidArgument if t is off-grid.
    std::ptrdiff_t grid_index(double t) const;

    double step() const noexcept { return step_; }
    double t_min() const noexcept;
    double t_max() const noexcept;
    std::ptrdiff_t first_index() const noexcept { return lo_ - offset_; }
    std::ptrdiff_t last_index() const noexcept { return hi_ - offset_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// CSV with header "t,omega", one row per grid point in the window.
    void write_csv(std::ostream& os) const;

private:
    WienerPath() = default;

    std::shared_ptr<const std::vector<double>> base_;
    double step_ = 0.0;
    std::ptrdiff_t lo_ = 0;      // valid base indices [lo_, hi_]
    std::ptrdiff_t hi_ = 0;
    std::ptrdiff_t offset_ = 0;  // base index of this view's time 0
    double baseline_ = 0.0;      // base value at offset_
    std::uint64_t seed_ = 0;
};

WienerPath sample_two_sided_path(std::uint64_t seed, double s_max, double grid_step);

WienerPath shift_path(const WienerPath& w, double t);

/// z(t, w) = exp(-alpha * w(t)).
double z_value(const WienerPath& w, double alpha, double t);

/// Trapezoidal approximation of the integral of exp(rate * s) * h(s) over
/// [-S, 0] with nodes s_j = -j * step. Truncating the improper integral over
/// (-inf, 0] at -S costs at most sup|h| * exp(-rate * S) / rate.
double quad_exp(const std::function<double(double)>& h, double rate, double S,
                double step);

/// max over grid times |t| >= t_min of |w(t) / t|. Diagnostic only.
double sublinearity_report(const WienerPath& w, double t_min);

}  // namespace stochrd
