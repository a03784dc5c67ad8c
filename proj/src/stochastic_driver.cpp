#include "stochrd/stochastic_driver.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <string>

#include "stochrd/errors.hpp"

namespace stochrd {

namespace {

constexpr double kGridSnap = 1e-9;

std::ptrdiff_t checked_multiple(double value, double step, const char* what) {
    const double ratio = value / step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > kGridSnap * std::max(1.0, std::abs(ratio))) {
        throw InvalidArgument(std::string(what) + " must be an integer multiple of the grid step");
    }
    return static_cast<std::ptrdiff_t>(rounded);
}

}  // namespace

WienerPath WienerPath::sample(std::uint64_t seed, double s_max, double step) {
    if (!(s_max > 0.0) || !(step > 0.0)) {
        throw InvalidArgument("sample_two_sided_path: S_max and grid_step must be positive");
    }
    const std::ptrdiff_t n = checked_multiple(s_max, step, "S_max");
    if (n < 1) throw InvalidArgument("sample_two_sided_path: S_max smaller than grid_step");

    const auto lo = static_cast<std::uint32_t>(seed & 0xffffffffu);
    const auto hi = static_cast<std::uint32_t>(seed >> 32);
    std::seed_seq forward_seq{lo, hi, 0x464f5257u};
    std::seed_seq backward_seq{lo, hi, 0x4241434bu};
    std::mt19937_64 forward(forward_seq);
    std::mt19937_64 backward(backward_seq);
    std::normal_distribution<double> increment(0.0, std::sqrt(step));

    auto values = std::make_shared<std::vector<double>>(static_cast<std::size_t>(2 * n + 1), 0.0);
    auto& v = *values;
    for (std::ptrdiff_t k = 1; k <= n; ++k) {
        v[static_cast<std::size_t>(n + k)] = v[static_cast<std::size_t>(n + k - 1)] + increment(forward);
    }
    for (std::ptrdiff_t k = 1; k <= n; ++k) {
        v[static_cast<std::size_t>(n - k)] = v[static_cast<std::size_t>(n - k + 1)] + increment(backward);
    }

    WienerPath path;
    path.base_ = std::move(values);
    path.step_ = step;
    path.lo_ = 0;
    path.hi_ = 2 * n;
    path.offset_ = n;
    path.baseline_ = 0.0;
    path.seed_ = seed;
    return path;
}

WienerPath WienerPath::from_samples(double step, std::ptrdiff_t first_index,
                                    std::vector<double> values) {
    if (!(step > 0.0)) throw InvalidArgument("from_samples: step must be positive");
    const auto count = static_cast<std::ptrdiff_t>(values.size());
    if (first_index > 0 || first_index + count - 1 < 0) {
        throw InvalidArgument("from_samples: window must contain t = 0");
    }
    if (values[static_cast<std::size_t>(-first_index)] != 0.0) {
        throw InvalidArgument("from_samples: value at t = 0 must be exactly 0");
    }
    WienerPath path;
    path.base_ = std::make_shared<const std::vector<double>>(std::move(values));
    path.step_ = step;
    path.lo_ = 0;
    path.hi_ = count - 1;
    path.offset_ = -first_index;
    path.baseline_ = 0.0;
    return path;
}

bool WienerPath::on_grid(double t) const noexcept {
    const double ratio = t / step_;
    return std::abs(ratio - std::round(ratio)) <= kGridSnap * std::max(1.0, std::abs(ratio));
}

std::ptrdiff_t WienerPath::grid_index(double t) const {
    if (!on_grid(t)) throw InvalidArgument("time " + std::to_string(t) + " is not on the path grid");
    return static_cast<std::ptrdiff_t>(std::round(t / step_));
}

double WienerPath::t_min() const noexcept { return static_cast<double>(lo_ - offset_) * step_; }
double WienerPath::t_max() const noexcept { return static_cast<double>(hi_ - offset_) * step_; }

double WienerPath::value_at_index(std::ptrdiff_t k) const {
    const std::ptrdiff_t b = offset_ + k;
    if (b < lo_ || b > hi_) {
        throw WindowExceeded("path index " + std::to_string(k) + " outside window");
    }
    return (*base_)[static_cast<std::size_t>(b)] - baseline_;
}

double WienerPath::value_at(double t) const {
    const double ratio = t / step_;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= kGridSnap * std::max(1.0, std::abs(ratio))) {
        return value_at_index(static_cast<std::ptrdiff_t>(rounded));
    }
    const double fl = std::floor(ratio);
    const auto k = static_cast<std::ptrdiff_t>(fl);
    const std::ptrdiff_t b = offset_ + k;
    if (b < lo_ || b + 1 > hi_) {
        throw WindowExceeded("time " + std::to_string(t) + " outside path window");
    }
    const double frac = ratio - fl;
    const double a = (*base_)[static_cast<std::size_t>(b)] - baseline_;
    const double c = (*base_)[static_cast<std::size_t>(b + 1)] - baseline_;
    return (1.0 - frac) * a + frac * c;
}

WienerPath WienerPath::shifted(double t) const {
    const std::ptrdiff_t k = grid_index(t);
    const std::ptrdiff_t b = offset_ + k;
    if (b < lo_ || b > hi_) {
        throw WindowExceeded("shift by " + std::to_string(t) + " exhausts the path window");
    }
    WienerPath out = *this;
    out.offset_ = b;
    out.baseline_ = (*base_)[static_cast<std::size_t>(b)];
    return out;
}

void WienerPath::write_csv(std::ostream& os) const {
    os << "t,omega\n";
    os << std::setprecision(17);
    for (std::ptrdiff_t k = first_index(); k <= last_index(); ++k) {
        os << static_cast<double>(k) * step_ << ',' << value_at_index(k) << '\n';
    }
}

WienerPath sample_two_sided_path(std::uint64_t seed, double s_max, double grid_step) {
    return WienerPath::sample(seed, s_max, grid_step);
}

WienerPath shift_path(const WienerPath& w, double t) { return w.shifted(t); }

double z_value(const WienerPath& w, double alpha, double t) {
    return std::exp(-alpha * w.value_at(t));
}

double quad_exp(const std::function<double(double)>& h, double rate, double S, double step) {
    if (!(S > 0.0) || !(step > 0.0)) throw InvalidArgument("quad_exp: S and step must be positive");
    if (!(rate > 0.0)) throw InvalidArgument("quad_exp: decay rate must be positive");
    const std::ptrdiff_t n = checked_multiple(S, step, "quad_exp truncation S");
    double sum = 0.0;
    for (std::ptrdiff_t j = 0; j <= n; ++j) {
        const double s = -static_cast<double>(j) * step;
        const double w = (j == 0 || j == n) ? 0.5 * step : step;
        sum += w * (std::exp(rate * s) * h(s));
    }
    return sum;
}

double sublinearity_report(const WienerPath& w, double t_min) {
    const double reach = std::max(w.t_max(), -w.t_min());
    if (!(t_min > 0.0) || t_min >= reach) {
        throw InvalidArgument("sublinearity_report: need 0 < t_min < S_max");
    }
    double worst = 0.0;
    for (std::ptrdiff_t k = w.first_index(); k <= w.last_index(); ++k) {
        const double t = static_cast<double>(k) * w.step();
        if (std::abs(t) + 1e-12 < t_min) continue;
        worst = std::max(worst, std::abs(w.value_at_index(k) / t));
    }
    return worst;
}

}  // namespace stochrd
