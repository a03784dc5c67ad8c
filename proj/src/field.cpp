#include "stochrd/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <numbers>

#include "stochrd/errors.hpp"

namespace stochrd {

Grid Grid::make(int dim, double half_width, std::size_t points) {
    if (dim != 1) throw InvalidArgument("Grid: only dimension 1 is supported");
    if (!(half_width > 0.0)) throw InvalidArgument("Grid: half-width L must be positive");
    if (points < 3) throw InvalidArgument("Grid: need at least 3 points per axis");
    return Grid{dim, half_width, points};
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw InvalidArgument("Field: value count does not match grid");
    values_.front() = 0.0;
    values_.back() = 0.0;
}

Field Field::from_function(const Grid& grid, const std::function<double(double)>& fn) {
    Field f(grid);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) f.values_[i] = fn(grid.x(i));
    return f;
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("Field: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("Field: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(double c) noexcept {
    for (double& v : values_) v *= c;
    return *this;
}

Field laplacian(const Field& field) {
    const Grid& g = field.grid();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    Field out(g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        out[i] = (field[i - 1] - 2.0 * field[i] + field[i + 1]) * inv_h2;
    }
    return out;
}

// Boundary values vanish, so the trapezoidal rule reduces to h * (interior sum).
double l2_squared(const Field& field) {
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < field.size(); ++i) sum += field[i] * field[i];
    return sum * field.grid().spacing();
}

double grad_squared(const Field& field) {
    const double h = field.grid().spacing();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < field.size(); ++i) {
        const double d = field[i + 1] - field[i];
        sum += d * d;
    }
    return sum / h;
}

double lp_power(const Field& field, double p) {
    double sum = 0.0;
    if (p == 4.0) {
        for (std::size_t i = 1; i + 1 < field.size(); ++i) {
            const double sq = field[i] * field[i];
            sum += sq * sq;
        }
    } else if (p == 2.0) {
        for (std::size_t i = 1; i + 1 < field.size(); ++i) sum += field[i] * field[i];
    } else {
        for (std::size_t i = 1; i + 1 < field.size(); ++i) sum += std::pow(std::abs(field[i]), p);
    }
    return sum * field.grid().spacing();
}

double l2_distance(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw InvalidArgument("l2_distance: grid mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum * a.grid().spacing());
}

Norms norms(const Field& field, double p) {
    return Norms{std::sqrt(l2_squared(field)), std::sqrt(grad_squared(field)),
                 std::pow(lp_power(field, p), 1.0 / p)};
}

double tail_mass(const Field& field, double k) {
    const Grid& g = field.grid();
    if (!(k > 0.0) || k >= g.half_width) throw InvalidArgument("tail_mass: need 0 < k < L");
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        if (std::abs(g.x(i)) >= k) sum += field[i] * field[i];
    }
    return sum * g.spacing();
}

double first_dirichlet_eigenvalue(const Grid& grid) {
    const double h = grid.spacing();
    const double s = std::sin(std::numbers::pi * h / (4.0 * grid.half_width));
    return 4.0 * s * s / (h * h);
}

void write_field_csv(std::ostream& os, const Field& field) {
    os << "x,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < field.size(); ++i) os << field.grid().x(i) << ',' << field[i] << '\n';
}

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
        throw InvalidArgument("read_field_binary: truncated block");
    }
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

constexpr char kMagic[4] = {'S', 'R', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_field_binary(std::ostream& os, const Field& field) {
    os.write(kMagic, 4);
    put_le<std::uint32_t>(os, kVersion);
    put_le<std::int32_t>(os, field.grid().dim);
    put_le<std::uint64_t>(os, field.grid().points);
    put_le<double>(os, field.grid().half_width);
    for (double v : field.values()) put_le<double>(os, v);
}

Field read_field_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw InvalidArgument("read_field_binary: bad magic");
    }
    if (get_le<std::uint32_t>(is) != kVersion) throw InvalidArgument("read_field_binary: unsupported version");
    const auto dim = get_le<std::int32_t>(is);
    const auto n = get_le<std::uint64_t>(is);
    const auto half_width = get_le<double>(is);
    const Grid grid = Grid::make(dim, half_width, static_cast<std::size_t>(n));
    std::vector<double> values(grid.size());
    for (double& v : values) v = get_le<double>(is);
    return Field(grid, std::move(values));
}

}  // namespace stochrd
