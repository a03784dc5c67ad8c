#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace stochrd {

/// Uniform grid on [-L, L] with homogeneous Dirichlet boundary.
///
/// Only d = 1 is implemented; the dimension is carried so that callers and
/// serialized blocks stay stable if d = 2 is added later.
struct Grid {
    int dim = 1;
    double half_width = 8.0;
    std::size_t points = 257;

    static Grid make(int dim, double half_width, std::size_t points);

    double spacing() const noexcept { return 2.0 * half_width / static_cast<double>(points - 1); }
    double x(std::size_t i) const noexcept {
        return -half_width + static_cast<double>(i) * spacing();
    }
    std::size_t size() const noexcept { return points; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Grid function with zero boundary values.
class Field {
public:
    explicit Field(Grid grid);
    Field(Grid grid, std::vector<double> values);

    /// Samples `fn` at interior points; boundary points are set to 0.
    static Field from_function(const Grid& grid, const std::function<double(double)>& fn);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    bool all_finite() const noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double c) noexcept;

    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator*(double c, Field a) { return a *= c; }

    friend bool operator==(const Field&, const Field&) = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

struct Norms {
    double l2 = 0.0;       // (int |u|^2)^(1/2)
    double h1_semi = 0.0;  // (int |grad u|^2)^(1/2)
    double lp = 0.0;       // (int |u|^p)^(1/p)
};

/// Second-order central-difference Laplacian; boundary rows are zero.
Field laplacian(const Field& field);

double l2_squared(const Field& field);
/// Forward differences on cells; equals -(u, laplacian(u)) for Dirichlet data.
double grad_squared(const Field& field);
/// int |u|^p.
double lp_power(const Field& field, double p);
double l2_distance(const Field& a, const Field& b);

Norms norms(const Field& field, double p);

/// int_{|x| >= k} |u|^2 with a sharp indicator. Requires 0 < k < L.
double tail_mass(const Field& field, double k);

/// Discrete eigenvalue of -laplacian for the first Dirichlet mode.
double first_dirichlet_eigenvalue(const Grid& grid);

/// CSV with header "x,value".
void write_field_csv(std::ostream& os, const Field& field);

/// Binary block: magic "SRDF", uint32 version, int32 dims, uint64 N,
/// float64 L, then N little-endian float64 values.
void write_field_binary(std::ostream& os, const Field& field);
Field read_field_binary(std::istream& is);

}  // namespace stochrd
