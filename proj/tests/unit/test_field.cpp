#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "stochrd/errors.hpp"
#include "stochrd/field.hpp"

using namespace stochrd;

TEST_CASE("grid validation and spacing") {
    const Grid g = Grid::make(1, 8.0, 257);
    CHECK(g.spacing() == 16.0 / 256.0);
    CHECK(g.x(0) == -8.0);
    CHECK(g.x(256) == 8.0);
    CHECK(g.x(128) == 0.0);
    CHECK_THROWS_AS(Grid::make(2, 8.0, 257), InvalidArgument);
    CHECK_THROWS_AS(Grid::make(1, 0.0, 257), InvalidArgument);
    CHECK_THROWS_AS(Grid::make(1, 8.0, 2), InvalidArgument);
}

TEST_CASE("fields carry zero boundary values") {
    const Grid g = Grid::make(1, 1.0, 11);
    const Field f = Field::from_function(g, [](double) { return 3.0; });
    CHECK(f[0] == 0.0);
    CHECK(f[10] == 0.0);
    CHECK(f[5] == 3.0);
    const Field h(g, std::vector<double>(11, 2.0));
    CHECK(h[0] == 0.0);
    CHECK(h[10] == 0.0);
    CHECK_THROWS_AS(Field(g, std::vector<double>(5, 0.0)), InvalidArgument);
    CHECK_THROWS_AS(l2_distance(f, Field(Grid::make(1, 1.0, 13))), InvalidArgument);
}

TEST_CASE("laplacian is exact for affine and quadratic data") {
    const Grid g = Grid::make(1, 2.0, 41);
    const Field affine = Field::from_function(g, [](double x) { return 1.5 - 0.25 * x; });
    const Field lap_affine = laplacian(affine);
    const Field quad = Field::from_function(g, [](double x) { return x * x; });
    const Field lap_quad = laplacian(quad);
    // interior points away from the boundary rows, where the samples are untouched
    for (std::size_t i = 2; i + 2 < g.size(); ++i) {
        CHECK(std::abs(lap_affine[i]) < 1e-12);
        CHECK(lap_quad[i] == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(lap_quad[0] == 0.0);
    CHECK(lap_quad[g.size() - 1] == 0.0);
}

TEST_CASE("first Dirichlet mode eigenvalue converges at second order") {
    double previous_error = 0.0;
    for (std::size_t n : {33u, 65u, 129u, 257u}) {
        const Grid g = Grid::make(1, 8.0, n);
        const double k = std::numbers::pi / 16.0;
        const Field mode = Field::from_function(g, [&](double x) { return std::cos(k * x); });
        const Field lap = laplacian(mode);
        const std::size_t mid = (n - 1) / 2;
        const double error = std::abs(lap[mid] / mode[mid] + k * k);
        // exact discrete eigenvalue for the sampled mode
        CHECK(-lap[mid] / mode[mid] == doctest::Approx(first_dirichlet_eigenvalue(g)).epsilon(1e-10));
        if (previous_error > 0.0) CHECK(previous_error / error == doctest::Approx(4.0).epsilon(0.01));
        previous_error = error;
    }
}

TEST_CASE("norms") {
    const Grid g = Grid::make(1, 1.0, 101);
    const Norms zero = norms(Field(g), 4.0);
    CHECK(zero.l2 == 0.0);
    CHECK(zero.h1_semi == 0.0);
    CHECK(zero.lp == 0.0);

    const Field one = Field::from_function(g, [](double) { return 1.0; });
    CHECK(std::abs(l2_squared(one) - 2.0) <= 2.0 * g.spacing());

    const Field u = Field::from_function(g, [](double x) { return std::sin(2.0 * x) + 0.3 * x; });
    const Norms base = norms(u, 4.0);
    for (double c : {-3.0, 0.5, 2.0}) {
        Field scaled = u;
        scaled *= c;
        const Norms n = norms(scaled, 4.0);
        CHECK(n.l2 == doctest::Approx(std::abs(c) * base.l2).epsilon(1e-14));
        CHECK(n.h1_semi == doctest::Approx(std::abs(c) * base.h1_semi).epsilon(1e-14));
        CHECK(n.lp == doctest::Approx(std::abs(c) * base.lp).epsilon(1e-14));
    }
    CHECK(lp_power(u, 3.0) == doctest::Approx(lp_power(u, 3.0000000001)).epsilon(1e-6));
    CHECK(lp_power(u, 2.0) == doctest::Approx(l2_squared(u)).epsilon(1e-14));
}

TEST_CASE("gradient norm equals the Dirichlet form of the laplacian") {
    const Grid g = Grid::make(1, 3.0, 61);
    const Field u = Field::from_function(g, [](double x) { return std::exp(-x * x) * (1.0 + x); });
    const Field lap = laplacian(u);
    double form = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) form -= u[i] * lap[i];
    form *= g.spacing();
    CHECK(grad_squared(u) == doctest::Approx(form).epsilon(1e-12));
}

TEST_CASE("tail mass") {
    const Grid g = Grid::make(1, 10.0, 2001);
    const Field bump = Field::from_function(g, [](double x) { return std::abs(x) < 2.0 ? 1.0 - x * x / 4.0 : 0.0; });
    CHECK(tail_mass(bump, 2.0) == 0.0);
    CHECK(tail_mass(bump, 5.0) == 0.0);

    const Field gauss = Field::from_function(g, [](double x) { return std::exp(-x * x); });
    const double center = gauss[1000] * gauss[1000] * g.spacing();
    CHECK(tail_mass(gauss, 1e-9) == doctest::Approx(l2_squared(gauss) - center).epsilon(1e-12));

    // int_{|x| >= 3} e^{-2 x^2} dx = sqrt(pi / 2) erfc(3 sqrt 2); the sharp
    // cut counts both nodes at |x| = 3 with full weight, adding h e^{-18}
    const double exact = std::sqrt(std::numbers::pi / 2.0) * std::erfc(3.0 * std::sqrt(2.0));
    CHECK(tail_mass(gauss, 3.0) == doctest::Approx(exact + g.spacing() * std::exp(-18.0)).epsilon(1e-3));

    CHECK(tail_mass(gauss, 2.0) >= tail_mass(gauss, 3.0));
    CHECK_THROWS_AS(tail_mass(gauss, 10.0), InvalidArgument);
    CHECK_THROWS_AS(tail_mass(gauss, 0.0), InvalidArgument);
}

TEST_CASE("field CSV export") {
    const Grid g = Grid::make(1, 1.0, 3);
    std::ostringstream os;
    write_field_csv(os, Field(g));
    CHECK(os.str() == "x,value\n-1,0\n0,0\n1,0\n");
}

TEST_CASE("binary field block layout and round trip") {
    const Grid g = Grid::make(1, 2.5, 5);
    const Field f(g, {0.0, 1.25, -3.0, 1e-300, 0.0});
    std::stringstream ss;
    write_field_binary(ss, f);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 4 + 4 + 4 + 8 + 8 + 5 * 8);
    CHECK(bytes.substr(0, 4) == "SRDF");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little-endian
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);  // dims
    CHECK(static_cast<unsigned char>(bytes[12]) == 5); // N
    double L = 0.0;
    std::memcpy(&L, bytes.data() + 20, 8);
    CHECK(L == 2.5);

    const Field back = read_field_binary(ss);
    CHECK(back == f);

    std::istringstream bad("XXXX");
    CHECK_THROWS_AS(read_field_binary(bad), InvalidArgument);
    std::istringstream truncated(bytes.substr(0, 30));
    CHECK_THROWS_AS(read_field_binary(truncated), InvalidArgument);
}
