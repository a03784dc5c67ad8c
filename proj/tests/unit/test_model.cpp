#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stochrd/errors.hpp"
#include "stochrd/model.hpp"

using namespace stochrd;

namespace {

const CertificateReport& check_named(const CertificateReport& r, const std::string& name) {
    for (const auto& c : r.checks) {
        if (c.name == name) return c;
    }
    FAIL("missing sub-check " << name);
    return r;
}

}  // namespace

TEST_CASE("cubic nonlinearity values") {
    const ModelSpec spec = ModelSpec::canonical_cubic();
    CHECK(f_eval(spec, 0.3, 1.0) == -1.0);
    CHECK(f_eval(spec, 0.3, 0.0) == 0.0);
    CHECK(f_eval(spec, -4.0, 2.0) == -8.0);
    CHECK(spec.f.exact_ds(0.0, 2.0).value() == -12.0);
    CHECK(spec.f.exact_dx(0.0, 2.0).value() == 0.0);
}

TEST_CASE("unknown nonlinearity family is rejected") {
    ModelSpec spec = ModelSpec::canonical_cubic();
    spec.f.family = NonlinearityFamily::custom;
    CHECK_THROWS_AS(f_eval(spec, 0.0, 1.0), InvalidArgument);
    spec.f.custom = [](double, double s) { return -s; };
    CHECK(f_eval(spec, 0.0, 2.0) == -2.0);
}

TEST_CASE("model validation") {
    ModelSpec spec = ModelSpec::canonical_cubic();
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.psi4_class() == "L^2");

    auto rejects = [](auto mutate) {
        ModelSpec s = ModelSpec::canonical_cubic();
        mutate(s);
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
    };
    rejects([](ModelSpec& s) { s.lambda = 0.0; });
    rejects([](ModelSpec& s) { s.alpha = 1.5; });
    rejects([](ModelSpec& s) { s.alpha = -0.1; });
    rejects([](ModelSpec& s) { s.p = 1.5; });
    rejects([](ModelSpec& s) { s.delta = 1.0; });
    rejects([](ModelSpec& s) { s.alpha1 = 0.0; });
    rejects([](ModelSpec& s) { s.g = ForcingSpec::periodic(1.0, -2.0, 0.5, SpatialProfile::gaussian(1.0)); });

    ModelSpec p2 = spec;
    p2.p = 2.0;
    CHECK(p2.psi4_class() == "Linf");
    CHECK(spec.with_alpha(0.25).alpha == 0.25);
    CHECK(spec.alpha == 0.0);
}

TEST_CASE("canonical cubic passes all five structural conditions") {
    const CertificateReport r = validate_dissipativity(ModelSpec::canonical_cubic(), SampleBox{}, 81);
    CHECK(r.passed);
    REQUIRE(r.checks.size() == 5);
    for (const auto& c : r.checks) CHECK(c.passed);
    for (const SampleBox box : {SampleBox{-1, 1, -0.5, 0.5}, SampleBox{-50, 50, -100, 100}}) {
        CHECK(validate_dissipativity(ModelSpec::canonical_cubic(), box, 31).passed);
    }
}

TEST_CASE("anti-dissipative cubic fails the dissipation condition at s = 2") {
    ModelSpec spec = ModelSpec::canonical_cubic();
    spec.f.family = NonlinearityFamily::anti_cubic;
    const SampleBox box{-1.0, 1.0, -2.0, 2.0};
    const CertificateReport r = validate_dissipativity(spec, box, 21);
    CHECK_FALSE(r.passed);
    const CertificateReport& f1 = check_named(r, "f1_dissipation");
    CHECK_FALSE(f1.passed);
    // f s = 16 against the allowance -alpha1 |s|^4 = -16
    CHECK(f1.worst_margin == doctest::Approx(-32.0));
    CHECK(std::abs(f1.metrics.at("worst_s")) == 2.0);
}

TEST_CASE("zero nonlinearity fails the dissipation condition") {
    ModelSpec spec = ModelSpec::canonical_cubic();
    spec.f.family = NonlinearityFamily::zero;
    const CertificateReport r = validate_dissipativity(spec, SampleBox{-1.0, 1.0, -2.0, 2.0}, 21);
    const CertificateReport& f1 = check_named(r, "f1_dissipation");
    CHECK_FALSE(f1.passed);
    CHECK(f1.worst_margin == doctest::Approx(-16.0));
}

TEST_CASE("finite-difference derivatives agree with exact ones") {
    ModelSpec exact = ModelSpec::canonical_cubic();
    exact.f.linear = 0.0;
    ModelSpec custom = exact;
    custom.f.family = NonlinearityFamily::custom;
    custom.f.custom = [](double, double s) { return -s * s * s; };
    const CertificateReport a = validate_dissipativity(exact, SampleBox{}, 41);
    const CertificateReport b = validate_dissipativity(custom, SampleBox{}, 41);
    CHECK(b.passed);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(b.checks[k].worst_margin == doctest::Approx(a.checks[k].worst_margin).epsilon(1e-6));
    }
}

TEST_CASE("forcing snapshots") {
    const Grid grid = Grid::make(1, 8.0, 257);
    const Field zero = g_eval(ForcingSpec::zero(), 1.7, grid);
    for (double v : zero.values()) CHECK(v == 0.0);

    const ForcingSpec periodic = ForcingSpec::periodic(0.7, 2.0, 0.5, SpatialProfile::gaussian(1.0));
    for (double t : {0.0, 0.5, 1.25, -3.75}) CHECK(g_eval(periodic, t, grid) == g_eval(periodic, t + 2.0, grid));
    for (double t : {0.3, 1.1, -7.9}) {
        const Field a = g_eval(periodic, t, grid), b = g_eval(periodic, t + 2.0, grid);
        CHECK(l2_distance(a, b) <= 1e-14);
    }
    CHECK(periodic.has_period(4.0));
    CHECK_FALSE(periodic.has_period(3.0));
    CHECK_FALSE(ForcingSpec::from_function([](double, double) { return 0.0; }).has_period(1.0));

    // ||gamma exp(-x^2)||^2 = gamma^2 sqrt(pi / 2) on a wide domain
    const double gamma = 1.5;
    const ForcingSpec constant = ForcingSpec::constant(gamma, SpatialProfile::gaussian(1.0));
    const double exact = gamma * gamma * std::sqrt(std::numbers::pi / 2.0);
    CHECK(std::abs(l2_squared(g_eval(constant, 0.0, grid)) - exact) < 1e-10);
    CHECK(forcing_norm_sq(constant, 3.0, grid) == doctest::Approx(l2_squared(g_eval(constant, 3.0, grid))).epsilon(1e-14));
}

TEST_CASE("spatial profiles") {
    const SpatialProfile bump = SpatialProfile::compact_bump(2.0);
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(2.0) == 0.0);
    CHECK(bump(-3.0) == 0.0);
    CHECK(bump(1.0) == doctest::Approx(0.5));
    const SpatialProfile table = SpatialProfile::table({0.0, 1.0, 2.0}, {1.0, 3.0, 1.0});
    CHECK(table(0.5) == doctest::Approx(2.0));
    CHECK(table(-0.1) == 0.0);
    CHECK(table(2.5) == 0.0);
    CHECK_THROWS_AS(SpatialProfile::table({0.0, 0.0}, {1.0, 2.0}), InvalidArgument);
}

TEST_CASE("tempered forcing checks") {
    const Grid grid = Grid::make(1, 8.0, 257);
    const std::vector<double> probes = {0.0, -5.0, 3.0};

    const CertificateReport zero = check_g_tempered(ForcingSpec::zero(), 0.5, 0.5, probes, grid);
    CHECK(zero.passed);
    for (const auto& [key, value] : zero.checks[0].metrics) CHECK(value == 0.0);

    // constant norm gamma^2 P: the integral up to tau is gamma^2 P e^{delta tau} / delta
    const double gamma = 0.8, delta = 0.5;
    const ForcingSpec constant = ForcingSpec::constant(gamma, SpatialProfile::gaussian(1.0));
    const double norm_sq = forcing_norm_sq(constant, 0.0, grid);
    const CertificateReport c = check_g_tempered(constant, delta, 0.5, {0.0, -2.0}, grid);
    CHECK(c.passed);
    for (double tau : {0.0, -2.0}) {
        const double value = c.checks[0].metrics.at("value_at_tau=" + std::to_string(tau));
        const double expected = norm_sq * std::exp(delta * tau) / delta;
        CHECK(std::abs(value - expected) < 0.02 * expected);
    }

    const ForcingSpec periodic = ForcingSpec::periodic(0.8, 2.0, 0.5, SpatialProfile::gaussian(1.0));
    CHECK(check_g_tempered(periodic, delta, 0.5, probes, grid).passed);

    // ||g(s)||^2 = e^{-2s} P: the weighted integrand e^{-s} grows without bound
    const ForcingSpec growing = ForcingSpec::from_function([](double t, double x) { return std::exp(-t - x * x); });
    const CertificateReport g = check_g_tempered(growing, 1.0, 0.5, {0.0}, grid);
    CHECK_FALSE(g.passed);
    CHECK_FALSE(g.checks[0].passed);

    // passing at delta implies passing at larger delta
    for (const ForcingSpec& spec : {constant, periodic}) {
        for (double d : {0.1, 0.3, 0.6, 0.9}) CHECK(check_g_tempered(spec, d, 0.5, probes, grid).passed);
    }
    CHECK_FALSE(check_g_tempered(constant, 0.0, 0.5, probes, grid).passed);
}
