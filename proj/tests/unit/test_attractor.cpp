#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stochrd/attractor.hpp"
#include "stochrd/errors.hpp"

using namespace stochrd;

namespace {

const Grid kGrid = Grid::make(1, 8.0, 257);

// omega(s) = kappa s on [-window, window]
WienerPath linear_path(double kappa, double window, double step) {
    const auto n = static_cast<std::ptrdiff_t>(std::llround(window / step));
    std::vector<double> values;
    for (std::ptrdiff_t k = -n; k <= n; ++k) values.push_back(k == 0 ? 0.0 : kappa * static_cast<double>(k) * step);
    return WienerPath::from_samples(step, -n, std::move(values));
}

AttractorConfig small_config() {
    AttractorConfig c;
    c.grid = kGrid;
    c.horizons = {6.0, 10.0};
    c.members = 3;
    c.absorbing.c_abs = 2.0;
    return c;
}

std::vector<Field> random_set(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal;
    std::vector<Field> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = normal(rng), b = normal(rng), c = normal(rng);
        out.push_back(Field::from_function(kGrid, [&](double x) { return a * std::exp(-x * x) + b * std::sin(x) + c * std::cos(2.0 * x); }));
    }
    return out;
}

}  // namespace

TEST_CASE("absorbing radius against closed forms") {
    AbsorbingSpec abs;
    abs.c_abs = 1.0;
    const WienerPath flat = linear_path(0.0, 40.0, 1e-3);
    ModelSpec spec = ModelSpec::canonical_cubic();

    // int_{-S}^0 e^{s} ds = 1 - e^{-S}
    CHECK(deterministic_radius(0.0, spec, kGrid, abs) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(absorbing_radius(0.0, flat, 0.7, spec, kGrid, abs) == doctest::Approx(1.0).epsilon(1e-4));

    // ||g||^2 = 15 adds a factor 16 under the root
    const double profile_sq = l2_squared(Field::from_function(kGrid, SpatialProfile::gaussian(1.0)));
    ModelSpec forced = spec;
    forced.g = ForcingSpec::constant(std::sqrt(15.0 / profile_sq), SpatialProfile::gaussian(1.0));
    CHECK(deterministic_radius(-3.0, forced, kGrid, abs) == doctest::Approx(4.0).epsilon(1e-3));

    ModelSpec fast = spec;
    fast.lambda = 2.0;
    CHECK(deterministic_radius(0.0, fast, kGrid, abs) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));

    // omega(s) = kappa s: int e^{(lambda - 2 alpha kappa) s} ds = 1 / (lambda - 2 alpha kappa)
    const WienerPath drift = linear_path(0.2, 40.0, 1e-3);
    CHECK(absorbing_radius(0.0, drift, 0.5, spec, kGrid, abs) == doctest::Approx(1.0 / std::sqrt(0.8)).epsilon(1e-4));
}

TEST_CASE("absorbing radius is linear in c_abs and dominated by the uniform radius") {
    const ModelSpec spec = ModelSpec::canonical_periodic();
    const WienerPath w = sample_two_sided_path(7, 40.0, 1e-3);
    AbsorbingSpec one;
    one.c_abs = 1.0;
    AbsorbingSpec three = one;
    three.c_abs = 3.0;
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
        const double m1 = absorbing_radius(-2.0, w, alpha, spec, kGrid, one);
        CHECK(absorbing_radius(-2.0, w, alpha, spec, kGrid, three) == doctest::Approx(3.0 * m1).epsilon(1e-15));
        CHECK(m1 <= uniform_radius(-2.0, w, spec, kGrid, one));
    }
    CHECK(absorbing_radius(-2.0, w, 0.0, spec, kGrid, one) == deterministic_radius(-2.0, spec, kGrid, one));

    AbsorbingSpec bad = one;
    bad.c_abs = 0.0;
    CHECK_THROWS_AS(deterministic_radius(0.0, spec, kGrid, bad), InvalidArgument);
    const WienerPath short_path = sample_two_sided_path(7, 10.0, 1e-3);
    CHECK_THROWS_AS(absorbing_radius(0.0, short_path, 0.5, spec, kGrid, one), WindowExceeded);
}

TEST_CASE("tempered family draws") {
    TemperedFamilySpec family;
    family.seed = 3;
    const Field a = family.draw(kGrid, 5.0, 11);
    CHECK(a == family.draw(kGrid, 5.0, 11));
    CHECK_FALSE(a == family.draw(kGrid, 5.0, 12));
    for (std::uint64_t stream = 0; stream < 50; ++stream) {
        const double norm = std::sqrt(l2_squared(family.draw(kGrid, 5.0, stream)));
        CHECK(norm >= 0.5 * 5.0 * (1.0 - 1e-12));
        CHECK(norm <= 5.0 * (1.0 + 1e-12));
    }
    CHECK(a[0] == 0.0);
    CHECK(a[kGrid.size() - 1] == 0.0);

    family.kind = TemperedFamilySpec::Radius::constant;
    family.value = 0.0;
    const WienerPath w = sample_two_sided_path(1, 40.0, 1e-3);
    CHECK_THROWS_AS(family.radius(0.0, w, 0.5, ModelSpec::canonical_cubic(), kGrid, {}), InvalidArgument);
}

TEST_CASE("Hausdorff distances") {
    std::mt19937_64 rng(5);
    const auto a = random_set(rng, 4);
    const auto b = random_set(rng, 5);
    const auto c = random_set(rng, 3);
    CHECK(hausdorff_semidist(a, a) == 0.0);
    CHECK(hausdorff_distance({a[0]}, {b[0]}) == l2_distance(a[0], b[0]));

    std::vector<Field> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(hausdorff_semidist(a, ab) == 0.0);
    CHECK(hausdorff_semidist(ab, a) > 0.0);

    CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
    CHECK(hausdorff_distance(a, c) <= hausdorff_distance(a, b) + hausdorff_distance(b, c));
    CHECK(hausdorff_semidist(a, c) <= hausdorff_semidist(a, b) + hausdorff_semidist(b, c));

    CHECK_THROWS_AS(hausdorff_semidist({}, a), InvalidArgument);
    CHECK_THROWS_AS(hausdorff_semidist({Field(Grid::make(1, 4.0, 65))}, a), InvalidArgument);
}

TEST_CASE("deterministic cubic attractor collapses to zero") {
    const ModelSpec spec = ModelSpec::canonical_cubic();
    AttractorConfig config = small_config();
    config.horizons = {10.0, 20.0};
    const WienerPath w = sample_two_sided_path(1, 52.0, 1e-3);
    const TemperedFamilySpec sampler;
    const AttractorApprox a = pullback_ensemble(0.0, w, 0.0, spec, config, sampler);
    REQUIRE(a.initial_radii.size() == 2);
    CHECK(a.converged);
    // linear decay of the lowest mode at least e^{-lambda t}
    for (const auto& e : a.endpoints) {
        CHECK(std::sqrt(l2_squared(e)) <= std::exp(-20.0) * a.initial_radii.back());
    }
}

TEST_CASE("pullback ensemble bookkeeping") {
    const ModelSpec spec = ModelSpec::canonical_periodic();
    AttractorConfig config = small_config();
    const WienerPath w = sample_two_sided_path(2, 45.0, 1e-3);
    const TemperedFamilySpec sampler;
    const AttractorApprox a = pullback_ensemble(0.0, w, 0.5, spec, config, sampler);
    CHECK(a.seed == 2);
    CHECK(a.set_distances.size() == 1);
    CHECK(a.converged == (a.set_distances[0] < config.eps_att));
    // every member converges onto the same point for this model
    CHECK(a.endpoints.size() >= 1);
    CHECK(hausdorff_distance(a.endpoints, {a.endpoints[0]}) < config.eps_att);

    const AttractorApprox again = pullback_ensemble(0.0, w, 0.5, spec, config, sampler);
    CHECK(again.endpoints == a.endpoints);

    config.horizons = {10.0, 6.0};
    CHECK_THROWS_AS(pullback_ensemble(0.0, w, 0.5, spec, config, sampler), InvalidArgument);
    config.horizons = {6.0, 10.0};
    config.members = 0;
    CHECK_THROWS_AS(pullback_ensemble(0.0, w, 0.5, spec, config, sampler), InvalidArgument);
    config.members = 3;
    const WienerPath short_path = sample_two_sided_path(2, 20.0, 1e-3);
    CHECK_THROWS_AS(pullback_ensemble(0.0, short_path, 0.5, spec, config, sampler), WindowExceeded);
}

TEST_CASE("larger initial balls are attracted to the same set") {
    const ModelSpec spec = ModelSpec::canonical_periodic();
    const AttractorConfig config = small_config();
    const WienerPath w = sample_two_sided_path(4, 45.0, 1e-3);
    TemperedFamilySpec four;
    TemperedFamilySpec eight;
    eight.value = 8.0;
    const AttractorApprox a = pullback_ensemble(-1.0, w, 1.0, spec, config, four);
    const AttractorApprox b = pullback_ensemble(-1.0, w, 1.0, spec, config, eight);
    CHECK(b.initial_radii.back() == doctest::Approx(2.0 * a.initial_radii.back()).epsilon(1e-14));
    CHECK(hausdorff_distance(a.endpoints, b.endpoints) < config.eps_att);
}

TEST_CASE("attractor periodicity") {
    const ModelSpec spec = ModelSpec::canonical_periodic();
    const AttractorConfig config = small_config();
    const WienerPath w = sample_two_sided_path(3, 45.0, 1e-3);
    const TemperedFamilySpec sampler;
    CHECK(attractor_periodicity_check(0.0, 2.0, w, 0.5, spec, config, sampler) <= 2.0 * config.eps_att);
    // with g = 0 both approximations sit within e^{-lambda t} 4 M_0 of zero
    const ModelSpec cubic = ModelSpec::canonical_cubic();
    const double bound = 2.0 * std::exp(-10.0) * 4.0 * deterministic_radius(0.0, cubic, kGrid, config.absorbing);
    CHECK(attractor_periodicity_check(0.0, 2.0, w, 0.0, cubic, config, sampler) <= bound);
    CHECK_THROWS_AS(attractor_periodicity_check(0.0, 2.0005, w, 0.5, spec, config, sampler), InvalidArgument);
    CHECK_THROWS_AS(attractor_periodicity_check(0.0, 3.0, w, 0.5, spec, config, sampler), InvalidArgument);
}

TEST_CASE("absorption report") {
    const ModelSpec spec = ModelSpec::canonical_periodic();
    AttractorConfig config = small_config();
    const WienerPath w = sample_two_sided_path(6, 45.0, 1e-3);
    const TemperedFamilySpec sampler;
    const CertificateReport r = absorption_report(0.0, w, 1.0, spec, config, sampler);
    CHECK(r.passed);
    CHECK(r.metrics.at("max_endpoint_norm") < r.metrics.at("absorbing_radius"));
    CHECK(r.worst_margin == doctest::Approx(r.metrics.at("absorbing_radius") - r.metrics.at("max_endpoint_norm")));

    config.absorbing.c_abs = 1e-6;
    CHECK_FALSE(absorption_report(0.0, w, 1.0, spec, config, sampler).passed);
}

TEST_CASE("calibration of the absorbing constant") {
    const ModelSpec spec = ModelSpec::canonical_cubic();
    AttractorConfig config = small_config();
    CalibrationConfig cal;
    cal.horizon = 10.0;
    cal.path_window = 45.0;
    const double c = calibrate_c(spec, config, cal);
    CHECK(c >= cal.safety * cal.c_start);
    CHECK(c <= 8.0);
    CHECK(calibrate_c(spec, config, cal) == c);
    // the grid is c_start * sqrt(2)^k, scaled by the safety factor
    const double k = 2.0 * std::log2(c / (cal.safety * cal.c_start));
    CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-12));

    cal.c_cap = 1e-3;
    CHECK_THROWS_AS(calibrate_c(spec, config, cal), CalibrationFailure);
}

TEST_CASE("tail uniformity") {
    const ModelSpec spec = ModelSpec::canonical_periodic();
    const AttractorConfig config = small_config();
    const WienerPath w = sample_two_sided_path(8, 45.0, 1e-3);
    const TemperedFamilySpec sampler;
    const std::vector<double> ks = {1.0, 2.0, 4.0, 6.0};
    const CertificateReport r = tail_uniformity_report(0.0, w, {0.0, 1.0}, spec, ks, config, sampler,
                                                       TailTargets{{1e-4, 1e-30}});
    for (const char* alpha : {"0", "1"}) {
        double previous = std::numeric_limits<double>::infinity();
        for (const char* k : {"1", "2", "4", "6"}) {
            const double tail = r.metrics.at(std::string("tail[alpha=") + alpha + ",k=" + k + "]");
            CHECK(tail <= previous);
            previous = tail;
        }
    }
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].passed);
    CHECK(r.checks[0].metrics.at("smallest_k") <= 4.0);
    CHECK_FALSE(r.checks[1].passed);
    CHECK(std::isnan(r.checks[1].metrics.at("smallest_k")));
    CHECK_FALSE(r.passed);

    AttractorConfig deep = config;
    deep.horizons = {10.0, 20.0};
    const WienerPath long_path = sample_two_sided_path(8, 55.0, 1e-3);
    const CertificateReport zero = tail_uniformity_report(0.0, long_path, {0.0, 0.5}, ModelSpec::canonical_cubic(),
                                                          ks, deep, sampler);
    CHECK(zero.passed);
    for (const auto& [key, tail] : zero.metrics) CHECK(tail < 1e-12);
    CHECK_THROWS_AS(tail_uniformity_report(0.0, w, {1.5}, spec, ks, config, sampler), InvalidArgument);
}
