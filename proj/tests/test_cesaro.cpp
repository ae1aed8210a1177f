#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "summatau/abel.hpp"
#include "summatau/cesaro.hpp"
#include "summatau/dsl.hpp"

using namespace summatau;

namespace {
ToleranceProfile fast_profile() {
    ToleranceProfile p;
    p.grid_depth = 16;
    p.n_max = 2'000'000;
    return p;
}
} // namespace

TEST_CASE("cesaro_means: examples") {
    // alternating(1): ten terms 1,-1,...,-1 sum to zero
    CesaroProfile alt = cesaro_means(make_family("alternating", {{"c", 1}}), {9, 10, 99});
    CHECK(alt.means[0] == 0.0);
    CHECK(alt.means[1] == doctest::Approx(1.0 / 11.0));
    CHECK(alt.means[2] == 0.0);

    CesaroProfile c = cesaro_means(make_family("constant", {{"c", 3.5}}), {1, 10, 1000});
    for (double m : c.means) CHECK(m == doctest::Approx(3.5).epsilon(1e-15));

    // pm1_pattern(0.75) at n = 10^6 - 1: exactly 2*rho - 1 over whole periods
    CesaroProfile pm = cesaro_means(make_family("pm1_pattern", {{"rho", 0.75}}), {999'999});
    CHECK(std::abs(pm.means[0] - 0.5) <= 1e-3);

    CHECK_THROWS_AS(cesaro_means(make_family("ramp", {}), {5, 5}), std::invalid_argument);
    CHECK_THROWS_AS(cesaro_means(make_family("ramp", {}), {}), std::invalid_argument);
}

TEST_CASE("cesaro index grid is two-phase logarithmic") {
    auto g = cesaro_index_grid(24);
    CHECK(g == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 12, 16, 24});
}

TEST_CASE("prefix-mean exactness: running sum vs fresh summation") {
    for (const char* text : {"alternating(c=1)", "harmonic_log", "log_oscillator",
                             "bounded_random(m=1,seed=9)"}) {
        Sequence s = make_sequence(parse_spec(text));
        CesaroProfile prof = cesaro_means(s, {7, 100, 1000, 10'000});
        for (std::size_t i = 0; i < prof.n_grid.size(); ++i) {
            const double fresh = oracles::naive_cesaro_mean(s, prof.n_grid[i]);
            CAPTURE(text);
            CHECK(prof.means[i] ==
                  doctest::Approx(fresh).epsilon(64 * std::numeric_limits<double>::epsilon()));
        }
    }
}

TEST_CASE("cesaro_limit: examples") {
    ToleranceProfile p = fast_profile();

    Verdict alt = cesaro_limit(make_family("alternating", {{"c", 1}}), p);
    REQUIRE(alt.status == VerdictStatus::Converged);
    CHECK(std::abs(alt.limit) < 1e-4);

    Verdict ramp = cesaro_limit(make_family("ramp", {}), p);
    CHECK(ramp.status == VerdictStatus::Diverged);
    CHECK(ramp.sign == 1);

    // oscillates with persistent amplitude; never Converged
    Verdict osc = cesaro_limit(make_family("log_oscillator", {}), p);
    CHECK(osc.status != VerdictStatus::Converged);
    CHECK(osc.status != VerdictStatus::Diverged);
}

TEST_CASE("cesaro_limit: geometric_spike octave oscillation is not Converged") {
    // sigma_n swings between ~1.33 and ~2 within every octave; the two-phase
    // grid samples both phases.
    Verdict v = cesaro_limit(make_family("geometric_spike", {}), fast_profile());
    CHECK(v.status != VerdictStatus::Converged);
}

TEST_CASE("tauberian_karamata_check: bounded examples") {
    ToleranceProfile p = fast_profile();

    KaramataReport alt = tauberian_karamata_check(make_family("alternating", {{"c", 1}}), p);
    CHECK(alt.status == KaramataReport::Status::Pass);
    CHECK(std::abs(alt.abel.limit) < 1e-3);
    CHECK(std::abs(alt.cesaro.limit) < 1e-3);

    KaramataReport pm = tauberian_karamata_check(make_family("pm1_pattern", {{"rho", 0.9}}), p);
    CHECK(pm.status == KaramataReport::Status::Pass);
    CHECK(pm.abel.limit == doctest::Approx(0.8).epsilon(1e-3));
    CHECK(pm.cesaro.limit == doctest::Approx(0.8).epsilon(1e-3));

    // precondition: growth must be Bounded
    CHECK_THROWS_AS(tauberian_karamata_check(make_family("ramp", {}), p), std::invalid_argument);
}

TEST_CASE("tauberian_karamata_check: random bounded seeds never contradict") {
    ToleranceProfile p = fast_profile();
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        Sequence s = make_family("bounded_random", {{"m", 1}}, seed);
        KaramataReport rep = tauberian_karamata_check(s, p);
        CAPTURE(seed);
        CHECK(rep.consistent());
    }
}

TEST_CASE("regular inclusion: Cesaro-Converged implies Abel-Converged to the same value") {
    ToleranceProfile p = fast_profile();
    for (const char* text : {"constant(c=7)", "alternating(c=1)", "alternating(c=0.5)",
                             "convergent(l=0.3,rate=1)", "convergent(l=-2,rate=0.5)",
                             "convergent_slow(l=0.2)", "harmonic_log", "square_indicator",
                             "lacunary_spike(beta=0.3333333333333333)", "pm1_pattern(rho=0.75)",
                             "log_oscillator", "geometric_spike", "bounded_random(m=1,seed=3)",
                             "ramp"}) {
        Sequence s = make_sequence(parse_spec(text));
        Verdict ces = cesaro_limit(s, p);
        if (!ces.converged()) continue;
        Verdict abel = abel_limit(s, p);
        CAPTURE(text);
        REQUIRE(abel.status == VerdictStatus::Converged);
        CHECK(std::abs(abel.limit - ces.limit) < 10.0 * p.eps_conv);
    }
}

TEST_CASE("cesaro CSV shape") {
    CesaroProfile prof = cesaro_means(make_family("constant", {{"c", 1}}), {1, 2});
    const std::string csv = cesaro_profile_csv(prof);
    CHECK(csv == "n,sigma\n1,1\n2,1\n");
}
