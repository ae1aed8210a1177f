#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "summatau/abel.hpp"
#include "summatau/dsl.hpp"
#include "summatau/oscillation.hpp"

using namespace summatau;

namespace {
ToleranceProfile osc_profile(std::uint64_t n_max = 2'000'000) {
    ToleranceProfile p;
    p.n_max = n_max;
    return p;
}
} // namespace

TEST_CASE("so_profile: examples") {
    std::vector<std::uint64_t> grid{64, 128, 256, 1024, 10'000};

    // harmonic_log: M_n(1.1) <= ln(1.1) by the integral bound
    OscillationProfile h = so_profile(make_family("harmonic_log", {}), {1.1}, grid);
    for (double m : h.rows[0]) CHECK(m <= std::log(1.1) + 1e-12);
    CHECK(h.tail_sups[0] > 0.0);

    // constant: all maxima zero
    OscillationProfile c = so_profile(make_family("constant", {{"c", 3}}), {1.5, 1.01}, grid);
    for (const auto& row : c.rows)
        for (double m : row) CHECK(m == 0.0);

    // alternating: adjacent terms differ by 2, windows at lambda=1.1, n>=20 are nonempty
    OscillationProfile a = so_profile(make_family("alternating", {{"c", 1}}), {1.1}, grid);
    for (double m : a.rows[0]) CHECK(m == 2.0);
}

TEST_CASE("so_profile: empty windows contribute zero") {
    // floor(1.01 * 50) = 50 < 51: empty window
    OscillationProfile p = so_profile(make_family("alternating", {{"c", 1}}), {1.01}, {50});
    CHECK(p.rows[0][0] == 0.0);
}

TEST_CASE("so_profile: window maxima bit-exact vs brute force to 1e4") {
    std::vector<std::uint64_t> grid{64, 100, 128, 1000, 9999};
    for (const char* text :
         {"log_oscillator", "alternating(c=1)", "harmonic_log", "bounded_random(m=1,seed=2)"}) {
        Sequence s = make_sequence(parse_spec(text));
        OscillationProfile prof = so_profile(s, {1.5, 1.1, 1.01}, grid);
        for (std::size_t i = 0; i < prof.lambda_grid.size(); ++i)
            for (std::size_t j = 0; j < grid.size(); ++j) {
                CAPTURE(text);
                CAPTURE(prof.lambda_grid[i]);
                CAPTURE(grid[j]);
                CHECK(prof.rows[i][j] == oracles::brute_window_max(s, prof.lambda_grid[i], grid[j]));
            }
    }
}

TEST_CASE("monotonicity in lambda across the catalog") {
    std::vector<double> lambdas{1.5, 1.25, 1.1, 1.05, 1.02, 1.01};
    std::vector<std::uint64_t> grid{64, 128, 512, 2048, 16'384};
    for (const char* text : {"alternating(c=1)", "log_oscillator", "harmonic_log",
                             "square_indicator", "convergent(l=0.3,rate=1)",
                             "bounded_random(m=1,seed=8)", "ramp"}) {
        Sequence s = make_sequence(parse_spec(text));
        OscillationProfile prof = so_profile(s, lambdas, grid);
        for (std::size_t i = 1; i < lambdas.size(); ++i)
            for (std::size_t j = 0; j < grid.size(); ++j) {
                CAPTURE(text);
                CHECK(prof.rows[i][j] <= prof.rows[i - 1][j]); // smaller lambda, smaller window
            }
    }
}

TEST_CASE("is_slowly_oscillating: examples") {
    ToleranceProfile p = osc_profile();

    SoReport log_osc = is_slowly_oscillating(make_family("log_oscillator", {}), p);
    CHECK(log_osc.classification == SoClassification::SoEmpirical);

    SoReport alt = is_slowly_oscillating(make_family("alternating", {{"c", 1}}), p);
    REQUIRE(alt.classification == SoClassification::NotSo);
    REQUIRE(alt.witness.has_value());
    CHECK(alt.witness->gap == 2.0);
    CHECK(alt.witness->k > alt.witness->n);

    SoReport conv = is_slowly_oscillating(make_family("convergent", {{"l", 1}, {"rate", 1}}), p);
    CHECK(conv.classification == SoClassification::SoEmpirical);

    SoReport c3 = is_slowly_oscillating(make_family("constant", {{"c", 3}}), p);
    CHECK(c3.classification == SoClassification::SoEmpirical);
    for (double s : c3.tail_sups) CHECK(s == 0.0);

    SoReport hl = is_slowly_oscillating(make_family("harmonic_log", {}), p);
    CHECK(hl.classification == SoClassification::SoEmpirical);
}

TEST_CASE("tauberian sanity: SO-empirical + Abel-Converged implies prefix convergence") {
    ToleranceProfile p = osc_profile();
    for (const char* text : {"convergent(l=0.3,rate=0.5)", "convergent(l=-1,rate=1)",
                             "convergent(l=2,rate=2)", "convergent_slow(l=0.2)",
                             "log_oscillator", "harmonic_log"}) {
        Sequence s = make_sequence(parse_spec(text));
        SoReport so = is_slowly_oscillating(s, p);
        Verdict abel = abel_limit(s, ToleranceProfile{});
        if (so.classification != SoClassification::SoEmpirical || !abel.converged()) continue;
        // final 10 terms of the evaluated prefix within 10*eps_conv of the limit
        const std::uint64_t n_end = 20'000'000;
        for (int i = 0; i < 10; ++i) {
            CAPTURE(text);
            CHECK(std::abs(s.term(n_end - 1 - i) - abel.limit) < 10.0 * ToleranceProfile{}.eps_conv);
        }
    }
}

TEST_CASE("oscillation CSV shape") {
    OscillationProfile prof = so_profile(make_family("constant", {{"c", 0}}), {1.5}, {64, 128});
    CHECK(so_profile_csv(prof) == "lambda,n,M_n\n1.5,64,0\n1.5,128,0\n");
}
