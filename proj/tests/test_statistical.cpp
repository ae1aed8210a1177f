#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "summatau/abel.hpp"
#include "summatau/dsl.hpp"
#include "summatau/statistical.hpp"

using namespace summatau;

namespace {
ToleranceProfile st_profile(std::uint64_t n_max = 1'000'000) {
    ToleranceProfile p;
    p.n_max = n_max;
    return p;
}
} // namespace

TEST_CASE("density_profile: examples") {
    // square_indicator: count of perfect squares in [1, n] is floor(sqrt(n))
    DensityProfile sq = density_profile(make_family("square_indicator", {}), 0.0, 0.5,
                                        {100, 10'000, 1'000'000});
    CHECK(sq.bad_counts[0] == 10);
    CHECK(sq.bad_counts[1] == 100);
    CHECK(sq.bad_counts[2] == 1000);
    CHECK(sq.densities[2] == 1000.0 / 1'000'000.0);

    DensityProfile c = density_profile(make_family("constant", {{"c", 2}}), 2.0, 0.1, {10, 1000});
    CHECK(c.bad_counts[0] == 0);
    CHECK(c.bad_counts[1] == 0);

    DensityProfile alt = density_profile(make_family("alternating", {{"c", 1}}), 0.0, 0.5, {10, 1000});
    CHECK(alt.densities[0] == 1.0);
    CHECK(alt.densities[1] == 1.0);

    CHECK_THROWS_AS(density_profile(make_family("ramp", {}), 0.0, 0.0, {10}), std::invalid_argument);
}

TEST_CASE("density counts bit-exact vs brute force up to 1e4") {
    for (const char* text : {"square_indicator", "alternating(c=1)", "convergent(l=3,rate=1)",
                             "bounded_random(m=1,seed=5)"}) {
        Sequence s = make_sequence(parse_spec(text));
        for (double eps : {0.5, 0.01}) {
            DensityProfile prof = density_profile(s, 0.0, eps, {10, 100, 1000, 10'000});
            for (std::size_t i = 0; i < prof.n_grid.size(); ++i) {
                CAPTURE(text);
                CAPTURE(eps);
                CHECK(prof.bad_counts[i] == oracles::brute_bad_count(s, 0.0, eps, prof.n_grid[i]));
            }
        }
    }
}

TEST_CASE("st_limit: examples") {
    Verdict sq = st_limit(make_family("square_indicator", {}), st_profile());
    REQUIRE(sq.status == VerdictStatus::Converged);
    CHECK(sq.limit == 0.0); // cluster center is exactly 0

    Verdict alt = st_limit(make_family("alternating", {{"c", 1}}), st_profile());
    CHECK(alt.status == VerdictStatus::Inconclusive);
    REQUIRE(!alt.diagnostics.empty());
    CHECK(alt.diagnostics[0].find("not statistically convergent") != std::string::npos);

    Verdict conv = st_limit(make_family("convergent", {{"l", 3}, {"rate", 1}}), st_profile());
    REQUIRE(conv.status == VerdictStatus::Converged);
    CHECK(std::abs(conv.limit - 3.0) < 1e-3);
}

TEST_CASE("st_limit: dispersed sequences bail out without exhausting memory") {
    Verdict ramp = st_limit(make_family("ramp", {}), st_profile(10'000'000));
    CHECK(ramp.status == VerdictStatus::Inconclusive);
    REQUIRE(!ramp.diagnostics.empty());
    CHECK(ramp.diagnostics[0].find("dispersed") != std::string::npos);

    Verdict rnd = st_limit(make_family("bounded_random", {{"m", 1}}, 11), st_profile());
    CHECK(rnd.status == VerdictStatus::Inconclusive);
}

TEST_CASE("convergent implies statistically convergent with the same limit") {
    for (int i = 0; i < 25; ++i) {
        const double l = -5.0 + 10.0 * (static_cast<double>(splitmix64(300 + i) >> 11) * 0x1.0p-53);
        const double rate = 0.85 + 2.15 * (static_cast<double>(splitmix64(400 + i) >> 11) * 0x1.0p-53);
        Verdict v = st_limit(make_family("convergent", {{"l", l}, {"rate", rate}}), st_profile());
        CAPTURE(l);
        CAPTURE(rate);
        REQUIRE(v.status == VerdictStatus::Converged);
        CHECK(std::abs(v.limit - l) < 2e-3);
    }
}

TEST_CASE("validate_lacunary: examples") {
    // powers of two up to 2^20
    std::vector<std::uint64_t> pow2{0};
    for (int j = 1; j <= 20; ++j) pow2.push_back(std::uint64_t{1} << j);
    LacunarySequence ok = validate_lacunary(pow2);
    CHECK(ok.windows() == 20);
    CHECK(ok.h[0] == 2);
    CHECK(ok.h[19] == (std::uint64_t{1} << 19));

    // [0,1,2,...,100]: windows never grow and ratios sink toward 1
    std::vector<std::uint64_t> flat;
    for (std::uint64_t i = 0; i <= 100; ++i) flat.push_back(i);
    std::vector<std::string> warnings;
    validate_lacunary(flat, true, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("WindowsNotGrowing") != std::string::npos);
    CHECK(warnings[0].find("RatioLiminfViolated") != std::string::npos);
    CHECK_THROWS_AS(validate_lacunary(flat), LacunaryError);

    // [0,3,2]: not increasing
    try {
        validate_lacunary({0, 3, 2});
        FAIL("expected LacunaryError");
    } catch (const LacunaryError& e) {
        CHECK(e.violation() == LacunaryViolation::NotIncreasing);
    }

    try {
        validate_lacunary({1, 2, 40});
        FAIL("expected LacunaryError");
    } catch (const LacunaryError& e) {
        CHECK(e.violation() == LacunaryViolation::NotStartingAtZero);
    }
}

TEST_CASE("lacunary_powers builds [0, b, b^2, ...]") {
    CHECK(lacunary_powers(2, 16) == std::vector<std::uint64_t>{0, 2, 4, 8, 16});
    CHECK(lacunary_powers(3, 100) == std::vector<std::uint64_t>{0, 3, 9, 27, 81});
}

TEST_CASE("lacunary_profile: window counts, examples and brute force") {
    LacunarySequence theta = validate_lacunary(lacunary_powers(2, 1 << 20));
    Sequence sq = make_family("square_indicator", {});

    WindowProfile prof = lacunary_profile(sq, theta, 0.0, 0.5);
    // brute-force recount per window, bit-exact
    for (std::size_t r = 0; r < std::min<std::size_t>(prof.ratios.size(), 14); ++r) {
        std::uint64_t count = 0;
        for (std::uint64_t k = theta.k[r] + 1; k <= theta.k[r + 1]; ++k)
            if (std::abs(sq.term(k) - 0.0) >= 0.5) ++count;
        CAPTURE(r);
        CHECK(prof.bad_counts[r] == count);
        CHECK(prof.ratios[r] == static_cast<double>(count) / static_cast<double>(theta.h[r]));
    }
    // square-count bound: w_r <= (sqrt(k_r) + 1) / h_r
    for (std::size_t r = 0; r < prof.ratios.size(); ++r) {
        const double bound =
            (std::sqrt(static_cast<double>(theta.k[r + 1])) + 1.0) / static_cast<double>(theta.h[r]);
        CHECK(prof.ratios[r] <= bound);
    }
}

TEST_CASE("lacunary windows of alternating: half the terms miss either sign") {
    LacunarySequence theta = validate_lacunary(lacunary_powers(2, 1 << 14));
    Sequence alt = make_family("alternating", {{"c", 1}});
    WindowProfile at_plus = lacunary_profile(alt, theta, 1.0, 0.5);
    WindowProfile at_zero = lacunary_profile(alt, theta, 0.0, 0.5);
    for (std::size_t r = 3; r < at_plus.ratios.size(); ++r) {
        CHECK(at_plus.ratios[r] == doctest::Approx(0.5).epsilon(0.1));
        CHECK(at_zero.ratios[r] == 1.0);
    }
}

TEST_CASE("st_lacunary_limit: examples") {
    LacunarySequence theta = validate_lacunary(lacunary_powers(2, 1 << 22));

    Verdict sq = st_lacunary_limit(make_family("square_indicator", {}), theta, st_profile());
    REQUIRE(sq.status == VerdictStatus::Converged);
    CHECK(sq.limit == 0.0);

    Verdict c = st_lacunary_limit(make_family("constant", {{"c", 4}}), theta, st_profile());
    REQUIRE(c.status == VerdictStatus::Converged);
    CHECK(c.limit == 4.0);

    Verdict alt = st_lacunary_limit(make_family("alternating", {{"c", 1}}), theta, st_profile());
    CHECK(alt.status == VerdictStatus::Inconclusive);
    REQUIRE(!alt.diagnostics.empty());
    CHECK(alt.diagnostics[0].find("not lacunary statistically convergent") != std::string::npos);
}

TEST_CASE("lattice witness: square_indicator separates st/Abel from ordinary convergence") {
    Sequence sq = make_family("square_indicator", {});
    Verdict st = st_limit(sq, st_profile());
    REQUIRE(st.status == VerdictStatus::Converged);
    CHECK(std::abs(st.limit) < 1e-4);

    // Abel-Converged near 0 at the probe-scale profile (the sqrt(1-x) decay
    // leaves ~1.6e-3 drift across the last grid points, above the default
    // eps_conv).
    ToleranceProfile loose;
    loose.eps_conv = 4e-3;
    Verdict abel = summatau::abel_limit(sq, loose);
    REQUIRE(abel.status == VerdictStatus::Converged);
    CHECK(std::abs(abel.limit) < 2e-3);

    // and the ordinary limit does not exist: both values recur arbitrarily deep
    CHECK(sq.term(1u << 20) == 1.0); // (2^10)^2
    CHECK(sq.term((1u << 20) + 1) == 0.0);
}

TEST_CASE("profile CSV shapes") {
    DensityProfile d = density_profile(make_family("constant", {{"c", 0}}), 0.0, 0.5, {2, 4});
    CHECK(density_profile_csv(d) == "n,d_n\n2,0\n4,0\n");

    LacunarySequence theta = validate_lacunary({0, 2, 4, 8, 16, 32, 64, 128});
    WindowProfile w = lacunary_profile(make_family("constant", {{"c", 0}}), theta, 0.0, 0.5);
    const std::string csv = window_profile_csv(w);
    CHECK(csv.rfind("r,k_r,h_r,w_r\n", 0) == 0);
    CHECK(csv.find("\n1,2,2,0\n") != std::string::npos);
}
