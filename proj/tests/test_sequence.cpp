#include <doctest.h>

#include <cmath>
#include <thread>

#include "summatau/sequence.hpp"

using namespace summatau;

TEST_CASE("term: catalog examples") {
    CHECK(make_family("alternating", {{"c", 1}}).term(3) == -1.0);
    CHECK(make_family("constant", {{"c", 5}}).term(1'000'000) == 5.0);

    // harmonic_log term(3) = 1 + 1/2 + 1/3, computed independently
    const double h3 = 1.0 + 1.0 / 2.0 + 1.0 / 3.0;
    CHECK(make_family("harmonic_log", {}).term(3) == doctest::Approx(h3).epsilon(1e-15));
    CHECK(make_family("harmonic_log", {}).term(0) == 0.0);
}

TEST_CASE("make_family: growth classes and shapes") {
    CHECK(make_family("alternating", {{"c", 1}}).growth().kind == GrowthKind::Bounded);
    CHECK(make_family("alternating", {{"c", 1}}).growth().coeff == 1.0);

    Sequence ramp = make_family("ramp", {});
    CHECK(ramp.growth().kind == GrowthKind::Polynomial);
    CHECK(ramp.growth().degree == 1);

    Sequence spike = make_family("lacunary_spike", {{"beta", 1.0 / 3.0}});
    CHECK(spike.growth().kind == GrowthKind::Polynomial);
    CHECK(spike.growth().degree == 1); // ceil(1/3)

    Sequence geo = make_family("geometric_spike", {});
    CHECK(geo.term(8) == 8.0);
    CHECK(geo.term(9) == 0.0);
    CHECK(geo.term(1) == 1.0);
    CHECK(geo.term(0) == 0.0);
}

TEST_CASE("pm1_pattern: exactly round(1000*rho) plus-ones per period") {
    Sequence p = make_family("pm1_pattern", {{"rho", 0.75}});
    int plus = 0;
    for (int k = 0; k < 1000; ++k)
        if (p.term(k) == 1.0) ++plus;
    CHECK(plus == 750);
    // second period identical
    for (int k = 0; k < 1000; ++k) CHECK(p.term(k) == p.term(k + 1000));
    // extremes
    CHECK(make_family("pm1_pattern", {{"rho", 1.0}}).term(123) == 1.0);
    CHECK(make_family("pm1_pattern", {{"rho", 0.0}}).term(123) == -1.0);
}

TEST_CASE("square_indicator counts") {
    Sequence s = make_family("square_indicator", {});
    CHECK(s.term(0) == 1.0);
    CHECK(s.term(1) == 1.0);
    CHECK(s.term(2) == 0.0);
    CHECK(s.term(4) == 1.0);
    CHECK(s.term(999'999) == 0.0);
    CHECK(s.term(1'000'000) == 1.0); // 1000^2
}

TEST_CASE("family errors: unknown name and out-of-domain parameters") {
    CHECK_THROWS_AS(make_family("no_such_family", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_family("pm1_pattern", {{"rho", 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(make_family("convergent", {{"l", 0.0}, {"rate", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_family("lacunary_spike", {{"beta", -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_family("constant", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_family("constant", {{"x", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_family("constant", {{"c", 1.0}}, 7), std::invalid_argument); // no seed
}

TEST_CASE("non-finite terms abort evaluation naming the index") {
    // 2^(j*400) overflows at the k=256 spike (j=8)
    Sequence s = make_family("lacunary_spike", {{"beta", 400.0}});
    CHECK(s.term(2) == doctest::Approx(std::exp2(400.0)));
    try {
        (void)s.term(4096);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.index() == 8); // 2^(3*400) is the first overflowing spike
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
        CHECK(std::string(e.what()).find("k=8") != std::string::npos);
    }
}

static std::vector<SequenceSpec> catalog_instances() {
    return {
        {"constant", {{"c", 7}}, {}},
        {"alternating", {{"c", 1}}, {}},
        {"alternating", {{"c", 0.5}}, {}},
        {"convergent", {{"l", 0.3}, {"rate", 1}}, {}},
        {"convergent", {{"l", -2}, {"rate", 0.5}}, {}},
        {"convergent_slow", {{"l", 0.2}}, {}},
        {"harmonic_log", {}, {}},
        {"square_indicator", {}, {}},
        {"lacunary_spike", {{"beta", 1.0 / 3.0}}, {}},
        {"pm1_pattern", {{"rho", 0.75}}, {}},
        {"log_oscillator", {}, {}},
        {"geometric_spike", {}, {}},
        {"bounded_random", {{"m", 1}}, 42},
        {"ramp", {}, {}},
    };
}

TEST_CASE("determinism: independently constructed sequences agree term-by-term to 1e5") {
    for (const auto& spec : catalog_instances()) {
        Sequence a = make_sequence(spec);
        Sequence b = make_sequence(spec);
        constexpr std::uint64_t n = 100'000;
        std::vector<double> va(n), vb(n);
        a.for_each_prefix(n, [&](std::uint64_t k, double p) { va[k] = p; });
        b.for_each_prefix(n, [&](std::uint64_t k, double p) { vb[k] = p; });
        for (std::uint64_t k = 0; k < n; ++k) {
            if (va[k] != vb[k]) {
                CAPTURE(spec.family);
                CAPTURE(k);
                REQUIRE(va[k] == vb[k]);
            }
        }
    }
}

TEST_CASE("growth soundness: every term obeys the declared envelope to 1e5") {
    for (const auto& spec : catalog_instances()) {
        Sequence s = make_sequence(spec);
        const GrowthClass g = s.growth();
        REQUIRE(g.is_rigorous());
        s.for_each_prefix(100'000, [&](std::uint64_t k, double p) {
            if (std::abs(p) > g.envelope(k)) {
                CAPTURE(spec.family);
                CAPTURE(k);
                REQUIRE(std::abs(p) <= g.envelope(k));
            }
        });
    }
}

TEST_CASE("bounded_random: documented splitmix64 stream") {
    Sequence s = make_family("bounded_random", {{"m", 2.0}}, 42);
    for (std::uint64_t k : {0ull, 1ull, 999ull}) {
        const std::uint64_t z = splitmix64(42 + (k + 1) * 0x9E3779B97F4A7C15ULL);
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        CHECK(s.term(k) == 2.0 * (2.0 * u - 1.0));
    }
    // different seeds give different streams
    Sequence t = make_family("bounded_random", {{"m", 2.0}}, 43);
    CHECK(s.term(0) != t.term(0));
}

TEST_CASE("combine_sequences: pointwise combination and growth") {
    Sequence a = make_family("alternating", {{"c", 1}});
    Sequence b = make_family("constant", {{"c", 2}});
    Sequence c = combine_sequences(2.0, a, -0.5, b);
    CHECK(c.term(0) == 2.0 * 1.0 - 0.5 * 2.0);
    CHECK(c.term(1) == 2.0 * -1.0 - 0.5 * 2.0);
    CHECK(c.growth().kind == GrowthKind::Bounded);
    CHECK(c.growth().coeff == doctest::Approx(2.0 * 1.0 + 0.5 * 2.0));
}

TEST_CASE("concurrent readers observe consistent memoization") {
    Sequence s = make_family("harmonic_log", {});
    std::vector<std::thread> threads;
    std::vector<double> results(8);
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&, i] { results[i] = s.term(50'000 + i * 13); });
    for (auto& t : threads) t.join();
    Sequence fresh = make_family("harmonic_log", {});
    for (int i = 0; i < 8; ++i) CHECK(results[i] == fresh.term(50'000 + i * 13));
}

TEST_CASE("with_growth wraps the same terms") {
    Sequence a = make_family("alternating", {{"c", 1}});
    Sequence u = a.with_growth(GrowthClass::unknown());
    CHECK(u.growth().kind == GrowthKind::Unknown);
    for (int k = 0; k < 100; ++k) CHECK(u.term(k) == a.term(k));
}
