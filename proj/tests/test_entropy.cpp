#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entroscope/entropy.hpp"
#include "entroscope/lab.hpp"

using namespace entroscope;

namespace {

const PLMap kTent = tent_map();

CountMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    CountMatrix m(rows.size(), rows.begin()->size());
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (long v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("lap_number counts maximal monotone intervals") {
    CHECK(lap_number(kTent) == 2);
    CHECK(lap_number(PLMap::constant(Rational(0), Rational(1), Rational(1, 2))) == 1);
    CHECK(lap_number(PLMap::identity()) == 1);

    // oracle: exact composition and breakpoint scan
    const PLMap t3 = iterate(kTent, 3);
    CHECK(t3.size() == 9);
    CHECK(lap_number(t3) == 8);
    CHECK(lap_number(iterate(kTent, 2)) == 4);

    // constant stretches extend the neighbouring laps
    const PLMap phi = convexity_le0_phi();
    CHECK(lap_number(phi) == 2);
    const auto laps = monotone_laps(phi);
    REQUIRE(laps.size() == 2);
    CHECK(laps[0] == Interval{Rational(0), Rational(1, 2)});
    CHECK(laps[1] == Interval{Rational(1, 4), Rational(1)});
}

TEST_CASE("entropy_upper_lap") {
    // the tent doubles laps each step, so every bound equals log 2
    const EntropyEstimate tent = entropy_upper_lap(kTent, 10);
    REQUIRE(tent.trace.size() == 10);
    for (const LapTracePoint& p : tent.trace) {
        CHECK(p.laps == (1UL << p.n));
        CHECK(p.bound == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    CHECK(tent.upper == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(!tent.truncated);

    // monotone maps never gain laps
    const EntropyEstimate mono = entropy_upper_lap(convexity_le0_f(), 10);
    for (const LapTracePoint& p : mono.trace) CHECK(p.laps == 1);
    CHECK(mono.upper == 0.0);
    CHECK(mono.upper <= 0.12);

    CHECK(entropy_upper_lap(PLMap::identity(), 5).upper == 0.0);
    CHECK_THROWS_AS(entropy_upper_lap(kTent, 0), ParameterError);
}

TEST_CASE("lap_bound_within stops at the first certificate") {
    CHECK(lap_bound_within(kTent, 1, std::log(2.0) + 1e-12));
    CHECK(!lap_bound_within(kTent, 10, std::log(2.0) - 1e-3));
    CHECK(lap_bound_within(PLMap::identity(), 1, 0.0));
    // phi needs a few iterates before the trace dips under its budget
    const PLMap phi = convexity_le0_phi();
    const double golden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(lap_bound_within(phi, 12, golden + 0.05));
    CHECK(!lap_bound_within(phi, 2, golden + 0.05));
    CHECK_THROWS_AS(lap_bound_within(kTent, 0, 1.0), ParameterError);
}

TEST_CASE("markov_data") {
    const auto tent = markov_data(kTent);
    REQUIRE(tent.has_value());
    CHECK(tent->cuts == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1)});
    CHECK(tent->matrix == from_rows({{1, 1}, {1, 1}}));
    // oracle: each half maps onto the whole interval
    CHECK(extremum_data(kTent, Rational(0), Rational(1, 2)).minimum == Rational(0));
    CHECK(extremum_data(kTent, Rational(0), Rational(1, 2)).maximum == Rational(1));
    CHECK(extremum_data(kTent, Rational(1, 2), Rational(1)).minimum == Rational(0));
    CHECK(extremum_data(kTent, Rational(1, 2), Rational(1)).maximum == Rational(1));

    const auto id = markov_data(PLMap::identity());
    REQUIRE(id.has_value());
    CHECK(id->matrix == from_rows({{1}}));

    // the twenty-lap sawtooth: all-ones covering matrix
    const auto saw = markov_data(full_sawtooth(20));
    REQUIRE(saw.has_value());
    CHECK(saw->cuts.size() == 21);
    CHECK(saw->matrix.rows() == 20);
    CHECK((saw->matrix.array() == 1).all());

    // an orbit that never closes up within the bound
    const PLMap wild = make_broken_line(
        {{Rational(0), Rational(1, 7)}, {Rational(1, 3), Rational(1)}, {Rational(1), Rational(0)}});
    CHECK(!markov_data(wild, {.closure_rounds = 2, .max_cuts = 50}).has_value());
}

TEST_CASE("spectral radius brackets") {
    // equal row sums collapse the bracket immediately
    const PerronBracket two = spectral_radius_bracket(from_rows({{1, 1}, {1, 1}}), 1e-9);
    CHECK(two.lower == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(two.upper == doctest::Approx(2.0).epsilon(1e-12));

    // oracle: characteristic polynomial x^2 = x + 1
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    const PerronBracket fib = spectral_radius_bracket(from_rows({{0, 1}, {1, 1}}), 1e-9);
    CHECK(fib.width() <= 1e-9);
    CHECK(fib.lower <= golden);
    CHECK(golden <= fib.upper);
    CHECK(spectral_radius(from_rows({{0, 1}, {1, 1}}), 1e-9) == doctest::Approx(golden));

    CHECK(spectral_radius(from_rows({{1, 0}, {0, 1}}), 1e-9) == doctest::Approx(1.0));
    CHECK(spectral_radius(from_rows({{0, 1}, {0, 0}}), 1e-9) == doctest::Approx(0.0));
    // reducible: the dominant block decides
    CHECK(spectral_radius(from_rows({{2, 1}, {0, 1}}), 1e-9) == doctest::Approx(2.0));
    // periodic irreducible matrix, handled by the +I shift
    CHECK(spectral_radius(from_rows({{0, 1}, {1, 0}}), 1e-9) == doctest::Approx(1.0));
    CHECK(spectral_radius(from_rows({{0, 2}, {8, 0}}), 1e-9) == doctest::Approx(4.0));

    CountMatrix rect(1, 2);
    rect << 1, 1;
    CHECK_THROWS_AS(spectral_radius_bracket(rect, 1e-9), ShapeError);
    CHECK_THROWS_AS(spectral_radius_bracket(from_rows({{1}}), 0.0), ParameterError);
    CHECK_THROWS_AS(spectral_radius_bracket(from_rows({{-1}}), 1e-9), ValidationError);
}

TEST_CASE("entropy_markov") {
    CHECK(*entropy_markov(kTent, 1e-9) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(*entropy_markov(full_sawtooth(20), 1e-9) ==
          doctest::Approx(std::log(20.0)).epsilon(1e-9));
    CHECK(*entropy_markov(PLMap::identity(), 1e-9) == 0.0);
    CHECK(*entropy_markov(convexity_le0_f(), 1e-9) == 0.0);

    // the golden-mean value of the period-3 combination
    const auto phi = entropy_markov(convexity_le0_phi(), 1e-9);
    REQUIRE(phi.has_value());
    CHECK(*phi == doctest::Approx(std::log((1.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-8));
}

TEST_CASE("find_horseshoe") {
    const auto tent = find_horseshoe(kTent, 2);
    REQUIRE(tent.has_value());
    CHECK(tent->target == Interval{Rational(0), Rational(1)});
    REQUIRE(tent->intervals.size() == 2);
    CHECK(tent->intervals[0] == Interval{Rational(0), Rational(1, 2)});
    CHECK(tent->intervals[1] == Interval{Rational(1, 2), Rational(1)});
    // oracle: each half maps onto [0,1], which contains both halves
    for (const Interval& J : tent->intervals) {
        const ExtremumData ext = extremum_data(kTent, J.lo, J.hi);
        CHECK(ext.minimum <= tent->target.lo);
        CHECK(ext.maximum >= tent->target.hi);
    }

    CHECK(!find_horseshoe(kTent, 3).has_value());
    CHECK(find_horseshoe(full_sawtooth(20), 16).has_value());
    CHECK(find_horseshoe(full_sawtooth(20), 20).has_value());
    CHECK(!find_horseshoe(PLMap::constant(Rational(0), Rational(1), Rational(1, 2)), 2)
               .has_value());
    CHECK_THROWS_AS(find_horseshoe(kTent, 1), ParameterError);
}

TEST_CASE("entropy_lower_horseshoe") {
    CHECK(entropy_lower_horseshoe(kTent, 8) == doctest::Approx(std::log(2.0)));
    CHECK(entropy_lower_horseshoe(full_sawtooth(20), 20) == doctest::Approx(std::log(20.0)));
    CHECK(entropy_lower_horseshoe(full_sawtooth(20), 8) == doctest::Approx(std::log(8.0)));
    CHECK(entropy_lower_horseshoe(PLMap::identity(), 8) == 0.0);
}

TEST_CASE("entropy_estimate") {
    const EntropyEstimate tent = entropy_estimate(kTent, 10, 8, 1e-9);
    CHECK(tent.lower == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(tent.upper == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(tent.lower <= tent.upper);
    CHECK(tent.methods.size() == 3);

    const EntropyEstimate phi = entropy_estimate(convexity_le0_phi(), 10, 8, 1e-9);
    CHECK(phi.lower > 0.0);
    CHECK(phi.lower <= phi.upper);

    const EntropyEstimate zero =
        entropy_estimate(PLMap::constant(Rational(0), Rational(1), Rational(0)), 5, 4, 1e-9);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == 0.0);
}

TEST_CASE("property: lap counts are submultiplicative") {
    for (const PLMap& f : random_corpus(31, 15)) {
        const unsigned long l1 = lap_number(iterate(f, 1));
        const unsigned long l2 = lap_number(iterate(f, 2));
        const unsigned long l3 = lap_number(iterate(f, 3));
        const unsigned long l4 = lap_number(iterate(f, 4));
        CHECK(l2 <= l1 * l1);
        CHECK(l3 <= l1 * l2);
        CHECK(l4 <= l2 * l2);
        CHECK(l4 <= l1 * l3);
    }
}

TEST_CASE("property: sandwich of the three surrogates") {
    for (const PLMap& f : {kTent, full_sawtooth(20), convexity_le0_phi(), PLMap::identity()}) {
        const auto markov = entropy_markov_bracket(f, 1e-9);
        REQUIRE(markov.has_value());
        CHECK(entropy_lower_horseshoe(f, 8) <= markov->upper + 1e-9);
        for (const LapTracePoint& p : entropy_upper_lap(f, 8).trace) {
            CHECK(p.bound >= markov->lower - 1e-9);
        }
    }
}

TEST_CASE("property: symmetric maps share lap traces with their reflection") {
    auto corpus = symmetric_tent_corpus(33, 10);
    corpus.push_back(kTent);
    for (const PLMap& f : corpus) {
        const EntropyEstimate a = entropy_upper_lap(f, 10);
        const EntropyEstimate b = entropy_upper_lap(reflected(f), 10);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].laps == b.trace[i].laps);
        }
    }
}

TEST_CASE("property: returned horseshoes re-validate exactly") {
    auto maps = random_corpus(34, 10);
    maps.push_back(kTent);
    maps.push_back(full_sawtooth(20));
    for (const PLMap& f : maps) {
        const auto hs = find_horseshoe(f, 2);
        if (!hs) continue;
        for (std::size_t i = 0; i + 1 < hs->intervals.size(); ++i) {
            CHECK(hs->intervals[i].hi <= hs->intervals[i + 1].lo);
        }
        for (const Interval& J : hs->intervals) {
            CHECK(hs->target.contains(J));
            const ExtremumData ext = extremum_data(f, J.lo, J.hi);
            CHECK(ext.minimum <= hs->target.lo);
            CHECK(ext.maximum >= hs->target.hi);
        }
    }
}
