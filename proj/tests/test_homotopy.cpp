#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entroscope/entropy.hpp"
#include "entroscope/homotopy.hpp"
#include "entroscope/lab.hpp"

using namespace entroscope;

namespace {

const PLMap kTent = tent_map();

PLMap broken(std::initializer_list<std::pair<Rational, Rational>> pts) {
    std::vector<Point> v;
    for (const auto& [x, y] : pts) v.push_back({x, y});
    return make_broken_line(std::move(v));
}

// brute-force envelope oracle: running maxima scanned over a grid that
// refines the breakpoints
Rational brute_envelope(const PLMap& f, const Rational& x) {
    std::vector<Rational> grid;
    for (const Point& p : f.points()) grid.push_back(p.x);
    for (long k = 0; k <= 96; ++k) grid.push_back(Rational(k, 96));
    Rational rise = f(f.domain_lo());
    for (const Rational& g : grid) {
        if (g <= x) rise = max(rise, f(g));
    }
    Rational fall = f(f.domain_hi());
    for (const Rational& g : grid) {
        if (g >= x) fall = max(fall, f(g));
    }
    return min(rise, fall);
}

}  // namespace

TEST_CASE("unit_partition") {
    // oracle: the defining inequality 3*(3/10) < 1 <= 4*(3/10)
    const UnitPartition p = unit_partition(Rational(3, 10));
    CHECK(p.full_cells() == 3);
    CHECK(Rational(3) * Rational(3, 10) < Rational(1));
    CHECK(Rational(1) <= Rational(4) * Rational(3, 10));
    REQUIRE(p.intervals.size() == 4);
    CHECK(p.intervals[0] == Interval{Rational(0), Rational(3, 10)});
    CHECK(p.intervals[1] == Interval{Rational(3, 10), Rational(6, 10)});
    CHECK(p.intervals[2] == Interval{Rational(6, 10), Rational(9, 10)});
    CHECK(p.intervals[3] == Interval{Rational(9, 10), Rational(1)});

    const UnitPartition whole = unit_partition(Rational(1));
    CHECK(whole.full_cells() == 0);
    REQUIRE(whole.intervals.size() == 1);
    CHECK(whole.intervals[0] == Interval{Rational(0), Rational(1)});

    // exact cell widths even when 1/t is an integer
    const UnitPartition quarter = unit_partition(Rational(1, 4));
    CHECK(quarter.intervals.size() == 4);
    CHECK(quarter.full_cells() == 3);

    CHECK_THROWS_AS(unit_partition(Rational(0)), ParameterError);
    CHECK_THROWS_AS(unit_partition(Rational(-1, 2)), ParameterError);
    CHECK_THROWS_AS(unit_partition(Rational(2)), ParameterError);
}

TEST_CASE("box_map on a wide box") {
    const BoxParams params{Rational(3), Rational(2), Rational(0), Rational(4), Rational(20)};
    const PLMap box = box_map(Rational(0), Rational(20), params);
    CHECK(box(Rational(0)) == Rational(3));
    CHECK(box(Rational(20)) == Rational(2));
    CHECK(box.min_value() == Rational(0));
    CHECK(box.max_value() == Rational(4));
    for (std::size_t i = 0; i + 1 < box.points().size(); ++i) {
        const Point& a = box.points()[i];
        const Point& b = box.points()[i + 1];
        CHECK(abs((b.y - a.y) / (b.x - a.x)) == Rational(4));
    }
    // deterministic construction
    CHECK(box_map(Rational(0), Rational(20), params) == box);
}

TEST_CASE("box_map full sawtooth has coinciding left and right graphs") {
    const PLMap saw = full_sawtooth(20);
    // oracle: slope 20 means lap width 1/20 with alternating extreme values
    std::vector<Point> expected;
    for (long k = 0; k <= 20; ++k) {
        expected.push_back({Rational(k, 20), Rational(k % 2 == 0 ? 0 : 1)});
    }
    CHECK(saw == PLMap::from_points(expected));
}

TEST_CASE("box_map rejects parameters outside the admissible set") {
    CHECK_THROWS_AS(box_map(Rational(0), Rational(1),
                            BoxParams{Rational(0), Rational(0), Rational(0), Rational(1),
                                      Rational(10)}),
                    ParameterError);
    CHECK_THROWS_AS(box_map(Rational(0), Rational(1),
                            BoxParams{Rational(2), Rational(0), Rational(0), Rational(1),
                                      Rational(20)}),
                    ParameterError);
    CHECK_THROWS_AS(box_map(Rational(1), Rational(0),
                            BoxParams{Rational(0), Rational(0), Rational(0), Rational(1),
                                      Rational(20)}),
                    ParameterError);
}

TEST_CASE("box_map accepts fractional steepness") {
    const Rational steep(41, 2);
    const PLMap box = box_map(Rational(0), Rational(1),
                              BoxParams{Rational(1, 2), Rational(1, 2), Rational(0), Rational(1),
                                        steep});
    CHECK(box(Rational(0)) == Rational(1, 2));
    CHECK(box(Rational(1)) == Rational(1, 2));
    CHECK(box.min_value() == Rational(0));
    CHECK(box.max_value() == Rational(1));
    for (std::size_t i = 0; i + 1 < box.points().size(); ++i) {
        const Point& a = box.points()[i];
        const Point& b = box.points()[i + 1];
        CHECK(abs((b.y - a.y) / (b.x - a.x)) == steep);
    }
}

TEST_CASE("box_map handles boundary values at the top") {
    const PLMap box = box_map(Rational(0), Rational(1),
                              BoxParams{Rational(1), Rational(1), Rational(0), Rational(1),
                                        Rational(20)});
    CHECK(box(Rational(0)) == Rational(1));
    CHECK(box(Rational(1)) == Rational(1));
    CHECK(box.min_value() == Rational(0));
    // the leftmost lap must decrease, there is no room to increase
    CHECK(box.points()[1].y < Rational(1));
}

TEST_CASE("box_params_for_interval") {
    // oracle: direct formulas; the margins push past both clamps
    const PLMap id = PLMap::identity();
    const BoxParams p = box_params_for_interval(id, {Rational(0), Rational(3, 10)}, Rational(20));
    CHECK(p.left == Rational(0));
    CHECK(p.right == Rational(3, 10));
    CHECK(p.bottom == Rational(0));
    CHECK(p.top == Rational(1));
    CHECK(p.steepness == Rational(20));
    CHECK(Rational(0) - Rational(4) * Rational(3, 10) < Rational(0));
    CHECK(Rational(3, 10) + Rational(4) * Rational(3, 10) > Rational(1));

    const PLMap half = PLMap::constant(Rational(0), Rational(1), Rational(1, 2));
    const BoxParams q = box_params_for_interval(half, {Rational(0), Rational(1)}, Rational(20));
    CHECK(q.left == Rational(1, 2));
    CHECK(q.right == Rational(1, 2));
    CHECK(q.bottom == Rational(0));
    CHECK(q.top == Rational(1));

    CHECK_THROWS_AS(box_params_for_interval(id, {Rational(0), Rational(1)}, Rational(19)),
                    ParameterError);
}

TEST_CASE("property: cells meeting their image sit inside the band") {
    for (const PLMap& f : random_corpus(41, 20)) {
        for (const Interval& cell : unit_partition(Rational(1, 5)).intervals) {
            const ExtremumData ext = extremum_data(f, cell.lo, cell.hi);
            const bool meets = !(ext.maximum < cell.lo || ext.minimum > cell.hi);
            if (!meets) continue;
            const BoxParams p = box_params_for_interval(f, cell, Rational(20));
            CHECK(p.bottom <= cell.lo);
            CHECK(cell.hi <= p.top);
        }
    }
}

TEST_CASE("homotopy_H_alpha endpoints and junction") {
    const Rational alpha(20);
    auto maps = random_corpus(42, 6);
    maps.push_back(kTent);
    for (const PLMap& f : maps) {
        CHECK(homotopy_H_alpha(f, Rational(0), alpha) == f);
        const PLMap junction =
            box_map(Rational(0), Rational(1),
                    BoxParams{f(Rational(0)), f(Rational(1)), Rational(0), Rational(1), alpha});
        CHECK(homotopy_H_alpha(f, Rational(1, 2), alpha) == junction);
        CHECK(homotopy_H_alpha(f, Rational(1), alpha) == full_sawtooth(20));
    }
    // the tent vanishes at both ends, so its halfway map is the sawtooth
    CHECK(homotopy_H_alpha(kTent, Rational(1, 2), alpha) == full_sawtooth(20));

    CHECK_THROWS_AS(homotopy_H_alpha(kTent, Rational(1, 2), Rational(10)), ParameterError);
    CHECK_THROWS_AS(homotopy_H_alpha(kTent, Rational(2), alpha), ParameterError);
}

TEST_CASE("homotopy_H_alpha keeps the entropy floor") {
    for (const long alpha : {20L, 28L}) {
        const unsigned floor_n = static_cast<unsigned>(alpha - 4);
        const double floor = std::log(static_cast<double>(floor_n));
        for (const Rational& t : {Rational(1, 4), Rational(1, 2), Rational(7, 8)}) {
            const PLMap h = homotopy_H_alpha(kTent, t, Rational(alpha));
            CHECK(entropy_lower_horseshoe(h, floor_n) >= floor - 1e-12);
        }
    }
}

TEST_CASE("monotone_envelope") {
    CHECK(monotone_envelope(kTent) == kTent);

    // oracle: dense-grid running-max comparison plus the frozen shape
    const PLMap f = broken({{Rational(0), Rational(0)},
                            {Rational(1, 4), Rational(1, 2)},
                            {Rational(1, 2), Rational(1, 4)},
                            {Rational(3, 4), Rational(3, 4)},
                            {Rational(1), Rational(0)}});
    const PLMap env = monotone_envelope(f);
    const PLMap expected = broken({{Rational(0), Rational(0)},
                                   {Rational(1, 4), Rational(1, 2)},
                                   {Rational(5, 8), Rational(1, 2)},
                                   {Rational(3, 4), Rational(3, 4)},
                                   {Rational(1), Rational(0)}});
    CHECK(env == expected);
    for (long k = 0; k <= 32; ++k) {
        const Rational x(k, 32);
        CHECK(env(x) == brute_envelope(f, x));
    }

    // nondecreasing maps are their own envelope
    const PLMap rising = broken({{Rational(0), Rational(1, 8)},
                                 {Rational(1, 2), Rational(1, 3)},
                                 {Rational(1), Rational(9, 10)}});
    CHECK(monotone_envelope(rising) == rising);

    for (const PLMap& g : random_corpus(43, 15)) {
        const PLMap e = monotone_envelope(g);
        CHECK(lap_number(e) <= 3);
        CHECK(e(Rational(0)) == g(Rational(0)));
        CHECK(e(Rational(1)) == g(Rational(1)));
        CHECK(e.max_value() == g.max_value());
        CHECK(e.min_value() >= g.min_value());
        for (long k = 0; k <= 16; ++k) {
            const Rational x(k, 16);
            CHECK(e(x) == brute_envelope(g, x));
        }
    }
}

TEST_CASE("homotopy_H1") {
    CHECK(homotopy_H1(kTent, Rational(0)) == kTent);
    // both halves of the tent are monotone, so every fine partition fixes it
    CHECK(homotopy_H1(kTent, Rational(1, 2)) == kTent);
    CHECK(homotopy_H1(kTent, Rational(1)) == kTent);

    for (const PLMap& f : random_corpus(44, 10)) {
        for (const Rational& t : {Rational(1, 3), Rational(2, 3), Rational(1)}) {
            const PLMap h = homotopy_H1(f, t);
            const UnitPartition part = unit_partition(t);
            CHECK(lap_number(h) <= 3 * part.intervals.size());
            CHECK(h(Rational(0)) == f(Rational(0)));
            CHECK(h(Rational(1)) == f(Rational(1)));
            // cellwise the result is exactly the envelope of the restriction
            for (const Interval& cell : part.intervals) {
                CHECK(restrict(h, cell.lo, cell.hi) ==
                      monotone_envelope(restrict(f, cell.lo, cell.hi)));
            }
        }
    }
}

TEST_CASE("homotopy_H2") {
    CHECK(homotopy_H2(kTent, Rational(0)) == kTent);
    CHECK(homotopy_H2(kTent, Rational(1)) ==
          PLMap::constant(Rational(0), Rational(1), Rational(1)));
    const PLMap expected = broken({{Rational(0), Rational(1, 2)},
                                   {Rational(1, 4), Rational(1, 2)},
                                   {Rational(1, 2), Rational(1)},
                                   {Rational(3, 4), Rational(1, 2)},
                                   {Rational(1), Rational(1, 2)}});
    CHECK(homotopy_H2(kTent, Rational(1, 2)) == expected);

    // flooding a map is making constant pieces out of it
    for (const PLMap& f : random_corpus(45, 10)) {
        for (const Rational& t : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
            CHECK(is_pmcp(f, homotopy_H2(f, t)).holds);
        }
    }
}

TEST_CASE("homotopy_H endpoints and junctions") {
    const PLMap zero = PLMap::constant(Rational(0), Rational(1), Rational(0));
    auto maps = random_corpus(46, 8);
    maps.push_back(kTent);
    for (const PLMap& f : maps) {
        CHECK(homotopy_H(f, Rational(0)) == f);
        CHECK(homotopy_H(f, Rational(1)) == zero);
        const PLMap flattened = homotopy_H1(f, Rational(1));
        CHECK(homotopy_H(f, Rational(1, 3)) == flattened);
        CHECK(homotopy_H(f, Rational(1, 3)) == homotopy_H2(flattened, Rational(0)));
        CHECK(homotopy_H(f, Rational(2, 3)) ==
              PLMap::constant(Rational(0), Rational(1), extremum_data(f).maximum));
    }
    CHECK(homotopy_H(kTent, Rational(2, 3)) ==
          PLMap::constant(Rational(0), Rational(1), Rational(1)));
    // inside the last stage the constant shrinks linearly
    CHECK(homotopy_H(kTent, Rational(5, 6)) ==
          PLMap::constant(Rational(0), Rational(1), Rational(1, 2)));
}

TEST_CASE("is_pmcp") {
    for (const PLMap& f : random_corpus(47, 10)) {
        CHECK(is_pmcp(f, monotone_envelope(f)).holds);
        CHECK(is_pmcp(f, f).holds);
    }

    // the tent against its reflection differs on three stretches, none constant
    const PmcpDecision d = is_pmcp(kTent, reflected(kTent));
    CHECK(!d.holds);
    REQUIRE(d.differences.size() == 3);
    CHECK(d.differences[0] == Interval{Rational(0), Rational(1, 4)});
    CHECK(d.differences[1] == Interval{Rational(1, 4), Rational(3, 4)});
    CHECK(d.differences[2] == Interval{Rational(3, 4), Rational(1)});

    CHECK_THROWS_AS(is_pmcp(kTent, PLMap::identity(Rational(0), Rational(1, 2))), DomainError);
}

TEST_CASE("property: envelope contracts and splits") {
    const auto corpus = random_corpus(48, 20);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const PLMap& f = corpus[i];
        const PLMap& g = corpus[(i + 1) % corpus.size()];
        CHECK(sup_distance(monotone_envelope(f), monotone_envelope(g)) <= sup_distance(f, g));

        for (const Rational& cut : {Rational(1, 4), Rational(2, 3)}) {
            const PLMap split = glue({monotone_envelope(restrict(f, Rational(0), cut)),
                                      monotone_envelope(restrict(f, cut, Rational(1)))});
            const Rational d = sup_distance(monotone_envelope(f), split);
            const Rational eps = extremum_data(f, Rational(0), cut).amplitude() + Rational(1, 97);
            CHECK(d < eps);
        }
    }
}

TEST_CASE("property: H1 contracts the sup metric") {
    const auto corpus = random_corpus(49, 16);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const PLMap& f = corpus[i];
        const PLMap& g = corpus[(i + 1) % corpus.size()];
        for (const Rational& t : {Rational(1, 3), Rational(4, 7), Rational(1)}) {
            CHECK(sup_distance(homotopy_H1(f, t), homotopy_H1(g, t)) <= sup_distance(f, g));
        }
    }
}
