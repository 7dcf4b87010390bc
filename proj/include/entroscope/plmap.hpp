#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "entroscope/rational.hpp"

namespace entroscope {

/// Breakpoint of a piecewise-linear graph.
struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point&, const Point&) = default;
};

/// A continuous piecewise-linear map on a closed rational interval,
/// stored in canonical form: abscissas strictly increasing and no three
/// consecutive breakpoints collinear. Canonical form makes equality of
/// maps decidable by structural comparison.
///
/// Values are unconstrained rationals; the operations that require a
/// self-map of the unit square check for it explicitly (a box map such
/// as the one on [0,20] with top 4 legitimately leaves the square).
///
/// Immutable after construction; every operation below is a pure function.
class PLMap {
  public:
    /// Builds the map interpolating the given breakpoints linearly.
    /// Requires >= 2 points with strictly increasing abscissas.
    static PLMap from_points(std::vector<Point> pts);

    static PLMap constant(const Rational& lo, const Rational& hi, const Rational& value);
    static PLMap identity(const Rational& lo = Rational(0), const Rational& hi = Rational(1));

    const Rational& domain_lo() const { return pts_.front().x; }
    const Rational& domain_hi() const { return pts_.back().x; }
    Interval domain() const { return {domain_lo(), domain_hi()}; }
    const std::vector<Point>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }

    Rational operator()(const Rational& x) const;

    Rational min_value() const;
    Rational max_value() const;
    Interval range() const { return {min_value(), max_value()}; }

    bool is_constant() const { return pts_.size() == 2 && pts_[0].y == pts_[1].y; }
    /// Domain and range both inside [0,1].
    bool is_unit_map() const;

    friend bool operator==(const PLMap&, const PLMap&) = default;

  private:
    explicit PLMap(std::vector<Point> pts) : pts_(std::move(pts)) {}

    std::vector<Point> pts_;
};

std::ostream& operator<<(std::ostream& os, const PLMap& f);

/// Global extrema of a map over an interval, with the leftmost and
/// rightmost abscissas attaining the maximum.
struct ExtremumData {
    Rational maximum;
    Rational minimum;
    Rational argmax_lo;
    Rational argmax_hi;

    Rational amplitude() const { return maximum - minimum; }
};

/// The solution set of f(x) = x as maximal components; a component with
/// lo == hi is an isolated fixed point, otherwise a whole segment of the
/// graph lies on the diagonal.
struct FixedPointSet {
    std::vector<Interval> components;

    bool contains(const Rational& x) const;
    bool is_single_point(const Rational& x) const {
        return components.size() == 1 && components[0].lo == x && components[0].hi == x;
    }
};

// -- construction and evaluation ------------------------------------------

/// Entry point for maps into the unit interval: additionally requires
/// every ordinate in [0,1].
PLMap make_broken_line(std::vector<Point> pts);

Rational evaluate(const PLMap& f, const Rational& x);

// -- breakpoint budget ------------------------------------------------------

/// Iterates of expanding maps grow exponentially; the cap turns that into
/// a ResourceLimitError instead of memory exhaustion. Default 10^6.
std::size_t breakpoint_cap();
void set_breakpoint_cap(std::size_t cap);

// -- algebra ----------------------------------------------------------------

/// Exact f∘g. Requires range(g) ⊆ domain(f).
PLMap compose(const PLMap& f, const PLMap& g);

/// f^n by repeated composition; n = 0 gives the identity on the domain.
/// Requires range(f) ⊆ domain(f).
PLMap iterate(const PLMap& f, unsigned n);

/// Supremum metric; exact because f-g is piecewise linear, so the maximum
/// of |f-g| is attained at a merged breakpoint.
Rational sup_distance(const PLMap& f, const PLMap& g);

/// Pointwise w1*f + w2*g + offset over a common domain. The result must
/// stay inside [0,1]; this operation carries the unit-square contract
/// because it houses convex combinations and reflections of unit maps.
PLMap affine_combine(const Rational& w1, const PLMap& f, const Rational& w2, const PLMap& g,
                     const Rational& offset);

PLMap pointwise_max(const PLMap& f, const PLMap& g);
PLMap pointwise_min(const PLMap& f, const PLMap& g);
/// max{f(x), c} with crossing points inserted exactly.
PLMap pointwise_max_const(const PLMap& f, const Rational& c);

ExtremumData extremum_data(const PLMap& f, const Rational& lo, const Rational& hi);
ExtremumData extremum_data(const PLMap& f);

/// All solutions of f(x) = x for a map of [0,1]; never empty (Brouwer).
FixedPointSet fixed_points(const PLMap& f);

/// A periodic orbit of exact least period `period`, or nullopt if the
/// piecewise solve finds none. `cap` bounds the admissible period.
std::optional<std::vector<Rational>> find_periodic_orbit(const PLMap& f, unsigned period,
                                                         unsigned cap);

PLMap restrict(const PLMap& f, const Rational& lo, const Rational& hi);

/// Concatenates maps on abutting domains into one continuous map.
PLMap glue(const std::vector<PLMap>& pieces);

}  // namespace entroscope
