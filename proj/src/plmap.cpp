#include "entroscope/plmap.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <ostream>
#include <sstream>
#include <utility>

#include "entroscope/errors.hpp"

namespace entroscope {

namespace {

std::atomic<std::size_t> g_breakpoint_cap{1'000'000};

bool collinear(const Point& a, const Point& b, const Point& c) {
    return (b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x);
}

// Merged sorted abscissas of two maps over a common domain.
std::vector<Rational> merged_abscissas(const PLMap& f, const PLMap& g) {
    std::vector<Rational> xs;
    xs.reserve(f.size() + g.size());
    std::size_t i = 0, j = 0;
    const auto& fp = f.points();
    const auto& gp = g.points();
    while (i < fp.size() || j < gp.size()) {
        if (j == gp.size() || (i < fp.size() && fp[i].x < gp[j].x)) {
            xs.push_back(fp[i++].x);
        } else if (i == fp.size() || gp[j].x < fp[i].x) {
            xs.push_back(gp[j++].x);
        } else {
            xs.push_back(fp[i].x);
            ++i;
            ++j;
        }
    }
    return xs;
}

void require_same_domain(const PLMap& f, const PLMap& g, const char* op) {
    if (f.domain_lo() != g.domain_lo() || f.domain_hi() != g.domain_hi()) {
        std::ostringstream msg;
        msg << op << " requires identical domains, got " << f.domain() << " and " << g.domain();
        throw DomainError(msg.str());
    }
}

PLMap pointwise_extremum(const PLMap& f, const PLMap& g, bool take_max) {
    require_same_domain(f, g, take_max ? "pointwise_max" : "pointwise_min");
    const std::vector<Rational> xs = merged_abscissas(f, g);
    std::vector<Point> out;
    out.reserve(xs.size() + 4);
    Rational fv = f(xs[0]);
    Rational gv = g(xs[0]);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        out.push_back({xs[k], take_max ? max(fv, gv) : min(fv, gv)});
        if (k + 1 == xs.size()) break;
        const Rational fn = f(xs[k + 1]);
        const Rational gn = g(xs[k + 1]);
        const Rational d0 = fv - gv;
        const Rational d1 = fn - gn;
        if (d0.sign() * d1.sign() < 0) {
            // f and g cross inside this cell; the extremum has a breakpoint there
            const Rational cx = xs[k] + (xs[k + 1] - xs[k]) * d0 / (d0 - d1);
            out.push_back({cx, f(cx)});
        }
        fv = fn;
        gv = gn;
    }
    return PLMap::from_points(std::move(out));
}

}  // namespace

// -- PLMap ------------------------------------------------------------------

PLMap PLMap::from_points(std::vector<Point> pts) {
    if (pts.size() < 2) throw ValidationError("a piecewise-linear map needs at least two breakpoints");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i].x < pts[i + 1].x)) {
            throw ValidationError("breakpoint abscissas must be strictly increasing");
        }
    }
    std::vector<Point> out;
    out.reserve(pts.size());
    out.push_back(std::move(pts[0]));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), pts[i])) {
            out.back() = std::move(pts[i]);
        } else {
            out.push_back(std::move(pts[i]));
        }
    }
    return PLMap(std::move(out));
}

PLMap PLMap::constant(const Rational& lo, const Rational& hi, const Rational& value) {
    return from_points({{lo, value}, {hi, value}});
}

PLMap PLMap::identity(const Rational& lo, const Rational& hi) {
    return from_points({{lo, lo}, {hi, hi}});
}

Rational PLMap::operator()(const Rational& x) const {
    if (x < domain_lo() || x > domain_hi()) {
        std::ostringstream msg;
        msg << "evaluation point " << x << " outside domain " << domain();
        throw DomainError(msg.str());
    }
    auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                               [](const Rational& v, const Point& p) { return v < p.x; });
    --it;
    if (it->x == x) return it->y;
    const Point& a = *it;
    const Point& b = *(it + 1);
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

Rational PLMap::min_value() const {
    Rational m = pts_[0].y;
    for (const Point& p : pts_) m = min(m, p.y);
    return m;
}

Rational PLMap::max_value() const {
    Rational m = pts_[0].y;
    for (const Point& p : pts_) m = max(m, p.y);
    return m;
}

bool PLMap::is_unit_map() const {
    if (domain_lo() < Rational(0) || domain_hi() > Rational(1)) return false;
    for (const Point& p : pts_) {
        if (p.y < Rational(0) || p.y > Rational(1)) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const PLMap& f) {
    os << "{";
    for (std::size_t i = 0; i < f.points().size(); ++i) {
        if (i) os << ", ";
        os << "(" << f.points()[i].x << "," << f.points()[i].y << ")";
    }
    return os << "}";
}

bool FixedPointSet::contains(const Rational& x) const {
    for (const Interval& c : components) {
        if (c.contains(x)) return true;
    }
    return false;
}

// -- free operations ----------------------------------------------------------

PLMap make_broken_line(std::vector<Point> pts) {
    PLMap f = PLMap::from_points(std::move(pts));
    for (const Point& p : f.points()) {
        if (p.y < Rational(0) || p.y > Rational(1)) {
            std::ostringstream msg;
            msg << "ordinate " << p.y << " outside [0,1]";
            throw RangeError(msg.str());
        }
    }
    return f;
}

Rational evaluate(const PLMap& f, const Rational& x) { return f(x); }

std::size_t breakpoint_cap() { return g_breakpoint_cap.load(); }

void set_breakpoint_cap(std::size_t cap) {
    if (cap < 2) throw ParameterError("breakpoint cap must be at least 2");
    g_breakpoint_cap.store(cap);
}

PLMap compose(const PLMap& f, const PLMap& g) {
    const Interval gr = g.range();
    if (gr.lo < f.domain_lo() || gr.hi > f.domain_hi()) {
        std::ostringstream msg;
        msg << "compose: range " << gr << " of the inner map escapes domain " << f.domain()
            << " of the outer map";
        throw CompositionError(msg.str());
    }
    const auto& fp = f.points();
    const auto& gp = g.points();
    const std::size_t cap = breakpoint_cap();

    std::vector<Point> out;  // (x, f(g(x)))
    out.reserve(gp.size());
    auto push = [&](Point p) {
        if (!out.empty() && out.back().x == p.x) return;
        if (out.size() >= cap) {
            throw ResourceLimitError("compose: breakpoint cap of " + std::to_string(cap) +
                                     " exceeded");
        }
        out.push_back(std::move(p));
    };

    // Index range of f-breakpoints with abscissa strictly inside (lo, hi).
    auto inner_range = [&](const Rational& lo, const Rational& hi) {
        auto first = std::upper_bound(fp.begin(), fp.end(), lo,
                                      [](const Rational& v, const Point& p) { return v < p.x; });
        auto last = std::lower_bound(fp.begin(), fp.end(), hi,
                                     [](const Point& p, const Rational& v) { return p.x < v; });
        return std::pair(first, last);
    };

    for (std::size_t i = 0; i + 1 < gp.size(); ++i) {
        const Point& a = gp[i];
        const Point& b = gp[i + 1];
        push({a.x, f(a.y)});
        if (a.y == b.y) continue;
        // Preimages under this g-segment of f's breakpoints, in increasing x.
        const Rational span = b.x - a.x;
        const Rational rise = b.y - a.y;
        if (a.y < b.y) {
            auto [first, last] = inner_range(a.y, b.y);
            for (auto it = first; it != last; ++it) {
                push({a.x + (it->x - a.y) * span / rise, it->y});
            }
        } else {
            auto [first, last] = inner_range(b.y, a.y);
            for (auto it = last; it != first;) {
                --it;
                push({a.x + (it->x - a.y) * span / rise, it->y});
            }
        }
    }
    push({gp.back().x, f(gp.back().y)});
    return PLMap::from_points(std::move(out));
}

PLMap iterate(const PLMap& f, unsigned n) {
    const Interval r = f.range();
    if (r.lo < f.domain_lo() || r.hi > f.domain_hi()) {
        throw CompositionError("iterate requires a map whose range lies inside its domain");
    }
    PLMap acc = PLMap::identity(f.domain_lo(), f.domain_hi());
    for (unsigned i = 0; i < n; ++i) acc = compose(f, acc);
    return acc;
}

Rational sup_distance(const PLMap& f, const PLMap& g) {
    require_same_domain(f, g, "sup_distance");
    Rational best(0);
    for (const Rational& x : merged_abscissas(f, g)) {
        best = max(best, abs(f(x) - g(x)));
    }
    return best;
}

PLMap affine_combine(const Rational& w1, const PLMap& f, const Rational& w2, const PLMap& g,
                     const Rational& offset) {
    require_same_domain(f, g, "affine_combine");
    std::vector<Point> out;
    const std::vector<Rational> xs = merged_abscissas(f, g);
    out.reserve(xs.size());
    for (const Rational& x : xs) {
        Rational v = w1 * f(x) + w2 * g(x) + offset;
        if (v < Rational(0) || v > Rational(1)) {
            std::ostringstream msg;
            msg << "affine_combine: value " << v << " at x = " << x << " leaves [0,1]";
            throw RangeError(msg.str());
        }
        out.push_back({x, std::move(v)});
    }
    return PLMap::from_points(std::move(out));
}

PLMap pointwise_max(const PLMap& f, const PLMap& g) { return pointwise_extremum(f, g, true); }
PLMap pointwise_min(const PLMap& f, const PLMap& g) { return pointwise_extremum(f, g, false); }

PLMap pointwise_max_const(const PLMap& f, const Rational& c) {
    return pointwise_max(f, PLMap::constant(f.domain_lo(), f.domain_hi(), c));
}

ExtremumData extremum_data(const PLMap& f, const Rational& lo, const Rational& hi) {
    if (lo >= hi) throw DegenerateIntervalError("extremum_data: interval is degenerate");
    const PLMap r = restrict(f, lo, hi);
    const auto& pts = r.points();
    ExtremumData ext{pts[0].y, pts[0].y, pts[0].x, pts[0].x};
    for (const Point& p : pts) {
        if (p.y > ext.maximum) {
            ext.maximum = p.y;
            ext.argmax_lo = p.x;
            ext.argmax_hi = p.x;
        } else if (p.y == ext.maximum) {
            ext.argmax_hi = p.x;
        }
        ext.minimum = min(ext.minimum, p.y);
    }
    return ext;
}

ExtremumData extremum_data(const PLMap& f) {
    return extremum_data(f, f.domain_lo(), f.domain_hi());
}

FixedPointSet fixed_points(const PLMap& f) {
    if (f.domain_lo() != Rational(0) || f.domain_hi() != Rational(1)) {
        throw DomainError("fixed_points requires a map on [0,1]");
    }
    std::vector<Interval> raw;
    const auto& pts = f.points();
    const Rational one(1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[i + 1];
        const Rational rise = b.y - a.y;
        const Rational run = b.x - a.x;
        if (rise == run) {
            // Slope exactly one: either the whole segment rides the diagonal
            // or none of it does.
            if (a.y == a.x) raw.push_back({a.x, b.x});
        } else {
            // a.y + rise*(x - a.x)/run = x  has the unique solution below.
            const Rational x = (a.y * run - a.x * rise) / (run - rise);
            if (a.x <= x && x <= b.x) raw.push_back({x, x});
        }
    }
    std::vector<Interval> merged;
    for (Interval& c : raw) {
        if (!merged.empty() && c.lo <= merged.back().hi) {
            merged.back().hi = max(merged.back().hi, c.hi);
        } else {
            merged.push_back(std::move(c));
        }
    }
    const Interval r = f.range();
    if (merged.empty() && Rational(0) <= r.lo && r.hi <= one) {
        throw InternalError("fixed_points: a continuous self-map of [0,1] must have a fixed point");
    }
    return FixedPointSet{std::move(merged)};
}

std::optional<std::vector<Rational>> find_periodic_orbit(const PLMap& f, unsigned period,
                                                         unsigned cap) {
    if (f.domain_lo() != Rational(0) || f.domain_hi() != Rational(1)) {
        throw DomainError("find_periodic_orbit requires a map on [0,1]");
    }
    if (period < 1 || period > cap) {
        throw ParameterError("find_periodic_orbit: need 1 <= period <= cap");
    }
    const PLMap fn = iterate(f, period);

    // Solve f^period(x) = x piecewise; candidates are the component endpoints
    // plus midpoints of diagonal segments.
    std::vector<Interval> components;
    {
        const auto& pts = fn.points();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Point& a = pts[i];
            const Point& b = pts[i + 1];
            const Rational rise = b.y - a.y;
            const Rational run = b.x - a.x;
            if (rise == run) {
                if (a.y == a.x) components.push_back({a.x, b.x});
            } else {
                const Rational x = (a.y * run - a.x * rise) / (run - rise);
                if (a.x <= x && x <= b.x) components.push_back({x, x});
            }
        }
    }
    std::vector<Rational> candidates;
    for (const Interval& c : components) {
        candidates.push_back(c.lo);
        if (c.lo != c.hi) {
            candidates.push_back((c.lo + c.hi) / Rational(2));
            candidates.push_back(c.hi);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (const Rational& x : candidates) {
        std::vector<Rational> orbit{x};
        unsigned least = 0;
        Rational cur = x;
        for (unsigned i = 1; i <= period; ++i) {
            cur = f(cur);
            if (cur == x) {
                least = i;
                break;
            }
            orbit.push_back(cur);
        }
        if (least == period) return orbit;
    }
    return std::nullopt;
}

PLMap restrict(const PLMap& f, const Rational& lo, const Rational& hi) {
    if (lo >= hi) throw DegenerateIntervalError("restrict: interval is degenerate");
    if (lo < f.domain_lo() || hi > f.domain_hi()) {
        std::ostringstream msg;
        msg << "restrict: " << Interval{lo, hi} << " not inside domain " << f.domain();
        throw DomainError(msg.str());
    }
    std::vector<Point> out;
    out.push_back({lo, f(lo)});
    for (const Point& p : f.points()) {
        if (lo < p.x && p.x < hi) out.push_back(p);
    }
    out.push_back({hi, f(hi)});
    return PLMap::from_points(std::move(out));
}

PLMap glue(const std::vector<PLMap>& pieces) {
    if (pieces.empty()) throw ValidationError("glue: no pieces");
    std::vector<Point> out = pieces[0].points();
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const PLMap& piece = pieces[i];
        if (piece.domain_lo() != pieces[i - 1].domain_hi()) {
            throw DomainError("glue: consecutive pieces must abut");
        }
        if (piece.points().front().y != out.back().y) {
            std::ostringstream msg;
            msg << "glue: junction value mismatch at x = " << piece.domain_lo() << " ("
                << out.back().y << " vs " << piece.points().front().y << ")";
            throw ContinuityError(msg.str());
        }
        out.insert(out.end(), piece.points().begin() + 1, piece.points().end());
    }
    return PLMap::from_points(std::move(out));
}

}  // namespace entroscope
