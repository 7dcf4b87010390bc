#include "entroscope/homotopy.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

#include "entroscope/errors.hpp"

namespace entroscope {

namespace {

void require_unit_self_map(const PLMap& f, const char* op) {
    if (f.domain_lo() != Rational(0) || f.domain_hi() != Rational(1) || !f.is_unit_map()) {
        throw DomainError(std::string(op) + " requires a self-map of [0,1]");
    }
}

void require_unit_time(const Rational& t, const char* op) {
    if (t < Rational(0) || t > Rational(1)) {
        throw ParameterError(std::string(op) + " requires t in [0,1]");
    }
}

// Sawtooth of constant absolute slope `sigma` bouncing between `bottom` and
// `top`, started at (x0, y0) and continued across [x0, x_end]. `start_up`
// picks the direction of the first lap.
PLMap sawtooth(const Rational& x0, const Rational& x_end, const Rational& y0,
               const Rational& bottom, const Rational& top, const Rational& sigma,
               bool start_up) {
    std::vector<Point> pts{{x0, y0}};
    Rational x = x0;
    Rational y = y0;
    bool up = start_up;
    while (x < x_end) {
        const Rational& target = up ? top : bottom;
        const Rational dx = (up ? target - y : y - target) / sigma;
        const Rational nx = x + dx;
        if (nx >= x_end) {
            const Rational slope = up ? sigma : -sigma;
            pts.push_back({x_end, y + slope * (x_end - x)});
            break;
        }
        pts.push_back({nx, target});
        x = nx;
        y = target;
        up = !up;
    }
    return PLMap::from_points(std::move(pts));
}

PLMap reflect_horizontally(const PLMap& f) {
    const Rational sum = f.domain_lo() + f.domain_hi();
    const auto& pts = f.points();
    std::vector<Point> out;
    out.reserve(pts.size());
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) out.push_back({sum - it->x, it->y});
    return PLMap::from_points(std::move(out));
}

// Leftmost x in [span_lo, span_hi] where the decreasing line through (xa,ya)
// with slope m_l meets the graph of `g`.
std::optional<Rational> leftmost_intersection(const PLMap& g, const Rational& xa,
                                              const Rational& ya, const Rational& m_l,
                                              const Rational& span_lo, const Rational& span_hi) {
    std::optional<Rational> best;
    const auto& pts = g.points();
    auto consider = [&](const Rational& x) {
        if (!best || x < *best) best = x;
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Point& c = pts[i];
        const Point& d = pts[i + 1];
        const Rational lo = max(c.x, span_lo);
        const Rational hi = min(d.x, span_hi);
        if (lo > hi) continue;
        const Rational m_r = (d.y - c.y) / (d.x - c.x);
        if (m_r == m_l) {
            // parallel: either the lines coincide over the overlap or miss
            const Rational line_at_lo = ya + m_l * (lo - xa);
            const Rational seg_at_lo = c.y + m_r * (lo - c.x);
            if (line_at_lo == seg_at_lo) consider(lo);
        } else {
            const Rational x = (c.y - ya + m_l * xa - m_r * c.x) / (m_l - m_r);
            if (lo <= x && x <= hi) consider(x);
        }
    }
    return best;
}

PLMap running_max_forward(const PLMap& f) {
    const auto& pts = f.points();
    std::vector<Point> out{pts.front()};
    Rational run = pts.front().y;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[i + 1];
        if (b.y <= run) {
            out.push_back({b.x, run});
        } else if (a.y == run) {
            out.push_back(b);
            run = b.y;
        } else {
            // the segment climbs back through the running maximum
            const Rational cx = a.x + (run - a.y) * (b.x - a.x) / (b.y - a.y);
            out.push_back({cx, run});
            out.push_back(b);
            run = b.y;
        }
    }
    return PLMap::from_points(std::move(out));
}

}  // namespace

// -- box maps -----------------------------------------------------------------

void BoxParams::validate() const {
    if (!(bottom < top) || left < bottom || left > top || right < bottom || right > top ||
        steepness < Rational(20)) {
        std::ostringstream msg;
        msg << "box parameters (" << left << ", " << right << ", " << bottom << ", " << top
            << ", " << steepness << ") are not admissible";
        throw ParameterError(msg.str());
    }
}

UnitPartition unit_partition(const Rational& t) {
    if (!(t > Rational(0)) || t > Rational(1)) {
        throw ParameterError("unit_partition requires 0 < t <= 1");
    }
    // largest s with s*t < 1: for 1/t = p/q in lowest terms, s = (p-1)/q
    const Rational inv = Rational(1) / t;
    const Integer s_int = (inv.numerator() - 1) / inv.denominator();
    const unsigned long s = s_int.get_ui();
    if (s + 1 > breakpoint_cap()) {
        throw ResourceLimitError("unit_partition: cell count exceeds the breakpoint cap");
    }
    UnitPartition part;
    part.step = t;
    part.intervals.reserve(s + 1);
    Rational left(0);
    for (unsigned long i = 1; i <= s; ++i) {
        Rational right = Rational(static_cast<long>(i)) * t;
        part.intervals.push_back({left, right});
        left = std::move(right);
    }
    part.intervals.push_back({left, Rational(1)});
    return part;
}

PLMap box_map(const Rational& lo, const Rational& hi, const BoxParams& params) {
    params.validate();
    if (!(lo < hi)) throw ParameterError("box_map requires lo < hi");
    const Rational sigma = params.steepness * (params.top - params.bottom) / (hi - lo);

    const PLMap left =
        sawtooth(lo, hi, params.left, params.bottom, params.top, sigma, params.left != params.top);
    // the rightmost lap decreases onto `right` unless that value is the top,
    // which reads as "start upward" in the reflected coordinate
    const PLMap right = reflect_horizontally(
        sawtooth(lo, hi, params.right, params.bottom, params.top, sigma,
                 params.right != params.top));
    if (left == right) return left;

    // fifth decreasing lap of the left sawtooth
    const auto& pts = left.points();
    int decreasing = 0;
    std::size_t lap = pts.size();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1].y < pts[i].y && ++decreasing == 5) {
            lap = i;
            break;
        }
    }
    if (lap == pts.size()) {
        throw InternalError("box_map: fewer than five decreasing laps");
    }
    const Rational m_l = (pts[lap + 1].y - pts[lap].y) / (pts[lap + 1].x - pts[lap].x);
    const auto meeting =
        leftmost_intersection(right, pts[lap].x, pts[lap].y, m_l, pts[lap].x, pts[lap + 1].x);
    if (!meeting) {
        throw InternalError("box_map: no meeting point on the fifth decreasing lap");
    }
    return glue({restrict(left, lo, *meeting), restrict(right, *meeting, hi)});
}

BoxParams box_params_for_interval(const PLMap& f, const Interval& cell,
                                  const Rational& steepness) {
    if (steepness < Rational(20)) {
        throw ParameterError("box_params_for_interval requires steepness >= 20");
    }
    const ExtremumData ext = extremum_data(f, cell.lo, cell.hi);
    const Rational scale = max(cell.length(), ext.amplitude());
    const Rational margin = Rational(4) * scale;
    return BoxParams{f(cell.lo), f(cell.hi), max(Rational(0), ext.minimum - margin),
                     min(Rational(1), ext.maximum + margin), steepness};
}

// -- the homotopies ---------------------------------------------------------------

PLMap homotopy_H_alpha(const PLMap& f, const Rational& t, const Rational& alpha) {
    require_unit_self_map(f, "homotopy_H_alpha");
    require_unit_time(t, "homotopy_H_alpha");
    if (alpha < Rational(20)) throw ParameterError("homotopy_H_alpha requires alpha >= 20");
    if (t == Rational(0)) return f;

    const Rational half(1, 2);
    if (t <= half) {
        const UnitPartition part = unit_partition(Rational(2) * t);
        std::vector<PLMap> pieces;
        pieces.reserve(part.intervals.size());
        for (const Interval& cell : part.intervals) {
            pieces.push_back(box_map(cell.lo, cell.hi, box_params_for_interval(f, cell, alpha)));
        }
        return glue(pieces);
    }
    const Rational weight = Rational(2) - Rational(2) * t;  // 1 - (2t - 1)
    return box_map(Rational(0), Rational(1),
                   BoxParams{weight * f(Rational(0)), weight * f(Rational(1)), Rational(0),
                             Rational(1), alpha});
}

PLMap monotone_envelope(const PLMap& f) {
    const PLMap rise = running_max_forward(f);
    const PLMap fall = reflect_horizontally(running_max_forward(reflect_horizontally(f)));
    return pointwise_min(rise, fall);
}

PLMap homotopy_H1(const PLMap& f, const Rational& t) {
    require_unit_self_map(f, "homotopy_H1");
    require_unit_time(t, "homotopy_H1");
    if (t == Rational(0)) return f;
    const UnitPartition part = unit_partition(t);
    std::vector<PLMap> pieces;
    pieces.reserve(part.intervals.size());
    for (const Interval& cell : part.intervals) {
        pieces.push_back(monotone_envelope(restrict(f, cell.lo, cell.hi)));
    }
    return glue(pieces);
}

PLMap homotopy_H2(const PLMap& f, const Rational& t) {
    require_unit_self_map(f, "homotopy_H2");
    require_unit_time(t, "homotopy_H2");
    const ExtremumData ext = extremum_data(f);
    return pointwise_max_const(f, ext.amplitude() * t + ext.minimum);
}

PLMap homotopy_H(const PLMap& f, const Rational& t) {
    require_unit_self_map(f, "homotopy_H");
    require_unit_time(t, "homotopy_H");
    const Rational three_t = Rational(3) * t;
    if (three_t < Rational(1)) return homotopy_H1(f, three_t);
    const PLMap flattened = homotopy_H1(f, Rational(1));
    if (three_t < Rational(2)) return homotopy_H2(flattened, three_t - Rational(1));
    // the second stage ends in the constant M(H1(f,1)); scale it to zero
    const Rational level = extremum_data(flattened).maximum;
    return PLMap::constant(Rational(0), Rational(1), (Rational(3) - three_t) * level);
}

// -- procedure of making constant pieces -------------------------------------------

PmcpDecision is_pmcp(const PLMap& f, const PLMap& fbar) {
    if (f.domain_lo() != fbar.domain_lo() || f.domain_hi() != fbar.domain_hi()) {
        throw DomainError("is_pmcp requires identical domains");
    }
    // merged grid and the zero set of f - fbar on it
    std::vector<Rational> xs;
    {
        const auto& fp = f.points();
        const auto& gp = fbar.points();
        for (const Point& p : fp) xs.push_back(p.x);
        for (const Point& p : gp) xs.push_back(p.x);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    std::vector<Interval> zeros;
    auto add_zero = [&](Interval z) {
        if (!zeros.empty() && z.lo <= zeros.back().hi) {
            zeros.back().hi = max(zeros.back().hi, z.hi);
        } else {
            zeros.push_back(std::move(z));
        }
    };
    Rational d0 = f(xs[0]) - fbar(xs[0]);
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const Rational d1 = f(xs[k + 1]) - fbar(xs[k + 1]);
        if (d0 == Rational(0) && d1 == Rational(0)) {
            add_zero({xs[k], xs[k + 1]});
        } else if (d0 == Rational(0)) {
            add_zero({xs[k], xs[k]});
        } else if (d1 == Rational(0)) {
            add_zero({xs[k + 1], xs[k + 1]});
        } else if (d0.sign() * d1.sign() < 0) {
            const Rational cx = xs[k] + (xs[k + 1] - xs[k]) * d0 / (d0 - d1);
            add_zero({cx, cx});
        }
        d0 = d1;
    }

    PmcpDecision result;
    Rational cursor = f.domain_lo();
    for (const Interval& z : zeros) {
        if (cursor < z.lo) result.differences.push_back({cursor, z.lo});
        cursor = z.hi;
    }
    if (cursor < f.domain_hi()) result.differences.push_back({cursor, f.domain_hi()});

    result.holds = true;
    for (const Interval& gap : result.differences) {
        const Rational level = fbar(gap.lo);
        if (fbar(gap.hi) != level) {
            result.holds = false;
            break;
        }
        for (const Point& p : fbar.points()) {
            if (gap.lo < p.x && p.x < gap.hi && p.y != level) {
                result.holds = false;
                break;
            }
        }
        if (!result.holds) break;
    }
    return result;
}

}  // namespace entroscope
