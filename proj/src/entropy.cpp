#include "entroscope/entropy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "entroscope/errors.hpp"

namespace entroscope {

namespace {

void require_unit_domain(const PLMap& f, const char* op) {
    if (f.domain_lo() != Rational(0) || f.domain_hi() != Rational(1)) {
        throw DomainError(std::string(op) + " requires a map on [0,1]");
    }
}

struct RawLap {
    std::size_t begin = 0;  // breakpoint indices into f.points()
    std::size_t end = 0;
    int dir = 0;  // +1 nondecreasing, -1 nonincreasing, 0 all-constant
};

std::vector<RawLap> raw_laps(const PLMap& f) {
    const auto& pts = f.points();
    std::vector<RawLap> laps;
    std::size_t cur_begin = 0;
    std::size_t last_directed = 0;
    int dir = 0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const int s = (pts[k + 1].y - pts[k].y).sign();
        if (s == 0) continue;
        if (dir == 0) {
            dir = s;
            last_directed = k;
        } else if (s == dir) {
            last_directed = k;
        } else {
            // direction reversal: the current lap reaches the start of
            // segment k, the next one begins where the last directed
            // segment ended (the two overlap on the constant run between)
            laps.push_back({cur_begin, k, dir});
            cur_begin = last_directed + 1;
            dir = s;
            last_directed = k;
        }
    }
    laps.push_back({cur_begin, pts.size() - 1, dir});
    return laps;
}

// -- horseshoe search ---------------------------------------------------------

struct LapData {
    Interval span;
    int dir = 0;
    std::vector<Point> pts;
    // double shadows used only to reject candidates cheaply; every accepted
    // lap is re-verified exactly
    double x_lo = 0, x_hi = 0, v_lo = 0, v_hi = 0;
};

std::vector<LapData> collect_laps(const PLMap& f) {
    const auto& pts = f.points();
    std::vector<LapData> out;
    for (const RawLap& raw : raw_laps(f)) {
        LapData lap;
        lap.span = {pts[raw.begin].x, pts[raw.end].x};
        lap.dir = raw.dir;
        lap.pts.assign(pts.begin() + static_cast<std::ptrdiff_t>(raw.begin),
                       pts.begin() + static_cast<std::ptrdiff_t>(raw.end) + 1);
        lap.x_lo = lap.span.lo.to_double();
        lap.x_hi = lap.span.hi.to_double();
        Rational lo = lap.pts.front().y, hi = lo;
        for (const Point& p : lap.pts) {
            lo = min(lo, p.y);
            hi = max(hi, p.y);
        }
        lap.v_lo = lo.to_double();
        lap.v_hi = hi.to_double();
        out.push_back(std::move(lap));
    }
    return out;
}

Rational eval_monotone(const std::vector<Point>& pts, const Rational& x) {
    auto it = std::upper_bound(pts.begin(), pts.end(), x,
                               [](const Rational& v, const Point& p) { return v < p.x; });
    --it;
    if (it->x == x) return it->y;
    const Point& a = *it;
    const Point& b = *(it + 1);
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

// Clip the lap to abscissas in [u,v]; if the clipped piece still maps onto
// [u,v], return the tight subinterval mapping exactly onto it. The tight
// interval is automatically inside [u,v], which is what the common-target
// argument needs.
std::optional<Interval> covering_core(const LapData& lap, const Rational& u, const Rational& v) {
    const Rational clip_lo = max(lap.span.lo, u);
    const Rational clip_hi = min(lap.span.hi, v);
    if (!(clip_lo < clip_hi)) return std::nullopt;

    std::vector<Point> g;
    g.push_back({clip_lo, eval_monotone(lap.pts, clip_lo)});
    for (const Point& p : lap.pts) {
        if (clip_lo < p.x && p.x < clip_hi) g.push_back(p);
    }
    g.push_back({clip_hi, eval_monotone(lap.pts, clip_hi)});

    if (lap.dir >= 0) {
        if (g.front().y > u || g.back().y < v) return std::nullopt;
        Rational x_u = g.front().x;  // rightmost abscissa at value u
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const Point& a = g[i];
            const Point& b = g[i + 1];
            if (b.y <= u) {
                x_u = b.x;
            } else {
                if (a.y < u) x_u = a.x + (u - a.y) * (b.x - a.x) / (b.y - a.y);
                break;
            }
        }
        Rational x_v = g.back().x;  // leftmost abscissa at value v
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const Point& a = g[i];
            const Point& b = g[i + 1];
            if (a.y >= v) {
                x_v = a.x;
                break;
            }
            if (b.y >= v) {
                x_v = (b.y == v) ? b.x : a.x + (v - a.y) * (b.x - a.x) / (b.y - a.y);
                break;
            }
        }
        return Interval{x_u, x_v};
    }

    if (g.front().y < v || g.back().y > u) return std::nullopt;
    Rational x_v = g.front().x;  // rightmost abscissa at value v
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const Point& a = g[i];
        const Point& b = g[i + 1];
        if (b.y >= v) {
            x_v = b.x;
        } else {
            if (a.y > v) x_v = a.x + (a.y - v) * (b.x - a.x) / (a.y - b.y);
            break;
        }
    }
    Rational x_u = g.back().x;  // leftmost abscissa at value u
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const Point& a = g[i];
        const Point& b = g[i + 1];
        if (a.y <= u) {
            x_u = a.x;
            break;
        }
        if (b.y <= u) {
            x_u = (b.y == u) ? b.x : a.x + (a.y - u) * (b.x - a.x) / (a.y - b.y);
            break;
        }
    }
    return Interval{x_v, x_u};
}

std::vector<Rational> candidate_values(const PLMap& f) {
    std::vector<Rational> vals;
    vals.reserve(2 * f.size());
    for (const Point& p : f.points()) {
        vals.push_back(p.x);
        vals.push_back(p.y);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

// Laps inside [u,v] whose image covers [u,v], capped at stop_at; fills
// js with the tight subintervals when requested.
unsigned count_covering(const std::vector<LapData>& laps, const Rational& u, const Rational& v,
                        double u_d, double v_d, unsigned stop_at, std::vector<Interval>* js) {
    constexpr double kMargin = 1e-9;
    unsigned count = 0;
    for (const LapData& lap : laps) {
        if (lap.v_lo > u_d + kMargin || lap.v_hi < v_d - kMargin) continue;
        if (lap.x_lo > v_d + kMargin || lap.x_hi < u_d - kMargin) continue;
        if (auto core = covering_core(lap, u, v)) {
            ++count;
            if (js) js->push_back(*core);
            if (count >= stop_at) break;
        }
    }
    return count;
}

void validate_horseshoe(const PLMap& f, const Horseshoe& hs) {
    const auto& js = hs.intervals;
    for (std::size_t i = 0; i < js.size(); ++i) {
        if (!hs.target.contains(js[i])) {
            throw InternalError("horseshoe: interval escapes the common target");
        }
        if (i + 1 < js.size() && !(js[i].hi <= js[i + 1].lo)) {
            throw InternalError("horseshoe: interval interiors overlap");
        }
        const ExtremumData ext = extremum_data(f, js[i].lo, js[i].hi);
        if (ext.minimum > hs.target.lo || ext.maximum < hs.target.hi) {
            throw InternalError("horseshoe: image fails to cover the target");
        }
    }
}

// -- strongly connected components (iterative Tarjan) -------------------------

std::vector<std::vector<int>> strongly_connected_components(const CountMatrix& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (A(i, j) > 0) adj[i].push_back(j);
        }
    }
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& fr = frames.back();
            if (fr.child < adj[fr.v].size()) {
                const int w = adj[fr.v][fr.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], index[w]);
                }
            } else {
                if (low[fr.v] == index[fr.v]) {
                    std::vector<int> scc;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc.push_back(w);
                    } while (w != fr.v);
                    sccs.push_back(std::move(scc));
                }
                const int v = fr.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return sccs;
}

PerronBracket block_perron(const Eigen::MatrixXd& B, double tol) {
    // B is irreducible-plus-identity, hence primitive; Collatz-Wielandt
    // bounds from any positive vector bracket the Perron root and the
    // power iterates tighten them.
    const auto n = B.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    double best_lo = 0.0;
    double best_hi = std::numeric_limits<double>::infinity();
    constexpr long kMaxIters = 2'000'000;
    for (long it = 0; it < kMaxIters; ++it) {
        const Eigen::VectorXd y = B * x;
        const Eigen::ArrayXd ratios = y.array() / x.array();
        best_lo = std::max(best_lo, ratios.minCoeff());
        best_hi = std::min(best_hi, ratios.maxCoeff());
        if (best_hi - best_lo <= tol) return {best_lo, best_hi};
        x = y / y.maxCoeff();
    }
    throw InternalError("spectral radius bracketing failed to converge");
}

}  // namespace

// -- laps ---------------------------------------------------------------------

unsigned long lap_number(const PLMap& f) { return raw_laps(f).size(); }

std::vector<Interval> monotone_laps(const PLMap& f) {
    const auto& pts = f.points();
    std::vector<Interval> out;
    for (const RawLap& raw : raw_laps(f)) {
        out.push_back({pts[raw.begin].x, pts[raw.end].x});
    }
    return out;
}

EntropyEstimate entropy_upper_lap(const PLMap& f, unsigned n_max) {
    require_unit_domain(f, "entropy_upper_lap");
    if (n_max < 1) throw ParameterError("entropy_upper_lap: n_max must be at least 1");
    EntropyEstimate est;
    est.methods.push_back(Method::lap);
    est.upper = std::numeric_limits<double>::infinity();
    PLMap g = f;
    for (unsigned n = 1; n <= n_max; ++n) {
        const unsigned long laps = lap_number(g);
        const double bound = std::log(static_cast<double>(laps)) / n;
        est.trace.push_back({n, laps, bound});
        est.upper = std::min(est.upper, bound);
        if (n == n_max) break;
        try {
            g = compose(f, g);
        } catch (const ResourceLimitError&) {
            est.truncated = true;
            break;
        }
    }
    return est;
}

bool lap_bound_within(const PLMap& f, unsigned n_max, double budget) {
    require_unit_domain(f, "lap_bound_within");
    if (n_max < 1) throw ParameterError("lap_bound_within: n_max must be at least 1");
    PLMap g = f;
    for (unsigned n = 1; n <= n_max; ++n) {
        const double bound = std::log(static_cast<double>(lap_number(g))) / n;
        if (bound <= budget) return true;
        if (n == n_max) break;
        try {
            g = compose(f, g);
        } catch (const ResourceLimitError&) {
            break;
        }
    }
    return false;
}

// -- Markov data ----------------------------------------------------------------

std::optional<MarkovData> markov_data(const PLMap& f, const MarkovOptions& opts) {
    require_unit_domain(f, "markov_data");
    if (!f.is_unit_map()) return std::nullopt;

    std::set<Rational> cuts;
    for (const Point& p : f.points()) cuts.insert(p.x);

    bool closed = false;
    for (unsigned round = 0; round <= opts.closure_rounds; ++round) {
        std::vector<Rational> missing;
        for (const Rational& c : cuts) {
            const Rational v = f(c);
            if (!cuts.contains(v)) missing.push_back(v);
        }
        if (missing.empty()) {
            closed = true;
            break;
        }
        if (round == opts.closure_rounds) break;
        for (Rational& v : missing) cuts.insert(std::move(v));
        if (cuts.size() > opts.max_cuts) return std::nullopt;
    }
    if (!closed) return std::nullopt;

    std::vector<Rational> cut_list(cuts.begin(), cuts.end());
    const int cells = static_cast<int>(cut_list.size()) - 1;
    std::vector<Rational> values;
    values.reserve(cut_list.size());
    for (const Rational& c : cut_list) values.push_back(f(c));

    auto cut_index = [&](const Rational& v) {
        const auto it = std::lower_bound(cut_list.begin(), cut_list.end(), v);
        return static_cast<int>(it - cut_list.begin());
    };

    CountMatrix A = CountMatrix::Zero(cells, cells);
    for (int i = 0; i < cells; ++i) {
        // cut points include every breakpoint, so f is linear on each cell
        // and the image endpoints are themselves cut points
        const Rational& a = values[i];
        const Rational& b = values[i + 1];
        const int lo = cut_index(min(a, b));
        const int hi = cut_index(max(a, b));
        for (int j = lo; j < hi; ++j) A(i, j) += 1;
    }
    return MarkovData{std::move(cut_list), std::move(A)};
}

// -- Perron root ------------------------------------------------------------------

PerronBracket spectral_radius_bracket(const CountMatrix& A, double tol) {
    if (A.rows() != A.cols()) throw ShapeError("spectral_radius: matrix must be square");
    if (tol <= 0) throw ParameterError("spectral_radius: tolerance must be positive");
    const int n = static_cast<int>(A.rows());
    if (n == 0) return {0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (A(i, j) < 0) throw ValidationError("spectral_radius: matrix must be nonnegative");
        }
    }

    PerronBracket overall{0.0, 0.0};
    for (const std::vector<int>& scc : strongly_connected_components(A)) {
        PerronBracket block{0.0, 0.0};
        if (scc.size() == 1 && A(scc[0], scc[0]) == 0) {
            block = {0.0, 0.0};  // transient state, contributes nothing
        } else {
            const int m = static_cast<int>(scc.size());
            Eigen::MatrixXd B(m, m);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    B(i, j) = static_cast<double>(A(scc[i], scc[j])) + (i == j ? 1.0 : 0.0);
                }
            }
            const PerronBracket shifted = block_perron(B, tol);
            block = {std::max(0.0, shifted.lower - 1.0), std::max(0.0, shifted.upper - 1.0)};
        }
        overall.lower = std::max(overall.lower, block.lower);
        overall.upper = std::max(overall.upper, block.upper);
    }
    return overall;
}

double spectral_radius(const CountMatrix& A, double tol) {
    return spectral_radius_bracket(A, tol).midpoint();
}

std::optional<PerronBracket> entropy_markov_bracket(const PLMap& f, double tol) {
    const auto md = markov_data(f);
    if (!md) return std::nullopt;
    const PerronBracket rho = spectral_radius_bracket(md->matrix, tol);
    const double lo = rho.lower > 0 ? std::max(0.0, std::log(rho.lower)) : 0.0;
    const double hi = rho.upper > 0 ? std::max(0.0, std::log(rho.upper)) : 0.0;
    return PerronBracket{lo, hi};
}

std::optional<double> entropy_markov(const PLMap& f, double tol) {
    const auto br = entropy_markov_bracket(f, tol);
    if (!br) return std::nullopt;
    return br->midpoint();
}

// -- horseshoes -------------------------------------------------------------------

std::optional<Horseshoe> find_horseshoe(const PLMap& f, unsigned n) {
    require_unit_domain(f, "find_horseshoe");
    if (n < 2) throw ParameterError("find_horseshoe: need n >= 2");
    const std::vector<LapData> laps = collect_laps(f);
    if (laps.size() < n) return std::nullopt;
    const std::vector<Rational> vals = candidate_values(f);
    std::vector<double> vals_d;
    vals_d.reserve(vals.size());
    for (const Rational& v : vals) vals_d.push_back(v.to_double());

    for (std::size_t i = 0; i < vals.size(); ++i) {
        for (std::size_t j = vals.size(); j-- > i + 1;) {
            std::vector<Interval> js;
            const unsigned count =
                count_covering(laps, vals[i], vals[j], vals_d[i], vals_d[j], n, &js);
            if (count >= n) {
                Horseshoe hs{std::move(js), {vals[i], vals[j]}};
                validate_horseshoe(f, hs);
                return hs;
            }
        }
    }
    return std::nullopt;
}

double entropy_lower_horseshoe(const PLMap& f, unsigned n_cap) {
    require_unit_domain(f, "entropy_lower_horseshoe");
    if (n_cap < 2) throw ParameterError("entropy_lower_horseshoe: need n_cap >= 2");
    const std::vector<LapData> laps = collect_laps(f);
    if (laps.size() < 2) return 0.0;
    const std::vector<Rational> vals = candidate_values(f);
    std::vector<double> vals_d;
    vals_d.reserve(vals.size());
    for (const Rational& v : vals) vals_d.push_back(v.to_double());

    unsigned best = 0;
    for (std::size_t i = 0; i < vals.size() && best < n_cap; ++i) {
        for (std::size_t j = vals.size(); j-- > i + 1 && best < n_cap;) {
            best = std::max(best,
                            count_covering(laps, vals[i], vals[j], vals_d[i], vals_d[j], n_cap,
                                           nullptr));
        }
    }
    return best >= 2 ? std::log(static_cast<double>(best)) : 0.0;
}

// -- aggregate ----------------------------------------------------------------------

EntropyEstimate entropy_estimate(const PLMap& f, unsigned n_max, unsigned n_cap, double tol) {
    EntropyEstimate est = entropy_upper_lap(f, n_max);

    const auto markov = entropy_markov_bracket(f, tol);
    if (markov) {
        est.methods.push_back(Method::markov);
        est.lower = std::max(est.lower, markov->lower);
        est.upper = std::min(est.upper, markov->upper);
    }

    const double horseshoe = entropy_lower_horseshoe(f, n_cap);
    if (horseshoe > 0.0) {
        est.methods.push_back(Method::horseshoe);
        est.lower = std::max(est.lower, horseshoe);
    }

    if (est.lower > est.upper) {
        if (est.lower - est.upper < 1e-9) {
            est.upper = est.lower;  // float noise between two routes to the same value
        } else {
            std::ostringstream msg;
            msg << "entropy_estimate: certified lower bound " << est.lower
                << " exceeds certified upper bound " << est.upper;
            throw InternalError(msg.str());
        }
    }
    return est;
}

}  // namespace entroscope
