#include "entroscope/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "entroscope/errors.hpp"
#include "entroscope/homotopy.hpp"

namespace entroscope {

namespace {

// Bounded draws through explicit modulo so that reports do not depend on
// the standard library's distribution implementations.
unsigned long draw(std::mt19937_64& rng, unsigned long n) { return rng() % n; }

Rational rand_rat01(std::mt19937_64& rng) {
    const unsigned long q = 1 + draw(rng, 64);
    const unsigned long p = draw(rng, q + 1);
    return Rational(static_cast<long>(p), static_cast<long>(q));
}

PLMap random_unit_map(std::mt19937_64& rng) {
    const std::size_t count = 3 + draw(rng, 10);  // 3..12 breakpoints
    std::set<Rational> xs{Rational(0), Rational(1)};
    while (xs.size() < count) xs.insert(rand_rat01(rng));
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (const Rational& x : xs) pts.push_back({x, rand_rat01(rng)});
    return make_broken_line(std::move(pts));
}

struct Tally {
    unsigned long passed = 0;
    unsigned long failed = 0;
    unsigned long skipped = 0;
    std::string first_failure;
    std::string note;

    void ok() { ++passed; }
    void skip() { ++skipped; }
    void bad(std::string what) {
        if (failed == 0) first_failure = std::move(what);
        ++failed;
    }
    template <typename... Args>
    void expect(bool condition, Args&&... context) {
        if (condition) {
            ok();
        } else {
            std::ostringstream msg;
            (msg << ... << context);
            bad(msg.str());
        }
    }
};

using Clock = std::chrono::steady_clock;

void run_check(VerificationReport& report, const std::string& name,
               const std::function<void(Tally&)>& body) {
    const auto start = Clock::now();
    Check check;
    check.name = name;
    try {
        Tally tally;
        body(tally);
        check.status = tally.failed   ? CheckStatus::fail
                       : tally.passed ? CheckStatus::pass
                                      : CheckStatus::skipped;
        std::ostringstream detail;
        detail << tally.passed << " ok";
        if (tally.skipped) detail << ", " << tally.skipped << " skipped";
        if (tally.failed) {
            detail << ", " << tally.failed << " FAILED; first: " << tally.first_failure;
        }
        if (!tally.note.empty()) detail << "; " << tally.note;
        check.detail = detail.str();
    } catch (const std::exception& e) {
        check.status = CheckStatus::fail;
        check.detail = std::string("exception: ") + e.what();
    }
    check.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.checks.push_back(std::move(check));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Reference maps with a Markov presentation and therefore an exact entropy
// oracle; used wherever a certified "h <= E + slack" instance is needed.
std::vector<std::pair<std::string, PLMap>> markov_reference_maps() {
    return {
        {"tent", tent_map()},
        {"identity", PLMap::identity()},
        {"sawtooth20", full_sawtooth(20)},
        {"le0_f", convexity_le0_f()},
        {"le0_phi", convexity_le0_phi()},
    };
}

// Reference maps plus whatever corpus maps turn out to be Markov.
std::vector<std::pair<std::string, PLMap>> markov_instances(const std::vector<PLMap>& corpus) {
    std::vector<std::pair<std::string, PLMap>> out = markov_reference_maps();
    std::size_t found = 0;
    for (std::size_t i = 0; i < corpus.size() && found < 10; ++i) {
        if (markov_data(corpus[i])) {
            out.emplace_back("corpus[" + std::to_string(i) + "]", corpus[i]);
            ++found;
        }
    }
    return out;
}

bool traces_equal(const EntropyEstimate& a, const EntropyEstimate& b) {
    if (a.trace.size() != b.trace.size()) return false;
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        if (a.trace[i].laps != b.trace[i].laps) return false;
    }
    return true;
}

}  // namespace

bool VerificationReport::all_passed() const {
    for (const Check& c : checks) {
        if (c.status == CheckStatus::fail) return false;
    }
    return true;
}

std::vector<std::string> VerificationReport::failing_names() const {
    std::vector<std::string> names;
    for (const Check& c : checks) {
        if (c.status == CheckStatus::fail) names.push_back(c.name);
    }
    return names;
}

// -- named maps -----------------------------------------------------------------

PLMap tent_map() {
    return make_broken_line({{Rational(0), Rational(0)},
                             {Rational(1, 2), Rational(1)},
                             {Rational(1), Rational(0)}});
}

PLMap reflected(const PLMap& f) {
    return affine_combine(Rational(-1), f, Rational(0), f, Rational(1));
}

PLMap convexity_le0_f() {
    return make_broken_line({{Rational(0), Rational(1)},
                             {Rational(1, 4), Rational(0)},
                             {Rational(1), Rational(0)}});
}

PLMap convexity_le0_g() {
    return make_broken_line({{Rational(0), Rational(1, 2)},
                             {Rational(1, 4), Rational(0)},
                             {Rational(1, 2), Rational(0)},
                             {Rational(3, 4), Rational(1, 2)},
                             {Rational(1), Rational(1, 2)}});
}

PLMap convexity_le0_phi() {
    return affine_combine(Rational(1, 2), convexity_le0_f(), Rational(1, 2), convexity_le0_g(),
                          Rational(0));
}

PLMap pinned_near_identity(const Rational& x0, unsigned long n) {
    if (!(Rational(0) < x0) || !(x0 < Rational(1))) {
        throw ParameterError("pinned_near_identity requires x0 strictly inside (0,1)");
    }
    if (n < 2) throw ParameterError("pinned_near_identity requires n >= 2");
    const Rational gap(1, static_cast<long>(n));
    return make_broken_line({{Rational(0), gap}, {x0, x0}, {Rational(1), Rational(1) - gap}});
}

PLMap full_sawtooth(unsigned long laps) {
    return box_map(Rational(0), Rational(1),
                   BoxParams{Rational(0), Rational(0), Rational(0), Rational(1),
                             Rational(static_cast<long>(laps))});
}

// -- corpora ----------------------------------------------------------------------

std::vector<PLMap> random_corpus(unsigned long seed, unsigned long size) {
    if (size < 1) throw ParameterError("random_corpus requires size >= 1");
    std::mt19937_64 rng(seed);
    std::vector<PLMap> out;
    out.reserve(size);
    for (unsigned long i = 0; i < size; ++i) out.push_back(random_unit_map(rng));
    return out;
}

std::vector<PLMap> symmetric_corpus(unsigned long seed, unsigned long size) {
    if (size < 1) throw ParameterError("symmetric_corpus requires size >= 1");
    std::mt19937_64 rng(seed ^ 0x5ca1ab1eULL);
    std::vector<PLMap> out;
    out.reserve(size);
    const Rational half(1, 2);
    while (out.size() < size) {
        std::set<Rational> xs{Rational(0), half};
        const std::size_t interior = 1 + draw(rng, 2);
        while (xs.size() < interior + 2) {
            const Rational x = rand_rat01(rng) / Rational(2);
            if (x > Rational(0) && x < half) xs.insert(x);
        }
        std::vector<Point> pts;
        for (const Rational& x : xs) pts.push_back({x, rand_rat01(rng)});
        // mirror the left half onto the right, skipping the midpoint
        const std::vector<Point> left = pts;
        for (auto it = left.rbegin() + 1; it != left.rend(); ++it) {
            pts.push_back({Rational(1) - it->x, it->y});
        }
        out.push_back(make_broken_line(std::move(pts)));
    }
    return out;
}

std::vector<PLMap> symmetric_tent_corpus(unsigned long seed, unsigned long size) {
    if (size < 1) throw ParameterError("symmetric_tent_corpus requires size >= 1");
    std::mt19937_64 rng(seed ^ 0x7e27ULL);
    std::vector<PLMap> out;
    out.reserve(size);
    while (out.size() < size) {
        const Rational c = rand_rat01(rng);
        const Rational d = rand_rat01(rng);
        if (c == d) continue;  // constants have no second breakpoint
        out.push_back(make_broken_line({{Rational(0), c}, {Rational(1, 2), d}, {Rational(1), c}}));
    }
    return out;
}

// -- named counterexamples ---------------------------------------------------------------

namespace {

void check_conjugate_traces(Tally& tally, const std::vector<PLMap>& maps, unsigned n_max) {
    for (const PLMap& f : maps) {
        const EntropyEstimate a = entropy_upper_lap(f, n_max);
        const EntropyEstimate b = entropy_upper_lap(reflected(f), n_max);
        tally.expect(traces_equal(a, b), "lap traces of f and 1-f differ for ", f);
    }
}

void check_midpoint_constant(Tally& tally, const std::vector<PLMap>& maps) {
    const PLMap half = PLMap::constant(Rational(0), Rational(1), Rational(1, 2));
    for (const PLMap& f : maps) {
        const PLMap mid =
            affine_combine(Rational(1, 2), f, Rational(1, 2), reflected(f), Rational(0));
        tally.expect(mid == half, "midpoint combination is not constant 1/2 for ", f);
        const EntropyEstimate est = entropy_estimate(mid, 5, 4, 1e-9);
        tally.expect(est.lower == 0.0 && est.upper == 0.0,
                     "constant map should have entropy bounds [0,0]");
    }
}

void check_example_le0(Tally& tally) {
    const PLMap f = convexity_le0_f();
    const PLMap g = convexity_le0_g();
    const PLMap phi = convexity_le0_phi();

    tally.expect(phi(Rational(0)) == Rational(3, 4), "phi(0) must be 3/4");
    tally.expect(phi(Rational(3, 4)) == Rational(1, 4), "phi(3/4) must be 1/4");
    tally.expect(phi(Rational(1, 4)) == Rational(0), "phi(1/4) must be 0");

    for (const auto& [name, map] : {std::pair{"f", f}, {"g", g}}) {
        tally.expect(find_periodic_orbit(map, 1, 8).has_value(), name, " needs a fixed point");
        tally.expect(find_periodic_orbit(map, 2, 8).has_value(), name, " needs a 2-cycle");
        for (unsigned period = 3; period <= 8; ++period) {
            tally.expect(!find_periodic_orbit(map, period, 8).has_value(), name,
                         " must not have least period ", period);
        }
        const double upper = entropy_upper_lap(map, 10).upper;
        tally.expect(upper <= 0.12, name, " lap bound at n<=10 should be <= 0.12, got ",
                     fmt(upper));
    }

    const auto orbit = find_periodic_orbit(phi, 3, 8);
    tally.expect(orbit.has_value(), "phi needs a period-3 orbit");
    if (orbit) {
        const std::vector<Rational> expected{Rational(0), Rational(3, 4), Rational(1, 4)};
        tally.expect(*orbit == expected, "period-3 orbit of phi must be (0, 3/4, 1/4)");
    }

    // positive entropy: phi itself has no lap-level horseshoe, its square does
    double lower = entropy_lower_horseshoe(phi, 4);
    if (lower == 0.0) lower = entropy_lower_horseshoe(iterate(phi, 2), 4) / 2.0;
    tally.expect(lower > 0.0, "no horseshoe found on phi or phi^2");
    const EntropyEstimate est = entropy_estimate(phi, 10, 8, 1e-9);
    tally.expect(est.lower > 0.0, "entropy_estimate(phi) must certify positive entropy");
}

void check_fixed_point_counterexample(Tally& tally, const Rational& x0,
                                      const std::vector<unsigned long>& ns) {
    const PLMap id = PLMap::identity();
    for (unsigned long n : ns) {
        const PLMap ln = pinned_near_identity(x0, n);
        const FixedPointSet fixed = fixed_points(ln);
        tally.expect(fixed.is_single_point(x0), "l_", n, " must have the single fixed point ", x0);
        const Rational dist = sup_distance(ln, id);
        tally.expect(dist == Rational(1, static_cast<long>(n)), "sup distance of l_", n,
                     " from the identity must be 1/", n, ", got ", dist);
    }
    // any fixed selection rule jumps: the identity's leftmost fixed point is 0
    const Rational jump = abs(x0 - fixed_points(id).components.front().lo);
    std::ostringstream note;
    note << "selection gap |x0 - leftmost fixed point of id| = " << jump;
    tally.note = note.str();
    tally.expect(jump > Rational(0), "the selection gap must be positive");
}

}  // namespace

VerificationReport run_example_convexity_gt() {
    VerificationReport report;
    std::vector<PLMap> maps = symmetric_tent_corpus(7, 8);
    maps.insert(maps.begin(), tent_map());
    run_check(report, "convexity_gt.conjugate_traces",
              [&](Tally& t) { check_conjugate_traces(t, maps, 10); });
    run_check(report, "convexity_gt.midpoint_constant",
              [&](Tally& t) { check_midpoint_constant(t, maps); });
    return report;
}

VerificationReport run_example_convexity_le0() {
    VerificationReport report;
    run_check(report, "convexity_le0.reproduction", check_example_le0);
    return report;
}

VerificationReport run_fixed_point_counterexample(const Rational& x0,
                                                  const std::vector<unsigned long>& ns) {
    if (!(Rational(0) < x0) || !(x0 < Rational(1))) {
        throw ParameterError("fixed-point counterexample requires x0 strictly inside (0,1)");
    }
    if (ns.empty()) throw ParameterError("fixed-point counterexample requires at least one n");
    VerificationReport report;
    run_check(report, "fixedpoint.selector_obstruction",
              [&](Tally& t) { check_fixed_point_counterexample(t, x0, ns); });
    return report;
}

VerificationReport run_lsc_probe(const PLMap& f, const Rational& delta, unsigned trials,
                                 unsigned long seed) {
    if (!(delta > Rational(0))) throw ParameterError("lsc probe requires delta > 0");
    if (trials < 1) throw ParameterError("lsc probe requires at least one trial");
    VerificationReport report;
    report.seed = seed;
    run_check(report, "lsc.probe", [&](Tally& tally) {
        const auto markov = entropy_markov_bracket(f, 1e-9);
        if (!markov || markov->upper < 1e-9) {
            tally.skip();
            tally.note = "map is not Markov or has zero entropy; nothing to probe";
            return;
        }
        const double exact = markov->lower;
        const double epsilon = 0.1;
        std::mt19937_64 rng(seed);
        double min_bound = std::numeric_limits<double>::infinity();
        unsigned drops = 0;
        for (unsigned trial = 0; trial < trials; ++trial) {
            // jitter interior ordinates by strictly less than delta
            std::vector<Point> pts = f.points();
            for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
                const unsigned long q = 2 + draw(rng, 63);
                const long p = static_cast<long>(draw(rng, 2 * q - 1)) - static_cast<long>(q - 1);
                const Rational jitter = delta * Rational(p, static_cast<long>(q));
                pts[i].y = min(Rational(1), max(Rational(0), pts[i].y + jitter));
            }
            const PLMap g = make_broken_line(std::move(pts));
            tally.expect(sup_distance(f, g) < delta, "jitter escaped the delta ball");
            double bound = entropy_lower_horseshoe(g, 8);
            bound = std::max(bound, entropy_lower_horseshoe(iterate(g, 2), 8) / 2.0);
            min_bound = std::min(min_bound, bound);
            if (bound < exact - epsilon) ++drops;
        }
        std::ostringstream note;
        note << "exact entropy " << fmt(exact) << ", reported epsilon " << fmt(epsilon)
             << ", min observed lower bound " << fmt(min_bound) << ", drops " << drops << "/"
             << trials << " (observational)";
        tally.note = note.str();
    });
    return report;
}

// -- the full suite -----------------------------------------------------------------

VerificationReport run_full_suite(unsigned long seed, unsigned long corpus_size) {
    if (corpus_size < 1) throw ParameterError("run_full_suite requires corpus_size >= 1");
    VerificationReport report;
    report.seed = seed;
    report.corpus_size = corpus_size;

    const std::vector<PLMap> corpus = random_corpus(seed, corpus_size);
    const std::vector<PLMap> symmetric = symmetric_corpus(seed, std::min<unsigned long>(corpus_size, 20));
    const std::size_t small = std::min<std::size_t>(corpus.size(), 8);
    const PLMap id = PLMap::identity();

    const std::vector<Rational> sample_xs{Rational(0),     Rational(1, 7), Rational(1, 3),
                                          Rational(1, 2),  Rational(9, 13), Rational(1)};

    run_check(report, "plmap.compose_evaluate", [&](Tally& t) {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const PLMap& f = corpus[i];
            const PLMap& g = corpus[(i + 1) % corpus.size()];
            const PLMap h = compose(f, g);
            for (const Rational& x : sample_xs) {
                t.expect(h(x) == f(g(x)), "compose disagrees with nested evaluation at ", x);
            }
        }
    });

    run_check(report, "plmap.sup_metric", [&](Tally& t) {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const PLMap& f = corpus[i];
            const PLMap& g = corpus[(i + 1) % corpus.size()];
            const PLMap& h = corpus[(i + 2) % corpus.size()];
            const Rational fg = sup_distance(f, g);
            t.expect(fg == sup_distance(g, f), "metric must be symmetric");
            t.expect(sup_distance(f, h) <= fg + sup_distance(g, h), "triangle inequality failed");
            t.expect(sup_distance(f, f) == Rational(0), "d(f,f) must vanish");
            t.expect((fg == Rational(0)) == (f == g), "d(f,g)=0 iff canonical forms coincide");
        }
    });

    run_check(report, "plmap.canonical_idempotent", [&](Tally& t) {
        for (const PLMap& f : corpus) {
            t.expect(PLMap::from_points(f.points()) == f, "re-canonicalization changed a map");
            const PLMap e = monotone_envelope(f);
            t.expect(PLMap::from_points(e.points()) == e, "envelope output is not canonical");
        }
    });

    run_check(report, "plmap.fixed_points_nonempty", [&](Tally& t) {
        for (const PLMap& f : corpus) {
            t.expect(!fixed_points(f).components.empty(), "full-interval map without fixed point");
        }
    });

    run_check(report, "plmap.affine_midpoint_constant", [&](Tally& t) {
        const PLMap half = PLMap::constant(Rational(0), Rational(1), Rational(1, 2));
        for (const PLMap& f : corpus) {
            const PLMap mid =
                affine_combine(Rational(1, 2), f, Rational(1, 2), reflected(f), Rational(0));
            t.expect(mid == half, "(f + (1-f))/2 must be the constant 1/2");
        }
    });

    run_check(report, "plmap.restrict_glue_roundtrip", [&](Tally& t) {
        for (const PLMap& f : corpus) {
            const Rational cut = f.size() > 2 ? f.points()[f.size() / 2].x : Rational(1, 2);
            const PLMap back = glue({restrict(f, Rational(0), cut), restrict(f, cut, Rational(1))});
            t.expect(back == f, "restrict/glue round trip changed the map");
        }
    });

    run_check(report, "entropy.lap_submultiplicative", [&](Tally& t) {
        const std::pair<unsigned, unsigned> pairs[] = {{1, 1}, {1, 2}, {2, 2}, {2, 3}};
        for (std::size_t i = 0; i < std::min<std::size_t>(corpus.size(), 20); ++i) {
            for (const auto& [n, m] : pairs) {
                try {
                    const unsigned long a = lap_number(iterate(corpus[i], n));
                    const unsigned long b = lap_number(iterate(corpus[i], m));
                    const unsigned long c = lap_number(iterate(corpus[i], n + m));
                    t.expect(c <= a * b, "lap counts are not submultiplicative at (", n, ",", m,
                             ")");
                } catch (const ResourceLimitError&) {
                    t.skip();
                }
            }
        }
    });

    run_check(report, "entropy.trace_running_min", [&](Tally& t) {
        for (std::size_t i = 0; i < small; ++i) {
            const EntropyEstimate est = entropy_upper_lap(corpus[i], 6);
            double running = std::numeric_limits<double>::infinity();
            bool monotone = true;
            for (const LapTracePoint& p : est.trace) {
                const double next = std::min(running, p.bound);
                if (next > running + 1e-15) monotone = false;
                running = next;
            }
            t.expect(monotone && est.upper == running,
                     "upper bound must be the running minimum of the trace");
        }
    });

    run_check(report, "entropy.sandwich", [&](Tally& t) {
        for (const auto& [name, f] : markov_instances(corpus)) {
            const auto markov = entropy_markov_bracket(f, 1e-9);
            if (!markov) {
                t.skip();
                continue;
            }
            const double lower = entropy_lower_horseshoe(f, 8);
            t.expect(lower <= markov->upper + 1e-9, name,
                     ": horseshoe bound exceeds the Markov value");
            for (const LapTracePoint& p : entropy_upper_lap(f, 4).trace) {
                t.expect(p.bound >= markov->lower - 1e-9, name,
                         ": lap bound dips below the Markov value at n=", p.n);
            }
        }
    });

    run_check(report, "entropy.horseshoe_certificate", [&](Tally& t) {
        std::vector<PLMap> maps{tent_map(), full_sawtooth(20), convexity_le0_phi()};
        for (std::size_t i = 0; i < small; ++i) maps.push_back(corpus[i]);
        for (const PLMap& f : maps) {
            const auto hs = find_horseshoe(f, 2);
            if (!hs) {
                t.skip();
                continue;
            }
            bool valid = true;
            for (std::size_t i = 0; i < hs->intervals.size() && valid; ++i) {
                if (i + 1 < hs->intervals.size() &&
                    !(hs->intervals[i].hi <= hs->intervals[i + 1].lo)) {
                    valid = false;
                }
                for (const Interval& J : hs->intervals) {
                    const ExtremumData ext = extremum_data(f, J.lo, J.hi);
                    if (ext.minimum > hs->intervals[i].lo || ext.maximum < hs->intervals[i].hi) {
                        valid = false;
                        break;
                    }
                }
            }
            t.expect(valid, "horseshoe certificate failed to re-validate");
        }
    });

    run_check(report, "envelope.boundary_range", [&](Tally& t) {
        for (const PLMap& f : corpus) {
            const PLMap e = monotone_envelope(f);
            t.expect(e(Rational(0)) == f(Rational(0)) && e(Rational(1)) == f(Rational(1)),
                     "envelope must keep boundary values");
            t.expect(e.min_value() >= f.min_value() && e.max_value() <= f.max_value(),
                     "range of the envelope must sit inside range(f)");
            t.expect(lap_number(e) <= 3, "envelope must have at most three laps");
        }
    });

    run_check(report, "envelope.contraction", [&](Tally& t) {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const PLMap& f = corpus[i];
            const PLMap& g = corpus[(i + 1) % corpus.size()];
            t.expect(sup_distance(monotone_envelope(f), monotone_envelope(g)) <=
                         sup_distance(f, g),
                     "envelopes must contract the sup metric");
        }
    });

    run_check(report, "envelope.split", [&](Tally& t) {
        const Rational bump(1, 97);
        for (const PLMap& f : corpus) {
            for (const Rational& cut : {Rational(1, 4), Rational(1, 2), Rational(7, 8)}) {
                const PLMap split =
                    glue({monotone_envelope(restrict(f, Rational(0), cut)),
                          monotone_envelope(restrict(f, cut, Rational(1)))});
                const Rational d = sup_distance(monotone_envelope(f), split);
                // one epsilon just above each side's amplitude, so the
                // hypothesis of the split bound holds by construction
                const Rational eps_left = extremum_data(f, Rational(0), cut).amplitude() + bump;
                const Rational eps_right = extremum_data(f, cut, Rational(1)).amplitude() + bump;
                t.expect(d < eps_left, "split bound failed on the left at cut ", cut);
                t.expect(d < eps_right, "split bound failed on the right at cut ", cut);
            }
        }
    });

    run_check(report, "h1.contraction", [&](Tally& t) {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const PLMap& f = corpus[i];
            const PLMap& g = corpus[(i + 1) % corpus.size()];
            const Rational d = sup_distance(f, g);
            for (const Rational& s : {Rational(1, 3), Rational(5, 9), Rational(1)}) {
                t.expect(sup_distance(homotopy_H1(f, s), homotopy_H1(g, s)) <= d,
                         "H1 must contract the sup metric at t = ", s);
            }
        }
    });

    run_check(report, "pmcp.h2", [&](Tally& t) {
        for (const PLMap& f : corpus) {
            for (const Rational& s : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
                t.expect(is_pmcp(f, homotopy_H2(f, s)).holds,
                         "H2 image must come from f by making constant pieces, t = ", s);
            }
        }
    });

    run_check(report, "pmcp.envelope", [&](Tally& t) {
        for (const PLMap& f : corpus) {
            t.expect(is_pmcp(f, monotone_envelope(f)).holds,
                     "the envelope must come from f by making constant pieces");
        }
    });

    run_check(report, "pmcp.entropy_certificates", [&](Tally& t) {
        for (const auto& [name, f] : markov_instances(corpus)) {
            const auto markov = entropy_markov_bracket(f, 1e-9);
            if (!markov) {
                t.skip();
                continue;
            }
            const double budget = markov->upper + 0.05;
            for (const PLMap& image : {homotopy_H2(f, Rational(1, 2)), monotone_envelope(f)}) {
                t.expect(is_pmcp(f, image).holds, name, ": image must be PMCP of f");
                t.expect(lap_bound_within(image, 12, budget), name,
                         ": PMCP image needs a lap bound within E + 0.05 by n = 12");
            }
        }
    });

    run_check(report, "halpha.entropy_floor", [&](Tally& t) {
        std::vector<PLMap> maps{tent_map(), id, convexity_le0_f()};
        for (std::size_t i = 0; i < std::min<std::size_t>(corpus.size(), 2); ++i) {
            maps.push_back(corpus[i]);
        }
        for (const PLMap& f : maps) {
            for (const long alpha : {20L, 28L}) {
                const unsigned floor_n = static_cast<unsigned>(alpha - 4);
                for (const Rational& s : {Rational(1, 4), Rational(3, 4)}) {
                    const PLMap h = homotopy_H_alpha(f, s, Rational(alpha));
                    const double lower = entropy_lower_horseshoe(h, floor_n);
                    t.expect(lower >= std::log(static_cast<double>(floor_n)) - 1e-12,
                             "H^alpha entropy floor failed at alpha=", alpha, " t=", s);
                }
            }
        }
    });

    run_check(report, "halpha.endpoints_junction", [&](Tally& t) {
        const Rational alpha(20);
        for (std::size_t i = 0; i < small; ++i) {
            const PLMap& f = corpus[i];
            t.expect(homotopy_H_alpha(f, Rational(0), alpha) == f, "H^alpha at t=0 must be f");
            const PLMap junction = box_map(
                Rational(0), Rational(1),
                BoxParams{f(Rational(0)), f(Rational(1)), Rational(0), Rational(1), alpha});
            t.expect(homotopy_H_alpha(f, Rational(1, 2), alpha) == junction,
                     "H^alpha at t=1/2 must be the single box map with boundary values of f");
            t.expect(homotopy_H_alpha(f, Rational(1), alpha) == full_sawtooth(20),
                     "H^alpha at t=1 must be the full sawtooth");
        }
    });

    run_check(report, "contraction.endpoints", [&](Tally& t) {
        const PLMap zero = PLMap::constant(Rational(0), Rational(1), Rational(0));
        for (const PLMap& f : corpus) {
            t.expect(homotopy_H(f, Rational(0)) == f, "H(f,0) must be f exactly");
            t.expect(homotopy_H(f, Rational(1)) == zero, "H(f,1) must be the zero map");
        }
    });

    run_check(report, "contraction.junctions", [&](Tally& t) {
        for (std::size_t i = 0; i < small; ++i) {
            const PLMap& f = corpus[i];
            const PLMap flattened = homotopy_H1(f, Rational(1));
            t.expect(homotopy_H(f, Rational(1, 3)) == flattened,
                     "H at t=1/3 must equal H1(f,1) from both stage formulas");
            t.expect(homotopy_H(f, Rational(1, 3)) == homotopy_H2(flattened, Rational(0)),
                     "stage-two formula must agree at the first junction");
            const PLMap plateau = PLMap::constant(Rational(0), Rational(1),
                                                  extremum_data(f).maximum);
            t.expect(homotopy_H(f, Rational(2, 3)) == plateau,
                     "H at t=2/3 must be the constant maximum");
        }
    });

    run_check(report, "contraction.entropy_monotone", [&](Tally& t) {
        const Rational ts[] = {Rational(1, 6), Rational(1, 3), Rational(1, 2), Rational(2, 3),
                               Rational(5, 6)};
        for (const auto& [name, f] : markov_instances(corpus)) {
            const auto markov = entropy_markov_bracket(f, 1e-9);
            if (!markov) {
                t.skip();
                continue;
            }
            const double budget = markov->upper + 0.05;
            for (const Rational& s : ts) {
                t.expect(lap_bound_within(homotopy_H(f, s), 12, budget), name,
                         ": H(f,t) lap bound exceeds E + 0.05 at t = ", s);
            }
        }
    });

    run_check(report, "homotopy.continuity_sampling", [&](Tally& t) {
        // exact moduli per stage: the first stage is controlled by the
        // slope of f and the partition shift, the second by the threshold
        // shift, the third is linear by definition
        for (std::size_t i = 0; i < std::min<std::size_t>(corpus.size(), 4); ++i) {
            const PLMap& f = corpus[i];
            Rational slope(0);
            for (std::size_t k = 0; k + 1 < f.points().size(); ++k) {
                const Point& a = f.points()[k];
                const Point& b = f.points()[k + 1];
                slope = max(slope, abs((b.y - a.y) / (b.x - a.x)));
            }
            const PLMap flattened = homotopy_H1(f, Rational(1));
            const Rational amp = extremum_data(flattened).amplitude();
            const Rational level = extremum_data(flattened).maximum;

            // near the identity end: each cell contributes at most its
            // amplitude, which the slope bounds by the cell width
            for (const Rational& s : {Rational(1, 100), Rational(1, 20)}) {
                t.expect(sup_distance(homotopy_H(f, s), f) <= slope * Rational(3) * s,
                         "first-stage modulus at the identity end exceeded slope * 3t");
            }
            // inside the first stage, cell-matched partitions shift their
            // boundaries by at most (s+1) * step
            const Rational step(1, 1000);
            for (const Rational& tau : {Rational(1, 5), Rational(1, 3)}) {
                const UnitPartition p1 = unit_partition(tau);
                const UnitPartition p2 = unit_partition(tau + step);
                if (p1.full_cells() != p2.full_cells()) {
                    t.skip();
                    continue;
                }
                const Rational cells(static_cast<long>(p1.intervals.size()));
                t.expect(sup_distance(homotopy_H1(f, tau), homotopy_H1(f, tau + step)) <=
                             Rational(4) * slope * cells * step,
                         "first-stage modulus exceeded 4*L*(s+1)*dt at tau = ", tau);
            }
            // stage two moves at most by the threshold shift
            for (const auto& [a, b] : {std::pair{Rational(2, 5), Rational(9, 20)},
                                       {Rational(1, 3), Rational(1, 2)}}) {
                t.expect(sup_distance(homotopy_H(f, a), homotopy_H(f, b)) <=
                             amp * Rational(3) * (b - a),
                         "stage-two modulus exceeded its Lipschitz bound");
            }
            // stage three is exactly linear in t
            t.expect(sup_distance(homotopy_H(f, Rational(3, 4)), homotopy_H(f, Rational(11, 12))) ==
                         level * Rational(3) * Rational(1, 6),
                     "stage-three modulus must be exactly linear");
            // across both junctions, triangle through the junction value
            const Rational e(1, 100);
            t.expect(sup_distance(homotopy_H(f, Rational(1, 3) - e),
                                  homotopy_H(f, Rational(1, 3) + e)) <=
                         slope * Rational(3) * e + amp * Rational(3) * e,
                     "modulus across the first junction exceeded its bound");
            t.expect(sup_distance(homotopy_H(f, Rational(2, 3) - e),
                                  homotopy_H(f, Rational(2, 3) + e)) <=
                         amp * Rational(3) * e + level * Rational(3) * e,
                     "modulus across the second junction exceeded its bound");
        }
    });

    run_check(report, "boxmap.wide_box", [&](Tally& t) {
        const PLMap box = box_map(Rational(0), Rational(20),
                                  BoxParams{Rational(3), Rational(2), Rational(0), Rational(4),
                                            Rational(20)});
        t.expect(box(Rational(0)) == Rational(3), "left boundary value must be 3");
        t.expect(box(Rational(20)) == Rational(2), "right boundary value must be 2");
        t.expect(box.min_value() == Rational(0) && box.max_value() == Rational(4),
                 "the box map must be onto [0,4]");
        bool slopes_ok = true;
        const auto& pts = box.points();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Rational slope = (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x);
            if (abs(slope) != Rational(4)) slopes_ok = false;
        }
        t.expect(slopes_ok, "every segment must have absolute slope exactly 4");
    });

    run_check(report, "boxmap.sawtooth_markov", [&](Tally& t) {
        const PLMap saw = full_sawtooth(20);
        const auto md = markov_data(saw);
        t.expect(md.has_value(), "the full sawtooth must be Markov");
        if (md) {
            t.expect(md->cuts.size() == 21 && md->matrix.rows() == 20,
                     "sawtooth partition must have 20 cells");
            t.expect((md->matrix.array() == 1).all(), "sawtooth matrix must be all ones");
        }
        const auto entropy = entropy_markov(saw, 1e-9);
        t.expect(entropy && std::abs(*entropy - std::log(20.0)) < 1e-6,
                 "sawtooth Markov entropy must be log 20");
        t.expect(entropy_lower_horseshoe(saw, 20) >= std::log(20.0) - 1e-12,
                 "all twenty laps must form a horseshoe");
        t.expect(find_horseshoe(saw, 16).has_value(), "a 16-horseshoe must be found");
    });

    {
        // tent-shaped maps keep ten-deep traces within the cap; the general
        // symmetric maps are compared at a shallower depth
        std::vector<PLMap> tents =
            symmetric_tent_corpus(seed, std::min<unsigned long>(corpus_size, 20));
        tents.insert(tents.begin(), tent_map());
        run_check(report, "convexity_gt.conjugate_traces", [&](Tally& t) {
            check_conjugate_traces(t, tents, 10);
            check_conjugate_traces(t, symmetric, 6);
        });
        run_check(report, "convexity_gt.midpoint_constant", [&](Tally& t) {
            check_midpoint_constant(t, tents);
            check_midpoint_constant(t, symmetric);
        });
    }

    run_check(report, "convexity_le0.reproduction", check_example_le0);

    run_check(report, "fixedpoint.selector_obstruction", [&](Tally& t) {
        check_fixed_point_counterexample(t, Rational(1, 3), {10, 100, 1000});
    });

    return report;
}

}  // namespace entroscope
