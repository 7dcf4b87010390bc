#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "entroscope/plmap.hpp"

namespace entroscope {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Number of maximal intervals of monotonicity. Constant stretches extend
/// the neighbouring laps, so an all-constant map has exactly one lap.
unsigned long lap_number(const PLMap& f);

/// The maximal monotone intervals themselves, left to right. Adjacent laps
/// overlap on a shared constant run at a local extremum.
std::vector<Interval> monotone_laps(const PLMap& f);

struct LapTracePoint {
    unsigned n = 0;
    unsigned long laps = 0;
    double bound = 0.0;  // (1/n) log laps, a certified upper bound in nats
};

enum class Method { lap, markov, horseshoe };

/// Certified entropy bounds. `lower <= upper` always; the trace records
/// (1/n) log of the lap count of f^n, which dominates the true entropy at
/// every n by submultiplicativity of lap counts.
struct EntropyEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<Method> methods;
    std::vector<LapTracePoint> trace;
    bool truncated = false;  // iterate growth hit the breakpoint cap
};

EntropyEstimate entropy_upper_lap(const PLMap& f, unsigned n_max);

/// True iff some n <= n_max certifies (1/n) log laps(f^n) <= budget;
/// stops composing as soon as the certificate appears.
bool lap_bound_within(const PLMap& f, unsigned n_max, double budget);

struct MarkovOptions {
    unsigned closure_rounds = 3;
    std::size_t max_cuts = 10'000;
};

/// Markov presentation of a map: cut points closed under f, and the 0/1
/// covering matrix of the induced cells.
struct MarkovData {
    std::vector<Rational> cuts;
    CountMatrix matrix;
};

/// Present iff the forward orbit of the breakpoints closes up within the
/// configured bounds; absent is "not Markov as far as we checked", never a
/// proof of non-Markovianity.
std::optional<MarkovData> markov_data(const PLMap& f, const MarkovOptions& opts = {});

struct PerronBracket {
    double lower = 0.0;
    double upper = 0.0;
    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

/// Certified bracket around the Perron root of a nonnegative integer matrix:
/// power iteration with Collatz-Wielandt bounds, run per strongly connected
/// component (the +I shift makes each irreducible block primitive).
PerronBracket spectral_radius_bracket(const CountMatrix& A, double tol);
double spectral_radius(const CountMatrix& A, double tol);

/// log of the Perron root of the covering matrix, clamped below at zero,
/// as a bracket; exact entropy for Markov maps.
std::optional<PerronBracket> entropy_markov_bracket(const PLMap& f, double tol);
std::optional<double> entropy_markov(const PLMap& f, double tol);

/// n closed intervals with pairwise disjoint interiors, each contained in
/// `target` and each mapping onto a superset of `target`; hence
/// J_i ⊆ f(J_j) for all pairs.
struct Horseshoe {
    std::vector<Interval> intervals;
    Interval target;
};

/// Searches for an n-horseshoe whose intervals share a common target drawn
/// from breakpoint abscissas and ordinates. Absence means this sufficient
/// strategy found nothing, not that no horseshoe exists.
std::optional<Horseshoe> find_horseshoe(const PLMap& f, unsigned n);

/// log n* for the largest n <= n_cap with a horseshoe found; 0 if none.
double entropy_lower_horseshoe(const PLMap& f, unsigned n_cap);

/// Aggregate of the three certified surrogates.
EntropyEstimate entropy_estimate(const PLMap& f, unsigned n_max, unsigned n_cap, double tol);

}  // namespace entroscope
