#pragma once

#include <string>
#include <vector>

#include "entroscope/entropy.hpp"
#include "entroscope/plmap.hpp"

namespace entroscope {

enum class CheckStatus { pass, fail, skipped };

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    std::string detail;
    // wall time, kept for whoever holds the report in memory; the
    // serialized formats omit it so that fixed seeds give byte-identical
    // output
    double elapsed_seconds = 0.0;
};

struct VerificationReport {
    std::vector<Check> checks;
    unsigned long seed = 0;
    unsigned long corpus_size = 0;

    bool all_passed() const;
    std::vector<std::string> failing_names() const;
};

// -- named maps ---------------------------------------------------------------

/// The full tent: (0,0), (1/2,1), (1,0).
PLMap tent_map();

/// 1 - f; conjugate to f whenever f is symmetric about 1/2.
PLMap reflected(const PLMap& f);

/// Broken line (0,1), (1/4,0), (1,0): periods {1,2} only, entropy zero.
PLMap convexity_le0_f();
/// Broken line (0,1/2), (1/4,0), (1/2,0), (3/4,1/2), (1,1/2): same periods.
PLMap convexity_le0_g();
/// The midpoint combination of the two; carries the period-3 orbit
/// (0, 3/4, 1/4) and hence positive entropy.
PLMap convexity_le0_phi();

/// Broken line (0,1/n), (x0,x0), (1,1-1/n): distance 1/n from the identity
/// with its unique fixed point pinned at x0.
PLMap pinned_near_identity(const Rational& x0, unsigned long n);

/// Box map (0,0,0,1,laps) on [0,1]: `laps` full laps onto [0,1].
PLMap full_sawtooth(unsigned long laps);

// -- corpora -------------------------------------------------------------------

/// Seeded random maps of [0,1]: 3..12 breakpoints, all coordinates with
/// denominator at most 64 (small denominators keep exact iterates cheap).
std::vector<PLMap> random_corpus(unsigned long seed, unsigned long size);

/// Seeded maps with f(x) = f(1-x); conjugate to their reflections.
std::vector<PLMap> symmetric_corpus(unsigned long seed, unsigned long size);

/// Symmetric three-point tents (0,c), (1/2,d), (1,c): lap counts of
/// iterates stay below 2^n, so ten-deep traces always fit the cap.
std::vector<PLMap> symmetric_tent_corpus(unsigned long seed, unsigned long size);

// -- named counterexamples, runnable on their own --------------------------------

VerificationReport run_example_convexity_gt();
VerificationReport run_example_convexity_le0();
VerificationReport run_fixed_point_counterexample(const Rational& x0,
                                                  const std::vector<unsigned long>& ns);

/// Observational probe of lower semicontinuity around a Markov map:
/// jitters interior ordinates by less than delta and reports how far the
/// horseshoe lower bounds (of the perturbation and its square) drop below
/// the exact entropy. Drops are observations, never failures.
VerificationReport run_lsc_probe(const PLMap& f, const Rational& delta, unsigned trials,
                                 unsigned long seed);

/// Every property check of the library over a seeded corpus plus the named
/// examples. Deterministic: fixed (seed, corpus_size) give identical
/// reports.
VerificationReport run_full_suite(unsigned long seed, unsigned long corpus_size);

}  // namespace entroscope
