#pragma once

#include <vector>

#include "entroscope/plmap.hpp"

namespace entroscope {

/// Parameter tuple of a box map: boundary values `left` and `right`, value
/// band [bottom, top], and the steepness factor that fixes the constant
/// absolute slope steepness*(top-bottom)/|domain|. Admissible parameters
/// have bottom < top, boundary values inside the band, and steepness >= 20
/// (enough laps for the splice rule to always work).
struct BoxParams {
    Rational left;
    Rational right;
    Rational bottom;
    Rational top;
    Rational steepness;

    void validate() const;
};

/// [0,1] cut into cells of width t plus a final remainder cell [s*t, 1],
/// where s is the largest integer with s*t < 1.
struct UnitPartition {
    Rational step;
    std::vector<Interval> intervals;

    unsigned long full_cells() const { return static_cast<unsigned long>(intervals.size()) - 1; }
};

UnitPartition unit_partition(const Rational& t);

/// The constant-slope sawtooth surjection of [lo,hi] onto [bottom,top] with
/// the prescribed boundary values. Built as two sawtooths, one forward from
/// the left boundary value and one backward from the right one, spliced at
/// the leftmost intersection on the fifth decreasing lap of the left graph;
/// coinciding graphs need no splice.
PLMap box_map(const Rational& lo, const Rational& hi, const BoxParams& params);

/// Box parameters attached to a subinterval: boundary values of f, band
/// grown by four times max(|I|, |f(I)|) and clipped to [0,1]. If I meets
/// f(I), the band contains I.
BoxParams box_params_for_interval(const PLMap& f, const Interval& cell, const Rational& steepness);

/// Two-stage homotopy from the identity to the full sawtooth: for t <= 1/2
/// replace f on each partition cell of width 2t by a box map, for t > 1/2
/// shrink the boundary values of the single box map on [0,1] to zero.
PLMap homotopy_H_alpha(const PLMap& f, const Rational& t, const Rational& alpha);

/// Rising running maximum up to the leftmost argmax, the maximum between
/// the extreme argmaxes, falling reverse running maximum after; at most
/// three monotone laps, same boundary values, range inside range(f).
PLMap monotone_envelope(const PLMap& f);

/// Envelope of f on each cell of the width-t partition, glued.
PLMap homotopy_H1(const PLMap& f, const Rational& t);

/// max{f(x), (M(f)-m(f)) t + m(f)}.
PLMap homotopy_H2(const PLMap& f, const Rational& t);

/// Three-stage contraction: envelopes, then flooding to the maximum, then
/// scaling the resulting constant to zero. H(f,0) = f, H(f,1) = 0.
PLMap homotopy_H(const PLMap& f, const Rational& t);

/// Whether fbar agrees with f away from countably many open intervals on
/// each of which fbar is constant. `differences` lists the closures of the
/// maximal intervals where the two maps differ.
struct PmcpDecision {
    bool holds = false;
    std::vector<Interval> differences;
};

PmcpDecision is_pmcp(const PLMap& f, const PLMap& fbar);

}  // namespace entroscope
