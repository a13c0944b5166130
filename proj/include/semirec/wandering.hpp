#pragma once

#include "semirec/recurrence.hpp"
#include "semirec/verdict.hpp"

namespace semirec {

struct ProbeOptions {
    int samples_per_axis = 5;           // probe lattice inside the neighborhood
    std::vector<Point> extra_samples;   // caller-supplied probes, e.g. orbit tails
    std::vector<std::vector<Interval>> candidate_sets; // user S candidates for no-certificates
    std::size_t word_cap = kDefaultWordCap;
    double identity_tol = 1e-9;         // words acting as the identity are not witnesses
};

/// Does some composite word (length >= 2) return part of the neighborhood
/// B(x, r) to itself? CertifiedYes carries the probe point and word;
/// CertifiedNo needs every composite word up to max_len to miss by interval
/// enclosure plus an invariant-set certificate covering all longer words.
Verdict is_nonwandering(const GeneratorSystem& sys, const Point& x, double radius, int max_len,
                        const ProbeOptions& opts = {});

/// The strong variant quantifies over every lead word g: a helper h (possibly
/// the identity) must bring h(g(U)) back to U. One lead with a validated
/// exclusion certificate refutes the point; a common fixed point certifies it;
/// anything else is Inconclusive up to the lead budget.
Verdict is_strongly_nonwandering(const GeneratorSystem& sys, const Point& x, double radius,
                                 int lead_max_len, int helper_max_len,
                                 const ProbeOptions& opts = {});

struct CellSweepResult {
    std::vector<Verdict> cells; // indexed by flat cell id
    double radius_used = 0.0;   // half of the largest cell width
};

CellSweepResult nonwandering_cells(const GeneratorSystem& sys, const Grid& grid, int max_len,
                                   const ProbeOptions& opts = {});

CellSweepResult strongly_nonwandering_cells(const GeneratorSystem& sys, const Grid& grid,
                                            int lead_max_len, int helper_max_len,
                                            const ProbeOptions& opts = {});

/// Probe lattice of a box: a golden-offset grid that avoids exact dyadic
/// fractions (which collapse under piecewise-linear test maps), plus the
/// center.
std::vector<Point> probe_lattice(const IntervalBox& box, int per_axis);

} // namespace semirec
