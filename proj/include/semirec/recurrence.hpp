#pragma once

#include <optional>
#include <set>

#include "semirec/verdict.hpp"

namespace semirec {

inline constexpr double kTolFix = 1e-9;
inline constexpr double kTolCluster = 1e-4;
inline constexpr int kCountFloor = 3;

/// A point self-traced by one semigroup element: word_eval(witness, p) == p
/// up to residual <= tol_fix.
struct OrbitPointRecord {
    Point point;
    Word witness;
    double residual = 0.0;
};

struct FixedPointScan {
    std::vector<OrbitPointRecord> records;
    int skipped_subintervals = 0; // endpoints escaped or were not evaluable
    bool identity_like = false;   // the word fixed (almost) every probe node
};

/// Sign-change scan of word_eval(w, .) - id over `resolution` subintervals of
/// a 1-D phase space, refined by bisection. Complete only up to the scan
/// resolution: roots closer than one subinterval may merge.
FixedPointScan fixed_points_of_word(const GeneratorSystem& sys, const Word& w, int resolution,
                                    double tol_fix = kTolFix);

struct OrbitPointsResult {
    std::vector<OrbitPointRecord> records; // dedup keeps the shortest witness
    std::vector<Word> identity_like_words; // flagged, roots not expanded
    int skipped_subintervals = 0;
};

/// Union of fixed_points_of_word over all nonempty words up to max_len.
OrbitPointsResult orbit_points(const GeneratorSystem& sys, int max_len, int resolution,
                               double tol_fix = kTolFix, std::size_t cap = kDefaultWordCap);

/// Points fixed by every generator (and hence by the whole semigroup):
/// roots of the first generator filtered by the residuals of the others.
std::vector<Point> fix_set(const GeneratorSystem& sys, int resolution, double tol_fix = kTolFix);

struct OmegaCluster {
    Point center;           // mean of the members
    int hits = 0;           // words whose image joined this cluster
    std::set<int> counts_hit; // pivot counts at which the cluster was hit
    int max_count = 0;
    bool persistent = false; // hit at every scheduled pivot count
};

struct OmegaApprox {
    Point base;
    int pivot = 0;
    std::vector<int> schedule;
    std::vector<OmegaCluster> clusters;
    std::size_t words_evaluated = 0;
    std::size_t escaped_words = 0;
    double tol_cluster = kTolCluster;

    /// The reported accumulation set: clusters hit at every scheduled count.
    std::vector<OmegaCluster> persistent_clusters() const;
};

struct OmegaOptions {
    int block_cap = 2;             // max length of each pivot-free block
    double tol_cluster = kTolCluster;
    std::size_t max_words = kDefaultWordCap;
};

/// Accumulation points of images of x under words containing exactly n
/// pivots (n from the schedule), the pivots interleaved with blocks over the
/// other generators only. A cluster is persistent when every scheduled count
/// hits it; that finite schedule stands in for "arbitrarily many pivots".
OmegaApprox omega_limit(const GeneratorSystem& sys, const Point& x, int pivot,
                        const std::vector<int>& schedule, const OmegaOptions& opts = {});

struct RecurrenceBudgets {
    std::vector<int> schedule = {kCountFloor, 5, 8};
    int block_cap = 2;
    double tol = kTolCluster;
    std::size_t max_words_per_count = 20000;
};

/// CertifiedYes when, at every scheduled pivot count, some admissible word
/// returns x to within tol of itself (witnesses recorded, one per count).
/// Finite budgets can never certify non-recurrence, so the alternative is
/// Inconclusive. `hint` seeds the search with powers of a word known to fix x.
Verdict is_recurrent(const GeneratorSystem& sys, const Point& x, int pivot,
                     const RecurrenceBudgets& budgets = {},
                     const std::optional<Word>& hint = std::nullopt);

} // namespace semirec
