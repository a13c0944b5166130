#pragma once

#include <cstdint>

#include "semirec/verdict.hpp"

namespace semirec {

inline constexpr double kTolConj = 1e-8;

/// Candidate topological conjugacy rho between two generator systems,
/// together with its inverse and the generator pairing (pairing[i] is the
/// target index mated with source generator i).
struct ConjugacyMap {
    MapExpr rho;
    MapExpr rho_inv;
    PhaseSpace source;
    PhaseSpace target;
    std::vector<int> pairing;
};

struct ConjugacyCheckResult {
    Verdict verdict;
    double max_generator_residual = 0.0;
    double max_inverse_residual = 0.0;
    double max_word_residual = 0.0; // over random words, scaled per unit length
    int samples_used = 0;
};

/// Sampled equivariance check: rho(g_i(x)) vs paired(g_i)(rho(x)) on uniform
/// plus boundary-biased samples, the inverse identity, and the same relation
/// on random words. Sampling refutes (CertifiedNo with a witness) or stays
/// Inconclusive: "conjugate up to sampling".
ConjugacyCheckResult check_conjugacy(const GeneratorSystem& source, const GeneratorSystem& target,
                                     const ConjugacyMap& cmap, int samples, std::uint64_t seed = 0,
                                     double tol = kTolConj);

struct TransportResult {
    std::vector<int> cells;  // target-grid flat ids, sorted, deduplicated
    int escaped_points = 0;  // images that left the target window
};

/// Push a source cell set through rho and re-bin on the target grid.
TransportResult transport_cells(const ConjugacyMap& cmap, const Grid& source_grid,
                                const std::vector<int>& source_cells, const Grid& target_grid);

TransportResult transport_points(const ConjugacyMap& cmap, const std::vector<Point>& points,
                                 const Grid& target_grid);

struct SetMatchReport {
    bool match = false;
    int dilation = 0;
    int only_in_a = 0; // cells of A farther than `dilation` cells from B
    int only_in_b = 0;
    int a_count = 0;
    int b_count = 0;
};

/// Symmetric difference measured in cells, allowing `dilation` cells of slack
/// (Chebyshev distance on the grid indices).
SetMatchReport compare_cell_sets(const Grid& grid, const std::vector<int>& a,
                                 const std::vector<int>& b, int dilation);

} // namespace semirec
