#pragma once

#include <optional>

#include "semirec/verdict.hpp"

namespace semirec {

/// One chain witness: points x_1..x_{n+1} and helpers h_1..h_n such that
/// dist(h_i(lead(x_i)), x_{i+1}) < epsilon for every i. Epsilon here is the
/// inflated value the chain was validated against (graph epsilon plus the
/// cell-center slack).
struct EpsilonChain {
    std::vector<Point> points;
    std::vector<Word> helpers;
    Word lead;
    double epsilon = 0.0;
};

bool validate_chain(const GeneratorSystem& sys, const EpsilonChain& chain, std::string* why = nullptr);

struct ChainEdge {
    int to;
    Word helper;
};

/// Directed graph over grid cells: an edge u -> v records a helper word h with
/// dist(h(lead(center(u))), center(v)) < epsilon. Images that leave the phase
/// box feed the absorbing ESCAPE node (last index, no outgoing edges).
struct ChainGraph {
    Grid grid;
    Word lead;
    double epsilon = 0.0;
    int helper_max_len = 0;
    std::vector<std::vector<ChainEdge>> adj; // size cell_count() + 1

    int node_count() const { return static_cast<int>(adj.size()); }
    int escape_node() const { return node_count() - 1; }
    bool has_self_loop(int u) const {
        for (const auto& e : adj[static_cast<std::size_t>(u)])
            if (e.to == u) return true;
        return false;
    }
    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& v : adj) n += v.size();
        return n;
    }
};

ChainGraph build_chain_graph(const GeneratorSystem& sys, const Grid& grid, const Word& lead,
                             double epsilon, int helper_max_len,
                             std::size_t cap = kDefaultWordCap);

struct ChainClassification {
    std::vector<int> scc_id;    // indexed by node
    std::vector<bool> on_cycle; // in a nontrivial SCC or carrying a self-loop
    int scc_count = 0;
};

ChainClassification classify(const ChainGraph& graph);

struct ChainQueryOptions {
    int max_steps = 0; // 0 = unbounded
    std::vector<std::vector<Interval>> candidate_sets; // user S for no-certificates
    bool try_certificates = true;
    bool try_window_closure = true;
};

struct ChainQueryResult {
    Verdict verdict;
    std::optional<EpsilonChain> chain;
};

/// Reachability cell(a) -> cell(b) with at least one edge. The first step is
/// taken from the exact point a; a found path is rebuilt through cell centers
/// and re-validated at epsilon + delta*sqrt(dim). A CertifiedNo needs either
/// a no-chain certificate or, over a generator-invariant window, exhaustion
/// of the interval-outer reachability closure.
ChainQueryResult chain_exists(const GeneratorSystem& sys, const ChainGraph& graph, const Point& a,
                              const Point& b, const ChainQueryOptions& opts = {});

struct NoChainResult {
    Verdict verdict; // CertifiedYes = the absence of a chain is certified
    std::optional<InvariantSetCertificate> certificate;
};

/// Certify that no (epsilon, lead)-chain ends at `a` (in particular none from
/// a to itself): the lead maps everything into S, S is generator-invariant,
/// and S keeps distance >= epsilon from a.
NoChainResult certify_no_chain(const GeneratorSystem& sys, const Point& a, const Word& lead,
                               double epsilon,
                               const std::optional<std::vector<Interval>>& user_set = std::nullopt);

struct ChainRecurrenceSweep {
    std::vector<bool> cr_up_to_budget;      // per cell: on a cycle in every tested graph
    std::vector<std::string> first_failure; // empty when CR; else "lead @ epsilon"
    int lead_words = 0;
    std::vector<double> epsilons;
    double delta = 0.0;
};

/// A cell counts as chain-recurrent up to budget when it lies on a directed
/// cycle of the (epsilon, lead) graph for every lead word up to lead_max_len
/// and every epsilon in the (strictly decreasing) schedule.
ChainRecurrenceSweep chain_recurrent_cells(const GeneratorSystem& sys, const Grid& grid,
                                           int lead_max_len, const std::vector<double>& epsilons,
                                           int helper_max_len, std::size_t cap = kDefaultWordCap);

struct ChainEquivalenceResult {
    Verdict verdict;
    std::optional<EpsilonChain> forward;  // from the last graph in which both directions passed
    std::optional<EpsilonChain> backward;
};

ChainEquivalenceResult chain_equivalent(const GeneratorSystem& sys, const Grid& grid,
                                        const Point& a, const Point& b, int lead_max_len,
                                        const std::vector<double>& epsilons, int helper_max_len,
                                        const ChainQueryOptions& opts = {});

} // namespace semirec
