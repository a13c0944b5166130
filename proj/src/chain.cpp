#include "semirec/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace semirec {

namespace {

// Flat ids of all cells whose center lies strictly within eps of z.
std::vector<int> cells_near(const Grid& grid, const Point& z, double eps) {
    const auto& space = grid.space();
    std::vector<int> out;
    if (space.kind() == SpaceKind::Circle) {
        const int n = grid.cells_along(0);
        const double w = grid.width_along(0);
        if (2 * eps >= 1.0) {
            for (int k = 0; k < n; ++k) out.push_back(k);
            return out;
        }
        const double x = space.wrap(z)[0];
        const int klo = static_cast<int>(std::floor((x - eps) / w)) - 1;
        const int khi = static_cast<int>(std::floor((x + eps) / w)) + 1;
        for (int k = klo; k <= khi; ++k) {
            const int kk = ((k % n) + n) % n;
            CellId c;
            c.dim = 1;
            c.ix[0] = kk;
            if (space.dist(z, grid.center_of(c)) < eps) {
                if (std::find(out.begin(), out.end(), kk) == out.end()) out.push_back(kk);
            }
        }
        return out;
    }

    std::array<int, kMaxDim> lo{0, 0}, hi{0, 0};
    for (int d = 0; d < space.dim(); ++d) {
        const double w = grid.width_along(d);
        const double origin = space.bounds()[d].lo();
        int klo = static_cast<int>(std::floor((z[d] - eps - origin) / w));
        int khi = static_cast<int>(std::floor((z[d] + eps - origin) / w)) + 1;
        klo = std::clamp(klo, 0, grid.cells_along(d) - 1);
        khi = std::clamp(khi, 0, grid.cells_along(d) - 1);
        lo[static_cast<std::size_t>(d)] = klo;
        hi[static_cast<std::size_t>(d)] = khi;
    }
    CellId c;
    c.dim = space.dim();
    for (int i = lo[0]; i <= hi[0]; ++i) {
        c.ix[0] = i;
        if (space.dim() == 1) {
            if (space.dist(z, grid.center_of(c)) < eps) out.push_back(grid.flat(c));
            continue;
        }
        for (int j = lo[1]; j <= hi[1]; ++j) {
            c.ix[1] = j;
            if (space.dist(z, grid.center_of(c)) < eps) out.push_back(grid.flat(c));
        }
    }
    return out;
}

std::string eps_label(double eps) {
    std::ostringstream os;
    os << eps;
    return os.str();
}

} // namespace

bool validate_chain(const GeneratorSystem& sys, const EpsilonChain& chain, std::string* why) {
    if (chain.points.size() < 2 || chain.helpers.size() + 1 != chain.points.size()) {
        if (why) *why = "malformed chain shape";
        return false;
    }
    if (chain.lead.empty()) {
        if (why) *why = "empty lead word";
        return false;
    }
    for (std::size_t i = 0; i < chain.helpers.size(); ++i) {
        StepResult r;
        try {
            r = word_eval(sys, chain.lead.then(chain.helpers[i]), chain.points[i]);
        } catch (const DomainError&) {
            if (why) *why = "chain step " + std::to_string(i + 1) + " is not evaluable";
            return false;
        }
        if (r.escaped) {
            if (why) *why = "chain step " + std::to_string(i + 1) + " escapes the window";
            return false;
        }
        const double d = sys.space().dist(r.value, chain.points[i + 1]);
        if (!(d < chain.epsilon)) {
            if (why)
                *why = "chain step " + std::to_string(i + 1) + " lands at distance " +
                       std::to_string(d) + " >= " + std::to_string(chain.epsilon);
            return false;
        }
    }
    return true;
}

ChainGraph build_chain_graph(const GeneratorSystem& sys, const Grid& grid, const Word& lead,
                             double epsilon, int helper_max_len, std::size_t cap) {
    if (lead.empty()) throw std::invalid_argument("lead word must be nonempty");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");

    ChainGraph g{grid, lead, epsilon, helper_max_len, {}};
    g.adj.assign(static_cast<std::size_t>(grid.cell_count()) + 1, {});
    const std::vector<Word> helpers =
        enumerate_words(sys, WordClass::WithIdentity, helper_max_len, cap);

    std::vector<int> seen(static_cast<std::size_t>(grid.cell_count()) + 1, -1);
    for (int u = 0; u < grid.cell_count(); ++u) {
        const Point cu = grid.center_of_flat(u);
        StepResult after_lead;
        try {
            after_lead = word_eval(sys, lead, cu);
        } catch (const DomainError&) {
            g.adj[static_cast<std::size_t>(u)].push_back({g.escape_node(), Word::empty_word()});
            continue;
        }
        if (after_lead.escaped) {
            g.adj[static_cast<std::size_t>(u)].push_back({g.escape_node(), Word::empty_word()});
            continue;
        }
        for (const Word& h : helpers) {
            StepResult r;
            try {
                r = word_eval(sys, h, after_lead.value);
            } catch (const DomainError&) {
                continue;
            }
            if (r.escaped) {
                if (seen[static_cast<std::size_t>(g.escape_node())] != u) {
                    seen[static_cast<std::size_t>(g.escape_node())] = u;
                    g.adj[static_cast<std::size_t>(u)].push_back({g.escape_node(), h});
                }
                continue;
            }
            for (int v : cells_near(grid, r.value, epsilon)) {
                if (seen[static_cast<std::size_t>(v)] == u) continue; // first helper wins
                seen[static_cast<std::size_t>(v)] = u;
                g.adj[static_cast<std::size_t>(u)].push_back({v, h});
            }
        }
        std::sort(g.adj[static_cast<std::size_t>(u)].begin(), g.adj[static_cast<std::size_t>(u)].end(),
                  [](const ChainEdge& a, const ChainEdge& b) { return a.to < b.to; });
    }
    return g;
}

// Iterative Tarjan; the explicit stack keeps large grids off the call stack.
ChainClassification classify(const ChainGraph& graph) {
    const int n = graph.node_count();
    ChainClassification out;
    out.scc_id.assign(static_cast<std::size_t>(n), -1);
    out.on_cycle.assign(static_cast<std::size_t>(n), false);

    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    int next_index = 0;

    struct Frame {
        int node;
        std::size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            const auto u = static_cast<std::size_t>(f.node);
            if (f.edge == 0) {
                index[u] = low[u] = next_index++;
                stack.push_back(f.node);
                on_stack[u] = true;
            }
            bool descended = false;
            while (f.edge < graph.adj[u].size()) {
                const int v = graph.adj[u][f.edge].to;
                ++f.edge;
                if (index[static_cast<std::size_t>(v)] == -1) {
                    call.push_back({v, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(v)])
                    low[u] = std::min(low[u], index[static_cast<std::size_t>(v)]);
            }
            if (descended) continue;
            if (low[u] == index[u]) {
                std::vector<int> members;
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    out.scc_id[static_cast<std::size_t>(w)] = out.scc_count;
                    members.push_back(w);
                    if (w == f.node) break;
                }
                if (members.size() >= 2)
                    for (int w : members) out.on_cycle[static_cast<std::size_t>(w)] = true;
                ++out.scc_count;
            }
            const int child = f.node;
            call.pop_back();
            if (!call.empty()) {
                const auto p = static_cast<std::size_t>(call.back().node);
                low[p] = std::min(low[p], low[static_cast<std::size_t>(child)]);
            }
        }
    }
    for (int u = 0; u < n; ++u)
        if (graph.has_self_loop(u)) out.on_cycle[static_cast<std::size_t>(u)] = true;
    return out;
}

// ---------------------------------------------------------------------------
// Reachability with witnesses.
// ---------------------------------------------------------------------------

namespace {

struct SeedEdge {
    int cell;
    Word helper;
};

// First chain step taken from the exact point a (not its cell center).
std::vector<SeedEdge> point_seeds(const GeneratorSystem& sys, const ChainGraph& graph,
                                  const Point& a, std::size_t cap) {
    std::vector<SeedEdge> seeds;
    StepResult after_lead;
    try {
        after_lead = word_eval(sys, graph.lead, a);
    } catch (const DomainError&) {
        return seeds;
    }
    if (after_lead.escaped) return seeds;
    std::vector<bool> seen(static_cast<std::size_t>(graph.grid.cell_count()), false);
    for (const Word& h : enumerate_words(sys, WordClass::WithIdentity, graph.helper_max_len, cap)) {
        StepResult r;
        try {
            r = word_eval(sys, h, after_lead.value);
        } catch (const DomainError&) {
            continue;
        }
        if (r.escaped) continue;
        for (int v : cells_near(graph.grid, r.value, graph.epsilon)) {
            if (seen[static_cast<std::size_t>(v)]) continue;
            seen[static_cast<std::size_t>(v)] = true;
            seeds.push_back({v, h});
        }
    }
    return seeds;
}

struct BfsOutcome {
    bool found = false;
    std::vector<int> path_cells; // v1..vT with vT = cell(b)
    std::vector<Word> helpers;   // h0 (seed) .. h_{T-1}
};

BfsOutcome bfs_to_cell(const ChainGraph& graph, const std::vector<SeedEdge>& seeds, int target,
                       int max_steps) {
    BfsOutcome out;
    const int n = graph.node_count();
    std::vector<int> prev(static_cast<std::size_t>(n), -2); // -2 unvisited, -1 seed
    std::vector<const Word*> via(static_cast<std::size_t>(n), nullptr);
    std::vector<int> depth(static_cast<std::size_t>(n), 0);
    std::deque<int> queue;

    for (const auto& s : seeds) {
        if (prev[static_cast<std::size_t>(s.cell)] != -2) continue;
        prev[static_cast<std::size_t>(s.cell)] = -1;
        via[static_cast<std::size_t>(s.cell)] = &s.helper;
        depth[static_cast<std::size_t>(s.cell)] = 1;
        queue.push_back(s.cell);
    }

    int found_at = -1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (u == target) {
            found_at = u;
            break;
        }
        if (max_steps > 0 && depth[static_cast<std::size_t>(u)] >= max_steps) continue;
        for (const auto& e : graph.adj[static_cast<std::size_t>(u)]) {
            if (e.to >= graph.grid.cell_count()) continue; // ESCAPE is absorbing
            if (prev[static_cast<std::size_t>(e.to)] != -2) continue;
            prev[static_cast<std::size_t>(e.to)] = u;
            via[static_cast<std::size_t>(e.to)] = &e.helper;
            depth[static_cast<std::size_t>(e.to)] = depth[static_cast<std::size_t>(u)] + 1;
            queue.push_back(e.to);
        }
    }
    if (found_at < 0) return out;

    out.found = true;
    std::vector<int> rev_cells;
    std::vector<Word> rev_helpers;
    int cur = found_at;
    while (cur != -1) {
        rev_cells.push_back(cur);
        rev_helpers.push_back(*via[static_cast<std::size_t>(cur)]);
        cur = prev[static_cast<std::size_t>(cur)];
    }
    out.path_cells.assign(rev_cells.rbegin(), rev_cells.rend());
    out.helpers.assign(rev_helpers.rbegin(), rev_helpers.rend());
    return out;
}

bool window_generator_invariant(const GeneratorSystem& sys) {
    if (sys.space().kind() == SpaceKind::Circle) return true;
    const double slack = sys.escape_slack();
    IntervalBox inflated = sys.space().bounds();
    for (int d = 0; d < inflated.dim(); ++d)
        inflated[d] = Interval{inflated[d].lo() - slack, inflated[d].hi() + slack};
    for (int gi = 0; gi < sys.generator_count(); ++gi) {
        IntervalBox img;
        try {
            img = eval_interval(sys.generator(gi).map, sys.space().bounds());
        } catch (const DomainError&) {
            return false;
        }
        if (!inflated.contains(img)) return false;
    }
    return true;
}

double cell_gap(const Grid& grid, int u, int v) {
    const auto& space = grid.space();
    if (space.kind() == SpaceKind::Circle) {
        const double w = grid.width_along(0);
        const double d = space.dist(grid.center_of_flat(u), grid.center_of_flat(v));
        return std::max(0.0, d - w);
    }
    const IntervalBox a = grid.box_of_flat(u);
    const IntervalBox b = grid.box_of_flat(v);
    double s = 0.0;
    for (int d = 0; d < a.dim(); ++d) {
        const double gap = std::max({0.0, b[d].lo() - a[d].hi(), a[d].lo() - b[d].hi()});
        s += gap * gap;
    }
    return std::sqrt(s);
}

// Cells whose closed box meets the (clamped) image enclosure.
std::vector<int> cells_covering(const Grid& grid, const IntervalBox& image) {
    const auto& space = grid.space();
    std::vector<int> out;
    if (space.kind() == SpaceKind::Circle) {
        const int n = grid.cells_along(0);
        const double w = grid.width_along(0);
        for (const Interval& arc : circle_arcs(image[0])) {
            int klo = static_cast<int>(std::floor(arc.lo() / w));
            int khi = static_cast<int>(std::floor(arc.hi() / w));
            klo = std::clamp(klo, 0, n - 1);
            khi = std::clamp(khi, 0, n - 1);
            for (int k = klo; k <= khi; ++k)
                if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
        }
        return out;
    }
    std::array<int, kMaxDim> lo{0, 0}, hi{0, 0};
    for (int d = 0; d < space.dim(); ++d) {
        const double w = grid.width_along(d);
        const double origin = space.bounds()[d].lo();
        lo[static_cast<std::size_t>(d)] =
            std::clamp(static_cast<int>(std::floor((image[d].lo() - origin) / w)), 0,
                       grid.cells_along(d) - 1);
        hi[static_cast<std::size_t>(d)] =
            std::clamp(static_cast<int>(std::floor((image[d].hi() - origin) / w)), 0,
                       grid.cells_along(d) - 1);
    }
    CellId c;
    c.dim = space.dim();
    for (int i = lo[0]; i <= hi[0]; ++i) {
        c.ix[0] = i;
        if (space.dim() == 1) {
            out.push_back(grid.flat(c));
            continue;
        }
        for (int j = lo[1]; j <= hi[1]; ++j) {
            c.ix[1] = j;
            out.push_back(grid.flat(c));
        }
    }
    return out;
}

/// Outer reachability over a generator-invariant window: covers every chain
/// step, including helpers longer than the graph budget, by closing each
/// lead-image cover under per-generator cell covers. Sound because cell
/// covers only over-approximate.
class WindowClosure {
public:
    WindowClosure(const GeneratorSystem& sys, const Grid& grid, const Word& lead, double epsilon)
        : grid_(grid), epsilon_(epsilon) {
        const int n = grid.cell_count();
        gen_cover_.resize(static_cast<std::size_t>(sys.generator_count()));
        for (int gi = 0; gi < sys.generator_count(); ++gi) {
            auto& cover = gen_cover_[static_cast<std::size_t>(gi)];
            cover.resize(static_cast<std::size_t>(n));
            for (int u = 0; u < n; ++u)
                cover[static_cast<std::size_t>(u)] =
                    cells_covering(grid, eval_interval(sys.generator(gi).map, grid.box_of_flat(u)));
        }
        lead_cover_.resize(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) {
            IntervalBox b = grid.box_of_flat(u);
            for (int gi : lead.applied) b = eval_interval(sys.generator(gi).map, b);
            lead_cover_[static_cast<std::size_t>(u)] = cells_covering(grid, b);
        }
    }

    // All cells v such that some point within epsilon of the forward closure
    // of lead(box(u)) could lie in v.
    std::vector<int> outer_successors(int u) {
        const int n = grid_.cell_count();
        std::vector<bool> in_closure(static_cast<std::size_t>(n), false);
        std::deque<int> queue;
        for (int c : lead_cover_[static_cast<std::size_t>(u)]) {
            if (!in_closure[static_cast<std::size_t>(c)]) {
                in_closure[static_cast<std::size_t>(c)] = true;
                queue.push_back(c);
            }
        }
        while (!queue.empty()) {
            const int c = queue.front();
            queue.pop_front();
            for (const auto& cover : gen_cover_)
                for (int d : cover[static_cast<std::size_t>(c)])
                    if (!in_closure[static_cast<std::size_t>(d)]) {
                        in_closure[static_cast<std::size_t>(d)] = true;
                        queue.push_back(d);
                    }
        }
        std::vector<int> succ;
        const double slack = 1e-12 * (1.0 + epsilon_);
        for (int v = 0; v < n; ++v) {
            bool near = false;
            for (int c = 0; c < n && !near; ++c)
                if (in_closure[static_cast<std::size_t>(c)] && cell_gap(grid_, c, v) < epsilon_ + slack)
                    near = true;
            if (near) succ.push_back(v);
        }
        return succ;
    }

private:
    const Grid& grid_;
    double epsilon_;
    std::vector<std::vector<std::vector<int>>> gen_cover_;
    std::vector<std::vector<int>> lead_cover_;
};

} // namespace

ChainQueryResult chain_exists(const GeneratorSystem& sys, const ChainGraph& graph, const Point& a,
                              const Point& b, const ChainQueryOptions& opts) {
    const Point aw = sys.space().wrap(a);
    const Point bw = sys.space().wrap(b);
    if (!sys.space().contains(aw) || !sys.space().contains(bw))
        throw std::invalid_argument("chain endpoints must lie in the phase space");

    const int target = graph.grid.flat_cell_of(bw);
    const std::vector<SeedEdge> seeds = point_seeds(sys, graph, aw, kDefaultWordCap);
    const BfsOutcome hit = bfs_to_cell(graph, seeds, target, opts.max_steps);

    std::ostringstream budget;
    budget << "lead " << word_to_string(sys, graph.lead) << ", epsilon " << graph.epsilon
           << ", helpers up to length " << graph.helper_max_len << ", grid delta "
           << graph.grid.delta();
    if (opts.max_steps > 0) budget << ", at most " << opts.max_steps << " steps";

    if (hit.found) {
        EpsilonChain chain;
        chain.lead = graph.lead;
        chain.epsilon =
            graph.epsilon + graph.grid.delta() * std::sqrt(static_cast<double>(sys.space().dim()));
        chain.points.push_back(aw);
        for (std::size_t i = 0; i + 1 < hit.path_cells.size(); ++i)
            chain.points.push_back(graph.grid.center_of_flat(hit.path_cells[i]));
        chain.points.push_back(bw);
        chain.helpers = hit.helpers;

        std::string why;
        if (!validate_chain(sys, chain, &why)) {
            Verdict v = Verdict::inconclusive("a graph path was found but its chain failed "
                                              "re-validation: " + why);
            v.budgets = budget.str();
            return {v, std::nullopt};
        }
        Verdict v = Verdict::yes("explicit chain re-validated at the inflated epsilon " +
                                 eps_label(chain.epsilon));
        v.witness_words = {graph.lead};
        v.budgets = budget.str();
        return {v, chain};
    }

    if (opts.try_certificates && sys.space().dim() == 1 && sys.space().kind() == SpaceKind::Box) {
        for (const auto& parts : opts.candidate_sets) {
            NoChainResult nc = certify_no_chain(sys, bw, graph.lead, graph.epsilon, parts);
            if (nc.verdict.status == Status::CertifiedYes) {
                Verdict v = Verdict::no("a no-chain certificate excludes every chain into the "
                                        "target at this epsilon");
                v.certificate = nc.certificate;
                v.budgets = budget.str();
                return {v, std::nullopt};
            }
        }
        NoChainResult nc = certify_no_chain(sys, bw, graph.lead, graph.epsilon);
        if (nc.verdict.status == Status::CertifiedYes) {
            Verdict v = Verdict::no(
                "a no-chain certificate excludes every chain into the target at this epsilon");
            v.certificate = nc.certificate;
            v.budgets = budget.str();
            return {v, std::nullopt};
        }
    }

    if (opts.try_window_closure && opts.max_steps == 0 && window_generator_invariant(sys)) {
        bool closure_ok = true;
        std::vector<int> reached;
        try {
            WindowClosure closure(sys, graph.grid, graph.lead, graph.epsilon);
            const int n = graph.grid.cell_count();
            std::vector<bool> seen(static_cast<std::size_t>(n), false);
            std::deque<int> queue;
            queue.push_back(graph.grid.flat_cell_of(aw));
            // The start cell itself is not "reached": a chain needs >= 1 step.
            bool target_hit = false;
            std::vector<bool> expanded(static_cast<std::size_t>(n), false);
            while (!queue.empty() && !target_hit) {
                const int u = queue.front();
                queue.pop_front();
                if (expanded[static_cast<std::size_t>(u)]) continue;
                expanded[static_cast<std::size_t>(u)] = true;
                for (int v : closure.outer_successors(u)) {
                    if (v == target) {
                        target_hit = true;
                        break;
                    }
                    if (!seen[static_cast<std::size_t>(v)]) {
                        seen[static_cast<std::size_t>(v)] = true;
                        queue.push_back(v);
                    }
                }
            }
            if (target_hit) closure_ok = false;
        } catch (const DomainError&) {
            closure_ok = false;
        }
        if (closure_ok) {
            Verdict v = Verdict::no(
                "the window is generator-invariant and the interval-outer reachability "
                "closure never reaches the target cell, for helpers of any length");
            v.budgets = budget.str();
            return {v, std::nullopt};
        }
    }

    Verdict v = Verdict::inconclusive(
        "no chain found at this budget; without a certificate, escape through the window "
        "boundary cannot be ruled out");
    v.budgets = budget.str();
    return {v, std::nullopt};
}

NoChainResult certify_no_chain(const GeneratorSystem& sys, const Point& a, const Word& lead,
                               double epsilon,
                               const std::optional<std::vector<Interval>>& user_set) {
    if (lead.empty()) throw std::invalid_argument("lead word must be nonempty");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    if (sys.space().dim() != 1 || sys.space().kind() != SpaceKind::Box) {
        return {Verdict::inconclusive("no-chain certificates require a 1-D box phase space"),
                std::nullopt};
    }

    std::vector<std::vector<Interval>> candidates;
    std::string auto_note;
    if (user_set) {
        candidates.push_back(*user_set);
    } else {
        Interval global;
        try {
            IntervalBox b = IntervalBox::whole(1);
            for (int gi : lead.applied) b = eval_interval(sys.generator(gi).map, b);
            global = b[0];
        } catch (const DomainError&) {
            return {Verdict::inconclusive("the lead image over the whole line is not evaluable; "
                                          "supply an invariant set explicitly"),
                    std::nullopt};
        }
        candidates = invariant_set_candidates(sys, global);
    }

    std::string last_reason = "no candidate invariant set";
    for (const auto& parts : candidates) {
        InvariantSetCertificate cert;
        cert.kind = CertificateKind::NoChain;
        cert.set_parts = parts;
        cert.lead = lead;
        cert.target = sys.space().wrap(a);
        cert.epsilon = epsilon;
        double gap = kInf;
        for (const auto& p : parts) gap = std::min(gap, p.gap_to(cert.target[0]));
        cert.separation = gap;
        std::string why;
        if (validate_certificate(sys, cert, &why)) {
            Verdict v = Verdict::yes(
                "certified: after one application of the lead every chain stays within epsilon "
                "of the invariant set, which misses the target by " + std::to_string(gap) +
                " (margin " + std::to_string(gap - epsilon) + ")");
            v.certificate = cert;
            return {v, cert};
        }
        last_reason = why;
    }
    return {Verdict::inconclusive("no invariant set validated: " + last_reason), std::nullopt};
}

ChainRecurrenceSweep chain_recurrent_cells(const GeneratorSystem& sys, const Grid& grid,
                                           int lead_max_len, const std::vector<double>& epsilons,
                                           int helper_max_len, std::size_t cap) {
    if (epsilons.empty()) throw std::invalid_argument("need at least one epsilon");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("epsilon schedule must be strictly decreasing");

    ChainRecurrenceSweep out;
    out.cr_up_to_budget.assign(static_cast<std::size_t>(grid.cell_count()), true);
    out.first_failure.assign(static_cast<std::size_t>(grid.cell_count()), "");
    out.epsilons = epsilons;
    out.delta = grid.delta();

    const std::vector<Word> leads = enumerate_words(sys, WordClass::Full, lead_max_len, cap);
    out.lead_words = static_cast<int>(leads.size());
    for (const Word& lead : leads) {
        for (double eps : epsilons) {
            const ChainGraph g = build_chain_graph(sys, grid, lead, eps, helper_max_len, cap);
            const ChainClassification cls = classify(g);
            for (int c = 0; c < grid.cell_count(); ++c) {
                if (!cls.on_cycle[static_cast<std::size_t>(c)] &&
                    out.cr_up_to_budget[static_cast<std::size_t>(c)]) {
                    out.cr_up_to_budget[static_cast<std::size_t>(c)] = false;
                    out.first_failure[static_cast<std::size_t>(c)] =
                        word_to_string(sys, lead) + " @ " + eps_label(eps);
                }
            }
        }
    }
    return out;
}

ChainEquivalenceResult chain_equivalent(const GeneratorSystem& sys, const Grid& grid,
                                        const Point& a, const Point& b, int lead_max_len,
                                        const std::vector<double>& epsilons, int helper_max_len,
                                        const ChainQueryOptions& opts) {
    ChainEquivalenceResult out;
    const std::vector<Word> leads = enumerate_words(sys, WordClass::Full, lead_max_len,
                                                    kDefaultWordCap);
    for (const Word& lead : leads) {
        for (double eps : epsilons) {
            const ChainGraph g = build_chain_graph(sys, grid, lead, eps, helper_max_len);
            ChainQueryResult fwd = chain_exists(sys, g, a, b, opts);
            ChainQueryResult bwd = chain_exists(sys, g, b, a, opts);
            if (fwd.verdict.status == Status::CertifiedYes &&
                bwd.verdict.status == Status::CertifiedYes) {
                out.forward = fwd.chain;
                out.backward = bwd.chain;
                continue;
            }
            const bool refuted = fwd.verdict.status == Status::CertifiedNo ||
                                 bwd.verdict.status == Status::CertifiedNo;
            if (refuted) {
                const auto& bad = fwd.verdict.status == Status::CertifiedNo ? fwd : bwd;
                Verdict v = Verdict::no("one direction admits a certified no-chain result for lead " +
                                        word_to_string(sys, lead) + " at epsilon " + eps_label(eps));
                v.certificate = bad.verdict.certificate;
                out.verdict = v;
                return out;
            }
            Verdict v = Verdict::inconclusive("no chain found for lead " + word_to_string(sys, lead) +
                                              " at epsilon " + eps_label(eps) +
                                              ", and no certificate refutes it");
            out.verdict = v;
            return out;
        }
    }
    out.verdict = Verdict::inconclusive(
        "chain equivalent up to budget: mutually reachable in every tested graph");
    return out;
}

} // namespace semirec
