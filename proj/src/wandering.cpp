#include "semirec/wandering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace semirec {

namespace {

constexpr double kGoldenOffset = 0.3819660112501051;

/// Neighborhood U of a point: either an open metric ball (point queries) or
/// an open cell box (grid sweeps). `box` always holds an enclosing box
/// clipped to the phase bounds, used for interval prefilters and sampling.
struct Hood {
    Point center;
    double radius = 0.0;
    bool ball = true;
    IntervalBox box;

    bool contains_open(const PhaseSpace& space, const Point& p) const {
        if (ball) return space.dist(center, p) < radius;
        const Point q = space.wrap(p);
        for (int i = 0; i < box.dim(); ++i)
            if (!(box[i].lo() < q[i] && q[i] < box[i].hi())) return false;
        return true;
    }
};

IntervalBox clip_to_bounds(const PhaseSpace& space, const IntervalBox& b) {
    if (space.kind() == SpaceKind::Circle) return b;
    IntervalBox r = b;
    for (int i = 0; i < b.dim(); ++i) {
        const double lo = std::max(b[i].lo(), space.bounds()[i].lo());
        const double hi = std::min(b[i].hi(), space.bounds()[i].hi());
        r[i] = Interval{std::min(lo, hi), std::max(lo, hi)};
    }
    return r;
}

Hood ball_hood(const PhaseSpace& space, const Point& x, double r) {
    Hood h;
    h.center = space.wrap(x);
    h.radius = r;
    h.ball = true;
    h.box = clip_to_bounds(space, IntervalBox::around(h.center, r));
    return h;
}

Hood cell_hood(const Grid& grid, int flat_cell) {
    Hood h;
    h.center = grid.center_of_flat(flat_cell);
    h.radius = grid.delta() / 2;
    h.ball = false;
    h.box = grid.box_of_flat(flat_cell);
    return h;
}

std::vector<Point> hood_samples(const PhaseSpace& space, const Hood& hood,
                                const ProbeOptions& opts) {
    std::vector<Point> pts = probe_lattice(hood.box, opts.samples_per_axis);
    pts.push_back(hood.center);
    for (const auto& p : opts.extra_samples) pts.push_back(p);
    std::vector<Point> keep;
    for (auto& p : pts) {
        const Point q = space.wrap(p);
        if (!space.contains(q)) continue;
        if (hood.ball && !(space.dist(q, hood.center) < hood.radius)) continue;
        if (!hood.ball && !hood.contains_open(space, q)) continue;
        keep.push_back(q);
    }
    return keep;
}

std::optional<IntervalBox> word_image_enclosure(const GeneratorSystem& sys, const Word& w,
                                                const IntervalBox& domain) {
    IntervalBox b = domain;
    try {
        for (int gi : w.applied) b = eval_interval(sys.generator(gi).map, b);
    } catch (const DomainError&) {
        return std::nullopt;
    }
    return b;
}

/// Word-by-word search for a probe point that the word returns to U.
std::optional<Point> find_return_point(const GeneratorSystem& sys, const Word& w,
                                       const Hood& hood, const std::vector<Point>& samples) {
    for (const auto& u : samples) {
        StepResult r;
        try {
            r = word_eval(sys, w, u);
        } catch (const DomainError&) {
            continue;
        }
        if (!r.escaped && hood.contains_open(sys.space(), r.value)) return u;
    }
    return std::nullopt;
}

std::string radius_label(const Hood& hood) {
    std::ostringstream os;
    if (hood.ball)
        os << "ball radius " << hood.radius;
    else
        os << "open cell of half-width " << hood.radius;
    return os.str();
}

// Shared identity-word cache for sweeps; enumeration order is deterministic,
// so indexing by word position is safe.
struct IdentityCache {
    const GeneratorSystem& sys;
    double tol;
    std::map<std::vector<int>, bool> known;

    bool operator()(const Word& w) {
        auto it = known.find(w.applied);
        if (it != known.end()) return it->second;
        const bool v = word_is_identity_like(sys, w, tol);
        known.emplace(w.applied, v);
        return v;
    }
};

Verdict nonwandering_on_hood(const GeneratorSystem& sys, const Hood& hood, int max_len,
                             const ProbeOptions& opts, IdentityCache& is_identity) {
    if (max_len < 2)
        throw std::invalid_argument("composite words need max_len >= 2");

    const std::vector<Point> samples = hood_samples(sys.space(), hood, opts);
    const std::vector<Word> words = enumerate_words(sys, WordClass::CompositeOnly, max_len,
                                                    opts.word_cap);
    std::ostringstream budget;
    budget << "composite words up to length " << max_len << ", " << samples.size()
           << " probe points, " << radius_label(hood);

    bool every_enclosure_missed = true;
    bool identity_word_seen = false;
    for (const Word& w : words) {
        const auto enclosure = word_image_enclosure(sys, w, hood.box);
        const bool overlap =
            !enclosure || image_overlaps(sys.space(), *enclosure, hood.box);
        if (overlap) every_enclosure_missed = false;
        if (!overlap) continue;

        if (is_identity(w)) {
            identity_word_seen = true;
            continue;
        }
        if (const auto u = find_return_point(sys, w, hood, samples)) {
            Verdict v = Verdict::yes("the word returns a probe point to the neighborhood");
            v.witness_words = {w};
            StepResult img = word_eval(sys, w, *u);
            v.witness_points = {*u, img.value};
            v.budgets = budget.str();
            return v;
        }
    }

    if (every_enclosure_missed && sys.space().dim() == 1 && sys.space().kind() == SpaceKind::Box) {
        for (int depth = 1; depth <= std::min(max_len, 3); ++depth) {
            std::optional<Interval> hull_img;
            bool ok = true;
            const int k = sys.generator_count();
            std::vector<int> idx(static_cast<std::size_t>(depth), 0);
            while (ok) {
                const auto enc = word_image_enclosure(sys, Word{idx}, hood.box);
                if (!enc) {
                    ok = false;
                    break;
                }
                hull_img = hull_img ? hull(*hull_img, (*enc)[0]) : (*enc)[0];
                int pos = depth - 1;
                while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - 1) {
                    idx[static_cast<std::size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) break;
                ++idx[static_cast<std::size_t>(pos)];
            }
            if (!ok || !hull_img) continue;

            std::vector<std::vector<Interval>> candidates = opts.candidate_sets;
            for (auto& c : invariant_set_candidates(sys, *hull_img)) candidates.push_back(c);
            for (const auto& parts : candidates) {
                InvariantSetCertificate cert;
                cert.kind = CertificateKind::WanderingExclusion;
                cert.set_parts = parts;
                cert.closure_depth = depth;
                cert.probe = hood.box;
                cert.target = hood.center;
                cert.target_radius = hood.radius;
                if (validate_certificate(sys, cert)) {
                    Verdict v = Verdict::no(
                        "every composite word misses the neighborhood by interval enclosure, "
                        "and an invariant set excludes all longer words");
                    v.certificate = cert;
                    v.budgets = budget.str();
                    return v;
                }
            }
        }
    }

    Verdict v = Verdict::inconclusive(
        identity_word_seen
            ? "no witness found; some composite words act as the identity and were excluded"
            : "no witness found and no exclusion certificate within the budget");
    v.budgets = budget.str();
    return v;
}

Verdict strongly_nonwandering_on_hood(const GeneratorSystem& sys, const Hood& hood,
                                      int lead_max_len, int helper_max_len,
                                      const ProbeOptions& opts) {
    // A common fixed point is strongly nonwandering for every neighborhood:
    // the identity helper works for every lead.
    bool fixed_by_all = true;
    for (int gi = 0; gi < sys.generator_count() && fixed_by_all; ++gi) {
        try {
            const StepResult r = word_eval(sys, Word::single(gi), hood.center);
            if (r.escaped || sys.space().dist(r.value, hood.center) > kTolFix) fixed_by_all = false;
        } catch (const DomainError&) {
            fixed_by_all = false;
        }
    }
    if (fixed_by_all) {
        Verdict v = Verdict::yes(
            "the point is fixed by every generator; the identity helper works for every lead");
        v.witness_points = {hood.center};
        v.witness_words = {Word::empty_word()};
        return v;
    }

    const std::vector<Point> samples = hood_samples(sys.space(), hood, opts);
    const std::vector<Word> leads = enumerate_words(sys, WordClass::Full, lead_max_len,
                                                    opts.word_cap);
    const std::vector<Word> helpers = enumerate_words(sys, WordClass::WithIdentity, helper_max_len,
                                                      opts.word_cap);
    std::ostringstream budget;
    budget << "lead words up to length " << lead_max_len << ", helpers up to length "
           << helper_max_len << ", " << samples.size() << " probe points, "
           << radius_label(hood);

    int unresolved = 0;
    std::optional<Word> first_unresolved;
    for (const Word& lead : leads) {
        bool found = false;
        for (const Word& h : helpers) {
            if (find_return_point(sys, lead.then(h), hood, samples)) {
                found = true;
                break;
            }
        }
        if (found) continue;

        // No helper returns: try to certify that no helper ever can.
        if (sys.space().dim() == 1 && sys.space().kind() == SpaceKind::Box) {
            const auto enc = word_image_enclosure(sys, lead, hood.box);
            std::vector<std::vector<Interval>> candidates = opts.candidate_sets;
            if (enc)
                for (auto& c : invariant_set_candidates(sys, (*enc)[0])) candidates.push_back(c);
            for (const auto& parts : candidates) {
                InvariantSetCertificate cert;
                cert.kind = CertificateKind::LeadExclusion;
                cert.set_parts = parts;
                cert.lead = lead;
                cert.probe = hood.box;
                cert.target = hood.center;
                cert.target_radius = hood.radius;
                if (validate_certificate(sys, cert)) {
                    Verdict v = Verdict::no(
                        "the lead word maps the neighborhood into a generator-invariant set "
                        "disjoint from it; no helper can return");
                    v.certificate = cert;
                    v.witness_words = {lead};
                    v.budgets = budget.str();
                    return v;
                }
            }
        }
        ++unresolved;
        if (!first_unresolved) first_unresolved = lead;
    }

    Verdict v = unresolved == 0
                    ? Verdict::inconclusive("every tested lead re-entered the neighborhood "
                                            "(yes up to the lead budget)")
                    : Verdict::inconclusive(std::to_string(unresolved) +
                                            " lead word(s) found no returning helper and no "
                                            "exclusion certificate");
    if (first_unresolved) v.witness_words = {*first_unresolved};
    v.budgets = budget.str();
    return v;
}

} // namespace

std::vector<Point> probe_lattice(const IntervalBox& box, int per_axis) {
    if (per_axis < 1) throw std::invalid_argument("per_axis must be >= 1");
    std::vector<Point> out;
    const int n0 = per_axis;
    const int n1 = box.dim() == 2 ? per_axis : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            Point p = Point::zero(box.dim());
            p[0] = box[0].lo() + box[0].width() * ((i + kGoldenOffset) / n0);
            if (box.dim() == 2) p[1] = box[1].lo() + box[1].width() * ((j + kGoldenOffset) / n1);
            out.push_back(p);
        }
    }
    return out;
}

Verdict is_nonwandering(const GeneratorSystem& sys, const Point& x, double radius, int max_len,
                        const ProbeOptions& opts) {
    if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
    IdentityCache cache{sys, opts.identity_tol, {}};
    return nonwandering_on_hood(sys, ball_hood(sys.space(), x, radius), max_len, opts, cache);
}

Verdict is_strongly_nonwandering(const GeneratorSystem& sys, const Point& x, double radius,
                                 int lead_max_len, int helper_max_len, const ProbeOptions& opts) {
    if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
    return strongly_nonwandering_on_hood(sys, ball_hood(sys.space(), x, radius), lead_max_len,
                                         helper_max_len, opts);
}

CellSweepResult nonwandering_cells(const GeneratorSystem& sys, const Grid& grid, int max_len,
                                   const ProbeOptions& opts) {
    CellSweepResult out;
    out.radius_used = grid.delta() / 2;
    out.cells.reserve(static_cast<std::size_t>(grid.cell_count()));
    IdentityCache cache{sys, opts.identity_tol, {}};
    for (int c = 0; c < grid.cell_count(); ++c)
        out.cells.push_back(nonwandering_on_hood(sys, cell_hood(grid, c), max_len, opts, cache));
    return out;
}

CellSweepResult strongly_nonwandering_cells(const GeneratorSystem& sys, const Grid& grid,
                                            int lead_max_len, int helper_max_len,
                                            const ProbeOptions& opts) {
    CellSweepResult out;
    out.radius_used = grid.delta() / 2;
    out.cells.reserve(static_cast<std::size_t>(grid.cell_count()));
    for (int c = 0; c < grid.cell_count(); ++c)
        out.cells.push_back(
            strongly_nonwandering_on_hood(sys, cell_hood(grid, c), lead_max_len, helper_max_len, opts));
    return out;
}

} // namespace semirec
