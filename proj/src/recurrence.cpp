#include "semirec/recurrence.hpp"

#include <algorithm>
#include <cmath>

namespace semirec {

namespace {

constexpr double kOrbitPointDedup = 1e-7;

// Signed displacement word(x) - x, respecting circle wrap. nullopt when the
// evaluation escapes or hits a domain error.
std::optional<double> displacement(const GeneratorSystem& sys, const Word& w, double x) {
    StepResult r;
    try {
        r = word_eval(sys, w, Point(x));
    } catch (const DomainError&) {
        return std::nullopt;
    }
    if (r.escaped) return std::nullopt;
    if (sys.space().kind() == SpaceKind::Circle) {
        double d = r.value[0] - sys.space().wrap(Point(x))[0];
        d -= std::floor(d + 0.5); // into [-0.5, 0.5)
        return d;
    }
    return r.value[0] - x;
}

} // namespace

FixedPointScan fixed_points_of_word(const GeneratorSystem& sys, const Word& w, int resolution,
                                    double tol_fix) {
    if (sys.space().dim() != 1)
        throw std::invalid_argument("fixed point scanning requires a 1-D phase space");
    if (w.empty()) throw std::invalid_argument("the empty word fixes everything");
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");

    const double lo = sys.space().bounds()[0].lo();
    const double hi = sys.space().bounds()[0].hi();
    const double step = (hi - lo) / resolution;

    FixedPointScan out;
    std::vector<std::optional<double>> vals(static_cast<std::size_t>(resolution) + 1);
    int valid = 0, tiny = 0;
    for (int i = 0; i <= resolution; ++i) {
        vals[static_cast<std::size_t>(i)] = displacement(sys, w, lo + i * step);
        if (vals[static_cast<std::size_t>(i)]) {
            ++valid;
            if (std::fabs(*vals[static_cast<std::size_t>(i)]) <= tol_fix) ++tiny;
        }
    }

    if (valid >= 10 && tiny >= (9 * valid) / 10) {
        out.identity_like = true;
        return out;
    }

    std::vector<double> roots;
    auto push_root = [&](double p) {
        for (double r : roots)
            if (std::fabs(r - p) <= 1e-9 * (1.0 + std::fabs(p))) return;
        roots.push_back(p);
    };

    for (int i = 0; i <= resolution; ++i) {
        const auto& v = vals[static_cast<std::size_t>(i)];
        if (v && std::fabs(*v) <= tol_fix) push_root(lo + i * step);
    }

    for (int i = 0; i < resolution; ++i) {
        const auto& fa = vals[static_cast<std::size_t>(i)];
        const auto& fb = vals[static_cast<std::size_t>(i) + 1];
        if (!fa || !fb) {
            ++out.skipped_subintervals;
            continue;
        }
        if (std::fabs(*fa) <= tol_fix || std::fabs(*fb) <= tol_fix) continue;
        if ((*fa < 0) == (*fb < 0)) continue;

        double a = lo + i * step, b = a + step;
        double va = *fa;
        bool aborted = false;
        for (int iter = 0; iter < 200 && (b - a) > 1e-15 * std::max(1.0, std::fabs(a)); ++iter) {
            const double m = 0.5 * (a + b);
            const auto vm = displacement(sys, w, m);
            if (!vm) {
                aborted = true;
                break;
            }
            if (*vm == 0.0) {
                a = b = m;
                break;
            }
            if ((*vm < 0) == (va < 0)) {
                a = m;
                va = *vm;
            } else {
                b = m;
            }
        }
        if (aborted) {
            ++out.skipped_subintervals;
            continue;
        }
        push_root(0.5 * (a + b));
    }

    std::sort(roots.begin(), roots.end());
    for (double p : roots) {
        const auto res = displacement(sys, w, p);
        if (!res) continue;
        if (std::fabs(*res) <= tol_fix)
            out.records.push_back(OrbitPointRecord{Point(p), w, std::fabs(*res)});
    }
    return out;
}

OrbitPointsResult orbit_points(const GeneratorSystem& sys, int max_len, int resolution,
                               double tol_fix, std::size_t cap) {
    OrbitPointsResult out;
    for (const Word& w : enumerate_words(sys, WordClass::Full, max_len, cap)) {
        FixedPointScan scan = fixed_points_of_word(sys, w, resolution, tol_fix);
        if (scan.identity_like) {
            out.identity_like_words.push_back(w);
            continue;
        }
        out.skipped_subintervals += scan.skipped_subintervals;
        for (auto& rec : scan.records) {
            bool known = false;
            for (const auto& have : out.records) {
                if (std::fabs(have.point[0] - rec.point[0]) <= kOrbitPointDedup) {
                    known = true;
                    break;
                }
            }
            if (!known) out.records.push_back(std::move(rec));
        }
    }
    return out;
}

std::vector<Point> fix_set(const GeneratorSystem& sys, int resolution, double tol_fix) {
    const FixedPointScan base = fixed_points_of_word(sys, Word::single(0), resolution, tol_fix);
    std::vector<Point> out;
    for (const auto& rec : base.records) {
        bool all_fix = true;
        for (int gi = 1; gi < sys.generator_count() && all_fix; ++gi) {
            const auto d = displacement(sys, Word::single(gi), rec.point[0]);
            // The scan root carries bisection error, so allow a small multiple.
            if (!d || std::fabs(*d) > 10 * tol_fix) all_fix = false;
        }
        if (all_fix) out.push_back(rec.point);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Omega limits under the pivot-count word shape.
// ---------------------------------------------------------------------------

namespace {

// All words over the non-pivot generators with length <= block_cap, shortlex.
std::vector<Word> pivot_free_blocks(const GeneratorSystem& sys, int pivot, int block_cap) {
    std::vector<int> others;
    for (int i = 0; i < sys.generator_count(); ++i)
        if (i != pivot) others.push_back(i);
    std::vector<Word> blocks{Word::empty_word()};
    std::vector<Word> frontier{Word::empty_word()};
    for (int len = 1; len <= block_cap && !others.empty(); ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (int g : others) {
                Word e = w;
                e.applied.push_back(g);
                next.push_back(e);
            }
        blocks.insert(blocks.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return blocks;
}

// Visit every word with exactly `count` pivots, built as
// block_1, pivot, block_2, pivot, ..., pivot, block_{count+1} in application
// order. Stops early when the visitor returns false or the cap is hit.
template <typename Visitor>
std::size_t for_each_admissible_word(int pivot, int count, const std::vector<Word>& blocks,
                                     std::size_t max_words, Visitor&& visit) {
    const int slots = count + 1;
    std::vector<std::size_t> choice(static_cast<std::size_t>(slots), 0);
    std::size_t produced = 0;
    while (true) {
        Word w;
        for (int s = 0; s < slots; ++s) {
            const Word& b = blocks[choice[static_cast<std::size_t>(s)]];
            w.applied.insert(w.applied.end(), b.applied.begin(), b.applied.end());
            if (s + 1 < slots) w.applied.push_back(pivot);
        }
        ++produced;
        if (!visit(w)) return produced;
        if (produced >= max_words) return produced;
        int pos = slots - 1;
        while (pos >= 0 && choice[static_cast<std::size_t>(pos)] == blocks.size() - 1) {
            choice[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) return produced;
        ++choice[static_cast<std::size_t>(pos)];
    }
}

} // namespace

std::vector<OmegaCluster> OmegaApprox::persistent_clusters() const {
    std::vector<OmegaCluster> out;
    for (const auto& c : clusters)
        if (c.persistent) out.push_back(c);
    return out;
}

OmegaApprox omega_limit(const GeneratorSystem& sys, const Point& x, int pivot,
                        const std::vector<int>& schedule, const OmegaOptions& opts) {
    if (pivot < 0 || pivot >= sys.generator_count())
        throw std::invalid_argument("pivot generator index out of range");
    if (schedule.empty()) throw std::invalid_argument("empty pivot-count schedule");

    OmegaApprox out;
    out.base = sys.space().wrap(x);
    out.pivot = pivot;
    out.schedule = schedule;
    out.tol_cluster = opts.tol_cluster;

    const std::vector<Word> blocks = pivot_free_blocks(sys, pivot, opts.block_cap);

    struct Raw {
        Point rep;
        double sum0 = 0, sum1 = 0;
        int hits = 0;
        std::set<int> counts;
        int max_count = 0;
    };
    std::vector<Raw> raw;

    for (int count : schedule) {
        if (count < 1) throw std::invalid_argument("pivot counts must be >= 1");
        out.words_evaluated += for_each_admissible_word(
            pivot, count, blocks, opts.max_words, [&](const Word& w) {
                StepResult r;
                try {
                    r = word_eval(sys, w, out.base);
                } catch (const DomainError&) {
                    ++out.escaped_words;
                    return true;
                }
                if (r.escaped) {
                    ++out.escaped_words;
                    return true;
                }
                bool placed = false;
                for (auto& c : raw) {
                    if (sys.space().dist(c.rep, r.value) <= opts.tol_cluster) {
                        c.sum0 += r.value[0];
                        if (r.value.dim() == 2) c.sum1 += r.value[1];
                        ++c.hits;
                        c.counts.insert(count);
                        c.max_count = std::max(c.max_count, count);
                        placed = true;
                        break;
                    }
                }
                if (!placed) {
                    Raw c;
                    c.rep = r.value;
                    c.sum0 = r.value[0];
                    if (r.value.dim() == 2) c.sum1 = r.value[1];
                    c.hits = 1;
                    c.counts.insert(count);
                    c.max_count = count;
                    raw.push_back(std::move(c));
                }
                return true;
            });
    }

    for (const auto& c : raw) {
        OmegaCluster oc;
        oc.center = Point::zero(out.base.dim());
        oc.center[0] = c.sum0 / c.hits;
        if (out.base.dim() == 2) oc.center[1] = c.sum1 / c.hits;
        oc.hits = c.hits;
        oc.counts_hit = c.counts;
        oc.max_count = c.max_count;
        oc.persistent = true;
        for (int s : schedule)
            if (!c.counts.count(s)) {
                oc.persistent = false;
                break;
            }
        out.clusters.push_back(std::move(oc));
    }
    return out;
}

Verdict is_recurrent(const GeneratorSystem& sys, const Point& x, int pivot,
                     const RecurrenceBudgets& budgets, const std::optional<Word>& hint) {
    if (pivot < 0 || pivot >= sys.generator_count())
        throw std::invalid_argument("pivot generator index out of range");
    if (budgets.schedule.empty()) throw std::invalid_argument("empty pivot-count schedule");

    const Point base = sys.space().wrap(x);
    const std::vector<Word> blocks = pivot_free_blocks(sys, pivot, budgets.block_cap);

    auto returns_home = [&](const Word& w) {
        StepResult r;
        try {
            r = word_eval(sys, w, base);
        } catch (const DomainError&) {
            return false;
        }
        return !r.escaped && sys.space().dist(r.value, base) < budgets.tol;
    };

    std::vector<Word> witnesses;
    std::string budget_note = "pivot counts {";
    for (std::size_t i = 0; i < budgets.schedule.size(); ++i)
        budget_note += (i ? "," : "") + std::to_string(budgets.schedule[i]);
    budget_note += "}, block cap " + std::to_string(budgets.block_cap) + ", <= " +
                   std::to_string(budgets.max_words_per_count) + " words per count";

    for (int count : budgets.schedule) {
        std::optional<Word> found;
        if (hint && !hint->empty()) {
            const int m = hint->count_of(pivot);
            if (m > 0 && count % m == 0) {
                const Word candidate = hint->repeated(count / m);
                if (returns_home(candidate)) found = candidate;
            }
        }
        if (!found) {
            for_each_admissible_word(pivot, count, blocks, budgets.max_words_per_count,
                                     [&](const Word& w) {
                                         if (returns_home(w)) {
                                             found = w;
                                             return false;
                                         }
                                         return true;
                                     });
        }
        if (!found) {
            Verdict v = Verdict::inconclusive(
                "no admissible word with " + std::to_string(count) +
                " pivot occurrences returned to the point within the search budget");
            v.budgets = budget_note;
            return v;
        }
        witnesses.push_back(*found);
    }

    Verdict v = Verdict::yes("a returning word was found at every scheduled pivot count");
    v.witness_words = std::move(witnesses);
    v.witness_points = {base};
    v.budgets = budget_note;
    return v;
}

} // namespace semirec
