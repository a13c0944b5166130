#include "semirec/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace semirec {

namespace {

bool valid_pairing(const GeneratorSystem& source, const GeneratorSystem& target,
                   const std::vector<int>& pairing) {
    if (static_cast<int>(pairing.size()) != source.generator_count()) return false;
    if (source.generator_count() != target.generator_count()) return false;
    std::vector<bool> used(pairing.size(), false);
    for (int t : pairing) {
        if (t < 0 || t >= target.generator_count()) return false;
        if (used[static_cast<std::size_t>(t)]) return false;
        used[static_cast<std::size_t>(t)] = true;
    }
    return true;
}

Word paired_word(const Word& w, const std::vector<int>& pairing) {
    Word out;
    out.applied.reserve(w.applied.size());
    for (int g : w.applied) out.applied.push_back(pairing[static_cast<std::size_t>(g)]);
    return out;
}

} // namespace

ConjugacyCheckResult check_conjugacy(const GeneratorSystem& source, const GeneratorSystem& target,
                                     const ConjugacyMap& cmap, int samples, std::uint64_t seed,
                                     double tol) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (!valid_pairing(source, target, cmap.pairing))
        throw std::invalid_argument("generator pairing must be a bijection");

    ConjugacyCheckResult out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto& bounds = cmap.source.bounds();

    auto sample_point = [&](bool boundary_biased) {
        Point p = Point::zero(cmap.source.dim());
        for (int d = 0; d < cmap.source.dim(); ++d) {
            double t = unit(rng);
            if (boundary_biased) t = (unit(rng) < 0.5) ? t * 0.02 : 1.0 - t * 0.02;
            p[d] = bounds[d].lo() + bounds[d].width() * t;
        }
        return p;
    };

    const int boundary_samples = std::max(1, samples / 10);
    std::vector<Point> pts;
    for (int i = 0; i < samples; ++i) pts.push_back(sample_point(false));
    for (int i = 0; i < boundary_samples; ++i) pts.push_back(sample_point(true));
    out.samples_used = static_cast<int>(pts.size());

    auto fail = [&](const Point& x, const std::string& what, double residual) {
        Verdict v = Verdict::no(what + " (residual " + std::to_string(residual) + ")");
        v.witness_points = {x};
        v.budgets = std::to_string(out.samples_used) + " samples, tolerance " + std::to_string(tol);
        out.verdict = v;
        return out;
    };

    for (const auto& x : pts) {
        Point rx;
        try {
            rx = cmap.target.wrap(eval_point(cmap.rho, x));
        } catch (const DomainError&) {
            continue;
        }
        // Inverse identity: rho_inv(rho(x)) == x.
        try {
            const Point back = cmap.source.wrap(eval_point(cmap.rho_inv, rx));
            const double d = cmap.source.dist(back, cmap.source.wrap(x));
            out.max_inverse_residual = std::max(out.max_inverse_residual, d);
            if (d > tol) return fail(x, "rho_inv does not invert rho at a sample", d);
        } catch (const DomainError&) {
            continue;
        }
        // Generator equivariance: rho(g_i(x)) == paired(g_i)(rho(x)).
        for (int gi = 0; gi < source.generator_count(); ++gi) {
            try {
                const StepResult gx = word_eval(source, Word::single(gi), x);
                if (gx.escaped) continue;
                const Point lhs = cmap.target.wrap(eval_point(cmap.rho, gx.value));
                const StepResult rhs = word_eval(
                    target, Word::single(cmap.pairing[static_cast<std::size_t>(gi)]), rx);
                if (rhs.escaped) continue;
                const double d = cmap.target.dist(lhs, rhs.value);
                out.max_generator_residual = std::max(out.max_generator_residual, d);
                if (d > tol)
                    return fail(x, "equivariance fails for generator '" +
                                       source.generator(gi).name + "'", d);
            } catch (const DomainError&) {
                continue;
            }
        }
    }

    // Word-level equivariance on random words; residuals may grow with the
    // word length, so the bound scales linearly.
    std::uniform_int_distribution<int> len_dist(1, 4);
    std::uniform_int_distribution<int> gen_dist(0, source.generator_count() - 1);
    for (int trial = 0; trial < 50; ++trial) {
        Word w;
        const int len = len_dist(rng);
        for (int i = 0; i < len; ++i) w.applied.push_back(gen_dist(rng));
        const Point x = sample_point(false);
        try {
            const StepResult wx = word_eval(source, w, x);
            if (wx.escaped) continue;
            const Point lhs = cmap.target.wrap(eval_point(cmap.rho, wx.value));
            const Point rx = cmap.target.wrap(eval_point(cmap.rho, x));
            const StepResult rhs = word_eval(target, paired_word(w, cmap.pairing), rx);
            if (rhs.escaped) continue;
            const double d = cmap.target.dist(lhs, rhs.value) / len;
            out.max_word_residual = std::max(out.max_word_residual, d);
            if (d > tol) return fail(x, "word-level equivariance fails", d);
        } catch (const DomainError&) {
            continue;
        }
    }

    Verdict v = Verdict::inconclusive("conjugate up to sampling");
    v.budgets = std::to_string(out.samples_used) + " samples plus 50 random words, tolerance " +
                std::to_string(tol);
    out.verdict = v;
    return out;
}

TransportResult transport_points(const ConjugacyMap& cmap, const std::vector<Point>& points,
                                 const Grid& target_grid) {
    TransportResult out;
    for (const auto& p : points) {
        Point image;
        try {
            image = cmap.target.wrap(eval_point(cmap.rho, p));
        } catch (const DomainError&) {
            ++out.escaped_points;
            continue;
        }
        if (!cmap.target.contains(image, 1e-9 * std::max(1.0, cmap.target.extent()))) {
            ++out.escaped_points;
            continue;
        }
        out.cells.push_back(target_grid.flat_cell_of(image));
    }
    std::sort(out.cells.begin(), out.cells.end());
    out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
    return out;
}

TransportResult transport_cells(const ConjugacyMap& cmap, const Grid& source_grid,
                                const std::vector<int>& source_cells, const Grid& target_grid) {
    std::vector<Point> centers;
    centers.reserve(source_cells.size());
    for (int c : source_cells) centers.push_back(source_grid.center_of_flat(c));
    return transport_points(cmap, centers, target_grid);
}

SetMatchReport compare_cell_sets(const Grid& grid, const std::vector<int>& a,
                                 const std::vector<int>& b, int dilation) {
    SetMatchReport rep;
    rep.dilation = dilation;
    rep.a_count = static_cast<int>(a.size());
    rep.b_count = static_cast<int>(b.size());

    auto index_dist = [&](int u, int v) {
        const CellId cu = grid.unflat(u);
        const CellId cv = grid.unflat(v);
        int d = 0;
        for (int i = 0; i < grid.space().dim(); ++i) {
            int di = std::abs(cu.ix[static_cast<std::size_t>(i)] - cv.ix[static_cast<std::size_t>(i)]);
            if (grid.space().kind() == SpaceKind::Circle)
                di = std::min(di, grid.cells_along(i) - di);
            d = std::max(d, di);
        }
        return d;
    };

    auto covered = [&](int u, const std::vector<int>& set) {
        for (int v : set)
            if (index_dist(u, v) <= dilation) return true;
        return false;
    };

    for (int u : a)
        if (!covered(u, b)) ++rep.only_in_a;
    for (int v : b)
        if (!covered(v, a)) ++rep.only_in_b;
    rep.match = rep.only_in_a == 0 && rep.only_in_b == 0;
    return rep;
}

} // namespace semirec
