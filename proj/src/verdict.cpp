#include "semirec/verdict.hpp"

#include <algorithm>
#include <random>

namespace semirec {

namespace {

// Merge the union of parts into disjoint sorted intervals.
std::vector<Interval> normalize_union(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
    std::vector<Interval> merged;
    for (const auto& p : parts) {
        if (!merged.empty() && p.lo() <= merged.back().hi())
            merged.back() = Interval{merged.back().lo(), std::max(merged.back().hi(), p.hi())};
        else
            merged.push_back(p);
    }
    return merged;
}

bool union_contains(const std::vector<Interval>& merged, const Interval& v) {
    for (const auto& m : merged)
        if (m.contains(v)) return true;
    return false;
}

double union_gap_to(const std::vector<Interval>& merged, double x) {
    double g = kInf;
    for (const auto& m : merged) g = std::min(g, m.gap_to(x));
    return g;
}

bool fail(std::string* why, const std::string& msg) {
    if (why) *why = msg;
    return false;
}

} // namespace

bool validate_certificate(const GeneratorSystem& sys, const InvariantSetCertificate& cert,
                          std::string* why) {
    if (sys.space().dim() != 1) return fail(why, "certificates are only supported in dimension 1");
    if (sys.space().kind() != SpaceKind::Box)
        return fail(why, "certificates require a box phase space");
    if (cert.set_parts.empty()) return fail(why, "certificate has an empty set");

    const std::vector<Interval> s_parts = normalize_union(cert.set_parts);

    // (b) every generator maps S into S.
    for (int gi = 0; gi < sys.generator_count(); ++gi) {
        for (const auto& part : s_parts) {
            Interval image;
            try {
                image = eval_interval(sys.generator(gi).map, IntervalBox(part))[0];
            } catch (const DomainError&) {
                return fail(why, "generator image of S is not evaluable");
            }
            if (!union_contains(s_parts, image))
                return fail(why, "generator '" + sys.generator(gi).name + "' leaves S");
        }
    }

    // (a) the probe images land in S.
    auto image_in_s = [&](const Word& w, const IntervalBox& domain, std::string* r) {
        IntervalBox b = domain;
        try {
            for (int gi : w.applied) b = eval_interval(sys.generator(gi).map, b);
        } catch (const DomainError&) {
            return fail(r, "probe image is not evaluable");
        }
        if (!union_contains(s_parts, b[0])) return fail(r, "probe image escapes S");
        return true;
    };

    switch (cert.kind) {
    case CertificateKind::LeadExclusion:
        if (cert.lead.empty()) return fail(why, "lead word is empty");
        if (!image_in_s(cert.lead, cert.probe, why)) return false;
        break;
    case CertificateKind::NoChain: {
        if (cert.lead.empty()) return fail(why, "lead word is empty");
        if (!image_in_s(cert.lead, IntervalBox::whole(1), why)) return false;
        break;
    }
    case CertificateKind::WanderingExclusion: {
        if (cert.closure_depth < 1) return fail(why, "closure depth must be >= 1");
        // All words of exactly closure_depth length map the probe into S.
        const int k = sys.generator_count();
        std::vector<int> idx(static_cast<std::size_t>(cert.closure_depth), 0);
        while (true) {
            if (!image_in_s(Word{idx}, cert.probe, why)) return false;
            int pos = cert.closure_depth - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - 1) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
        }
        break;
    }
    }

    // (c) S avoids the open target neighborhood / stays epsilon away.
    const double gap = union_gap_to(s_parts, cert.target[0]);
    const double required = std::max(cert.target_radius, cert.epsilon);
    if (gap < required)
        return fail(why, "S comes within " + std::to_string(gap) + " of the target");
    return true;
}

std::vector<std::vector<Interval>> invariant_set_candidates(const GeneratorSystem& sys,
                                                            const Interval& seed_image) {
    std::vector<std::vector<Interval>> out;
    out.push_back({Interval{0.0, kInf}});
    out.push_back({Interval{-kInf, 0.0}});
    if (seed_image.lo() > -kInf) out.push_back({Interval{seed_image.lo(), kInf}});
    if (seed_image.hi() < kInf) out.push_back({Interval{-kInf, seed_image.hi()}});

    if (sys.space().dim() == 1) {
        Interval s = seed_image;
        for (int iter = 0; iter < 12; ++iter) {
            Interval next = s;
            bool ok = true;
            for (int gi = 0; gi < sys.generator_count(); ++gi) {
                try {
                    next = hull(next, eval_interval(sys.generator(gi).map, IntervalBox(s))[0]);
                } catch (const DomainError&) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
            if (s.contains(next)) {
                out.push_back({s});
                break;
            }
            s = next;
        }
    }
    return out;
}

Verdict is_abelian_sampled(const GeneratorSystem& sys, int samples, double tol,
                           std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    std::mt19937_64 rng(seed);
    const auto& bounds = sys.space().bounds();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int s = 0; s < samples; ++s) {
        Point x = Point::zero(sys.space().dim());
        for (int d = 0; d < sys.space().dim(); ++d)
            x[d] = bounds[d].lo() + bounds[d].width() * unit(rng);
        for (int i = 0; i < sys.generator_count(); ++i) {
            for (int j = i + 1; j < sys.generator_count(); ++j) {
                StepResult ij, ji;
                try {
                    ij = word_eval(sys, Word{{i, j}}, x);
                    ji = word_eval(sys, Word{{j, i}}, x);
                } catch (const DomainError&) {
                    continue;
                }
                if (ij.escaped || ji.escaped) continue;
                if (sys.space().dist(ij.value, ji.value) > tol) {
                    Verdict v = Verdict::no("generators '" + sys.generator(i).name + "' and '" +
                                            sys.generator(j).name + "' do not commute at the witness");
                    v.witness_points = {x, ij.value, ji.value};
                    v.witness_words = {Word{{i, j}}, Word{{j, i}}};
                    v.budgets = std::to_string(samples) + " samples";
                    return v;
                }
            }
        }
    }
    Verdict v = Verdict::inconclusive("abelian up to sampling");
    v.budgets = std::to_string(samples) + " samples";
    return v;
}

} // namespace semirec
