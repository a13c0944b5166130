#include "semirec/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace semirec {

GeneratorSystem::GeneratorSystem(PhaseSpace space, std::vector<Generator> generators,
                                 bool claimed_abelian)
    : space_(space), generators_(std::move(generators)), claimed_abelian_(claimed_abelian) {
    if (generators_.empty()) throw std::invalid_argument("need at least one generator");
    for (const auto& g : generators_) {
        if (g.map.dim != space_.dim())
            throw std::invalid_argument("generator '" + g.name + "' has the wrong dimension");
        if (g.map.is_syntactic_identity())
            throw std::invalid_argument("generator '" + g.name + "' is the identity map");
        if (g.name.empty()) throw std::invalid_argument("generator names must be nonempty");
    }
    for (std::size_t i = 0; i < generators_.size(); ++i)
        for (std::size_t j = i + 1; j < generators_.size(); ++j)
            if (generators_[i].name == generators_[j].name)
                throw std::invalid_argument("duplicate generator name '" + generators_[i].name + "'");
}

int GeneratorSystem::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name) return static_cast<int>(i);
    return -1;
}

double GeneratorSystem::escape_slack() const {
    return 1e-9 * std::max(1.0, space_.extent());
}

std::string word_to_string(const GeneratorSystem& sys, const Word& w) {
    if (w.empty()) return "id";
    std::string out;
    for (auto it = w.applied.rbegin(); it != w.applied.rend(); ++it) {
        if (!out.empty()) out += "∘";
        out += sys.generator(*it).name;
    }
    return out;
}

std::optional<std::size_t> word_count(int generators, WordClass cls, int max_len) {
    const std::size_t k = static_cast<std::size_t>(generators);
    std::size_t total = (cls == WordClass::WithIdentity) ? 1 : 0;
    std::size_t level = 1;
    const int first = (cls == WordClass::CompositeOnly) ? 2 : 1;
    for (int len = 1; len <= max_len; ++len) {
        if (level > std::numeric_limits<std::size_t>::max() / k) return std::nullopt;
        level *= k;
        if (len < first) continue;
        if (total > std::numeric_limits<std::size_t>::max() - level) return std::nullopt;
        total += level;
    }
    return total;
}

std::vector<Word> enumerate_words(const GeneratorSystem& sys, WordClass cls, int max_len,
                                  std::size_t cap) {
    if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
    const int k = sys.generator_count();
    const auto count = word_count(k, cls, max_len);
    if (!count || *count > cap)
        throw BudgetError("word enumeration exceeds the configured cap of " + std::to_string(cap));

    std::vector<Word> out;
    out.reserve(*count);
    if (cls == WordClass::WithIdentity) out.push_back(Word::empty_word());
    const int first = (cls == WordClass::CompositeOnly) ? 2 : 1;
    std::vector<int> idx;
    for (int len = first; len <= max_len; ++len) {
        idx.assign(static_cast<std::size_t>(len), 0);
        while (true) {
            out.push_back(Word{idx});
            int pos = len - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - 1) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
        }
    }
    return out;
}

StepResult word_eval(const GeneratorSystem& sys, const Word& w, const Point& x) {
    const double slack = sys.escape_slack();
    StepResult r{sys.space().wrap(x), false};
    for (int gi : w.applied) {
        r.value = sys.space().wrap(eval_point(sys.generator(gi).map, r.value));
        if (!sys.space().contains(r.value, slack)) {
            r.escaped = true;
            return r;
        }
    }
    return r;
}

OrbitResult orbit(const GeneratorSystem& sys, const Point& x, int max_len, double tol_dedup,
                  std::size_t cap) {
    OrbitResult res;
    res.tol_dedup = tol_dedup;
    res.entries.push_back(OrbitEntry{sys.space().wrap(x), Word::empty_word()});

    auto known = [&](const Point& p) {
        for (const auto& e : res.entries)
            if (sys.space().dist(e.value, p) <= tol_dedup) return true;
        return false;
    };

    for (const Word& w : enumerate_words(sys, WordClass::Full, max_len, cap)) {
        ++res.words_evaluated;
        const StepResult sr = word_eval(sys, w, x);
        if (sr.escaped) {
            ++res.escaped_words;
            continue;
        }
        if (!known(sr.value)) res.entries.push_back(OrbitEntry{sr.value, w});
    }
    return res;
}

bool word_is_identity_like(const GeneratorSystem& sys, const Word& w, double tol) {
    if (w.empty()) return true;
    const auto& bounds = sys.space().bounds();
    constexpr int kProbes = 17;
    constexpr double kOffset = 0.3819660112501051; // keeps probes off exact grid fractions
    bool any = false;
    // Probe a deterministic non-uniform lattice across the space.
    const int n0 = kProbes;
    const int n1 = sys.space().dim() == 2 ? kProbes : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            Point p = Point::zero(sys.space().dim());
            p[0] = bounds[0].lo() + bounds[0].width() * ((i + kOffset) / n0);
            if (sys.space().dim() == 2)
                p[1] = bounds[1].lo() + bounds[1].width() * ((j + kOffset) / n1);
            StepResult sr;
            try {
                sr = word_eval(sys, w, p);
            } catch (const DomainError&) {
                continue;
            }
            if (sr.escaped) continue;
            any = true;
            if (sys.space().dist(sr.value, sys.space().wrap(p)) > tol) return false;
        }
    }
    return any;
}

} // namespace semirec
