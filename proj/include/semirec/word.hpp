#pragma once

#include <vector>

namespace semirec {

/// One semigroup element: generator indices stored in application order
/// (first entry applied first). The empty word stands for the identity and
/// is only admitted where the identity-extended semigroup is meant.
struct Word {
    std::vector<int> applied;

    Word() = default;
    explicit Word(std::vector<int> ix) : applied(std::move(ix)) {}

    static Word empty_word() { return Word{}; }
    static Word single(int gen) { return Word{{gen}}; }

    int length() const { return static_cast<int>(applied.size()); }
    bool empty() const { return applied.empty(); }

    /// w1.then(w2): apply w1 first, then w2.
    Word then(const Word& after) const {
        Word r = *this;
        r.applied.insert(r.applied.end(), after.applied.begin(), after.applied.end());
        return r;
    }

    Word repeated(int times) const {
        Word r;
        r.applied.reserve(applied.size() * static_cast<std::size_t>(times));
        for (int i = 0; i < times; ++i)
            r.applied.insert(r.applied.end(), applied.begin(), applied.end());
        return r;
    }

    int count_of(int gen) const {
        int n = 0;
        for (int g : applied) n += (g == gen);
        return n;
    }

    bool operator==(const Word&) const = default;
};

/// Which slice of the semigroup an enumeration covers.
///  Full: all nonempty words.    CompositeOnly: words of length >= 2.
///  WithIdentity: all words including the empty one.
enum class WordClass { Full, CompositeOnly, WithIdentity };

} // namespace semirec
