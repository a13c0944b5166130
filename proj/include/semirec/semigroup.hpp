#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semirec/expr.hpp"
#include "semirec/space.hpp"
#include "semirec/word.hpp"

namespace semirec {

inline constexpr std::size_t kDefaultWordCap = 100000;

struct Generator {
    std::string name;
    MapExpr map;
};

/// Finitely generated system of continuous self-maps of a phase space.
/// Generators may not be the syntactic identity.
class GeneratorSystem {
public:
    GeneratorSystem(PhaseSpace space, std::vector<Generator> generators,
                    bool claimed_abelian = false);

    const PhaseSpace& space() const { return space_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    const Generator& generator(int i) const { return generators_[static_cast<std::size_t>(i)]; }
    bool claimed_abelian() const { return claimed_abelian_; }

    /// -1 when the name is unknown.
    int index_of(std::string_view name) const;

    /// Absolute tolerance used by escape checks; relative to the space extent.
    double escape_slack() const;

private:
    PhaseSpace space_;
    std::vector<Generator> generators_;
    bool claimed_abelian_;
};

/// Composition-order rendering ("g2∘g1" applies g1 first).
std::string word_to_string(const GeneratorSystem& sys, const Word& w);

/// Number of words the class holds up to max_len, or nullopt on overflow.
std::optional<std::size_t> word_count(int generators, WordClass cls, int max_len);

/// All words of the class with length <= max_len in shortlex order.
/// Throws BudgetError when the count exceeds `cap`.
std::vector<Word> enumerate_words(const GeneratorSystem& sys, WordClass cls, int max_len,
                                  std::size_t cap = kDefaultWordCap);

struct StepResult {
    Point value;
    bool escaped = false; // some intermediate image left the phase box
};

/// Apply the word generator by generator; the empty word returns x.
/// On a circle every step wraps; on a box the first step whose image leaves
/// the bounds (beyond the escape slack) marks the result escaped.
StepResult word_eval(const GeneratorSystem& sys, const Word& w, const Point& x);

struct OrbitEntry {
    Point value;
    Word witness; // empty for the base point itself
};

struct OrbitResult {
    std::vector<OrbitEntry> entries;
    std::size_t words_evaluated = 0;
    std::size_t escaped_words = 0;
    double tol_dedup = 0.0;
};

/// {x} plus all word images up to max_len, deduplicated within tol_dedup.
/// Each surviving point keeps its first (hence shortest) witness word.
OrbitResult orbit(const GeneratorSystem& sys, const Point& x, int max_len,
                  double tol_dedup = 1e-9, std::size_t cap = kDefaultWordCap);

/// True when the word acts as the identity on a deterministic sample of the
/// space (within tol). Used to keep identity-equal compositions out of
/// witness positions.
bool word_is_identity_like(const GeneratorSystem& sys, const Word& w, double tol = 1e-9);

} // namespace semirec
