#pragma once

#include <random>
#include <string>
#include <vector>

#include "semirec/semigroup.hpp"

namespace semirec::testutil {

inline GeneratorSystem box_system(double lo, double hi,
                                  const std::vector<std::pair<std::string, std::string>>& gens,
                                  bool claimed_abelian = false) {
    std::vector<Generator> generators;
    for (const auto& [name, text] : gens)
        generators.push_back(Generator{name, MapExpr::parse_map({text}, 1)});
    return GeneratorSystem(PhaseSpace::box(IntervalBox(Interval{lo, hi})), std::move(generators),
                           claimed_abelian);
}

inline GeneratorSystem circle_system(const std::vector<std::pair<std::string, std::string>>& gens) {
    std::vector<Generator> generators;
    for (const auto& [name, text] : gens)
        generators.push_back(Generator{name, MapExpr::parse_map({text}, 1)});
    return GeneratorSystem(PhaseSpace::circle(), std::move(generators), false);
}

/// Random 1-D expression tree for property tests. Division is kept away from
/// obvious poles; domain errors are expected occasionally and callers skip.
class RandomExprGen {
public:
    explicit RandomExprGen(std::uint64_t seed) : rng_(seed) {}

    ExprAst tree(int max_depth) { return node(max_depth); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    ExprAst node(int depth) {
        if (depth <= 0) return leaf();
        switch (uniform_int(0, 9)) {
        case 0: return leaf();
        case 1: return ExprAst::unary(ExprAst::UnaryOp::Neg, node(depth - 1));
        case 2: return ExprAst::unary(ExprAst::UnaryOp::Sin, node(depth - 1));
        case 3: return ExprAst::unary(ExprAst::UnaryOp::Abs, node(depth - 1));
        case 4: return ExprAst::pow(node(depth - 1), uniform_int(0, 4));
        case 5: return ExprAst::binary(ExprAst::BinaryOp::Add, node(depth - 1), node(depth - 1));
        case 6: return ExprAst::binary(ExprAst::BinaryOp::Sub, node(depth - 1), node(depth - 1));
        case 7: return ExprAst::binary(ExprAst::BinaryOp::Mul, node(depth - 1), node(depth - 1));
        case 8: {
            // Denominator bounded away from zero: x^2 + c with c >= 0.5.
            ExprAst denom = ExprAst::binary(
                ExprAst::BinaryOp::Add, ExprAst::pow(ExprAst::variable(0), 2),
                ExprAst::constant(uniform(0.5, 2.0)));
            return ExprAst::binary(ExprAst::BinaryOp::Div, node(depth - 1), std::move(denom));
        }
        default: return ExprAst::compose(node(depth - 1), node(depth - 1));
        }
    }

    ExprAst leaf() {
        if (uniform_int(0, 1) == 0) return ExprAst::variable(0);
        return ExprAst::constant(uniform(-2.0, 2.0));
    }

    std::mt19937_64 rng_;
};

} // namespace semirec::testutil
