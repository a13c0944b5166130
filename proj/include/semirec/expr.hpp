#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semirec/interval.hpp"

namespace semirec {

/// Text could not be parsed; `position` is the byte offset of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Immutable expression tree for a scalar real map. Children are shared,
/// so copies are cheap and evaluation is safe from concurrent workers.
class ExprAst {
public:
    enum class Kind { Constant, Variable, Unary, Binary, Pow, Compose };
    enum class UnaryOp { Neg, Sin, Cos, Abs, Sqrt, Asin };
    enum class BinaryOp { Add, Sub, Mul, Div };

    static ExprAst constant(double v);
    static ExprAst variable(int index);
    static ExprAst unary(UnaryOp op, ExprAst operand);
    static ExprAst binary(BinaryOp op, ExprAst lhs, ExprAst rhs);
    static ExprAst pow(ExprAst base, int exponent);
    /// compose(f, g) evaluates g first and feeds the scalar result into f.
    /// f must only reference the first coordinate.
    static ExprAst compose(ExprAst outer, ExprAst inner);

    Kind kind() const { return kind_; }
    double value() const { return value_; }
    int var_index() const { return var_index_; }
    UnaryOp unary_op() const { return uop_; }
    BinaryOp binary_op() const { return bop_; }
    int exponent() const { return exponent_; }
    const ExprAst& lhs() const { return *a_; }
    const ExprAst& rhs() const { return *b_; }

    /// Largest variable index referenced, or -1 for constant expressions.
    int max_var_index() const;

    bool operator==(const ExprAst& o) const;

private:
    ExprAst() = default;

    Kind kind_ = Kind::Constant;
    double value_ = 0.0;
    int var_index_ = 0;
    UnaryOp uop_ = UnaryOp::Neg;
    BinaryOp bop_ = BinaryOp::Add;
    int exponent_ = 0;
    std::shared_ptr<const ExprAst> a_;
    std::shared_ptr<const ExprAst> b_;
};

/// Parse one scalar expression over variables x (== x1) .. x<dim>.
/// Grammar (documented in the README): infix + - * /, ^ with a nonnegative
/// integer literal exponent binding tighter than unary minus, functions
/// sin cos abs sqrt asin compose, constant pi.
ExprAst parse(std::string_view text, int dim);

/// Canonical text form; parse(pretty(ast), dim) reproduces ast exactly.
std::string pretty(const ExprAst& ast, int dim);

double eval_point(const ExprAst& ast, std::span<const double> x);
Interval eval_interval(const ExprAst& ast, const IntervalBox& box);

/// Coordinatewise self-map of R^dim: one scalar component per coordinate.
struct MapExpr {
    int dim = 1;
    std::vector<ExprAst> components;

    static MapExpr parse_map(const std::vector<std::string>& component_texts, int dim);
    static MapExpr single(ExprAst component);

    bool is_syntactic_identity() const;
    std::vector<std::string> pretty_components() const;
};

Point eval_point(const MapExpr& map, const Point& x);
IntervalBox eval_interval(const MapExpr& map, const IntervalBox& box);

} // namespace semirec
