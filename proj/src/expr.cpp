#include "semirec/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace semirec {

namespace {

std::shared_ptr<const ExprAst> box_node(ExprAst e) {
    return std::make_shared<const ExprAst>(std::move(e));
}

} // namespace

ExprAst ExprAst::constant(double v) {
    if (std::isnan(v)) throw std::invalid_argument("NaN constant");
    ExprAst e;
    e.kind_ = Kind::Constant;
    e.value_ = v;
    return e;
}

ExprAst ExprAst::variable(int index) {
    if (index < 0 || index >= kMaxDim) throw std::invalid_argument("variable index out of range");
    ExprAst e;
    e.kind_ = Kind::Variable;
    e.var_index_ = index;
    return e;
}

ExprAst ExprAst::unary(UnaryOp op, ExprAst operand) {
    // Negated constants fold, so the printed form reparses to the same tree.
    if (op == UnaryOp::Neg && operand.kind() == Kind::Constant)
        return constant(-operand.value());
    ExprAst e;
    e.kind_ = Kind::Unary;
    e.uop_ = op;
    e.a_ = box_node(std::move(operand));
    return e;
}

ExprAst ExprAst::binary(BinaryOp op, ExprAst lhs, ExprAst rhs) {
    if (op == BinaryOp::Div && rhs.kind() == Kind::Constant && rhs.value() == 0.0)
        throw std::invalid_argument("division by the constant zero");
    ExprAst e;
    e.kind_ = Kind::Binary;
    e.bop_ = op;
    e.a_ = box_node(std::move(lhs));
    e.b_ = box_node(std::move(rhs));
    return e;
}

ExprAst ExprAst::pow(ExprAst base, int exponent) {
    if (exponent < 0) throw std::invalid_argument("exponent must be a nonnegative integer");
    ExprAst e;
    e.kind_ = Kind::Pow;
    e.exponent_ = exponent;
    e.a_ = box_node(std::move(base));
    return e;
}

ExprAst ExprAst::compose(ExprAst outer, ExprAst inner) {
    if (outer.max_var_index() > 0)
        throw std::invalid_argument("compose: outer expression must be univariate");
    ExprAst e;
    e.kind_ = Kind::Compose;
    e.a_ = box_node(std::move(outer));
    e.b_ = box_node(std::move(inner));
    return e;
}

int ExprAst::max_var_index() const {
    switch (kind_) {
    case Kind::Constant: return -1;
    case Kind::Variable: return var_index_;
    case Kind::Unary: return a_->max_var_index();
    case Kind::Pow: return a_->max_var_index();
    case Kind::Binary: return std::max(a_->max_var_index(), b_->max_var_index());
    case Kind::Compose: return b_->max_var_index();
    }
    return -1;
}

bool ExprAst::operator==(const ExprAst& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
    case Kind::Constant: return value_ == o.value_;
    case Kind::Variable: return var_index_ == o.var_index_;
    case Kind::Unary: return uop_ == o.uop_ && *a_ == *o.a_;
    case Kind::Binary: return bop_ == o.bop_ && *a_ == *o.a_ && *b_ == *o.b_;
    case Kind::Pow: return exponent_ == o.exponent_ && *a_ == *o.a_;
    case Kind::Compose: return *a_ == *o.a_ && *b_ == *o.b_;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a small token stream.
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Type type = Type::End;
    double number = 0.0;
    bool number_is_integer = false;
    long long integer = 0;
    std::string ident;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_ = Token{};
        current_.pos = pos_;
        if (pos_ >= text_.size()) {
            current_.type = Token::Type::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
        case '+': current_.type = Token::Type::Plus; ++pos_; return;
        case '-': current_.type = Token::Type::Minus; ++pos_; return;
        case '*': current_.type = Token::Type::Star; ++pos_; return;
        case '/': current_.type = Token::Type::Slash; ++pos_; return;
        case '^': current_.type = Token::Type::Caret; ++pos_; return;
        case '(': current_.type = Token::Type::LParen; ++pos_; return;
        case ')': current_.type = Token::Type::RParen; ++pos_; return;
        case ',': current_.type = Token::Type::Comma; ++pos_; return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            current_.type = Token::Type::Ident;
            current_.ident = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    void lex_number() {
        const std::size_t start = pos_;
        bool is_integer = true;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            is_integer = false;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            is_integer = false;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError("malformed exponent in number literal", pos_);
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        const std::string_view body = text_.substr(start, pos_ - start);
        if (body == ".") throw ParseError("malformed number", start);
        double value = 0.0;
        const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
        if (res.ec != std::errc{} || res.ptr != body.data() + body.size())
            throw ParseError("malformed number", start);
        current_.type = Token::Type::Number;
        current_.number = value;
        current_.number_is_integer = is_integer;
        if (is_integer) {
            long long iv = 0;
            const auto ires = std::from_chars(body.data(), body.data() + body.size(), iv);
            current_.number_is_integer = (ires.ec == std::errc{} && ires.ptr == body.data() + body.size());
            current_.integer = iv;
        }
        current_.pos = start;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(std::string_view text, int dim) : lex_(text), dim_(dim) {}

    ExprAst parse_full() {
        ExprAst e = parse_expr();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End) throw ParseError("unexpected trailing input", t.pos);
        return e;
    }

private:
    ExprAst parse_expr() {
        ExprAst lhs = parse_term();
        while (true) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::Plus) {
                lex_.take();
                lhs = ExprAst::binary(ExprAst::BinaryOp::Add, std::move(lhs), parse_term());
            } else if (t.type == Token::Type::Minus) {
                lex_.take();
                lhs = ExprAst::binary(ExprAst::BinaryOp::Sub, std::move(lhs), parse_term());
            } else {
                return lhs;
            }
        }
    }

    ExprAst parse_term() {
        ExprAst lhs = parse_unary();
        while (true) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::Star) {
                lex_.take();
                lhs = ExprAst::binary(ExprAst::BinaryOp::Mul, std::move(lhs), parse_unary());
            } else if (t.type == Token::Type::Slash) {
                const std::size_t pos = t.pos;
                lex_.take();
                ExprAst rhs = parse_unary();
                if (rhs.kind() == ExprAst::Kind::Constant && rhs.value() == 0.0)
                    throw ParseError("division by the constant zero", pos);
                lhs = ExprAst::binary(ExprAst::BinaryOp::Div, std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    // '^' binds tighter than unary minus: -x^2 is -(x^2).
    ExprAst parse_unary() {
        const Token& t = lex_.peek();
        if (t.type == Token::Type::Minus) {
            lex_.take();
            ExprAst inner = parse_unary();
            if (inner.kind() == ExprAst::Kind::Constant)
                return ExprAst::constant(-inner.value());
            return ExprAst::unary(ExprAst::UnaryOp::Neg, std::move(inner));
        }
        return parse_power();
    }

    ExprAst parse_power() {
        ExprAst base = parse_atom();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::Caret) return base;
        lex_.take();
        const Token& e = lex_.peek();
        if (e.type == Token::Type::Minus)
            throw ParseError("exponent must be a nonnegative integer", e.pos);
        if (e.type != Token::Type::Number)
            throw ParseError("expected an integer exponent after '^'", e.pos);
        if (!e.number_is_integer)
            throw ParseError("non-integer exponent", e.pos);
        const long long n = e.integer;
        if (n > 1000) throw ParseError("exponent too large (max 1000)", e.pos);
        lex_.take();
        return ExprAst::pow(std::move(base), static_cast<int>(n));
    }

    ExprAst parse_atom() {
        Token t = lex_.take();
        switch (t.type) {
        case Token::Type::Number:
            return ExprAst::constant(t.number);
        case Token::Type::LParen: {
            ExprAst e = parse_expr();
            expect_rparen();
            return e;
        }
        case Token::Type::Ident:
            return parse_ident(std::move(t));
        default:
            throw ParseError("expected a number, variable, function or '('", t.pos);
        }
    }

    ExprAst parse_ident(Token t) {
        const std::string& name = t.ident;
        if (name == "pi") return ExprAst::constant(std::numbers::pi);
        if (name == "x") return make_var(0, t.pos);
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            const int idx = std::stoi(name.substr(1));
            if (idx < 1) throw ParseError("variable indices start at x1", t.pos);
            return make_var(idx - 1, t.pos);
        }
        if (name == "compose") {
            expect_lparen();
            ExprAst outer = parse_expr();
            expect_comma();
            ExprAst inner = parse_expr();
            expect_rparen();
            if (outer.max_var_index() > 0)
                throw ParseError("compose: outer expression must be univariate", t.pos);
            return ExprAst::compose(std::move(outer), std::move(inner));
        }
        ExprAst::UnaryOp op;
        if (name == "sin") op = ExprAst::UnaryOp::Sin;
        else if (name == "cos") op = ExprAst::UnaryOp::Cos;
        else if (name == "abs") op = ExprAst::UnaryOp::Abs;
        else if (name == "sqrt") op = ExprAst::UnaryOp::Sqrt;
        else if (name == "asin") op = ExprAst::UnaryOp::Asin;
        else throw ParseError("unknown identifier '" + name + "'", t.pos);
        expect_lparen();
        ExprAst arg = parse_expr();
        expect_rparen();
        return ExprAst::unary(op, std::move(arg));
    }

    ExprAst make_var(int index, std::size_t pos) {
        if (index >= dim_)
            throw ParseError("variable index exceeds dimension " + std::to_string(dim_), pos);
        return ExprAst::variable(index);
    }

    void expect_lparen() {
        Token t = lex_.take();
        if (t.type != Token::Type::LParen) throw ParseError("expected '('", t.pos);
    }

    void expect_rparen() {
        Token t = lex_.take();
        if (t.type != Token::Type::RParen) throw ParseError("expected ')'", t.pos);
    }

    void expect_comma() {
        Token t = lex_.take();
        if (t.type != Token::Type::Comma) throw ParseError("expected ','", t.pos);
    }

    Lexer lex_;
    int dim_;
};

} // namespace

ExprAst parse(std::string_view text, int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
    return Parser(text, dim).parse_full();
}

// ---------------------------------------------------------------------------
// Pretty printer. Precedence levels: add 1, mul 2, neg 3, pow 4, atom 5.
// Negative constants print like negations so the round trip is exact.
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int print_level(const ExprAst& e) {
    switch (e.kind()) {
    case ExprAst::Kind::Constant: return std::signbit(e.value()) ? 3 : 5;
    case ExprAst::Kind::Variable: return 5;
    case ExprAst::Kind::Compose: return 5;
    case ExprAst::Kind::Unary: return e.unary_op() == ExprAst::UnaryOp::Neg ? 3 : 5;
    case ExprAst::Kind::Pow: return 4;
    case ExprAst::Kind::Binary:
        switch (e.binary_op()) {
        case ExprAst::BinaryOp::Add:
        case ExprAst::BinaryOp::Sub: return 1;
        case ExprAst::BinaryOp::Mul:
        case ExprAst::BinaryOp::Div: return 2;
        }
    }
    return 5;
}

void print_node(const ExprAst& e, int dim, std::string& out);

void print_wrapped(const ExprAst& e, int dim, int min_level, std::string& out) {
    if (print_level(e) < min_level) {
        out += '(';
        print_node(e, dim, out);
        out += ')';
    } else {
        print_node(e, dim, out);
    }
}

void print_node(const ExprAst& e, int dim, std::string& out) {
    switch (e.kind()) {
    case ExprAst::Kind::Constant:
        if (std::signbit(e.value())) {
            out += '-';
            out += format_double(-e.value());
        } else {
            out += format_double(e.value());
        }
        return;
    case ExprAst::Kind::Variable:
        if (dim == 1) out += 'x';
        else out += "x" + std::to_string(e.var_index() + 1);
        return;
    case ExprAst::Kind::Unary:
        switch (e.unary_op()) {
        case ExprAst::UnaryOp::Neg:
            out += '-';
            print_wrapped(e.lhs(), dim, 3, out);
            return;
        case ExprAst::UnaryOp::Sin: out += "sin("; break;
        case ExprAst::UnaryOp::Cos: out += "cos("; break;
        case ExprAst::UnaryOp::Abs: out += "abs("; break;
        case ExprAst::UnaryOp::Sqrt: out += "sqrt("; break;
        case ExprAst::UnaryOp::Asin: out += "asin("; break;
        }
        print_node(e.lhs(), dim, out);
        out += ')';
        return;
    case ExprAst::Kind::Binary: {
        const bool additive = e.binary_op() == ExprAst::BinaryOp::Add ||
                              e.binary_op() == ExprAst::BinaryOp::Sub;
        const int level = additive ? 1 : 2;
        print_wrapped(e.lhs(), dim, level, out);
        switch (e.binary_op()) {
        case ExprAst::BinaryOp::Add: out += " + "; break;
        case ExprAst::BinaryOp::Sub: out += " - "; break;
        case ExprAst::BinaryOp::Mul: out += "*"; break;
        case ExprAst::BinaryOp::Div: out += "/"; break;
        }
        print_wrapped(e.rhs(), dim, level + 1, out);
        return;
    }
    case ExprAst::Kind::Pow:
        print_wrapped(e.lhs(), dim, 5, out);
        out += '^';
        out += std::to_string(e.exponent());
        return;
    case ExprAst::Kind::Compose:
        out += "compose(";
        print_node(e.lhs(), dim, out);
        out += ", ";
        print_node(e.rhs(), dim, out);
        out += ')';
        return;
    }
}

} // namespace

std::string pretty(const ExprAst& ast, int dim) {
    std::string out;
    print_node(ast, dim, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

double eval_point(const ExprAst& ast, std::span<const double> x) {
    switch (ast.kind()) {
    case ExprAst::Kind::Constant:
        return ast.value();
    case ExprAst::Kind::Variable:
        if (static_cast<std::size_t>(ast.var_index()) >= x.size())
            throw DomainError("variable index exceeds point dimension");
        return x[static_cast<std::size_t>(ast.var_index())];
    case ExprAst::Kind::Unary: {
        const double v = eval_point(ast.lhs(), x);
        switch (ast.unary_op()) {
        case ExprAst::UnaryOp::Neg: return -v;
        case ExprAst::UnaryOp::Sin: return std::sin(v);
        case ExprAst::UnaryOp::Cos: return std::cos(v);
        case ExprAst::UnaryOp::Abs: return std::fabs(v);
        case ExprAst::UnaryOp::Sqrt:
            if (v < -kSqrtAsinSlack) throw DomainError("sqrt of a negative value");
            return std::sqrt(std::max(0.0, v));
        case ExprAst::UnaryOp::Asin:
            if (v < -1.0 - kSqrtAsinSlack || v > 1.0 + kSqrtAsinSlack)
                throw DomainError("asin outside [-1, 1]");
            return std::asin(std::clamp(v, -1.0, 1.0));
        }
        return 0.0;
    }
    case ExprAst::Kind::Binary: {
        const double a = eval_point(ast.lhs(), x);
        const double b = eval_point(ast.rhs(), x);
        double r = 0.0;
        switch (ast.binary_op()) {
        case ExprAst::BinaryOp::Add: r = a + b; break;
        case ExprAst::BinaryOp::Sub: r = a - b; break;
        case ExprAst::BinaryOp::Mul: r = a * b; break;
        case ExprAst::BinaryOp::Div:
            if (b == 0.0) throw DomainError("division by zero");
            r = a / b;
            break;
        }
        if (std::isnan(r)) throw DomainError("evaluation produced NaN");
        return r;
    }
    case ExprAst::Kind::Pow: {
        const double b = eval_point(ast.lhs(), x);
        // Plain left-to-right product; the interval power bounds exactly this
        // evaluation order.
        double r = 1.0;
        for (int i = 0; i < ast.exponent(); ++i) r *= b;
        if (std::isnan(r)) throw DomainError("evaluation produced NaN");
        return r;
    }
    case ExprAst::Kind::Compose: {
        const double inner = eval_point(ast.rhs(), x);
        const double arg[1] = {inner};
        return eval_point(ast.lhs(), arg);
    }
    }
    throw DomainError("unreachable expression kind");
}

Interval eval_interval(const ExprAst& ast, const IntervalBox& box) {
    switch (ast.kind()) {
    case ExprAst::Kind::Constant:
        return Interval::point(ast.value());
    case ExprAst::Kind::Variable:
        if (ast.var_index() >= box.dim())
            throw DomainError("variable index exceeds box dimension");
        return box[ast.var_index()];
    case ExprAst::Kind::Unary: {
        const Interval v = eval_interval(ast.lhs(), box);
        switch (ast.unary_op()) {
        case ExprAst::UnaryOp::Neg: return ineg(v);
        case ExprAst::UnaryOp::Sin: return isin(v);
        case ExprAst::UnaryOp::Cos: return icos(v);
        case ExprAst::UnaryOp::Abs: return iabs(v);
        case ExprAst::UnaryOp::Sqrt: return isqrt(v);
        case ExprAst::UnaryOp::Asin: return iasin(v);
        }
        return v;
    }
    case ExprAst::Kind::Binary: {
        const Interval a = eval_interval(ast.lhs(), box);
        const Interval b = eval_interval(ast.rhs(), box);
        switch (ast.binary_op()) {
        case ExprAst::BinaryOp::Add: return iadd(a, b);
        case ExprAst::BinaryOp::Sub: return isub(a, b);
        case ExprAst::BinaryOp::Mul: return imul(a, b);
        case ExprAst::BinaryOp::Div: return idiv(a, b);
        }
        return a;
    }
    case ExprAst::Kind::Pow:
        return ipow(eval_interval(ast.lhs(), box), ast.exponent());
    case ExprAst::Kind::Compose:
        return eval_interval(ast.lhs(), IntervalBox(eval_interval(ast.rhs(), box)));
    }
    throw DomainError("unreachable expression kind");
}

MapExpr MapExpr::parse_map(const std::vector<std::string>& component_texts, int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
    if (static_cast<int>(component_texts.size()) != dim)
        throw std::invalid_argument("need exactly one component per coordinate");
    MapExpr m;
    m.dim = dim;
    for (const auto& text : component_texts) m.components.push_back(parse(text, dim));
    return m;
}

MapExpr MapExpr::single(ExprAst component) {
    MapExpr m;
    m.dim = 1;
    m.components.push_back(std::move(component));
    return m;
}

bool MapExpr::is_syntactic_identity() const {
    for (int i = 0; i < dim; ++i) {
        const ExprAst& c = components[static_cast<std::size_t>(i)];
        if (!(c.kind() == ExprAst::Kind::Variable && c.var_index() == i)) return false;
    }
    return true;
}

std::vector<std::string> MapExpr::pretty_components() const {
    std::vector<std::string> out;
    for (const auto& c : components) out.push_back(pretty(c, dim));
    return out;
}

Point eval_point(const MapExpr& map, const Point& x) {
    if (x.dim() != map.dim) throw std::invalid_argument("point dimension mismatch");
    Point y = Point::zero(map.dim);
    for (int i = 0; i < map.dim; ++i)
        y[i] = eval_point(map.components[static_cast<std::size_t>(i)], x.coords());
    return y;
}

IntervalBox eval_interval(const MapExpr& map, const IntervalBox& box) {
    if (box.dim() != map.dim) throw std::invalid_argument("box dimension mismatch");
    IntervalBox out = IntervalBox::zero(map.dim);
    for (int i = 0; i < map.dim; ++i)
        out[i] = eval_interval(map.components[static_cast<std::size_t>(i)], box);
    return out;
}

} // namespace semirec
