#include "summatau/function_expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "summatau/io.hpp"
#include "summatau/sequence.hpp"

namespace summatau {

namespace {
enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Sqrt };
constexpr int kMaxExponent = 12;
} // namespace

struct FunctionSpec::Node {
    Op op = Op::Num;
    double num = 0.0;
    int exponent = 0;
    NodePtr lhs;
    NodePtr rhs;
};

namespace {

using Node = FunctionSpec::Node;
using NodePtr = FunctionSpec::NodePtr;

NodePtr num(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Num;
    n->num = v;
    return n;
}

NodePtr var() {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    return n;
}

NodePtr unary(Op op, NodePtr child) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(child);
    return n;
}

NodePtr binary(Op op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

NodePtr pow_node(NodePtr base, int e) {
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->lhs = std::move(base);
    n->exponent = e;
    return n;
}

double powi(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

[[noreturn]] void domain_error(const std::string& what) { throw EvalError(what, 0); }

double eval_node(const Node& n, double t) {
    switch (n.op) {
    case Op::Num: return n.num;
    case Op::Var: return t;
    case Op::Neg: return -eval_node(*n.lhs, t);
    case Op::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Op::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Op::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Op::Div: {
        const double d = eval_node(*n.rhs, t);
        if (d == 0.0) domain_error("division by zero");
        return eval_node(*n.lhs, t) / d;
    }
    case Op::Pow: return powi(eval_node(*n.lhs, t), n.exponent);
    case Op::Sin: return std::sin(eval_node(*n.lhs, t));
    case Op::Cos: return std::cos(eval_node(*n.lhs, t));
    case Op::Exp: return std::exp(eval_node(*n.lhs, t));
    case Op::Abs: return std::abs(eval_node(*n.lhs, t));
    case Op::Sqrt: {
        const double v = eval_node(*n.lhs, t);
        if (v < 0.0) domain_error("sqrt of a negative value");
        return std::sqrt(v);
    }
    }
    domain_error("corrupt expression node");
}

// precedence for rendering with minimal parentheses
int prec(Op op) {
    switch (op) {
    case Op::Add: case Op::Sub: return 1;
    case Op::Mul: case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

void render_node(const Node& n, std::string& out, int parent_prec) {
    const int p = prec(n.op);
    const bool parens = p < parent_prec;
    if (parens) out += '(';
    switch (n.op) {
    case Op::Num:
        if (n.num < 0) {
            out += '(';
            out += format_double(n.num);
            out += ')';
        } else {
            out += format_double(n.num);
        }
        break;
    case Op::Var: out += 't'; break;
    case Op::Neg:
        out += '-';
        render_node(*n.lhs, out, p + 1);
        break;
    case Op::Add:
        render_node(*n.lhs, out, p);
        out += '+';
        render_node(*n.rhs, out, p + 1);
        break;
    case Op::Sub:
        render_node(*n.lhs, out, p);
        out += '-';
        render_node(*n.rhs, out, p + 1);
        break;
    case Op::Mul:
        render_node(*n.lhs, out, p);
        out += '*';
        render_node(*n.rhs, out, p + 1);
        break;
    case Op::Div:
        render_node(*n.lhs, out, p);
        out += '/';
        render_node(*n.rhs, out, p + 1);
        break;
    case Op::Pow:
        render_node(*n.lhs, out, p + 1);
        out += '^';
        out += std::to_string(n.exponent);
        break;
    case Op::Sin: out += "sin("; render_node(*n.lhs, out, 0); out += ')'; break;
    case Op::Cos: out += "cos("; render_node(*n.lhs, out, 0); out += ')'; break;
    case Op::Exp: out += "exp("; render_node(*n.lhs, out, 0); out += ')'; break;
    case Op::Abs: out += "abs("; render_node(*n.lhs, out, 0); out += ')'; break;
    case Op::Sqrt: out += "sqrt("; render_node(*n.lhs, out, 0); out += ')'; break;
    }
    if (parens) out += ')';
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
    case Op::Num: return a.num == b.num;
    case Op::Var: return true;
    case Op::Pow: return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div:
        return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    default: return nodes_equal(*a.lhs, *b.lhs);
    }
}

NodePtr substitute_node(const Node& n, const NodePtr& replacement) {
    switch (n.op) {
    case Op::Num: return num(n.num);
    case Op::Var: return replacement;
    case Op::Pow: return pow_node(substitute_node(*n.lhs, replacement), n.exponent);
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div:
        return binary(n.op, substitute_node(*n.lhs, replacement),
                      substitute_node(*n.rhs, replacement));
    default:
        return unary(n.op, substitute_node(*n.lhs, replacement));
    }
}

// ---- growth propagation -------------------------------------------------

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool ok = false;
    static Interval make(double lo, double hi) { return {lo, hi, true}; }
    static Interval fail() { return {}; }
};

Interval interval_node(const Node& n, const Interval& in) {
    auto fin = [](Interval v) {
        if (v.ok && (!std::isfinite(v.lo) || !std::isfinite(v.hi))) return Interval::fail();
        return v;
    };
    switch (n.op) {
    case Op::Num: return Interval::make(n.num, n.num);
    case Op::Var: return in;
    case Op::Neg: {
        Interval a = interval_node(*n.lhs, in);
        if (!a.ok) return a;
        return Interval::make(-a.hi, -a.lo);
    }
    case Op::Add: {
        Interval a = interval_node(*n.lhs, in), b = interval_node(*n.rhs, in);
        if (!a.ok || !b.ok) return Interval::fail();
        return fin(Interval::make(a.lo + b.lo, a.hi + b.hi));
    }
    case Op::Sub: {
        Interval a = interval_node(*n.lhs, in), b = interval_node(*n.rhs, in);
        if (!a.ok || !b.ok) return Interval::fail();
        return fin(Interval::make(a.lo - b.hi, a.hi - b.lo));
    }
    case Op::Mul: {
        Interval a = interval_node(*n.lhs, in), b = interval_node(*n.rhs, in);
        if (!a.ok || !b.ok) return Interval::fail();
        const double c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return fin(Interval::make(std::min({c[0], c[1], c[2], c[3]}),
                                  std::max({c[0], c[1], c[2], c[3]})));
    }
    case Op::Div: {
        Interval a = interval_node(*n.lhs, in), b = interval_node(*n.rhs, in);
        if (!a.ok || !b.ok) return Interval::fail();
        if (b.lo <= 0.0 && b.hi >= 0.0) return Interval::fail();
        const double c[] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
        return fin(Interval::make(std::min({c[0], c[1], c[2], c[3]}),
                                  std::max({c[0], c[1], c[2], c[3]})));
    }
    case Op::Pow: {
        Interval a = interval_node(*n.lhs, in);
        if (!a.ok) return a;
        if (n.exponent == 0) return Interval::make(1.0, 1.0);
        const double plo = powi(a.lo, n.exponent), phi = powi(a.hi, n.exponent);
        double lo = std::min(plo, phi), hi = std::max(plo, phi);
        if (n.exponent % 2 == 0 && a.lo <= 0.0 && a.hi >= 0.0) lo = 0.0;
        return fin(Interval::make(lo, hi));
    }
    case Op::Sin: case Op::Cos: {
        Interval a = interval_node(*n.lhs, in);
        if (!a.ok) return a;
        return Interval::make(-1.0, 1.0);
    }
    case Op::Exp: {
        Interval a = interval_node(*n.lhs, in);
        if (!a.ok) return a;
        return fin(Interval::make(std::exp(a.lo), std::exp(a.hi)));
    }
    case Op::Abs: {
        Interval a = interval_node(*n.lhs, in);
        if (!a.ok) return a;
        double lo = (a.lo <= 0.0 && a.hi >= 0.0) ? 0.0 : std::min(std::abs(a.lo), std::abs(a.hi));
        return Interval::make(lo, std::max(std::abs(a.lo), std::abs(a.hi)));
    }
    case Op::Sqrt: {
        Interval a = interval_node(*n.lhs, in);
        if (!a.ok || a.lo < 0.0) return Interval::fail();
        return Interval::make(std::sqrt(a.lo), std::sqrt(a.hi));
    }
    }
    return Interval::fail();
}

// |subexpr| <= coeff * max(k,1)^degree, or not representable.
struct PolyEnv {
    double coeff = 0.0;
    int degree = 0;
    bool ok = false;
    static PolyEnv make(double c, int d) { return {c, d, true}; }
    static PolyEnv fail() { return {}; }
};

PolyEnv poly_node(const Node& n, const PolyEnv& in) {
    auto fin = [](PolyEnv v) {
        if (v.ok && (!std::isfinite(v.coeff) || v.degree > 64)) return PolyEnv::fail();
        return v;
    };
    switch (n.op) {
    case Op::Num: return PolyEnv::make(std::abs(n.num), 0);
    case Op::Var: return in;
    case Op::Neg: case Op::Abs: return poly_node(*n.lhs, in);
    case Op::Add: case Op::Sub: {
        PolyEnv a = poly_node(*n.lhs, in), b = poly_node(*n.rhs, in);
        if (!a.ok || !b.ok) return PolyEnv::fail();
        return fin(PolyEnv::make(a.coeff + b.coeff, std::max(a.degree, b.degree)));
    }
    case Op::Mul: {
        PolyEnv a = poly_node(*n.lhs, in), b = poly_node(*n.rhs, in);
        if (!a.ok || !b.ok) return PolyEnv::fail();
        return fin(PolyEnv::make(a.coeff * b.coeff, a.degree + b.degree));
    }
    case Op::Div: {
        // Only a constant, nonzero denominator keeps a polynomial envelope.
        if (n.rhs->op == Op::Num && n.rhs->num != 0.0) {
            PolyEnv a = poly_node(*n.lhs, in);
            if (!a.ok) return a;
            return fin(PolyEnv::make(a.coeff / std::abs(n.rhs->num), a.degree));
        }
        return PolyEnv::fail();
    }
    case Op::Pow: {
        PolyEnv a = poly_node(*n.lhs, in);
        if (!a.ok) return a;
        if (n.exponent == 0) return PolyEnv::make(1.0, 0);
        return fin(PolyEnv::make(powi(a.coeff, n.exponent), a.degree * n.exponent));
    }
    case Op::Sin: case Op::Cos: {
        PolyEnv a = poly_node(*n.lhs, in);
        if (!a.ok) return a;
        return PolyEnv::make(1.0, 0);
    }
    case Op::Sqrt: {
        PolyEnv a = poly_node(*n.lhs, in);
        if (!a.ok) return a;
        return fin(PolyEnv::make(std::sqrt(a.coeff), (a.degree + 1) / 2));
    }
    case Op::Exp: return PolyEnv::fail();
    }
    return PolyEnv::fail();
}

// ---- parser --------------------------------------------------------------

class FnScanner {
public:
    explicit FnScanner(const std::string& text) : s_(text) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eof() { skip_ws(); return pos_ >= s_.size(); }
    char peek() { skip_ws(); return pos_ < s_.size() ? s_[pos_] : '\0'; }
    std::size_t pos() { skip_ws(); return pos_; }
    void advance() { ++pos_; }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        auto head = [](unsigned char c) { return std::islower(c) || c == '_'; };
        auto tail = [](unsigned char c) { return std::islower(c) || std::isdigit(c) || c == '_'; };
        if (pos_ < s_.size() && head(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
            while (pos_ < s_.size() && tail(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start) throw ParseError("expected identifier", start);
        return s_.substr(start, pos_ - start);
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        const char* begin = s_.data() + start;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected number", start);
        if (!std::isfinite(v)) throw ParseError("number out of range", start);
        pos_ = start + static_cast<std::size_t>(end - begin);
        return v;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

class FnParser {
public:
    explicit FnParser(const std::string& text) : sc_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        if (!sc_.eof()) throw ParseError("unexpected trailing input", sc_.pos());
        return e;
    }

private:
    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            const char c = sc_.peek();
            if (c == '+' || c == '-') {
                sc_.advance();
                lhs = binary(c == '+' ? Op::Add : Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary_expr();
        while (true) {
            const char c = sc_.peek();
            if (c == '*' || c == '/') {
                sc_.advance();
                lhs = binary(c == '*' ? Op::Mul : Op::Div, lhs, unary_expr());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary_expr() {
        if (sc_.peek() == '-') {
            sc_.advance();
            NodePtr child = unary_expr();
            // Fold -literal so negative affine parameters round-trip.
            if (child->op == Op::Num) return num(-child->num);
            return unary(Op::Neg, child);
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (sc_.peek() == '^') {
            sc_.advance();
            return pow_node(base, exponent_chain());
        }
        return base;
    }

    // Right-associative exponent chain of integer literals, folded at parse
    // time; each literal and each folded result must land in [0, 12].
    int exponent_chain() {
        const std::size_t at = sc_.pos();
        const char c = sc_.peek();
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("expected integer exponent", at);
        const double v = sc_.number();
        if (v != std::floor(v) || v < 0 || v > kMaxExponent)
            throw ParseError("exponent must be an integer in [0,12]", at);
        int e = static_cast<int>(v);
        if (sc_.peek() == '^') {
            sc_.advance();
            const int rhs = exponent_chain();
            double folded = powi(static_cast<double>(e), rhs);
            if (folded > kMaxExponent)
                throw ParseError("exponent must be an integer in [0,12]", at);
            e = static_cast<int>(folded);
        }
        return e;
    }

    NodePtr primary() {
        const char c = sc_.peek();
        const std::size_t at = sc_.pos();
        if (c == '(') {
            sc_.expect('(');
            NodePtr e = expr();
            sc_.expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return num(sc_.number());
        if (std::islower(static_cast<unsigned char>(c)) || c == '_') {
            const std::string name = sc_.ident();
            if (name == "t") return var();
            if (name == "identity") return var();
            if (name == "square") return pow_node(var(), 2);
            if (name == "cube") return pow_node(var(), 3);
            if (name == "witch")
                return binary(Op::Div, num(1.0), binary(Op::Add, num(1.0), pow_node(var(), 2)));
            if (name == "affine") return affine_call();
            if (name == "sin" || name == "cos" || name == "exp" || name == "abs" || name == "sqrt") {
                sc_.expect('(');
                NodePtr arg = expr();
                sc_.expect(')');
                Op op = name == "sin"   ? Op::Sin
                        : name == "cos" ? Op::Cos
                        : name == "exp" ? Op::Exp
                        : name == "abs" ? Op::Abs
                                        : Op::Sqrt;
                return unary(op, arg);
            }
            throw ParseError("unknown identifier '" + name + "'", at);
        }
        throw ParseError("expected expression", at);
    }

    NodePtr affine_call() {
        sc_.expect('(');
        double a = 0.0, b = 0.0;
        bool have_a = false, have_b = false;
        while (true) {
            const std::size_t at = sc_.pos();
            const std::string name = sc_.ident();
            sc_.expect('=');
            const double v = sc_.number();
            if (name == "a" && !have_a) { a = v; have_a = true; }
            else if (name == "b" && !have_b) { b = v; have_b = true; }
            else throw ParseError("affine takes a= and b= once each", at);
            if (sc_.peek() == ',') { sc_.advance(); continue; }
            break;
        }
        sc_.expect(')');
        if (!have_a || !have_b) throw ParseError("affine requires both a= and b=", sc_.pos());
        return binary(Op::Add, binary(Op::Mul, num(a), var()), num(b));
    }

    FnScanner sc_;
};

} // namespace

double FunctionSpec::eval(double t) const {
    if (!root_) throw std::logic_error("empty FunctionSpec");
    const double v = eval_node(*root_, t);
    if (!std::isfinite(v)) domain_error("function value is non-finite");
    return v;
}

std::string FunctionSpec::render() const {
    if (!root_) return "";
    std::string out;
    render_node(*root_, out, 0);
    return out;
}

bool FunctionSpec::equals(const FunctionSpec& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return nodes_equal(*root_, *other.root_);
}

FunctionSpec FunctionSpec::substitute(const FunctionSpec& g) const {
    if (!root_ || !g.root_) throw std::logic_error("empty FunctionSpec");
    return FunctionSpec(substitute_node(*root_, g.root_));
}

GrowthClass FunctionSpec::propagate_growth(const GrowthClass& in) const {
    if (!root_) return GrowthClass::unknown();
    constexpr double kInflate = 1.0 + 1e-12;
    if (in.kind == GrowthKind::Bounded) {
        Interval iv = interval_node(*root_, Interval::make(-in.coeff, in.coeff));
        if (iv.ok)
            return GrowthClass::bounded(std::max(std::abs(iv.lo), std::abs(iv.hi)) * kInflate);
        return GrowthClass::unknown();
    }
    if (in.kind == GrowthKind::Polynomial) {
        PolyEnv env = poly_node(*root_, PolyEnv::make(in.coeff, in.degree));
        if (env.ok) return GrowthClass::polynomial(env.coeff * kInflate, env.degree);
        return GrowthClass::unknown();
    }
    return GrowthClass::unknown();
}

FunctionSpec parse_function(const std::string& text) {
    FnParser parser(text);
    return FunctionSpec(parser.parse());
}

} // namespace summatau
