#pragma once

#include <memory>
#include <optional>
#include <string>

#include "summatau/dsl.hpp"
#include "summatau/growth.hpp"

namespace summatau {

/// A real function of one variable t, parsed from the grammar
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := primary ['^' exponent]          (right-associative)
///   exponent := integer ['^' exponent]         (folded, result in [0,12])
///   primary := number | 't' | ident '(' expr ')' | catalog | '(' expr ')'
/// with functions sin, cos, exp, abs, sqrt and catalog names
///   identity -> t        square -> t^2        cube -> t^3
///   witch    -> 1/(1+t^2)
///   affine(a=..., b=...) -> a*t + b
/// Catalog names desugar at parse time; render() is always structural, so
/// parse(render(f)) reproduces the same AST.
class FunctionSpec {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    FunctionSpec() = default;
    explicit FunctionSpec(NodePtr root) : root_(std::move(root)) {}

    /// Evaluates at t. Domain violations (division by zero, sqrt of a
    /// negative, non-finite result) throw EvalError with index 0; callers
    /// mapping sequences re-throw with the term index.
    double eval(double t) const;

    std::string render() const;

    /// Structural equality.
    bool equals(const FunctionSpec& other) const;

    /// f.substitute(g) = f(g(t)): replaces every t in f with g's AST.
    FunctionSpec substitute(const FunctionSpec& g) const;

    /// Growth of (f(p_k)) given the growth of (p_k):
    ///   - Bounded input: interval arithmetic over [-M, M] (sin/cos clamp to
    ///     [-1,1]; division fails when the denominator interval straddles 0).
    ///   - Polynomial input: |subexpr| <= C*max(k,1)^d envelopes propagate
    ///     through +,-,*,^,abs,sqrt; sin/cos collapse to Bounded(1); exp and
    ///     general division give Unknown.
    /// Returned bounds are inflated by 1e-12 relative to absorb rounding.
    GrowthClass propagate_growth(const GrowthClass& in) const;

    bool valid() const { return root_ != nullptr; }
    const NodePtr& root() const { return root_; }

private:
    NodePtr root_;
};

/// Parses the grammar above; throws ParseError with a 0-based offset.
FunctionSpec parse_function(const std::string& text);

} // namespace summatau
