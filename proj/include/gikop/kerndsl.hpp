#ifndef GIKOP_KERNDSL_HPP
#define GIKOP_KERNDSL_HPP

// Small expression language for kernels, functions and eps-nets.
//
// Grammar (EBNF):
//   expr    = term   { ("+" | "-") term } ;
//   term    = unary  { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = atom   [ "^" unary ] ;          (right-associative)
//   atom    = number | name | name "(" expr ")" | "(" expr ")" ;
//
// "^" binds tightest, then unary minus, then "*"/"/", then "+"/"-", so
// -2^2 = -(2^2) = -4 and 2^3^2 = 2^(3^2) = 512.
// Functions: sin cos exp log sqrt abs bump, all unary; bump(s) is the
// unnormalized mollifier shape exp(-1/(1-s^2)) for |s|<1 and 0 otherwise.

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gikop::kerndsl {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Variable, Unary, Binary, Call };
    Kind kind;
    double number = 0.0;
    std::string name;  // variable or function name
    char op = 0;       // '+','-','*','/','^'; unary is always '-'
    std::vector<ExprPtr> args;
};

// Variable-name set for a given dimension: base "x" expands to x1..xd when
// dim > 1.  "eps" and "logeps" are appended when with_eps is true.
std::set<std::string> variable_names(std::span<const std::string> bases, int dim,
                                     bool with_eps = true);

// Throws SyntaxError (with byte offset) or UnknownVariableError.
ExprPtr parse(std::string_view source, const std::set<std::string>& allowed_vars);

using Env = std::map<std::string, double, std::less<>>;

// IEEE double evaluation; throws EvalDomainError for the partial functions
// (division by zero, log of non-positive, sqrt of negative, 0^negative,
// non-real powers) and UnboundVariableError for missing bindings.
double eval(const Expr& e, const Env& env);

// Fully parenthesized rendering; parse(print(e)) reproduces e.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Expression compiled against a fixed variable layout; evaluation reads
// values from a slot array instead of a name map (hot paths).
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(ExprPtr expr, std::span<const std::string> slot_names);

    double operator()(std::span<const double> slots) const;
    const ExprPtr& ast() const { return expr_; }

private:
    ExprPtr expr_;
    std::vector<std::string> slot_names_;
    // per-Variable-node slot resolution happens once at construction
    std::map<const Expr*, std::size_t> slot_of_;
    void resolve(const Expr& e);
    double eval_node(const Expr& e, std::span<const double> slots) const;
};

// The unnormalized bump shape used by the DSL and the mollifier.
double bump_shape(double s);

}  // namespace gikop::kerndsl

#endif  // GIKOP_KERNDSL_HPP
