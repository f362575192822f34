#include "gikop/kerndsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gikop/errors.hpp"

namespace gikop::kerndsl {

double bump_shape(double s) {
    if (!(std::fabs(s) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

std::set<std::string> variable_names(std::span<const std::string> bases, int dim, bool with_eps) {
    std::set<std::string> out;
    for (const std::string& b : bases) {
        if (dim <= 1) {
            out.insert(b);
        } else {
            for (int i = 1; i <= dim; ++i) out.insert(b + std::to_string(i));
        }
    }
    if (with_eps) {
        out.insert("eps");
        out.insert("logeps");
    }
    return out;
}

namespace {

bool is_function_name(std::string_view s) {
    return s == "sin" || s == "cos" || s == "exp" || s == "log" || s == "sqrt" || s == "abs" ||
           s == "bump";
}

constexpr int kMaxDepth = 256;

class Parser {
public:
    Parser(std::string_view src, const std::set<std::string>& vars) : src_(src), vars_(vars) {}

    ExprPtr run() {
        ExprPtr e = parse_expr(0);
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view src_;
    const std::set<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr parse_expr(int depth) {
        if (depth > kMaxDepth) fail("expression too deeply nested");
        ExprPtr lhs = parse_term(depth + 1);
        for (;;) {
            skip_ws();
            if (pos_ >= src_.size()) break;
            const char c = src_[pos_];
            if (c != '+' && c != '-') break;
            ++pos_;
            ExprPtr rhs = parse_term(depth + 1);
            lhs = binary(c, lhs, rhs);
        }
        return lhs;
    }

    ExprPtr parse_term(int depth) {
        if (depth > kMaxDepth) fail("expression too deeply nested");
        ExprPtr lhs = parse_unary(depth + 1);
        for (;;) {
            skip_ws();
            if (pos_ >= src_.size()) break;
            const char c = src_[pos_];
            if (c != '*' && c != '/') break;
            ++pos_;
            ExprPtr rhs = parse_unary(depth + 1);
            lhs = binary(c, lhs, rhs);
        }
        return lhs;
    }

    ExprPtr parse_unary(int depth) {
        if (depth > kMaxDepth) fail("expression too deeply nested");
        if (eat('-')) {
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Kind::Unary;
            node->op = '-';
            node->args.push_back(parse_unary(depth + 1));
            return node;
        }
        return parse_power(depth + 1);
    }

    ExprPtr parse_power(int depth) {
        if (depth > kMaxDepth) fail("expression too deeply nested");
        ExprPtr base = parse_atom(depth + 1);
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            ++pos_;
            // right-associative; the exponent may start with unary minus
            ExprPtr exponent = parse_unary(depth + 1);
            return binary('^', base, exponent);
        }
        return base;
    }

    ExprPtr parse_atom(int depth) {
        if (depth > kMaxDepth) fail("expression too deeply nested");
        skip_ws();
        if (pos_ >= src_.size()) fail("expected a number, name or '('");
        const char c = src_[pos_];

        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_expr(depth + 1);
            if (!eat(')')) fail("expected ')'");
            return inner;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(src_.substr(start, pos_ - start));
            if (is_function_name(name)) {
                if (!eat('(')) fail("expected '(' after function name '" + name + "'");
                ExprPtr arg = parse_expr(depth + 1);
                if (!eat(')')) fail("expected ')'");
                auto node = std::make_shared<Expr>();
                node->kind = Expr::Kind::Call;
                node->name = name;
                node->args.push_back(arg);
                return node;
            }
            if (!vars_.count(name)) throw UnknownVariableError(name, start);
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Kind::Variable;
            node->name = name;
            return node;
        }

        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) fail("malformed number");
        // reject inf/nan spellings that from_chars accepts
        if (!std::isfinite(value)) fail("number literal out of range");
        pos_ += static_cast<std::size_t>(ptr - begin);
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Number;
        node->number = value;
        return node;
    }

    static ExprPtr binary(char op, ExprPtr lhs, ExprPtr rhs) {
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Binary;
        node->op = op;
        node->args.push_back(std::move(lhs));
        node->args.push_back(std::move(rhs));
        return node;
    }
};

double apply_call(const std::string& name, double x) {
    if (name == "sin") return std::sin(x);
    if (name == "cos") return std::cos(x);
    if (name == "exp") return std::exp(x);
    if (name == "log") {
        if (!(x > 0.0)) throw EvalDomainError("log", x);
        return std::log(x);
    }
    if (name == "sqrt") {
        if (x < 0.0) throw EvalDomainError("sqrt", x);
        return std::sqrt(x);
    }
    if (name == "abs") return std::fabs(x);
    if (name == "bump") return bump_shape(x);
    throw UsageError("unknown function '" + name + "'");
}

double apply_binary(char op, double a, double b) {
    switch (op) {
        case '+':
            return a + b;
        case '-':
            return a - b;
        case '*':
            return a * b;
        case '/':
            if (b == 0.0) throw EvalDomainError("/", b);
            return a / b;
        case '^': {
            if (a == 0.0 && b < 0.0) throw EvalDomainError("^", b);
            const double r = std::pow(a, b);
            if (std::isnan(r)) throw EvalDomainError("^", a);
            return r;
        }
        default:
            throw UsageError(std::string("unknown operator '") + op + "'");
    }
}

}  // namespace

ExprPtr parse(std::string_view source, const std::set<std::string>& allowed_vars) {
    return Parser(source, allowed_vars).run();
}

double eval(const Expr& e, const Env& env) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return e.number;
        case Expr::Kind::Variable: {
            const auto it = env.find(e.name);
            if (it == env.end()) throw UnboundVariableError(e.name);
            return it->second;
        }
        case Expr::Kind::Unary:
            return -eval(*e.args[0], env);
        case Expr::Kind::Binary:
            return apply_binary(e.op, eval(*e.args[0], env), eval(*e.args[1], env));
        case Expr::Kind::Call:
            return apply_call(e.name, eval(*e.args[0], env));
    }
    throw UsageError("malformed expression node");
}

namespace {

void print_rec(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Number: {
            if (e.number < 0.0 || (e.number == 0.0 && std::signbit(e.number))) {
                // negative literals only arise from hand-built ASTs; render
                // through unary minus so the round-trip stays parseable
                out += "(-";
                char buf[32];
                auto [p, ec] = std::to_chars(buf, buf + sizeof buf, -e.number);
                out.append(buf, p);
                out += ')';
                return;
            }
            char buf[32];
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, e.number);
            out.append(buf, p);
            return;
        }
        case Expr::Kind::Variable:
            out += e.name;
            return;
        case Expr::Kind::Unary:
            out += "(-";
            print_rec(*e.args[0], out);
            out += ')';
            return;
        case Expr::Kind::Binary:
            out += '(';
            print_rec(*e.args[0], out);
            out += e.op;
            print_rec(*e.args[1], out);
            out += ')';
            return;
        case Expr::Kind::Call:
            out += e.name;
            out += '(';
            print_rec(*e.args[0], out);
            out += ')';
            return;
    }
}

}  // namespace

std::string print(const Expr& e) {
    std::string out;
    print_rec(e, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Number:
            return a.number == b.number;
        case Expr::Kind::Variable:
            return a.name == b.name;
        case Expr::Kind::Unary:
            return structurally_equal(*a.args[0], *b.args[0]);
        case Expr::Kind::Binary:
            return a.op == b.op && structurally_equal(*a.args[0], *b.args[0]) &&
                   structurally_equal(*a.args[1], *b.args[1]);
        case Expr::Kind::Call:
            return a.name == b.name && structurally_equal(*a.args[0], *b.args[0]);
    }
    return false;
}

CompiledExpr::CompiledExpr(ExprPtr expr, std::span<const std::string> slot_names)
    : expr_(std::move(expr)), slot_names_(slot_names.begin(), slot_names.end()) {
    if (expr_) resolve(*expr_);
}

void CompiledExpr::resolve(const Expr& e) {
    if (e.kind == Expr::Kind::Variable) {
        for (std::size_t i = 0; i < slot_names_.size(); ++i) {
            if (slot_names_[i] == e.name) {
                slot_of_[&e] = i;
                return;
            }
        }
        throw UnboundVariableError(e.name);
    }
    for (const auto& a : e.args) resolve(*a);
}

double CompiledExpr::eval_node(const Expr& e, std::span<const double> slots) const {
    switch (e.kind) {
        case Expr::Kind::Number:
            return e.number;
        case Expr::Kind::Variable:
            return slots[slot_of_.at(&e)];
        case Expr::Kind::Unary:
            return -eval_node(*e.args[0], slots);
        case Expr::Kind::Binary:
            return apply_binary(e.op, eval_node(*e.args[0], slots), eval_node(*e.args[1], slots));
        case Expr::Kind::Call:
            return apply_call(e.name, eval_node(*e.args[0], slots));
    }
    throw UsageError("malformed expression node");
}

double CompiledExpr::operator()(std::span<const double> slots) const {
    return eval_node(*expr_, slots);
}

}  // namespace gikop::kerndsl
