#include "lwrt/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lwrt {

struct Expression::Node {
    enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };
    Kind kind = Kind::Number;
    double number = 0.0;
    int variable = -1;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

std::string normalize(std::string s) {
    const auto colon = s.find(':');
    if (colon != std::string::npos) s = s.substr(colon + 1);
    auto replace_all = [&](const std::string& from, const std::string& to) {
        for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
            s.replace(p, from.size(), to);
    };
    replace_all("\xCE\xBE", " xi ");   // ξ
    replace_all("\xCE\xB7", " eta ");  // η
    return s;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool starts_primary() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == '_';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                lhs = make(Node::Kind::Add, lhs, term());
            } else if (peek('-')) {
                ++pos_;
                lhs = make(Node::Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (peek('*')) {
                ++pos_;
                lhs = make(Node::Kind::Mul, lhs, unary());
            } else if (peek('/')) {
                ++pos_;
                lhs = make(Node::Kind::Div, lhs, unary());
            } else if (starts_primary()) {
                lhs = make(Node::Kind::Mul, lhs, power());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (peek('-')) {
            ++pos_;
            return make(Node::Kind::Neg, unary());
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (peek('^')) {
            ++pos_;
            return make(Node::Kind::Pow, base, unary());
        }
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            auto n = std::make_shared<Node>();
            n->number = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            static const std::pair<const char*, Node::Kind> functions[] = {
                {"sin", Node::Kind::Sin}, {"cos", Node::Kind::Cos},   {"exp", Node::Kind::Exp},
                {"log", Node::Kind::Log}, {"sqrt", Node::Kind::Sqrt}};
            for (const auto& [fname, kind] : functions) {
                if (name == fname) {
                    if (!peek('(')) fail("function '" + name + "' needs '('");
                    ++pos_;
                    NodePtr arg = expr();
                    if (!peek(')')) fail("missing ')'");
                    ++pos_;
                    return make(kind, arg);
                }
            }
            if (name == "pi") {
                auto n = std::make_shared<Node>();
                n->number = 3.14159265358979323846;
                return n;
            }
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (name == vars_[i]) {
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::Variable;
                    n->variable = static_cast<int>(i);
                    return n;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

template <class T>
T eval_node(const Node& n, std::span<const T> vars, const T& zero) {
    using K = Node::Kind;
    using std::cos, std::exp, std::log, std::sin, std::sqrt, std::pow;
    switch (n.kind) {
        case K::Number: return zero + n.number;
        case K::Variable: return vars[n.variable];
        case K::Add: return eval_node(*n.lhs, vars, zero) + eval_node(*n.rhs, vars, zero);
        case K::Sub: return eval_node(*n.lhs, vars, zero) - eval_node(*n.rhs, vars, zero);
        case K::Mul: return eval_node(*n.lhs, vars, zero) * eval_node(*n.rhs, vars, zero);
        case K::Div: return eval_node(*n.lhs, vars, zero) / eval_node(*n.rhs, vars, zero);
        case K::Neg: return -eval_node(*n.lhs, vars, zero);
        case K::Sin: return sin(eval_node(*n.lhs, vars, zero));
        case K::Cos: return cos(eval_node(*n.lhs, vars, zero));
        case K::Exp: return exp(eval_node(*n.lhs, vars, zero));
        case K::Log: return log(eval_node(*n.lhs, vars, zero));
        case K::Sqrt: return sqrt(eval_node(*n.lhs, vars, zero));
        case K::Pow: {
            const T base = eval_node(*n.lhs, vars, zero);
            if (n.rhs->kind == K::Number) {
                const double e = n.rhs->number;
                if (e == std::floor(e) && std::abs(e) <= 64) return pow(base, static_cast<int>(e));
                return pow(base, e);
            }
            return exp(eval_node(*n.rhs, vars, zero) * log(base));
        }
    }
    return zero;
}

bool node_depends(const Node& n, int v) {
    if (n.kind == Node::Kind::Variable) return n.variable == v;
    return (n.lhs && node_depends(*n.lhs, v)) || (n.rhs && node_depends(*n.rhs, v));
}

bool node_has_variable(const Node& n) {
    if (n.kind == Node::Kind::Variable) return true;
    return (n.lhs && node_has_variable(*n.lhs)) || (n.rhs && node_has_variable(*n.rhs));
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
    Expression e;
    e.text_ = text;
    e.variables_ = variables;
    const std::string normalized = normalize(text);
    e.root_ = Parser(normalized, variables).parse();
    return e;
}

Expression Expression::constant(double value, const std::vector<std::string>& variables) {
    Expression e;
    auto n = std::make_shared<Node>();
    n->number = value;
    e.root_ = n;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    e.text_ = buf;
    e.variables_ = variables;
    return e;
}

double Expression::evaluate(std::span<const double> vars) const {
    if (!root_) return 0.0;
    return eval_node<double>(*root_, vars, 0.0);
}

Jet Expression::evaluate(std::span<const Jet> vars) const {
    const int order = vars.empty() ? 0 : vars[0].order();
    if (!root_) return Jet(order, 0.0);
    return eval_node<Jet>(*root_, vars, Jet(order, 0.0));
}

bool Expression::depends_on(int variable) const { return root_ && node_depends(*root_, variable); }

bool Expression::is_constant() const { return !root_ || !node_has_variable(*root_); }

}  // namespace lwrt
