#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lwrt/jet.hpp"

namespace lwrt {

// Closed-form expression over named variables: numbers, + - * / ^,
// sin cos exp log sqrt, parentheses, and implicit multiplication
// ("2xi eta").  An optional "family:" prefix is ignored.  The Greek
// letters ξ and η are accepted as aliases of xi and eta.
class Expression {
public:
    struct Node;

    Expression() = default;
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);
    static Expression constant(double value, const std::vector<std::string>& variables);

    double evaluate(std::span<const double> vars) const;
    Jet evaluate(std::span<const Jet> vars) const;

    bool depends_on(int variable) const;
    bool is_constant() const;
    const std::string& text() const { return text_; }
    const std::vector<std::string>& variables() const { return variables_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::vector<std::string> variables_;
};

}  // namespace lwrt
