#pragma once

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "visnf/jet.hpp"
#include "visnf/vector_field.hpp"

namespace visnf {

// A problem file as text: variable names, field components and the
// surface as polynomial expressions, and the study point.  Parsing keeps
// the raw strings so serialization round-trips; building jets is a
// separate step that also applies the translation to the study point.
struct ProblemSpec {
    std::vector<std::string> variables;
    std::vector<std::string> field;
    std::string surface;
    std::vector<std::string> point;  // canonical rational strings
    int order = 6;
    std::string mode = "exact";
};

namespace expr {

struct Node {
    enum class Kind { number, variable, add, sub, mul, neg, pow };
    Kind kind;
    Rational value{0};
    int var_index = -1;
    int exponent = 0;
    std::unique_ptr<Node> lhs;
    std::unique_ptr<Node> rhs;
};

struct Token {
    enum class Kind { number, ident, plus, minus, star, caret, lparen, rparen, end };
    Kind kind;
    std::string text;
    int line;
    int column;
};

// Supported grammar: sums/differences of products of powered atoms, with
// parentheses, unary minus, '^' with a nonnegative integer exponent, and
// integer or a/b rational literals.  No implicit multiplication and no
// standalone division operator.
class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& variables,
           const std::string& where)
        : text_(text), variables_(variables), where_(where) {
        tokenize();
    }

    std::unique_ptr<Node> parse() {
        auto root = parse_sum();
        if (peek().kind != Token::Kind::end)
            fail(peek(), "unexpected '" + peek().text + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& what) const {
        throw input_error("syntax error in " + where_ + " at line " + std::to_string(t.line) +
                          ", column " + std::to_string(t.column) + ": " + what);
    }

    void tokenize() {
        int line = 1;
        int col = 1;
        std::size_t i = 0;
        auto push = [&](Token::Kind k, std::string text, int l, int c) {
            tokens_.push_back(Token{k, std::move(text), l, c});
        };
        while (i < text_.size()) {
            const char ch = text_[i];
            if (ch == '\n') {
                ++line;
                col = 1;
                ++i;
                continue;
            }
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                ++col;
                ++i;
                continue;
            }
            const int tl = line;
            const int tc = col;
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::string lit;
                while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) {
                    lit += text_[i++];
                    ++col;
                }
                if (i < text_.size() && text_[i] == '/') {
                    lit += text_[i++];
                    ++col;
                    if (i >= text_.size() ||
                        !std::isdigit(static_cast<unsigned char>(text_[i])))
                        throw input_error("syntax error in " + where_ + " at line " +
                                          std::to_string(line) + ", column " +
                                          std::to_string(col) +
                                          ": expected digits after '/' in rational literal");
                    while (i < text_.size() &&
                           std::isdigit(static_cast<unsigned char>(text_[i]))) {
                        lit += text_[i++];
                        ++col;
                    }
                }
                push(Token::Kind::number, std::move(lit), tl, tc);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::string name;
                while (i < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) {
                    name += text_[i++];
                    ++col;
                }
                push(Token::Kind::ident, std::move(name), tl, tc);
                continue;
            }
            ++i;
            ++col;
            switch (ch) {
            case '+': push(Token::Kind::plus, "+", tl, tc); break;
            case '-': push(Token::Kind::minus, "-", tl, tc); break;
            case '*': push(Token::Kind::star, "*", tl, tc); break;
            case '^': push(Token::Kind::caret, "^", tl, tc); break;
            case '(': push(Token::Kind::lparen, "(", tl, tc); break;
            case ')': push(Token::Kind::rparen, ")", tl, tc); break;
            default:
                throw input_error("syntax error in " + where_ + " at line " +
                                  std::to_string(tl) + ", column " + std::to_string(tc) +
                                  ": unexpected character '" + std::string(1, ch) + "'");
            }
        }
        tokens_.push_back(Token{Token::Kind::end, "", line, col});
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool match(Token::Kind k) {
        if (peek().kind != k)
            return false;
        ++pos_;
        return true;
    }

    std::unique_ptr<Node> parse_sum() {
        auto lhs = parse_product();
        while (peek().kind == Token::Kind::plus || peek().kind == Token::Kind::minus) {
            const bool plus = advance().kind == Token::Kind::plus;
            auto node = std::make_unique<Node>();
            node->kind = plus ? Node::Kind::add : Node::Kind::sub;
            node->lhs = std::move(lhs);
            node->rhs = parse_product();
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_product() {
        auto lhs = parse_factor();
        while (match(Token::Kind::star)) {
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::mul;
            node->lhs = std::move(lhs);
            node->rhs = parse_factor();
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_factor() {
        if (match(Token::Kind::minus)) {
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::neg;
            node->lhs = parse_factor();
            return node;
        }
        if (match(Token::Kind::plus))
            return parse_factor();
        auto base = parse_atom();
        if (match(Token::Kind::caret)) {
            const Token& t = peek();
            if (t.kind != Token::Kind::number || t.text.find('/') != std::string::npos)
                fail(t, "exponent must be a nonnegative integer");
            advance();
            long e = 0;
            for (char c : t.text) {
                e = e * 10 + (c - '0');
                if (e > 64)
                    fail(t, "exponent larger than 64 is not supported");
            }
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::pow;
            node->exponent = static_cast<int>(e);
            node->lhs = std::move(base);
            return node;
        }
        return base;
    }

    std::unique_ptr<Node> parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Kind::number: {
            advance();
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::number;
            node->value = parse_rational(t.text);
            return node;
        }
        case Token::Kind::ident: {
            advance();
            for (std::size_t i = 0; i < variables_.size(); ++i)
                if (variables_[i] == t.text) {
                    auto node = std::make_unique<Node>();
                    node->kind = Node::Kind::variable;
                    node->var_index = static_cast<int>(i);
                    return node;
                }
            throw input_error("undeclared variable '" + t.text + "' in " + where_ + " at line " +
                              std::to_string(t.line) + ", column " + std::to_string(t.column));
        }
        case Token::Kind::lparen: {
            advance();
            auto node = parse_sum();
            if (!match(Token::Kind::rparen))
                fail(peek(), "expected ')'");
            return node;
        }
        default:
            fail(t, t.kind == Token::Kind::end ? "unexpected end of expression"
                                               : "unexpected '" + t.text + "'");
        }
    }

    std::string text_;
    const std::vector<std::string>& variables_;
    std::string where_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

inline int degree_bound(const Node& n) {
    switch (n.kind) {
    case Node::Kind::number: return 0;
    case Node::Kind::variable: return 1;
    case Node::Kind::add:
    case Node::Kind::sub: return std::max(degree_bound(*n.lhs), degree_bound(*n.rhs));
    case Node::Kind::mul: return degree_bound(*n.lhs) + degree_bound(*n.rhs);
    case Node::Kind::neg: return degree_bound(*n.lhs);
    case Node::Kind::pow: return n.exponent * degree_bound(*n.lhs);
    }
    return 0;
}

// Evaluates the expression as an exact polynomial jet, with variable i
// replaced by (x_i + shift_i) so the result is centered at the study
// point.  The working order must dominate the expression's degree.
template <class S>
Jet<S> evaluate(const Node& n, int nvars, int order, const std::vector<S>& shifts) {
    switch (n.kind) {
    case Node::Kind::number:
        return Jet<S>::constant(nvars, order, scalar_cast<S>(n.value));
    case Node::Kind::variable:
        return Jet<S>::variable(nvars, order, n.var_index) +
               Jet<S>::constant(nvars, order, shifts[n.var_index]);
    case Node::Kind::add:
        return evaluate(*n.lhs, nvars, order, shifts) + evaluate(*n.rhs, nvars, order, shifts);
    case Node::Kind::sub:
        return evaluate(*n.lhs, nvars, order, shifts) - evaluate(*n.rhs, nvars, order, shifts);
    case Node::Kind::mul:
        return evaluate(*n.lhs, nvars, order, shifts) * evaluate(*n.rhs, nvars, order, shifts);
    case Node::Kind::neg:
        return -evaluate(*n.lhs, nvars, order, shifts);
    case Node::Kind::pow: {
        const Jet<S> base = evaluate(*n.lhs, nvars, order, shifts);
        Jet<S> out = Jet<S>::constant(nvars, order, scalar_traits<S>::one());
        for (int i = 0; i < n.exponent; ++i)
            out = out * base;
        return out;
    }
    }
    throw internal_error("unhandled expression node");
}

}  // namespace expr

namespace detail {

inline bool valid_identifier(const std::string& s) {
    if (s.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

inline Rational point_entry(const nlohmann::ordered_json& v, int index) {
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<long>());
    throw input_error("point coordinate " + std::to_string(index) +
                      " must be an integer or a rational string like \"1/2\"");
}

}  // namespace detail

inline ProblemSpec parse_problem(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("problem file is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw input_error("problem file must be a JSON object");

    ProblemSpec spec;
    try {
        if (!j.contains("variables") || !j.at("variables").is_array())
            throw input_error("missing 'variables' array");
        for (const auto& v : j.at("variables"))
            spec.variables.push_back(v.get<std::string>());
        if (!j.contains("field") || !j.at("field").is_array())
            throw input_error("missing 'field' array");
        for (const auto& v : j.at("field"))
            spec.field.push_back(v.get<std::string>());
        if (!j.contains("surface"))
            throw input_error("missing 'surface' expression");
        spec.surface = j.at("surface").get<std::string>();
        if (!j.contains("point") || !j.at("point").is_array())
            throw input_error("missing 'point' array");
        int idx = 0;
        for (const auto& v : j.at("point"))
            spec.point.push_back(detail::point_entry(v, idx++).get_str());
        if (j.contains("order"))
            spec.order = j.at("order").get<int>();
        if (j.contains("mode"))
            spec.mode = j.at("mode").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("malformed problem file: ") + e.what());
    }

    const std::size_t m = spec.variables.size();
    if (m == 0)
        throw input_error("at least one variable is required");
    for (const auto& name : spec.variables) {
        if (!detail::valid_identifier(name))
            throw input_error("variable name '" + name + "' is not a valid identifier");
        if (std::count(spec.variables.begin(), spec.variables.end(), name) != 1)
            throw input_error("duplicate variable name '" + name + "'");
    }
    if (spec.field.size() != m)
        throw input_error("field must have exactly one component per variable");
    if (spec.point.size() != m)
        throw input_error("point must have exactly one coordinate per variable");
    if (spec.order < 1)
        throw input_error("truncation order must be positive");
    if (spec.mode != "exact" && spec.mode != "float")
        throw input_error("mode must be \"exact\" or \"float\"");
    return spec;
}

inline nlohmann::ordered_json serialize_problem(const ProblemSpec& spec) {
    nlohmann::ordered_json j;
    j["variables"] = spec.variables;
    j["field"] = spec.field;
    j["surface"] = spec.surface;
    j["point"] = spec.point;
    j["order"] = spec.order;
    j["mode"] = spec.mode;
    return j;
}

// Jets of a parsed problem, centered at the study point.
template <class S>
struct ProblemJets {
    VectorField<S> field;
    Jet<S> surface;
};

template <class S>
ProblemJets<S> build_problem(const ProblemSpec& spec) {
    const int m = static_cast<int>(spec.variables.size());
    const int n = spec.order;

    std::vector<S> shifts;
    shifts.reserve(m);
    for (const auto& p : spec.point)
        shifts.push_back(scalar_cast<S>(parse_rational(p)));

    auto to_jet = [&](const std::string& text, const std::string& where) {
        expr::Parser parser(text, spec.variables, where);
        const auto ast = parser.parse();
        const int bound = expr::degree_bound(*ast);
        if (bound > 256)
            throw input_error(where + ": polynomial degree bound " + std::to_string(bound) +
                              " is beyond the supported range");
        const Jet<S> full = expr::evaluate(*ast, m, std::max(n, bound), shifts);
        for (const auto& [e, c] : full.terms())
            if (total_degree(e) > n)
                throw input_error(where + ": polynomial degree " + std::to_string(total_degree(e)) +
                                  " exceeds the truncation order " + std::to_string(n));
        return full.truncated(n);
    };

    std::vector<Jet<S>> comps;
    comps.reserve(m);
    for (int i = 0; i < m; ++i)
        comps.push_back(to_jet(spec.field[i], "field[" + std::to_string(i) + "]"));
    Jet<S> h = to_jet(spec.surface, "surface");

    if (!h.negligible(h.constant_term()))
        throw input_error("base point is not on the surface: h(p) != 0");

    return ProblemJets<S>{VectorField<S>(std::move(comps)), std::move(h)};
}

}  // namespace visnf
