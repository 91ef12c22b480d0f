#pragma once

#include <mi/error.hpp>
#include <mi/jet.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mi {

// ---------------------------------------------------------------------------
// Expression AST for dispersion symbols j(k).
//
// Grammar:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?          (exponent must fold to a constant)
//   atom  := number | 'k' | func '(' expr ')' | '(' expr ')'
//   func  := abs | sqrt | tanh | coth | exp | cos | sin | tanhc
// ---------------------------------------------------------------------------

enum class NodeKind { Constant, Var, Add, Sub, Mul, Div, Neg, Pow, Call };

enum class Func { Abs, Sqrt, Tanh, Coth, Exp, Cos, Sin, Tanhc };

struct AstNode;
using AstPtr = std::shared_ptr<const AstNode>;

struct AstNode {
    NodeKind kind{};
    double constant = 0.0;      // Constant
    double exponent = 0.0;      // Pow
    bool int_exponent = false;  // Pow
    Func func{};                // Call
    AstPtr lhs, rhs;            // children (unary nodes use lhs only)
};

namespace detail {

inline AstPtr node(NodeKind k, AstPtr l = nullptr, AstPtr r = nullptr) {
    auto n = std::make_shared<AstNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

inline AstPtr const_node(double v) {
    auto n = std::make_shared<AstNode>();
    n->kind = NodeKind::Constant;
    n->constant = v;
    return n;
}

struct Token {
    enum Kind {
        Number,
        Ident,
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
        Comma,
        End
    } kind;
    std::size_t offset;
    double number = 0.0;
    std::string ident;
};

inline std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto isid = [](char c) { return std::isalnum((unsigned char)c) || c == '_'; };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace((unsigned char)c)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit((unsigned char)c) ||
            (c == '.' && i + 1 < text.size() &&
             std::isdigit((unsigned char)text[i + 1]))) {
            while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
            if (i < text.size() && text[i] == '.') {
                ++i;
                while (i < text.size() && std::isdigit((unsigned char)text[i]))
                    ++i;
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && std::isdigit((unsigned char)text[j])) {
                    i = j;
                    while (i < text.size() &&
                           std::isdigit((unsigned char)text[i]))
                        ++i;
                }
            }
            std::string num(text.substr(start, i - start));
            out.push_back({Token::Number, start, std::strtod(num.c_str(), nullptr), {}});
            continue;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            while (i < text.size() && isid(text[i])) ++i;
            Token t{Token::Ident, start, 0.0,
                    std::string(text.substr(start, i - start))};
            out.push_back(std::move(t));
            continue;
        }
        ++i;
        switch (c) {
        case '+': out.push_back({Token::Plus, start, 0.0, {}}); break;
        case '-': out.push_back({Token::Minus, start, 0.0, {}}); break;
        case '*': out.push_back({Token::Star, start, 0.0, {}}); break;
        case '/': out.push_back({Token::Slash, start, 0.0, {}}); break;
        case '^': out.push_back({Token::Caret, start, 0.0, {}}); break;
        case '(': out.push_back({Token::LParen, start, 0.0, {}}); break;
        case ')': out.push_back({Token::RParen, start, 0.0, {}}); break;
        case ',': out.push_back({Token::Comma, start, 0.0, {}}); break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'",
                             start);
        }
    }
    out.push_back({Token::End, text.size(), 0.0, {}});
    return out;
}

inline const std::map<std::string, Func>& func_table() {
    static const std::map<std::string, Func> t = {
        {"abs", Func::Abs},   {"sqrt", Func::Sqrt}, {"tanh", Func::Tanh},
        {"coth", Func::Coth}, {"exp", Func::Exp},   {"cos", Func::Cos},
        {"sin", Func::Sin},   {"tanhc", Func::Tanhc}};
    return t;
}

inline bool contains_var(const AstNode& n) {
    switch (n.kind) {
    case NodeKind::Var: return true;
    case NodeKind::Constant: return false;
    default:
        return (n.lhs && contains_var(*n.lhs)) ||
               (n.rhs && contains_var(*n.rhs));
    }
}

} // namespace detail

template <class T>
T eval_ast(const AstNode& n, const T& k) {
    auto lift = [](double c) {
        if constexpr (std::is_same_v<T, double>)
            return c;
        else
            return T::constant(c);
    };
    switch (n.kind) {
    case NodeKind::Constant: return lift(n.constant);
    case NodeKind::Var: return k;
    case NodeKind::Add: return eval_ast(*n.lhs, k) + eval_ast(*n.rhs, k);
    case NodeKind::Sub: return eval_ast(*n.lhs, k) - eval_ast(*n.rhs, k);
    case NodeKind::Mul: return eval_ast(*n.lhs, k) * eval_ast(*n.rhs, k);
    case NodeKind::Div: {
        T num = eval_ast(*n.lhs, k);
        T den = eval_ast(*n.rhs, k);
        if constexpr (std::is_same_v<T, double>) {
            if (den == 0.0) throw DomainError("division by zero");
        }
        return num / den;
    }
    case NodeKind::Neg: return -eval_ast(*n.lhs, k);
    case NodeKind::Pow: {
        T base = eval_ast(*n.lhs, k);
        if (n.int_exponent) return pow(base, int(n.exponent));
        return pow(base, n.exponent);
    }
    case NodeKind::Call: {
        T a = eval_ast(*n.lhs, k);
        switch (n.func) {
        case Func::Abs: return abs(a);
        case Func::Sqrt: return sqrt(a);
        case Func::Tanh: return tanh(a);
        case Func::Coth: return coth(a);
        case Func::Exp: return exp(a);
        case Func::Cos: return cos(a);
        case Func::Sin: return sin(a);
        case Func::Tanhc: return tanhc(a);
        }
        break;
    }
    }
    throw Error("corrupt expression node");
}

namespace detail {

class Parser {
public:
    Parser(std::string_view text, const std::map<std::string, double>* named)
        : toks_(lex(text)), named_(named) {}

    AstPtr parse() {
        AstPtr e = expr();
        if (peek().kind != Token::End)
            throw ParseError("unexpected trailing input", peek().offset);
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const std::map<std::string, double>* named_;

    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(Token::Kind k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    AstPtr expr() {
        AstPtr e = term();
        for (;;) {
            if (accept(Token::Plus))
                e = node(NodeKind::Add, e, term());
            else if (accept(Token::Minus))
                e = node(NodeKind::Sub, e, term());
            else
                return e;
        }
    }

    AstPtr term() {
        AstPtr e = unary();
        for (;;) {
            if (accept(Token::Star))
                e = node(NodeKind::Mul, e, unary());
            else if (accept(Token::Slash))
                e = node(NodeKind::Div, e, unary());
            else
                return e;
        }
    }

    AstPtr unary() {
        if (accept(Token::Minus)) {
            AstPtr c = unary();
            if (c->kind == NodeKind::Constant)
                return const_node(-c->constant);
            return node(NodeKind::Neg, c);
        }
        return power();
    }

    AstPtr power() {
        AstPtr base = atom();
        if (!accept(Token::Caret)) return base;
        std::size_t at = peek().offset;
        AstPtr expo = unary();
        if (contains_var(*expo))
            throw ParseError("exponent must be a constant expression", at);
        double e;
        try {
            e = eval_ast<double>(*expo, 0.0);
        } catch (const Error& err) {
            throw ParseError(std::string("cannot evaluate exponent: ") +
                                 err.what(),
                             at);
        }
        auto n = std::make_shared<AstNode>();
        n->kind = NodeKind::Pow;
        n->lhs = base;
        n->exponent = e;
        n->int_exponent = std::nearbyint(e) == e && std::abs(e) <= 64.0;
        return n;
    }

    AstPtr atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Number:
            advance();
            return const_node(t.number);
        case Token::LParen: {
            advance();
            AstPtr e = expr();
            if (!accept(Token::RParen))
                throw ParseError("expected ')'", peek().offset);
            return e;
        }
        case Token::Ident: {
            advance();
            if (t.ident == "k") return node(NodeKind::Var);
            if (named_) {
                auto it = named_->find(t.ident);
                if (it != named_->end()) return const_node(it->second);
            }
            auto fit = func_table().find(t.ident);
            if (fit == func_table().end())
                throw ParseError("unknown identifier '" + t.ident + "'",
                                 t.offset);
            if (!accept(Token::LParen))
                throw ParseError("expected '(' after function name",
                                 peek().offset);
            AstPtr arg = expr();
            if (!accept(Token::RParen))
                throw ParseError("expected ')'", peek().offset);
            auto n = node(NodeKind::Call, arg);
            const_cast<AstNode*>(n.get())->func = fit->second;
            return n;
        }
        default:
            throw ParseError("expected operand", t.offset);
        }
    }
};

inline const char* func_name(Func f) {
    switch (f) {
    case Func::Abs: return "abs";
    case Func::Sqrt: return "sqrt";
    case Func::Tanh: return "tanh";
    case Func::Coth: return "coth";
    case Func::Exp: return "exp";
    case Func::Cos: return "cos";
    case Func::Sin: return "sin";
    case Func::Tanhc: return "tanhc";
    }
    return "?";
}

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline int precedence(const AstNode& n) {
    switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 10;
    case NodeKind::Mul:
    case NodeKind::Div: return 20;
    case NodeKind::Neg: return 25;
    case NodeKind::Pow: return 40;
    case NodeKind::Constant: return n.constant < 0 ? 25 : 100;
    default: return 100;
    }
}

inline std::string print(const AstNode& n, int min_prec) {
    std::string s;
    switch (n.kind) {
    case NodeKind::Constant: s = fmt_num(n.constant); break;
    case NodeKind::Var: s = "k"; break;
    case NodeKind::Add:
        s = print(*n.lhs, 10) + " + " + print(*n.rhs, 11);
        break;
    case NodeKind::Sub:
        s = print(*n.lhs, 10) + " - " + print(*n.rhs, 11);
        break;
    case NodeKind::Mul: s = print(*n.lhs, 20) + "*" + print(*n.rhs, 21); break;
    case NodeKind::Div: s = print(*n.lhs, 20) + "/" + print(*n.rhs, 21); break;
    case NodeKind::Neg: s = "-" + print(*n.lhs, 26); break;
    case NodeKind::Pow:
        s = print(*n.lhs, 41) + "^" + fmt_num(n.exponent);
        break;
    case NodeKind::Call:
        s = std::string(func_name(n.func)) + "(" + print(*n.lhs, 0) + ")";
        break;
    }
    if (precedence(n) < min_prec) return "(" + s + ")";
    return s;
}

} // namespace detail

/// Parse an expression in the dispersion-symbol grammar.
inline AstPtr parse_symbol(std::string_view text,
                           const std::map<std::string, double>* named = nullptr) {
    return detail::Parser(text, named).parse();
}

/// Minimal-parenthesis canonical form; reparsing yields an equal tree.
inline std::string to_string(const AstNode& n) { return detail::print(n, 0); }

inline bool structurally_equal(const AstNode& a, const AstNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NodeKind::Constant: return a.constant == b.constant;
    case NodeKind::Var: return true;
    case NodeKind::Pow:
        return a.exponent == b.exponent &&
               a.int_exponent == b.int_exponent &&
               structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Call:
        return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Neg: return structurally_equal(*a.lhs, *b.lhs);
    default:
        return structurally_equal(*a.lhs, *b.lhs) &&
               structurally_equal(*a.rhs, *b.rhs);
    }
}

namespace detail {

struct Builtin {
    const char* name;
    const char* tmpl;
    std::vector<std::pair<const char*, double>> params;
};

inline const std::vector<Builtin>& builtin_table() {
    // kdv / mkdv share 1 + k^2 (the advective constant is normalized away).
    // ilw is written through tanhc so k = 0 stays regular; kawahara carries
    // the +1 shift required by the j(0) = 1 normalization.
    static const std::vector<Builtin> t = {
        {"kdv", "1 + k^2", {}},
        {"mkdv-dispersion", "1 + k^2", {}},
        {"whitham", "sqrt(tanhc(k))", {}},
        {"bo", "1 - abs(k)", {}},
        {"ilw", "1/tanhc(k)", {}},
        {"fkdv", "1 - abs(k)^beta", {{"beta", 1.5}}},
        {"kawahara", "1 + a*k^2 + b*k^4", {{"a", 1.0}, {"b", 0.25}}},
    };
    return t;
}

/// Split "name{p=v, q=w}" into the name and the parameter map text.
/// Returns false if the text does not have builtin-reference shape.
inline bool split_builtin_ref(std::string_view text, std::string& name,
                              std::string& args) {
    std::size_t i = 0, n = text.size();
    while (i < n && std::isspace((unsigned char)text[i])) ++i;
    std::size_t s = i;
    if (i >= n || !std::isalpha((unsigned char)text[i])) return false;
    while (i < n && (std::isalnum((unsigned char)text[i]) || text[i] == '_' ||
                     text[i] == '-'))
        ++i;
    name.assign(text.substr(s, i - s));
    while (i < n && std::isspace((unsigned char)text[i])) ++i;
    args.clear();
    if (i < n && text[i] == '{') {
        std::size_t close = text.find('}', i);
        if (close == std::string_view::npos) return false;
        args.assign(text.substr(i + 1, close - i - 1));
        i = close + 1;
        while (i < n && std::isspace((unsigned char)text[i])) ++i;
    }
    return i == n;
}

inline std::map<std::string, double>
parse_builtin_params(const Builtin& b, const std::string& args) {
    std::map<std::string, double> vals;
    for (auto& [pname, dflt] : b.params) vals[pname] = dflt;
    std::size_t pos = 0;
    while (pos < args.size()) {
        std::size_t comma = args.find(',', pos);
        std::string item = args.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? args.size() : comma + 1;
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("builtin parameter must look like name=value: '" +
                                  item + "'");
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            std::size_t b2 = s.find_last_not_of(" \t");
            if (a == std::string::npos) return std::string();
            return s.substr(a, b2 - a + 1);
        };
        std::string key = trim(item.substr(0, eq));
        std::string val = trim(item.substr(eq + 1));
        if (!vals.count(key))
            throw InvalidArgument("unknown parameter '" + key +
                                  "' for builtin '" + b.name + "'");
        char* end = nullptr;
        double v = std::strtod(val.c_str(), &end);
        if (end != val.c_str() + val.size() || val.empty())
            throw InvalidArgument("bad numeric value for parameter '" + key +
                                  "'");
        vals[key] = v;
    }
    return vals;
}

} // namespace detail

/// A dispersion symbol j(k): parsed expression plus evaluation entry
/// points. `make` validates the structural hypotheses (j(0) = 1 and
/// evenness, both within 1e-10 on samples); `make_unchecked` skips the
/// validation so diagnostic tools can report on bad symbols.
class DispersionSymbol {
public:
    static DispersionSymbol make(std::string_view text) {
        DispersionSymbol s = make_unchecked(text);
        s.validate();
        return s;
    }

    static DispersionSymbol make_unchecked(std::string_view text) {
        std::string name, args;
        if (detail::split_builtin_ref(text, name, args)) {
            for (const auto& b : detail::builtin_table()) {
                if (name == b.name) {
                    auto vals = detail::parse_builtin_params(b, args);
                    AstPtr ast = parse_symbol(b.tmpl, &vals);
                    return DispersionSymbol(ast);
                }
            }
            if (name != "k" && !detail::func_table().count(name) && args.empty() == false)
                throw ParseError("unknown builtin '" + name + "'", 0);
        }
        return DispersionSymbol(parse_symbol(text));
    }

    double value(double k) const { return eval_ast<double>(*ast_, k); }

    Jet4 jet(double k, int order = 4) const {
        if (order < 0 || order > 4)
            throw InvalidArgument("jet order must be between 0 and 4");
        Jet4 j = eval_ast<Jet4>(*ast_, Jet4::variable(k));
        return j.truncated(std::size_t(order));
    }

    const std::string& text() const { return text_; }
    const AstPtr& ast() const { return ast_; }

private:
    explicit DispersionSymbol(AstPtr ast)
        : ast_(std::move(ast)), text_(to_string(*ast_)) {}

    void validate() const {
        try {
            double v0 = value(0.0);
            if (std::abs(v0 - 1.0) > 1e-10)
                throw HypothesisError(
                    "symbol is not normalized: j(0) = " + detail::fmt_num(v0) +
                    ", expected 1");
            static const double samples[] = {
                0.1,    0.3,    0.618,  0.7,   1.1,    1.4142, 1.5708,
                1.618,  2.2,    2.718,  2.7,   3.1416, 3.9,    4.4,
                5.0,    5.7,    6.0,    6.3,   7.1,    7.7,    8.3,
                8.9,    9.4,    9.9,    10.0};
            for (double k : samples) {
                double p = value(k), m = value(-k);
                if (std::abs(p - m) > 1e-10 * std::max(1.0, std::abs(p)))
                    throw HypothesisError(
                        "symbol is not even: j(" + detail::fmt_num(k) +
                        ") != j(-" + detail::fmt_num(k) + ")");
            }
        } catch (const DomainError& e) {
            throw HypothesisError(
                std::string("symbol is not evaluable on [-10, 10]: ") +
                e.what());
        }
    }

    AstPtr ast_;
    std::string text_;
};

/// Structural hypothesis report for a symbol at anchor wavenumber rho.
struct HypothesisReport {
    std::string symbol;
    double rho = 0.0;
    int n_max = 0;
    double tolerance = 0.0;
    bool h1_even_ok = false;
    bool h1_normalized_ok = false;
    bool mean_mode_ok = false;                    // j(rho) != 1
    std::vector<std::pair<int, double>> h3_resonances; // (n, j(rho n)-j(rho))
    std::optional<double> growth_sigma;           // sampled growth exponent

    bool pass() const {
        return h1_even_ok && h1_normalized_ok && mean_mode_ok &&
               h3_resonances.empty();
    }
};

/// Sample the hypotheses needed by the small-amplitude expansion: j even
/// and normalized, j(rho) != 1 (mean mode) and j(rho n) != j(rho) for
/// n = 2..n_max (higher harmonics), all within `tol`.
inline HypothesisReport check_hypotheses(const DispersionSymbol& sym,
                                         double rho, int n_max = 128,
                                         double tol = 1e-8) {
    if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
    if (n_max < 2) throw InvalidArgument("n_max must be at least 2");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");

    HypothesisReport rep;
    rep.symbol = sym.text();
    rep.rho = rho;
    rep.n_max = n_max;
    rep.tolerance = tol;

    try {
        rep.h1_normalized_ok = std::abs(sym.value(0.0) - 1.0) <= 1e-10;
    } catch (const DomainError&) {
        rep.h1_normalized_ok = false;
    }

    rep.h1_even_ok = true;
    static const double samples[] = {0.1, 0.618, 1.1, 1.5708, 2.2, 2.718,
                                     3.9, 5.0,   6.3, 7.7,    8.9, 9.9};
    for (double k : samples) {
        try {
            double p = sym.value(k), m = sym.value(-k);
            if (std::abs(p - m) > 1e-10 * std::max(1.0, std::abs(p))) {
                rep.h1_even_ok = false;
                break;
            }
        } catch (const DomainError&) {
            rep.h1_even_ok = false;
            break;
        }
    }

    double jr = sym.value(rho);
    rep.mean_mode_ok = std::abs(jr - 1.0) > tol;
    for (int n = 2; n <= n_max; ++n) {
        double gap = sym.value(rho * n) - jr;
        if (std::abs(gap) <= tol) rep.h3_resonances.emplace_back(n, gap);
    }

    try {
        double v1 = std::abs(sym.value(64.0));
        double v2 = std::abs(sym.value(256.0));
        if (std::isfinite(v1) && std::isfinite(v2) && v1 > 0.0 && v2 > 0.0)
            rep.growth_sigma = std::log(v2 / v1) / std::log(256.0 / 64.0);
    } catch (const DomainError&) {
    }

    return rep;
}

} // namespace mi
