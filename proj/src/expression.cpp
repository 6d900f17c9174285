#include "crm/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>

namespace crm {

namespace {

using Fn = std::function<double(const Vector&)>;

struct Token {
  enum Kind { number, ident, symbol, end } kind;
  std::string text;
  double value = 0.0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  bool accept_symbol(char c) {
    if (current_.kind == Token::symbol && current_.text[0] == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect_symbol(char c) {
    if (!accept_symbol(c)) {
      throw std::invalid_argument(std::string("expression: expected '") + c +
                                  "' near \"" + current_.text + "\"");
    }
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ >= text_.size()) {
      current_ = {Token::end, "<end>"};
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      const double v = std::stod(text_.substr(pos_), &used);
      current_ = {Token::number, text_.substr(pos_, used), v};
      pos_ += used;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      current_ = {Token::ident, text_.substr(pos_, end - pos_)};
      pos_ = end;
      return;
    }
    if (std::string("()+-*/^,=").find(c) != std::string::npos) {
      current_ = {Token::symbol, std::string(1, c)};
      ++pos_;
      return;
    }
    throw std::invalid_argument(std::string("expression: unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  Parser(Lexer& lex, const std::map<std::string, int>& vars)
      : lex_(lex), vars_(vars) {}

  Fn parse_expr() {
    Fn left = parse_term();
    while (true) {
      if (lex_.accept_symbol('+')) {
        Fn right = parse_term();
        left = [left, right](const Vector& x) { return left(x) + right(x); };
      } else if (lex_.accept_symbol('-')) {
        Fn right = parse_term();
        left = [left, right](const Vector& x) { return left(x) - right(x); };
      } else {
        return left;
      }
    }
  }

 private:
  bool starts_factor() const {
    const Token& t = lex_.peek();
    return t.kind == Token::number || t.kind == Token::ident ||
           (t.kind == Token::symbol && t.text[0] == '(');
  }

  Fn parse_term() {
    Fn left = parse_unary();
    while (true) {
      if (lex_.accept_symbol('*')) {
        Fn right = parse_unary();
        left = [left, right](const Vector& x) { return left(x) * right(x); };
      } else if (lex_.accept_symbol('/')) {
        Fn right = parse_unary();
        left = [left, right](const Vector& x) { return left(x) / right(x); };
      } else if (starts_factor()) {
        // implicit multiplication: "2x", "3exp(t)", "2(x+y)"
        Fn right = parse_unary();
        left = [left, right](const Vector& x) { return left(x) * right(x); };
      } else {
        return left;
      }
    }
  }

  Fn parse_unary() {
    if (lex_.accept_symbol('-')) {
      Fn inner = parse_unary();
      return [inner](const Vector& x) { return -inner(x); };
    }
    if (lex_.accept_symbol('+')) {
      return parse_unary();
    }
    return parse_power();
  }

  Fn parse_power() {
    Fn base = parse_atom();
    if (lex_.accept_symbol('^')) {
      Fn exponent = parse_unary();
      return [base, exponent](const Vector& x) {
        return std::pow(base(x), exponent(x));
      };
    }
    return base;
  }

  Fn parse_atom() {
    const Token t = lex_.take();
    if (t.kind == Token::number) {
      const double v = t.value;
      return [v](const Vector&) { return v; };
    }
    if (t.kind == Token::ident) {
      if (lex_.peek().kind == Token::symbol && lex_.peek().text[0] == '(' &&
          !vars_.count(t.text)) {
        if (t.text != "exp") {
          throw std::invalid_argument("expression: unknown function '" + t.text + "'");
        }
        lex_.expect_symbol('(');
        Fn arg = parse_expr();
        lex_.expect_symbol(')');
        return [arg](const Vector& x) { return std::exp(arg(x)); };
      }
      const auto it = vars_.find(t.text);
      if (it == vars_.end()) {
        throw std::invalid_argument("expression: unknown variable '" + t.text + "'");
      }
      const int index = it->second;
      return [index](const Vector& x) { return x(index); };
    }
    if (t.kind == Token::symbol && t.text[0] == '(') {
      Fn inner = parse_expr();
      lex_.expect_symbol(')');
      return inner;
    }
    throw std::invalid_argument("expression: unexpected token \"" + t.text + "\"");
  }

  Lexer& lex_;
  const std::map<std::string, int>& vars_;
};

}  // namespace

ParsedMap parse_map_expression(const std::string& text, double fd_step) {
  Lexer lex(text);

  // Header: name(v1,...,vn) =
  if (lex.peek().kind != Token::ident) {
    throw std::invalid_argument("expression: expected header like \"f(x,y)=...\"");
  }
  lex.take();
  lex.expect_symbol('(');
  ParsedMap parsed;
  std::map<std::string, int> vars;
  while (true) {
    if (lex.peek().kind != Token::ident) {
      throw std::invalid_argument("expression: expected a variable name in the header");
    }
    const std::string name = lex.take().text;
    if (!vars.emplace(name, static_cast<int>(parsed.variables.size())).second) {
      throw std::invalid_argument("expression: duplicate variable '" + name + "'");
    }
    parsed.variables.push_back(name);
    if (!lex.accept_symbol(',')) break;
  }
  lex.expect_symbol(')');
  lex.expect_symbol('=');

  Parser parser(lex, vars);
  std::vector<Fn> components;
  if (lex.accept_symbol('(')) {
    components.push_back(parser.parse_expr());
    while (lex.accept_symbol(',')) {
      components.push_back(parser.parse_expr());
    }
    lex.expect_symbol(')');
  } else {
    components.push_back(parser.parse_expr());
  }
  if (lex.peek().kind != Token::end) {
    throw std::invalid_argument("expression: trailing input \"" + lex.peek().text + "\"");
  }

  parsed.codomain_dim = static_cast<int>(components.size());
  parsed.spec.fd_step = fd_step;
  parsed.spec.map = [components](const Vector& x) {
    Vector y(static_cast<Index>(components.size()));
    for (size_t i = 0; i < components.size(); ++i) {
      y(static_cast<Index>(i)) = components[i](x);
    }
    return y;
  };
  return parsed;
}

}  // namespace crm
