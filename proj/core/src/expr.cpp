#include "ricn/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <utility>

namespace ricn {

Jet2 Jet2::constant(double c, int nvars) {
  Jet2 j;
  j.value = c;
  j.grad = Vec::Zero(nvars);
  j.hess = Mat::Zero(nvars, nvars);
  return j;
}

Jet2 Jet2::variable(double x, int index, int nvars) {
  Jet2 j = constant(x, nvars);
  j.value = x;
  j.grad(index) = 1.0;
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  return Jet2{a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  return Jet2{a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}

Jet2 operator-(const Jet2& a) { return Jet2{-a.value, -a.grad, -a.hess}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 j;
  j.value = a.value * b.value;
  j.grad = a.grad * b.value + b.grad * a.value;
  j.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return j;
}

Jet2 operator*(double c, const Jet2& a) {
  return Jet2{c * a.value, c * a.grad, c * a.hess};
}

namespace detail {

enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
enum class Fn { Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Asinh };

struct ExprNode {
  Kind kind;
  double constant = 0.0;
  int var = -1;
  Fn fn = Fn::Sin;
  std::unique_ptr<ExprNode> a, b;
  std::size_t pos = 0;

  std::unique_ptr<ExprNode> clone() const {
    auto n = std::make_unique<ExprNode>();
    n->kind = kind;
    n->constant = constant;
    n->var = var;
    n->fn = fn;
    n->pos = pos;
    if (a) n->a = a->clone();
    if (b) n->b = b->clone();
    return n;
  }
};

namespace {

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Asinh: return "arcsinh";
  }
  return "?";
}

void render(const ExprNode& n, const std::vector<std::string>& vars,
            std::string& out) {
  switch (n.kind) {
    case Kind::Constant: {
      // Negative literals are parenthesized so the rendering never changes
      // how a surrounding power or product re-parses.
      const std::string s = format_g17(n.constant);
      if (!s.empty() && s[0] == '-') {
        out += '(';
        out += s;
        out += ')';
      } else {
        out += s;
      }
      break;
    }
    case Kind::Variable:
      out += vars[static_cast<std::size_t>(n.var)];
      break;
    case Kind::Neg:
      out += "(-";
      render(*n.a, vars, out);
      out += ')';
      break;
    case Kind::Call:
      out += fn_name(n.fn);
      out += '(';
      render(*n.a, vars, out);
      out += ')';
      break;
    default: {
      char op = 0;
      switch (n.kind) {
        case Kind::Add: op = '+'; break;
        case Kind::Sub: op = '-'; break;
        case Kind::Mul: op = '*'; break;
        case Kind::Div: op = '/'; break;
        case Kind::Pow: op = '^'; break;
        default: break;
      }
      out += '(';
      render(*n.a, vars, out);
      out += op;
      render(*n.b, vars, out);
      out += ')';
      break;
    }
  }
}

std::string snippet(const ExprNode& n, const std::vector<std::string>& vars) {
  std::string s;
  render(n, vars, s);
  if (s.size() > 60) s = s.substr(0, 57) + "...";
  return s;
}

[[noreturn]] void domain_error(const std::string& reason, const ExprNode& n,
                               const std::vector<std::string>& vars) {
  throw DomainError(reason + " in '" + snippet(n, vars) + "'");
}

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

double eval_value(const ExprNode& n, const Vec& p,
                  const std::vector<std::string>& vars) {
  switch (n.kind) {
    case Kind::Constant: return n.constant;
    case Kind::Variable: return p(n.var);
    case Kind::Add: return eval_value(*n.a, p, vars) + eval_value(*n.b, p, vars);
    case Kind::Sub: return eval_value(*n.a, p, vars) - eval_value(*n.b, p, vars);
    case Kind::Mul: return eval_value(*n.a, p, vars) * eval_value(*n.b, p, vars);
    case Kind::Div: {
      const double d = eval_value(*n.b, p, vars);
      if (d == 0.0) domain_error("division by zero", n, vars);
      return eval_value(*n.a, p, vars) / d;
    }
    case Kind::Pow: {
      const double base = eval_value(*n.a, p, vars);
      if (n.b->kind == Kind::Constant) {
        const double c = n.b->constant;
        if (base < 0.0 && !is_integer(c))
          domain_error("negative base with non-integer exponent", n, vars);
        if (base == 0.0 && c < 0.0)
          domain_error("zero base with negative exponent", n, vars);
        return std::pow(base, c);
      }
      if (base <= 0.0)
        domain_error("non-positive base with variable exponent", n, vars);
      return std::pow(base, eval_value(*n.b, p, vars));
    }
    case Kind::Neg: return -eval_value(*n.a, p, vars);
    case Kind::Call: {
      const double x = eval_value(*n.a, p, vars);
      switch (n.fn) {
        case Fn::Sin: return std::sin(x);
        case Fn::Cos: return std::cos(x);
        case Fn::Sinh: return std::sinh(x);
        case Fn::Cosh: return std::cosh(x);
        case Fn::Tanh: return std::tanh(x);
        case Fn::Exp: return std::exp(x);
        case Fn::Log:
          if (x <= 0.0) domain_error("log of a non-positive value", n, vars);
          return std::log(x);
        case Fn::Sqrt:
          if (x < 0.0) domain_error("sqrt of a negative value", n, vars);
          return std::sqrt(x);
        case Fn::Asinh: return std::asinh(x);
      }
      return 0.0;
    }
  }
  return 0.0;
}

// f(u) with f0 = f(u), f1 = f'(u), f2 = f''(u).
Jet2 chain(const Jet2& u, double f0, double f1, double f2) {
  Jet2 j;
  j.value = f0;
  j.grad = f1 * u.grad;
  j.hess = f1 * u.hess + f2 * (u.grad * u.grad.transpose());
  return j;
}

Jet2 eval_jet(const ExprNode& n, const Vec& p,
              const std::vector<std::string>& vars) {
  const int nv = static_cast<int>(vars.size());
  switch (n.kind) {
    case Kind::Constant: return Jet2::constant(n.constant, nv);
    case Kind::Variable: return Jet2::variable(p(n.var), n.var, nv);
    case Kind::Add: return eval_jet(*n.a, p, vars) + eval_jet(*n.b, p, vars);
    case Kind::Sub: return eval_jet(*n.a, p, vars) - eval_jet(*n.b, p, vars);
    case Kind::Mul: return eval_jet(*n.a, p, vars) * eval_jet(*n.b, p, vars);
    case Kind::Div: {
      const Jet2 den = eval_jet(*n.b, p, vars);
      if (den.value == 0.0) domain_error("division by zero", n, vars);
      const double inv = 1.0 / den.value;
      return eval_jet(*n.a, p, vars) *
             chain(den, inv, -inv * inv, 2.0 * inv * inv * inv);
    }
    case Kind::Pow: {
      const Jet2 base = eval_jet(*n.a, p, vars);
      if (n.b->kind == Kind::Constant) {
        const double c = n.b->constant;
        const double v = base.value;
        if (c == 0.0) return Jet2::constant(1.0, nv);
        if (c == 1.0) return base;
        if (v < 0.0 && !is_integer(c))
          domain_error("negative base with non-integer exponent", n, vars);
        if (v == 0.0 && c < 2.0)
          domain_error("derivative of power is singular at zero base", n, vars);
        return chain(base, std::pow(v, c), c * std::pow(v, c - 1.0),
                     c * (c - 1.0) * std::pow(v, c - 2.0));
      }
      // Variable exponent: a^b = exp(b log a), requires a > 0.
      if (base.value <= 0.0)
        domain_error("non-positive base with variable exponent", n, vars);
      const Jet2 lg = chain(base, std::log(base.value), 1.0 / base.value,
                            -1.0 / (base.value * base.value));
      const Jet2 prod = eval_jet(*n.b, p, vars) * lg;
      const double e = std::exp(prod.value);
      return chain(prod, e, e, e);
    }
    case Kind::Neg: return -eval_jet(*n.a, p, vars);
    case Kind::Call: {
      const Jet2 u = eval_jet(*n.a, p, vars);
      const double x = u.value;
      switch (n.fn) {
        case Fn::Sin: return chain(u, std::sin(x), std::cos(x), -std::sin(x));
        case Fn::Cos: return chain(u, std::cos(x), -std::sin(x), -std::cos(x));
        case Fn::Sinh: return chain(u, std::sinh(x), std::cosh(x), std::sinh(x));
        case Fn::Cosh: return chain(u, std::cosh(x), std::sinh(x), std::cosh(x));
        case Fn::Tanh: {
          const double t = std::tanh(x);
          const double s = 1.0 - t * t;
          return chain(u, t, s, -2.0 * t * s);
        }
        case Fn::Exp: {
          const double e = std::exp(x);
          return chain(u, e, e, e);
        }
        case Fn::Log:
          if (x <= 0.0) domain_error("log of a non-positive value", n, vars);
          return chain(u, std::log(x), 1.0 / x, -1.0 / (x * x));
        case Fn::Sqrt: {
          if (x < 0.0) domain_error("sqrt of a negative value", n, vars);
          if (x == 0.0)
            domain_error("derivative of sqrt is singular at zero", n, vars);
          const double s = std::sqrt(x);
          return chain(u, s, 0.5 / s, -0.25 / (s * x));
        }
        case Fn::Asinh: {
          const double w = std::sqrt(1.0 + x * x);
          return chain(u, std::asinh(x), 1.0 / w, -x / (w * w * w));
        }
      }
      return Jet2::constant(0.0, nv);
    }
  }
  return Jet2::constant(0.0, nv);
}

// ---------------------------------------------------------------------------
// Tokenizer + recursive descent parser.

struct Token {
  enum class Type { Number, Ident, Op, LParen, RParen, Comma, End };
  Type type;
  double number = 0.0;
  std::string ident;
  char op = 0;
  std::size_t pos = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
    tok_.pos = i_;
    if (i_ >= text_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    const char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      tok_.type = Token::Type::Ident;
      tok_.ident = text_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        tok_.type = Token::Type::Op;
        tok_.op = c;
        ++i_;
        return;
      case '(':
        tok_.type = Token::Type::LParen;
        ++i_;
        return;
      case ')':
        tok_.type = Token::Type::RParen;
        ++i_;
        return;
      case ',':
        tok_.type = Token::Type::Comma;
        ++i_;
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }
  }

  void lex_number() {
    std::size_t j = i_;
    while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
    if (j < text_.size() && text_[j] == '.') {
      ++j;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
    }
    if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
      if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
        ++k;
        while (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) ++k;
        j = k;
      }
    }
    double value = 0.0;
    const auto rc = std::from_chars(text_.data() + i_, text_.data() + j, value);
    if (rc.ec != std::errc())
      throw ParseError("malformed numeric literal", i_);
    tok_.type = Token::Type::Number;
    tok_.number = value;
    i_ = j;
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : lex_(text), vars_(vars) {}

  std::unique_ptr<ExprNode> parse() {
    auto e = parse_expr();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End)
      throw ParseError("unexpected trailing input", t.pos);
    return e;
  }

private:
  static std::unique_ptr<ExprNode> make(Kind k, std::size_t pos) {
    auto n = std::make_unique<ExprNode>();
    n->kind = k;
    n->pos = pos;
    return n;
  }

  std::unique_ptr<ExprNode> parse_expr() {
    auto lhs = parse_term();
    while (lex_.peek().type == Token::Type::Op &&
           (lex_.peek().op == '+' || lex_.peek().op == '-')) {
      const Token t = lex_.take();
      auto n = make(t.op == '+' ? Kind::Add : Kind::Sub, t.pos);
      n->a = std::move(lhs);
      n->b = parse_term();
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<ExprNode> parse_term() {
    auto lhs = parse_unary();
    while (lex_.peek().type == Token::Type::Op &&
           (lex_.peek().op == '*' || lex_.peek().op == '/')) {
      const Token t = lex_.take();
      auto n = make(t.op == '*' ? Kind::Mul : Kind::Div, t.pos);
      n->a = std::move(lhs);
      n->b = parse_unary();
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<ExprNode> parse_unary() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Op && (t.op == '-' || t.op == '+')) {
      const Token op = lex_.take();
      auto inner = parse_unary();
      if (op.op == '+') return inner;
      auto n = make(Kind::Neg, op.pos);
      n->a = std::move(inner);
      return n;
    }
    return parse_power();
  }

  std::unique_ptr<ExprNode> parse_power() {
    auto base = parse_primary();
    if (lex_.peek().type == Token::Type::Op && lex_.peek().op == '^') {
      const Token t = lex_.take();
      auto n = make(Kind::Pow, t.pos);
      n->a = std::move(base);
      n->b = parse_unary(); // right-associative; exponent may carry a sign
      return n;
    }
    return base;
  }

  std::unique_ptr<ExprNode> parse_primary() {
    const Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Number: {
        auto n = make(Kind::Constant, t.pos);
        n->constant = t.number;
        return n;
      }
      case Token::Type::LParen: {
        auto e = parse_expr();
        expect_rparen(t.pos);
        return e;
      }
      case Token::Type::Ident:
        return parse_ident(t);
      default:
        throw ParseError("expected a number, name, or '('", t.pos);
    }
  }

  std::unique_ptr<ExprNode> parse_ident(const Token& t) {
    static const std::pair<const char*, Fn> kFunctions[] = {
        {"sin", Fn::Sin},   {"cos", Fn::Cos},       {"sinh", Fn::Sinh},
        {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh},     {"exp", Fn::Exp},
        {"log", Fn::Log},   {"sqrt", Fn::Sqrt},     {"arcsinh", Fn::Asinh},
        {"asinh", Fn::Asinh}};
    for (const auto& [name, fn] : kFunctions) {
      if (t.ident == name) {
        if (lex_.peek().type != Token::Type::LParen)
          throw ParseError("expected '(' after function '" + t.ident + "'",
                           lex_.peek().pos);
        lex_.take();
        auto arg = parse_expr();
        int extra = 0;
        while (lex_.peek().type == Token::Type::Comma) {
          lex_.take();
          parse_expr();
          ++extra;
        }
        if (extra > 0)
          throw ParseError("function '" + t.ident + "' expects 1 argument, got " +
                               std::to_string(1 + extra),
                           t.pos);
        expect_rparen(t.pos);
        auto n = make(Kind::Call, t.pos);
        n->fn = fn;
        n->a = std::move(arg);
        return n;
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (t.ident == vars_[i]) {
        if (lex_.peek().type == Token::Type::LParen)
          throw ParseError("'" + t.ident + "' is a coordinate, not a function",
                           lex_.peek().pos);
        auto n = make(Kind::Variable, t.pos);
        n->var = static_cast<int>(i);
        return n;
      }
    }
    throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
  }

  void expect_rparen(std::size_t open_pos) {
    if (lex_.peek().type != Token::Type::RParen)
      throw ParseError("missing ')' for group opened here", open_pos);
    lex_.take();
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
};

} // namespace
} // namespace detail

Expression::Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

Expression::Expression(const Expression& other)
    : root_(other.root_ ? other.root_->clone() : nullptr),
      variables_(other.variables_) {}

Expression& Expression::operator=(const Expression& other) {
  if (this != &other) {
    root_ = other.root_ ? other.root_->clone() : nullptr;
    variables_ = other.variables_;
  }
  return *this;
}

Expression::~Expression() = default;

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
  Expression e;
  e.variables_ = variables;
  detail::Parser p(text, e.variables_);
  e.root_ = p.parse();
  return e;
}

Expression Expression::constant(double value,
                                const std::vector<std::string>& variables) {
  Expression e;
  e.variables_ = variables;
  e.root_ = std::make_unique<detail::ExprNode>();
  e.root_->kind = detail::Kind::Constant;
  e.root_->constant = value;
  return e;
}

double Expression::value(const Vec& point) const {
  if (!root_) throw InvalidArgument("evaluating an empty expression");
  if (point.size() != static_cast<Eigen::Index>(variables_.size()))
    throw InvalidArgument("point dimension does not match expression variables");
  const double v = detail::eval_value(*root_, point, variables_);
  if (!std::isfinite(v))
    throw DomainError("expression evaluated to a non-finite value: '" +
                      to_string() + "'");
  return v;
}

Jet2 Expression::jet(const Vec& point) const {
  if (!root_) throw InvalidArgument("evaluating an empty expression");
  if (point.size() != static_cast<Eigen::Index>(variables_.size()))
    throw InvalidArgument("point dimension does not match expression variables");
  Jet2 j = detail::eval_jet(*root_, point, variables_);
  if (!std::isfinite(j.value) || !j.grad.allFinite() || !j.hess.allFinite())
    throw DomainError("expression jet is non-finite: '" + to_string() + "'");
  return j;
}

std::string Expression::to_string() const {
  if (!root_) return "";
  std::string s;
  detail::render(*root_, variables_, s);
  return s;
}

Expression parse(const std::string& text,
                 const std::vector<std::string>& variables) {
  return Expression::parse(text, variables);
}

} // namespace ricn
