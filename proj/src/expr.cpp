#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace cwgd {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

struct FuncInfo {
  const char* name;
  int arity;
};
constexpr FuncInfo kFuncs[] = {
    {"sin", 1}, {"cos", 1}, {"exp", 1},  {"log", 1}, {"abs", 1},
    {"sqrt", 1}, {"max", 2}, {"min", 2}, {"relu", 1},
};

const FuncInfo* find_func(const std::string& name) {
  for (const auto& f : kFuncs)
    if (name == f.name) return &f;
  return nullptr;
}

ExprPtr make_const(double v, std::ptrdiff_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Constant;
  e->constant = v;
  e->position = pos;
  return e;
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  ExprPtr run() {
    if (toks_.empty())
      throw Error(ErrorCode::ParseError, "empty expression", 0, "an expression");
    ExprPtr e = expr();
    if (idx_ < toks_.size())
      throw Error(ErrorCode::ParseError,
                  "unexpected '" + toks_[idx_].text + "'", toks_[idx_].position,
                  "end of input");
    return e;
  }

 private:
  const std::vector<Token>& toks_;
  std::size_t idx_ = 0;

  std::ptrdiff_t end_position() const {
    return toks_.empty() ? 0 : toks_.back().position +
                                   static_cast<std::ptrdiff_t>(toks_.back().text.size());
  }

  const Token* peek() const { return idx_ < toks_.size() ? &toks_[idx_] : nullptr; }

  bool peek_op(char c) const {
    const Token* t = peek();
    return t && t->kind == TokenKind::Operator && t->text.size() == 1 && t->text[0] == c;
  }

  [[noreturn]] void fail(const std::string& expectation) {
    if (idx_ < toks_.size())
      throw Error(ErrorCode::ParseError, "unexpected '" + toks_[idx_].text + "'",
                  toks_[idx_].position, expectation);
    throw Error(ErrorCode::ParseError, "unexpected end of input", end_position(),
                expectation);
  }

  ExprPtr expr() {
    ExprPtr left = term();
    while (peek_op('+') || peek_op('-')) {
      char op = toks_[idx_].text[0];
      std::ptrdiff_t pos = toks_[idx_].position;
      ++idx_;
      ExprPtr right = term();
      left = binary(op, left, right, pos);
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = unary();
    while (peek_op('*') || peek_op('/')) {
      char op = toks_[idx_].text[0];
      std::ptrdiff_t pos = toks_[idx_].position;
      ++idx_;
      ExprPtr right = unary();
      left = binary(op, left, right, pos);
    }
    return left;
  }

  // Unary minus sits below ^ so -x^2 parses as -(x^2), while 2^-2 still works
  // because the exponent slot recurses back into unary.
  ExprPtr unary() {
    if (peek_op('-')) {
      std::ptrdiff_t pos = toks_[idx_].position;
      ++idx_;
      ExprPtr child = unary();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Unary;
      e->position = pos;
      e->children = {child};
      return e;
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (peek_op('^')) {
      std::ptrdiff_t pos = toks_[idx_].position;
      ++idx_;
      ExprPtr exponent = unary();  // right-associative
      return binary('^', base, exponent, pos);
    }
    return base;
  }

  ExprPtr atom() {
    const Token* t = peek();
    if (!t) fail("a number, variable, function call, or '('");
    if (t->kind == TokenKind::Number) {
      ++idx_;
      return make_const(std::strtod(t->text.c_str(), nullptr), t->position);
    }
    if (t->kind == TokenKind::Identifier) {
      ++idx_;
      if (peek() && peek()->kind == TokenKind::LParen) return call(*t);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Variable;
      e->name = t->text;
      e->position = t->position;
      return e;
    }
    if (t->kind == TokenKind::LParen) {
      ++idx_;
      ExprPtr inner = expr();
      if (!peek() || peek()->kind != TokenKind::RParen) fail("')'");
      ++idx_;
      return inner;
    }
    fail("a number, variable, function call, or '('");
  }

  ExprPtr call(const Token& name) {
    const FuncInfo* info = find_func(name.text);
    if (!info)
      throw Error(ErrorCode::UnknownFunction, "unknown function '" + name.text + "'",
                  name.position);
    ++idx_;  // consume '('
    std::vector<ExprPtr> args;
    if (peek() && peek()->kind == TokenKind::RParen) {
      ++idx_;
    } else {
      for (;;) {
        args.push_back(expr());
        if (peek() && peek()->kind == TokenKind::Comma) {
          ++idx_;
          continue;
        }
        if (peek() && peek()->kind == TokenKind::RParen) {
          ++idx_;
          break;
        }
        fail("',' or ')'");
      }
    }
    if (static_cast<int>(args.size()) != info->arity)
      throw Error(ErrorCode::ArityError,
                  "'" + name.text + "' expects " + std::to_string(info->arity) +
                      " argument(s), got " + std::to_string(args.size()),
                  name.position);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->name = name.text;
    e->position = name.position;
    e->children = std::move(args);
    return e;
  }

  static ExprPtr binary(char op, ExprPtr l, ExprPtr r, std::ptrdiff_t pos) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->position = pos;
    e->children = {std::move(l), std::move(r)};
    return e;
  }
};

double check_finite(double v, std::ptrdiff_t pos, const char* what) {
  if (!std::isfinite(v))
    throw Error(ErrorCode::NonFinite, std::string(what) + " produced a non-finite value",
                pos);
  return v;
}

}  // namespace

std::vector<Token> tokenize(const std::string& input) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = input.size();
  while (i < n) {
    char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(i);
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(input[i + 1]))) {
      std::size_t j = i;
      while (j < n && is_digit(input[j])) ++j;
      if (j < n && input[j] == '.') {
        ++j;
        while (j < n && is_digit(input[j])) ++j;
      }
      if (j < n && (input[j] == 'e' || input[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (input[k] == '+' || input[k] == '-')) ++k;
        if (k < n && is_digit(input[k])) {
          while (k < n && is_digit(input[k])) ++k;
          j = k;
        }
      }
      out.push_back({TokenKind::Number, input.substr(i, j - i), pos});
      i = j;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < n && is_ident_char(input[j])) ++j;
      out.push_back({TokenKind::Identifier, input.substr(i, j - i), pos});
      i = j;
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        out.push_back({TokenKind::Operator, std::string(1, c), pos});
        ++i;
        continue;
      case '(':
        out.push_back({TokenKind::LParen, "(", pos});
        ++i;
        continue;
      case ')':
        out.push_back({TokenKind::RParen, ")", pos});
        ++i;
        continue;
      case ',':
        out.push_back({TokenKind::Comma, ",", pos});
        ++i;
        continue;
      default:
        throw Error(ErrorCode::LexError,
                    std::string("unrecognized character '") + c + "'", pos);
    }
  }
  return out;
}

ExprPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

double eval(const ExprPtr& e, const std::map<std::string, double>& assignment) {
  switch (e->kind) {
    case Expr::Kind::Constant:
      return e->constant;
    case Expr::Kind::Variable: {
      auto it = assignment.find(e->name);
      if (it == assignment.end())
        throw Error(ErrorCode::UnboundVariable, "unbound variable '" + e->name + "'",
                    e->position);
      return it->second;
    }
    case Expr::Kind::Unary:
      return -eval(e->children[0], assignment);
    case Expr::Kind::Binary: {
      double l = eval(e->children[0], assignment);
      double r = eval(e->children[1], assignment);
      double v = 0.0;
      switch (e->op) {
        case '+': v = l + r; break;
        case '-': v = l - r; break;
        case '*': v = l * r; break;
        case '/': v = l / r; break;
        case '^': v = std::pow(l, r); break;
      }
      return check_finite(v, e->position, "operator");
    }
    case Expr::Kind::Call: {
      double a = eval(e->children[0], assignment);
      double v = 0.0;
      if (e->name == "sin") v = std::sin(a);
      else if (e->name == "cos") v = std::cos(a);
      else if (e->name == "exp") v = std::exp(a);
      else if (e->name == "log") v = std::log(a);
      else if (e->name == "abs") v = std::fabs(a);
      else if (e->name == "sqrt") v = std::sqrt(a);
      else if (e->name == "relu") v = std::fmax(a, 0.0);
      else {
        double b = eval(e->children[1], assignment);
        v = (e->name == "max") ? std::fmax(a, b) : std::fmin(a, b);
      }
      return check_finite(v, e->position, "function");
    }
  }
  throw Error(ErrorCode::InvalidArgument, "corrupt expression node");
}

void collect_variables(const ExprPtr& e, std::set<std::string>& out) {
  if (e->kind == Expr::Kind::Variable) out.insert(e->name);
  for (const auto& child : e->children) collect_variables(child, out);
}

Objective to_objective(const ExprPtr& e, const BlockPartition& partition,
                       double fd_step) {
  std::size_t m = partition.total();
  std::map<std::string, std::size_t> slots;
  slots["x"] = 0;
  if (m >= 2) slots["y"] = 1;
  for (std::size_t j = 0; j < m; ++j) slots["x" + std::to_string(j + 1)] = j;

  std::set<std::string> vars;
  collect_variables(e, vars);
  std::vector<std::pair<std::string, std::size_t>> bindings;
  for (const auto& v : vars) {
    auto it = slots.find(v);
    if (it == slots.end())
      throw Error(ErrorCode::DimensionMismatch,
                  "variable '" + v + "' does not fit a " + std::to_string(m) +
                      "-dimensional domain");
    bindings.emplace_back(v, it->second);
  }

  Objective obj;
  obj.name = "expr";
  obj.partition = partition;
  obj.value = [e, bindings](const BlockVector& z) {
    std::map<std::string, double> assignment;
    for (const auto& [name, j] : bindings) assignment[name] = z.data[j];
    return eval(e, assignment);
  };
  Objective shell = obj;  // capture by value for the fd closure
  obj.gradient = [shell, fd_step](const BlockVector& z) {
    return fd_gradient(shell, z, fd_step);
  };
  obj.notes = "user expression; finite-difference gradient";
  return obj;
}

}  // namespace cwgd
