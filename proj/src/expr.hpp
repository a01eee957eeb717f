#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "objectives.hpp"

namespace cwgd {

enum class TokenKind { Number, Identifier, Operator, LParen, RParen, Comma };

struct Token {
  TokenKind kind;
  std::string text;
  std::ptrdiff_t position;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Constant, Variable, Unary, Binary, Call };
  Kind kind;
  std::ptrdiff_t position = -1;
  double constant = 0.0;
  std::string name;  // variable or function name
  char op = 0;       // one of + - * / ^ for Binary
  std::vector<ExprPtr> children;
};

std::vector<Token> tokenize(const std::string& input);
ExprPtr parse(const std::vector<Token>& tokens);
inline ExprPtr parse(const std::string& input) { return parse(tokenize(input)); }

double eval(const ExprPtr& e, const std::map<std::string, double>& assignment);

void collect_variables(const ExprPtr& e, std::set<std::string>& out);

// Wraps the expression as an objective over the given partition; gradient by
// central finite differences with step fd_step; region none.
Objective to_objective(const ExprPtr& e, const BlockPartition& partition,
                       double fd_step = 1e-6);

}  // namespace cwgd
