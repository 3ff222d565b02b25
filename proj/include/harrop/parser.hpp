#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "harrop/ast.hpp"

namespace harrop {

/// All lexical, syntactic and scoping errors raised while reading program
/// text. Rejection is total: any byte sequence either parses or raises
/// this exception with a position and message.
class parse_error : public std::runtime_error {
 public:
  parse_error(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

/// A parsed query: the goal plus its free (answer) variables in
/// first-occurrence order.
struct QueryAst {
  GoalAst goal;
  std::vector<std::string> answer_vars;
};

/// Parse a program: a sequence of '.'-terminated clauses. Uppercase (or
/// underscore-initial) variables not bound by an explicit quantifier are
/// implicitly universally quantified at the clause level, so every
/// top-level clause is closed.
ProgramAst parse_program(const std::string& text);

/// Parse a single '.'-terminated query goal.
QueryAst parse_query(const std::string& text);

}  // namespace harrop
