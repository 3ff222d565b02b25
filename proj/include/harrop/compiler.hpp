#pragma once

#include <stdexcept>

#include "harrop/ast.hpp"
#include "harrop/instr.hpp"
#include "harrop/parser.hpp"

namespace harrop {

/// Raised for programs the code generator cannot translate (e.g. a
/// variable in an implication antecedent with no enclosing binder).
class compile_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Translate a program and query into a single code image: one table per
/// implication antecedent (table 0 is the global program), predicate code
/// chains per table, and the query code last (ending in `stop`).
CodeImage compile_program(const ProgramAst& program, const QueryAst& query, Symtab& syms);

}  // namespace harrop
