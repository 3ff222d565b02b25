#pragma once

#include <string>
#include <unordered_map>

#include "harrop/ast.hpp"
#include "harrop/store.hpp"

namespace harrop {

// ---- surface-syntax printing of ASTs ---------------------------------
std::string print_term(const TermAst& t);
std::string print_goal(const GoalAst& g);
std::string print_clause(const ClauseAst& c);
std::string print_program(const ProgramAst& p);

// ---- printing of store terms -----------------------------------------

struct PrintOptions {
  bool show_tags = false;  // append ^tag to variables and constants
};

/// Prints store terms. Unbound variables get stable names _G1, _G2, ... in
/// order of first appearance across all terms printed through the same
/// TermPrinter; named cells (e.g. query variables) can be registered to
/// print under their source name instead.
class TermPrinter {
 public:
  TermPrinter(const Store& store, PrintOptions opts = {}) : store_(&store), opts_(opts) {}

  void name_cell(CellRef r, const std::string& name) { names_[store_->deref(r)] = name; }
  std::string print(CellRef r);

 private:
  void rec(CellRef r, std::string& out);

  const Store* store_;
  PrintOptions opts_;
  std::unordered_map<CellRef, std::string> names_;
  int next_anon_ = 0;
};

/// One-shot convenience wrapper around TermPrinter.
std::string print_store_term(const Store& store, CellRef r, PrintOptions opts = {});

}  // namespace harrop
