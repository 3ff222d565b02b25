#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace harrop {

// Surface-level abstract syntax. Terms, goals and clauses mirror the
// G/D formula classes: goals may contain conjunction, disjunction,
// quantifiers and clause-antecedent implication; clause heads are rigid
// atoms with an optional body.

struct TermAst {
  enum class Kind { Var, Const, Struct };
  Kind kind = Kind::Const;
  std::string name;           // variable name, constant name, or functor
  std::vector<TermAst> args;  // Struct only, arity >= 1

  static TermAst var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static TermAst cst(std::string n) { return {Kind::Const, std::move(n), {}}; }
  static TermAst str(std::string f, std::vector<TermAst> a) {
    return {Kind::Struct, std::move(f), std::move(a)};
  }
};

struct GoalAst;

struct ClauseAst {
  TermAst head;
  std::shared_ptr<GoalAst> body;  // null for facts
  std::vector<std::string> explicit_quantified;  // outermost forall prefix
  std::vector<std::string> free_vars;            // computed, first-occurrence order
};

struct GoalAst {
  enum class Kind { Atom, And, Or, Exists, Forall, Implies, True };
  Kind kind = Kind::True;
  TermAst atom;                       // Atom
  std::vector<GoalAst> sub;           // And/Or: 2 children; Exists/Forall/Implies: 1
  std::string var;                    // Exists/Forall
  std::vector<ClauseAst> antecedent;  // Implies, non-empty flattened list

  static GoalAst mk_atom(TermAst t) {
    GoalAst g;
    g.kind = Kind::Atom;
    g.atom = std::move(t);
    return g;
  }
  static GoalAst mk_bin(Kind k, GoalAst l, GoalAst r) {
    GoalAst g;
    g.kind = k;
    g.sub.push_back(std::move(l));
    g.sub.push_back(std::move(r));
    return g;
  }
  static GoalAst mk_quant(Kind k, std::string v, GoalAst body) {
    GoalAst g;
    g.kind = k;
    g.var = std::move(v);
    g.sub.push_back(std::move(body));
    return g;
  }
  static GoalAst mk_implies(std::vector<ClauseAst> ds, GoalAst body) {
    GoalAst g;
    g.kind = Kind::Implies;
    g.antecedent = std::move(ds);
    g.sub.push_back(std::move(body));
    return g;
  }
  static GoalAst mk_true() { return GoalAst{}; }
};

struct ProgramAst {
  std::vector<ClauseAst> clauses;
};

bool is_var_name(const std::string& s);
bool is_const_name(const std::string& s);

/// Free variables of a term/goal/clause in first-occurrence order.
/// For clauses, variables bound by explicit_quantified or by quantifiers
/// inside the body are not free.
void collect_free_vars(const TermAst& t, std::vector<std::string>& bound,
                       std::vector<std::string>& out);
void collect_free_vars(const GoalAst& g, std::vector<std::string>& bound,
                       std::vector<std::string>& out);
void collect_free_vars(const ClauseAst& c, std::vector<std::string>& bound,
                       std::vector<std::string>& out);
std::vector<std::string> free_vars_of(const GoalAst& g);
std::vector<std::string> free_vars_of(const ClauseAst& c);

/// Recompute the free_vars field of a clause and all clauses nested in
/// implication antecedents within its body.
void annotate_free_vars(ClauseAst& c);

/// Structural equality up to renaming of bound variables (quantifier-bound
/// and clause-quantified). Free variables must match by name.
bool alpha_equal(const ClauseAst& a, const ClauseAst& b);
bool alpha_equal(const GoalAst& a, const GoalAst& b);
bool alpha_equal(const ProgramAst& a, const ProgramAst& b);

}  // namespace harrop
