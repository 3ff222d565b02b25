#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "harrop/ast.hpp"
#include "harrop/context.hpp"
#include "harrop/parser.hpp"
#include "harrop/printer.hpp"
#include "harrop/store.hpp"

namespace harrop {

/// Why answer enumeration stopped.
enum class EndReason { Exhausted, Limit };

/// One solution: query variable names with their bound store cells. Cells
/// are valid until the next call to Interpreter::next / Machine::next.
struct Answer {
  std::vector<std::pair<std::string, CellRef>> bindings;
};

std::string format_answer(const Store& store, const Answer& a, PrintOptions opts = {});

/// Reference interpreter: a direct implementation of the goal-reduction
/// rules over tuples of goal, program context and universe index, with
/// depth-first search and leftmost goal selection. Conjunction splits,
/// disjunction creates a choice point, an existential goal introduces a
/// fresh variable tagged with the current universe, an implication pushes
/// its antecedent clauses onto the context for the subgoal, a universal
/// goal introduces a fresh generated constant tagged with the incremented
/// universe, and an atomic goal backchains over a new tagged instance of
/// each visible clause.
class Interpreter {
 public:
  struct Config {
    uint32_t max_depth = 0;   // 0 = unlimited; counts nested backchaining
    uint64_t max_steps = 0;   // 0 = unlimited; counts reduction steps
    std::ostream* trace = nullptr;
    PrintOptions print_opts{};
  };

  Interpreter(Store& store, const ProgramAst& program, Config cfg);
  Interpreter(Store& store, const ProgramAst& program)
      : Interpreter(store, program, Config{}) {}

  void start(const QueryAst& query);
  std::optional<Answer> next();
  EndReason end_reason() const { return end_reason_; }

  ContextArena& context() { return ctx_; }
  /// Context of the most recently reduced atomic goal (test introspection).
  RecordId last_atom_context() const { return last_atom_ctx_; }
  uint64_t steps() const { return steps_; }

 private:
  struct EnvNode {
    Sym name;
    CellRef cell;
    std::shared_ptr<const EnvNode> next;
  };
  using EnvPtr = std::shared_ptr<const EnvNode>;

  struct Frame {
    const GoalAst* goal;
    EnvPtr env;
    uint32_t universe;
    RecordId ctx;
    uint32_t depth;
  };

  struct GoalNode {
    Frame frame;
    std::shared_ptr<const GoalNode> next;
  };
  using Goals = std::shared_ptr<const GoalNode>;

  // Clause-alternative cursor: remaining clauses for an atomic goal,
  // spanning context records via the next_clause chain.
  struct ClauseAlt {
    CellRef goal_term;
    PredKey pred;
    uint32_t universe;
    RecordId goal_ctx;  // context the atom (and clause bodies) run under
    uint32_t depth;
    RecordId rec;       // record currently supplying clauses
    uint32_t group;     // clause group index within that record's unit
    size_t clause_idx;  // next clause within the group
  };

  struct OrAlt {
    Frame right;
  };

  struct ChoicePoint {
    TrailMark trail;
    uint32_t heap;
    Goals cont;
    bool is_or;
    OrAlt or_alt;
    ClauseAlt clause_alt;
  };

  // Clause groups for one program unit (the global program or one
  // implication antecedent), keyed by predicate in first-occurrence order.
  struct Unit {
    struct Group {
      PredKey pred;
      std::vector<const ClauseAst*> clauses;
    };
    std::vector<Group> groups;
    ImplTable table;  // entry code = group index, unit_ref = unit id
  };

  const Unit& get_unit(const void* key, const std::vector<ClauseAst>& clauses);
  uint32_t capture_closure(const std::vector<ClauseAst>& clauses, const EnvPtr& env);
  CellRef build_term(const TermAst& t, const EnvPtr& env,
                     const std::vector<std::pair<Sym, CellRef>>* extra);
  CellRef lookup_env(Sym name, const EnvPtr& env,
                     const std::vector<std::pair<Sym, CellRef>>* extra);

  enum class StepResult { Running, FoundAnswer, Done };
  StepResult step();
  bool backtrack();
  bool try_clauses(ClauseAlt alt, Goals cont);
  void trace_rule(int rule, uint32_t universe, const GoalAst& g);

  Store& store_;
  Config cfg_;
  ContextArena ctx_;
  std::vector<std::unique_ptr<Unit>> units_;
  std::map<const void*, uint32_t> unit_cache_;
  std::vector<std::vector<std::pair<Sym, CellRef>>> closures_;
  ProgramAst program_;
  RecordId root_ = kNoRecord;

  QueryAst query_;
  std::vector<std::pair<std::string, CellRef>> answer_cells_;
  Goals goals_;
  std::vector<ChoicePoint> cps_;
  bool started_ = false;
  bool finished_ = false;
  bool need_backtrack_ = false;
  bool limit_hit_ = false;
  EndReason end_reason_ = EndReason::Exhausted;
  uint64_t steps_ = 0;
  RecordId last_atom_ctx_ = kNoRecord;
};

}  // namespace harrop
