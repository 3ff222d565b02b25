#include "harrop/interpreter.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <stdexcept>

namespace harrop {

std::string format_answer(const Store& store, const Answer& a, PrintOptions opts) {
  if (a.bindings.empty()) return "yes";
  TermPrinter tp(store, opts);
  std::string out;
  for (size_t i = 0; i < a.bindings.size(); ++i) {
    if (i) out += ", ";
    out += a.bindings[i].first;
    out += " = ";
    out += tp.print(a.bindings[i].second);
  }
  return out;
}

Interpreter::Interpreter(Store& store, const ProgramAst& program, Config cfg)
    : store_(store), cfg_(cfg), program_(program) {
  const Unit& u = get_unit(&program_, program_.clauses);
  root_ = ctx_.make_root(&u.table, 0);
  closures_.emplace_back();  // closure id 0: empty (global clauses are closed)
}

const Interpreter::Unit& Interpreter::get_unit(const void* key,
                                               const std::vector<ClauseAst>& clauses) {
  auto it = unit_cache_.find(key);
  if (it != unit_cache_.end()) return *units_[it->second];
  auto unit = std::make_unique<Unit>();
  for (const auto& c : clauses) {
    PredKey pred{store_.syms().intern(c.head.name),
                 static_cast<uint32_t>(c.head.args.size())};
    auto g = std::find_if(unit->groups.begin(), unit->groups.end(),
                          [&](const Unit::Group& gr) { return gr.pred == pred; });
    if (g == unit->groups.end()) {
      unit->groups.push_back({pred, {&c}});
    } else {
      g->clauses.push_back(&c);
    }
  }
  std::vector<ImplTable::Entry> entries;
  for (uint32_t i = 0; i < unit->groups.size(); ++i)
    entries.push_back({unit->groups[i].pred, i});
  unit->table = ImplTable(std::move(entries));
  uint32_t id = static_cast<uint32_t>(units_.size());
  unit->table.unit_ref = id;
  units_.push_back(std::move(unit));
  unit_cache_.emplace(key, id);
  return *units_.back();
}

uint32_t Interpreter::capture_closure(const std::vector<ClauseAst>& clauses,
                                      const EnvPtr& env) {
  std::vector<std::pair<Sym, CellRef>> pairs;
  for (const auto& c : clauses) {
    for (const auto& v : c.free_vars) {
      Sym s = store_.syms().intern(v);
      bool present = std::any_of(pairs.begin(), pairs.end(),
                                 [&](const auto& p) { return p.first == s; });
      if (!present) pairs.emplace_back(s, lookup_env(s, env, nullptr));
    }
  }
  closures_.push_back(std::move(pairs));
  return static_cast<uint32_t>(closures_.size() - 1);
}

CellRef Interpreter::lookup_env(Sym name, const EnvPtr& env,
                                const std::vector<std::pair<Sym, CellRef>>* extra) {
  if (extra) {
    for (const auto& [s, c] : *extra)
      if (s == name) return c;
  }
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return n->cell;
  throw std::logic_error("unbound variable in scope-checked goal: " +
                         store_.syms().name(name));
}

CellRef Interpreter::build_term(const TermAst& t, const EnvPtr& env,
                                const std::vector<std::pair<Sym, CellRef>>* extra) {
  switch (t.kind) {
    case TermAst::Kind::Var:
      return lookup_env(store_.syms().intern(t.name), env, extra);
    case TermAst::Kind::Const:
      return store_.user_const(store_.syms().intern(t.name));
    case TermAst::Kind::Struct: {
      // Build arguments first, then the flat structure referencing them.
      std::vector<CellRef> args;
      for (const auto& a : t.args) args.push_back(build_term(a, env, extra));
      CellRef s = store_.open_struct(store_.syms().intern(t.name),
                                     static_cast<uint32_t>(t.args.size()));
      for (CellRef a : args) store_.push_ref(a);
      return s;
    }
  }
  return kNoCell;
}

void Interpreter::start(const QueryAst& query) {
  query_ = query;
  goals_ = nullptr;
  cps_.clear();
  started_ = true;
  finished_ = false;
  need_backtrack_ = false;
  limit_hit_ = false;
  end_reason_ = EndReason::Exhausted;
  steps_ = 0;
  answer_cells_.clear();

  // Free query variables become answer variables: fresh cells at tag 1.
  EnvPtr env;
  for (const auto& v : query_.answer_vars) {
    CellRef cell = store_.fresh_var(1);
    answer_cells_.emplace_back(v, cell);
    auto node = std::make_shared<EnvNode>();
    node->name = store_.syms().intern(v);
    node->cell = cell;
    node->next = env;
    env = node;
  }
  Frame f{&query_.goal, env, 1, root_, 0};
  goals_ = std::make_shared<GoalNode>(GoalNode{f, nullptr});
}

void Interpreter::trace_rule(int rule, uint32_t universe, const GoalAst& g) {
  if (cfg_.trace)
    *cfg_.trace << "RULE " << rule << "  I=" << universe << "  goal=" << print_goal(g)
                << "\n";
}

std::optional<Answer> Interpreter::next() {
  assert(started_);
  if (finished_) return std::nullopt;
  for (;;) {
    StepResult r = step();
    if (r == StepResult::FoundAnswer) {
      Answer a;
      a.bindings = answer_cells_;
      return a;
    }
    if (r == StepResult::Done) {
      finished_ = true;
      end_reason_ = limit_hit_ ? EndReason::Limit : EndReason::Exhausted;
      return std::nullopt;
    }
  }
}

Interpreter::StepResult Interpreter::step() {
  if (need_backtrack_) {
    need_backtrack_ = false;
    if (!backtrack()) return StepResult::Done;
    return StepResult::Running;
  }
  if (!goals_) {
    // Empty goal list: success. Resuming enumerates the next proof.
    need_backtrack_ = true;
    return StepResult::FoundAnswer;
  }
  if (cfg_.max_steps && steps_ >= cfg_.max_steps) {
    limit_hit_ = true;
    return StepResult::Done;
  }
  ++steps_;

  Frame f = goals_->frame;
  Goals rest = goals_->next;
  const GoalAst& g = *f.goal;
  switch (g.kind) {
    case GoalAst::Kind::True:
      goals_ = rest;
      return StepResult::Running;

    case GoalAst::Kind::And: {
      trace_rule(1, f.universe, g);
      Frame right{&g.sub[1], f.env, f.universe, f.ctx, f.depth};
      Frame left{&g.sub[0], f.env, f.universe, f.ctx, f.depth};
      goals_ = std::make_shared<GoalNode>(
          GoalNode{left, std::make_shared<GoalNode>(GoalNode{right, rest})});
      return StepResult::Running;
    }

    case GoalAst::Kind::Or: {
      trace_rule(2, f.universe, g);
      ChoicePoint cp;
      cp.trail = store_.mark();
      cp.heap = store_.heap_size();
      cp.cont = rest;
      cp.is_or = true;
      cp.or_alt.right = Frame{&g.sub[1], f.env, f.universe, f.ctx, f.depth};
      cps_.push_back(std::move(cp));
      Frame left{&g.sub[0], f.env, f.universe, f.ctx, f.depth};
      goals_ = std::make_shared<GoalNode>(GoalNode{left, rest});
      return StepResult::Running;
    }

    case GoalAst::Kind::Exists: {
      trace_rule(3, f.universe, g);
      CellRef cell = store_.fresh_var(f.universe);
      auto node = std::make_shared<EnvNode>();
      node->name = store_.syms().intern(g.var);
      node->cell = cell;
      node->next = f.env;
      Frame body{&g.sub[0], node, f.universe, f.ctx, f.depth};
      goals_ = std::make_shared<GoalNode>(GoalNode{body, rest});
      return StepResult::Running;
    }

    case GoalAst::Kind::Implies: {
      trace_rule(4, f.universe, g);
      const Unit& u = get_unit(&g, g.antecedent);
      uint32_t closure = capture_closure(g.antecedent, f.env);
      RecordId rec = ctx_.push(&u.table, closure, f.ctx);
      Frame body{&g.sub[0], f.env, f.universe, rec, f.depth};
      goals_ = std::make_shared<GoalNode>(GoalNode{body, rest});
      return StepResult::Running;
    }

    case GoalAst::Kind::Forall: {
      trace_rule(5, f.universe, g);
      CellRef cell = store_.fresh_gen_const(f.universe + 1);
      auto node = std::make_shared<EnvNode>();
      node->name = store_.syms().intern(g.var);
      node->cell = cell;
      node->next = f.env;
      Frame body{&g.sub[0], node, f.universe + 1, f.ctx, f.depth};
      goals_ = std::make_shared<GoalNode>(GoalNode{body, rest});
      return StepResult::Running;
    }

    case GoalAst::Kind::Atom: {
      if (cfg_.max_depth && f.depth >= cfg_.max_depth) {
        limit_hit_ = true;
        if (!backtrack()) return StepResult::Done;
        return StepResult::Running;
      }
      CellRef term = build_term(g.atom, f.env, nullptr);
      PredKey pred{store_.syms().intern(g.atom.name),
                   static_cast<uint32_t>(g.atom.args.size())};
      last_atom_ctx_ = f.ctx;
      ContextArena::Lookup lk = ctx_.lookup(pred, f.ctx);
      if (!lk.found) {
        if (cfg_.trace)
          *cfg_.trace << "FAIL no-definition  I=" << f.universe
                      << "  goal=" << print_goal(g) << "\n";
        if (!backtrack()) return StepResult::Done;
        return StepResult::Running;
      }
      ClauseAlt alt{term, pred, f.universe, f.ctx, f.depth, lk.record, lk.code, 0};
      if (!try_clauses(alt, rest)) {
        if (!backtrack()) return StepResult::Done;
      }
      return StepResult::Running;
    }
  }
  return StepResult::Running;
}

bool Interpreter::try_clauses(ClauseAlt alt, Goals cont) {
  for (;;) {
    const ImplRecord& rec = ctx_.record(alt.rec);
    const Unit& unit = *units_[rec.table->unit_ref];
    const Unit::Group& group = unit.groups[alt.group];
    if (alt.clause_idx >= group.clauses.size()) {
      // This record's clauses for the predicate are exhausted; continue
      // with the definition visible from the enclosing context.
      uint32_t off = rec.table->offset_of(alt.pred);
      ImplRecord::Next nx = ctx_.next_clause(alt.rec, off);
      if (nx.code == kFailCode) return false;
      alt.rec = nx.record;
      alt.group = nx.code;
      alt.clause_idx = 0;
      continue;
    }
    const ClauseAst& clause = *group.clauses[alt.clause_idx++];

    TrailMark m = store_.mark();
    uint32_t heap_m = store_.heap_size();

    // New tagged instance relative to the goal's universe: quantified
    // variables become fresh cells tagged I; tied variables come from the
    // closure captured when the antecedent was pushed.
    const std::vector<std::pair<Sym, CellRef>>& closure = closures_[rec.payload];
    std::vector<std::pair<Sym, CellRef>> inst = closure;
    for (const auto& v : clause.explicit_quantified)
      inst.emplace_back(store_.syms().intern(v), store_.fresh_var(alt.universe));
    CellRef head = build_term(clause.head, nullptr, &inst);

    UnifyOutcome u = store_.unify(alt.goal_term, head);
    if (!u.ok) {
      if (cfg_.trace) {
        PrintOptions po = cfg_.print_opts;
        po.show_tags = true;
        *cfg_.trace << "FAIL " << fail_reason_name(u.reason) << "  I=" << alt.universe
                    << "  goal=" << print_store_term(store_, alt.goal_term, po)
                    << "  head=" << print_store_term(store_, head, po) << "\n";
      }
      store_.undo_to(m);
      store_.truncate_heap(heap_m);
      continue;
    }

    if (cfg_.trace) {
      GoalAst atom_goal = GoalAst::mk_atom(clause.head);
      trace_rule(clause.body ? 6 : 7, alt.universe, atom_goal);
    }

    // Record the remaining alternatives before committing to this clause.
    ChoicePoint cp;
    cp.trail = m;
    cp.heap = heap_m;
    cp.cont = cont;
    cp.is_or = false;
    cp.clause_alt = alt;
    cps_.push_back(std::move(cp));

    if (clause.body) {
      EnvPtr env;
      for (const auto& [s, c] : inst) {
        auto node = std::make_shared<EnvNode>();
        node->name = s;
        node->cell = c;
        node->next = env;
        env = node;
      }
      Frame body{clause.body.get(), env, alt.universe, alt.goal_ctx, alt.depth + 1};
      goals_ = std::make_shared<GoalNode>(GoalNode{body, cont});
    } else {
      goals_ = cont;
    }
    return true;
  }
}

bool Interpreter::backtrack() {
  while (!cps_.empty()) {
    ChoicePoint cp = cps_.back();
    cps_.pop_back();
    store_.undo_to(cp.trail);
    store_.truncate_heap(cp.heap);
    if (cp.is_or) {
      goals_ = std::make_shared<GoalNode>(GoalNode{cp.or_alt.right, cp.cont});
      return true;
    }
    ctx_.restore(cp.clause_alt.goal_ctx);
    if (try_clauses(cp.clause_alt, cp.cont)) return true;
  }
  return false;
}

}  // namespace harrop
