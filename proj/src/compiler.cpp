#include "harrop/compiler.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <optional>

namespace harrop {

namespace {

bool is_list_functor(const TermAst& t) {
  return t.name == "." && t.args.size() == 2;
}

bool contains_forall(const GoalAst& g);

/// One variable binding instance of a clause (clause-level variable, tied
/// variable from the enclosing clause, or a body quantifier binder), with
/// everything the classifier and register allocator need to know about it.
struct VarInfo {
  std::string name;
  enum class Origin { Top, Tied, BExists, BForall } origin = Origin::Top;
  uint32_t ord = 0;  // allocation order: binder site or first occurrence
  bool seen = false;
  int first_chunk = -1, last_chunk = -1;
  bool in_antecedent = false;  // occurs free in a nested antecedent clause
  bool in_or = false;
  bool under_scope = false;  // BExists binder under a forall/implies body
  // First-occurrence positions used for register targeting (1-based,
  // 0 = none). call0 is the first body atom outside any disjunction.
  uint32_t head_top = 0, head_embed = 0, call0_top = 0;
  // Results of classification / allocation / emission.
  bool permanent = false;
  Reg reg;
  uint32_t tied_slot = 0;   // environment index for `initialize`
  bool materialized = false;
  bool heap_safe = true;    // set_value vs set_local_value
};

class Compiler {
 public:
  explicit Compiler(Symtab& syms) : syms_(syms) { img_.tables.emplace_back(); }

  CodeImage run(const ProgramAst& program, const QueryAst& query);

  uint32_t here() const { return static_cast<uint32_t>(img_.code.size()); }
  uint32_t emit(Instr ins) {
    img_.code.push_back(ins);
    return here() - 1;
  }
  uint32_t new_table() {
    img_.tables.emplace_back();
    return static_cast<uint32_t>(img_.tables.size() - 1);
  }
  Sym intern(const std::string& s) { return syms_.intern(s); }

  struct PendingUnit {
    uint32_t table;
    const std::vector<ClauseAst>* clauses;
    std::map<std::string, uint32_t> tied_slots;
  };
  std::deque<PendingUnit> pending_;

  Symtab& syms_;
  CodeImage img_;

 private:
  void compile_unit(uint32_t table, const std::vector<const ClauseAst*>& clauses,
                    bool global, const std::map<std::string, uint32_t>* tied_slots);
  void compile_query(const QueryAst& query);
  void drain_pending();
};

/// Compiles one clause (or the query): analysis pass resolves variable
/// scopes, classifies variables and allocates registers; the emission
/// pass re-walks the clause in the same order and produces code.
class ClauseCompiler {
 public:
  ClauseCompiler(Compiler& comp, const TermAst* head, const GoalAst* body,
                 const std::vector<std::string>& top_vars,
                 const std::vector<std::string>& tied_vars,
                 const std::map<std::string, uint32_t>* tied_slots, bool is_query)
      : comp_(comp),
        head_(head),
        body_(body),
        top_vars_(top_vars),
        tied_vars_(tied_vars),
        tied_slots_(tied_slots),
        is_query_(is_query) {}

  void compile() {
    analyze();
    emit_code();
  }

  uint32_t env_size() const { return perm_count_; }
  uint32_t slot_of(const std::string& name) const {
    for (const auto& v : vars_)
      if (v.name == name && v.permanent) return v.reg.idx;
    throw compile_error("no slot for variable " + name);
  }

 private:
  // ---- shared scope machinery ----
  int resolve(const std::string& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == n) return it->second;
    throw compile_error("unbound variable " + n + " in clause body");
  }
  int new_var(const std::string& name, VarInfo::Origin origin) {
    VarInfo v;
    v.name = name;
    v.origin = origin;
    vars_.push_back(std::move(v));
    return static_cast<int>(vars_.size() - 1);
  }
  void push_base_scope() {
    scope_.clear();
    int id = 0;
    for (size_t i = 0; i < top_vars_.size() + tied_vars_.size(); ++i, ++id)
      scope_.emplace_back(vars_[id].name, id);
  }

  // ---- analysis ----
  enum class Mode { Head, Call0, Other };

  void analyze();
  void a_term(const TermAst& t, Mode mode, uint32_t top_pos, bool embedded);
  void a_goal(const GoalAst& g);
  void occur(int id);
  void classify_and_allocate();
  const GoalAst* find_lco(const GoalAst* g) const;

  // ---- emission ----
  void emit_code();
  void emit_head();
  void emit_goal(const GoalAst& g);
  void emit_atom(const TermAst& t, bool last);
  void emit_get_struct(Reg root, const TermAst& t);
  Reg emit_put_struct(const TermAst& t, std::optional<Reg> target);
  Reg scratch() { return Reg::x(scratch_next_++); }

  Compiler& comp_;
  const TermAst* head_;
  const GoalAst* body_;
  const std::vector<std::string>& top_vars_;
  const std::vector<std::string>& tied_vars_;
  const std::map<std::string, uint32_t>* tied_slots_;
  bool is_query_;

  std::vector<VarInfo> vars_;
  std::vector<std::pair<std::string, int>> scope_;
  std::vector<int> binder_seq_;
  size_t binder_cursor_ = 0;

  uint32_t ord_ = 0;
  int chunk_ = 0;
  int atom_count_ = 0;
  int or_depth_ = 0;
  int scope_depth_ = 0;
  uint32_t max_arity_ = 0;
  uint32_t scratch_next_ = 1;
  uint32_t head_arity_ = 0;
  uint32_t perm_count_ = 0;
  const GoalAst* lco_ = nullptr;
  bool needs_env_ = false;
  bool ended_with_execute_ = false;
};

// ---------------------------------------------------------------- analysis

void ClauseCompiler::occur(int id) {
  VarInfo& v = vars_[static_cast<size_t>(id)];
  if (!v.seen) {
    v.seen = true;
    v.ord = ord_++;
  }
  if (v.first_chunk < 0) v.first_chunk = chunk_;
  v.last_chunk = chunk_;
  if (or_depth_ > 0) v.in_or = true;
}

void ClauseCompiler::a_term(const TermAst& t, Mode mode, uint32_t top_pos, bool embedded) {
  switch (t.kind) {
    case TermAst::Kind::Var: {
      int id = resolve(t.name);
      occur(id);
      VarInfo& v = vars_[static_cast<size_t>(id)];
      if (mode == Mode::Head) {
        if (!embedded && !v.head_top && !v.head_embed) v.head_top = top_pos;
        else if (embedded && !v.head_top && !v.head_embed) v.head_embed = top_pos;
      } else if (mode == Mode::Call0 && !embedded && !v.call0_top) {
        v.call0_top = top_pos;
      }
      break;
    }
    case TermAst::Kind::Const:
      break;
    case TermAst::Kind::Struct:
      for (const auto& a : t.args) a_term(a, mode, top_pos, true);
      break;
  }
}

void ClauseCompiler::a_goal(const GoalAst& g) {
  switch (g.kind) {
    case GoalAst::Kind::True:
      break;
    case GoalAst::Kind::Atom: {
      uint32_t n = static_cast<uint32_t>(g.atom.args.size());
      max_arity_ = std::max(max_arity_, n);
      Mode m = (atom_count_ == 0 && or_depth_ == 0) ? Mode::Call0 : Mode::Other;
      for (uint32_t j = 0; j < n; ++j) a_term(g.atom.args[j], m, j + 1, false);
      ++atom_count_;
      ++chunk_;
      break;
    }
    case GoalAst::Kind::And:
      a_goal(g.sub[0]);
      a_goal(g.sub[1]);
      break;
    case GoalAst::Kind::Or:
      ++or_depth_;
      a_goal(g.sub[0]);
      a_goal(g.sub[1]);
      --or_depth_;
      break;
    case GoalAst::Kind::Exists: {
      int id = new_var(g.var, VarInfo::Origin::BExists);
      VarInfo& v = vars_[static_cast<size_t>(id)];
      // A variable used after the universe index has been raised must carry
      // the index in force at its binder, so it needs a slot that is tagged
      // right away rather than a register materialized at first use.
      v.under_scope = scope_depth_ > 0 || contains_forall(g.sub[0]);
      v.seen = true;
      v.ord = ord_++;
      if (or_depth_ > 0) v.in_or = true;
      binder_seq_.push_back(id);
      scope_.emplace_back(g.var, id);
      a_goal(g.sub[0]);
      scope_.pop_back();
      break;
    }
    case GoalAst::Kind::Forall: {
      int id = new_var(g.var, VarInfo::Origin::BForall);
      VarInfo& v = vars_[static_cast<size_t>(id)];
      v.seen = true;
      v.ord = ord_++;
      if (or_depth_ > 0) v.in_or = true;
      binder_seq_.push_back(id);
      scope_.emplace_back(g.var, id);
      ++scope_depth_;
      a_goal(g.sub[0]);
      --scope_depth_;
      scope_.pop_back();
      break;
    }
    case GoalAst::Kind::Implies: {
      for (const auto& cl : g.antecedent) {
        for (const auto& n : cl.free_vars) {
          int id = resolve(n);
          occur(id);
          vars_[static_cast<size_t>(id)].in_antecedent = true;
        }
      }
      ++scope_depth_;
      a_goal(g.sub[0]);
      --scope_depth_;
      break;
    }
  }
}

bool contains_forall(const GoalAst& g) {
  if (g.kind == GoalAst::Kind::Forall) return true;
  for (const auto& s : g.sub)
    if (contains_forall(s)) return true;
  return false;
}

const GoalAst* ClauseCompiler::find_lco(const GoalAst* g) const {
  while (g) {
    switch (g->kind) {
      case GoalAst::Kind::Atom:
        return g;
      case GoalAst::Kind::And:
        g = &g->sub[1];
        break;
      case GoalAst::Kind::Exists:
        g = &g->sub[0];
        break;
      default:
        return nullptr;
    }
  }
  return nullptr;
}

void ClauseCompiler::classify_and_allocate() {
  for (VarInfo& v : vars_) {
    bool spans = v.first_chunk >= 0 && v.first_chunk != v.last_chunk;
    v.permanent = v.in_antecedent || v.origin == VarInfo::Origin::BForall ||
                  (v.origin == VarInfo::Origin::BExists && v.under_scope) || spans ||
                  v.in_or || (is_query_ && v.origin == VarInfo::Origin::Top);
  }
  // Permanent slots in first-occurrence (binder site) order.
  std::vector<int> perms;
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].permanent) perms.push_back(static_cast<int>(i));
  std::sort(perms.begin(), perms.end(), [&](int a, int b) {
    return vars_[static_cast<size_t>(a)].ord < vars_[static_cast<size_t>(b)].ord;
  });
  uint32_t slot = 1;
  for (int id : perms) vars_[static_cast<size_t>(id)].reg = Reg::y(slot++);
  perm_count_ = static_cast<uint32_t>(perms.size());

  scratch_next_ = max_arity_ + 1;
  std::vector<int> temps;
  for (size_t i = 0; i < vars_.size(); ++i)
    if (!vars_[i].permanent && vars_[i].seen) temps.push_back(static_cast<int>(i));
  std::sort(temps.begin(), temps.end(), [&](int a, int b) {
    return vars_[static_cast<size_t>(a)].ord < vars_[static_cast<size_t>(b)].ord;
  });
  for (int id : temps) {
    VarInfo& v = vars_[static_cast<size_t>(id)];
    if (v.origin == VarInfo::Origin::Tied) {
      v.reg = scratch();
      continue;
    }
    uint32_t j = v.call0_top;
    if (j != 0) {
      // Target the argument register of the first body call when loading
      // it during head processing cannot clobber a pending head argument.
      if (v.head_top) {
        v.reg = (j == v.head_top || j <= v.head_top || j > head_arity_)
                    ? Reg::a(j)
                    : scratch();
      } else if (v.head_embed) {
        v.reg = (j <= v.head_embed || j > head_arity_) ? Reg::a(j) : scratch();
      } else {
        v.reg = Reg::a(j);
      }
    } else {
      v.reg = scratch();
    }
  }
}

void ClauseCompiler::analyze() {
  for (const auto& n : top_vars_) new_var(n, VarInfo::Origin::Top);
  for (const auto& n : tied_vars_) {
    int id = new_var(n, VarInfo::Origin::Tied);
    if (!tied_slots_)
      throw compile_error("free variable " + n + " outside any implication");
    auto it = tied_slots_->find(n);
    if (it == tied_slots_->end())
      throw compile_error("free variable " + n + " has no enclosing slot");
    vars_[static_cast<size_t>(id)].tied_slot = it->second;
  }
  push_base_scope();
  if (head_) {
    head_arity_ = static_cast<uint32_t>(head_->args.size());
    max_arity_ = head_arity_;
    for (uint32_t i = 0; i < head_arity_; ++i)
      a_term(head_->args[i], Mode::Head, i + 1, false);
  }
  if (body_ && body_->kind != GoalAst::Kind::True) a_goal(*body_);
  classify_and_allocate();

  bool has_body = body_ && body_->kind != GoalAst::Kind::True;
  lco_ = (has_body && !is_query_) ? find_lco(body_) : nullptr;
  if (!has_body) {
    needs_env_ = false;
  } else if (is_query_) {
    needs_env_ = true;
  } else {
    // No environment needed when the body is just the last call (possibly
    // under existential binders of temporaries) and has no permanents.
    bool trivial = false;
    if (perm_count_ == 0 && lco_) {
      const GoalAst* g = body_;
      while (g->kind == GoalAst::Kind::Exists) g = &g->sub[0];
      trivial = g == lco_;
    }
    needs_env_ = !trivial;
  }
}

// ---------------------------------------------------------------- emission

void ClauseCompiler::emit_code() {
  push_base_scope();
  binder_cursor_ = 0;
  if (needs_env_) comp_.emit({.op = Op::Allocate, .n = perm_count_});
  for (size_t i = 0; i < tied_vars_.size(); ++i) {
    VarInfo& v = vars_[top_vars_.size() + i];
    comp_.emit({.op = Op::Initialize, .a = v.reg, .n = v.tied_slot});
    v.materialized = true;
    v.heap_safe = false;
  }
  if (head_) emit_head();
  if (body_ && body_->kind != GoalAst::Kind::True) emit_goal(*body_);
  if (!ended_with_execute_) {
    if (is_query_) {
      comp_.emit({.op = Op::Stop});
    } else {
      if (needs_env_) comp_.emit({.op = Op::Deallocate});
      comp_.emit({.op = Op::Proceed});
    }
  }
}

void ClauseCompiler::emit_head() {
  for (uint32_t i = 1; i <= head_arity_; ++i) {
    const TermAst& t = head_->args[i - 1];
    switch (t.kind) {
      case TermAst::Kind::Var: {
        VarInfo& v = vars_[static_cast<size_t>(resolve(t.name))];
        if (!v.materialized) {
          if (!(v.reg == Reg::a(i)))
            comp_.emit({.op = Op::GetVariable, .a = v.reg, .b = Reg::a(i)});
          v.materialized = true;
          v.heap_safe = false;  // value comes from the caller's register
        } else {
          comp_.emit({.op = Op::GetValue, .a = v.reg, .b = Reg::a(i)});
        }
        break;
      }
      case TermAst::Kind::Const:
        comp_.emit({.op = Op::GetConstant, .b = Reg::a(i), .sym = comp_.intern(t.name)});
        break;
      case TermAst::Kind::Struct:
        emit_get_struct(Reg::a(i), t);
        break;
    }
  }
}

void ClauseCompiler::emit_get_struct(Reg root, const TermAst& t) {
  std::deque<std::pair<Reg, const TermAst*>> q;
  q.emplace_back(root, &t);
  while (!q.empty()) {
    auto [r, term] = q.front();
    q.pop_front();
    if (is_list_functor(*term)) {
      comp_.emit({.op = Op::GetList, .b = r});
    } else {
      comp_.emit({.op = Op::GetStructure,
                  .b = r,
                  .sym = comp_.intern(term->name),
                  .arity = static_cast<uint32_t>(term->args.size())});
    }
    for (const TermAst& a : term->args) {
      switch (a.kind) {
        case TermAst::Kind::Var: {
          VarInfo& v = vars_[static_cast<size_t>(resolve(a.name))];
          if (!v.materialized) {
            comp_.emit({.op = Op::UnifyVariable, .a = v.reg});
            v.materialized = true;
            v.heap_safe = true;
          } else {
            comp_.emit({.op = v.heap_safe ? Op::UnifyValue : Op::UnifyLocalValue,
                        .a = v.reg});
          }
          break;
        }
        case TermAst::Kind::Const:
          comp_.emit({.op = Op::UnifyConstant, .sym = comp_.intern(a.name)});
          break;
        case TermAst::Kind::Struct: {
          Reg s = scratch();
          comp_.emit({.op = Op::UnifyVariable, .a = s});
          q.emplace_back(s, &a);
          break;
        }
      }
    }
  }
}

Reg ClauseCompiler::emit_put_struct(const TermAst& t, std::optional<Reg> target) {
  std::vector<std::optional<Reg>> sub(t.args.size());
  for (size_t i = 0; i < t.args.size(); ++i)
    if (t.args[i].kind == TermAst::Kind::Struct)
      sub[i] = emit_put_struct(t.args[i], std::nullopt);
  Reg dst = target ? *target : scratch();
  if (is_list_functor(t)) {
    comp_.emit({.op = Op::PutList, .b = dst});
  } else {
    comp_.emit({.op = Op::PutStructure,
                .b = dst,
                .sym = comp_.intern(t.name),
                .arity = static_cast<uint32_t>(t.args.size())});
  }
  for (size_t i = 0; i < t.args.size(); ++i) {
    const TermAst& a = t.args[i];
    switch (a.kind) {
      case TermAst::Kind::Var: {
        VarInfo& v = vars_[static_cast<size_t>(resolve(a.name))];
        if (!v.materialized) {
          // Permanent slots pre-exist in the environment: reference them.
          comp_.emit({.op = v.reg.is_perm() ? Op::SetLocalValue : Op::SetVariable,
                      .a = v.reg});
          v.materialized = true;
          v.heap_safe = true;
        } else {
          comp_.emit({.op = v.heap_safe ? Op::SetValue : Op::SetLocalValue, .a = v.reg});
        }
        break;
      }
      case TermAst::Kind::Const:
        comp_.emit({.op = Op::SetConstant, .sym = comp_.intern(a.name)});
        break;
      case TermAst::Kind::Struct:
        comp_.emit({.op = Op::SetValue, .a = *sub[i]});
        break;
    }
  }
  return dst;
}

void ClauseCompiler::emit_atom(const TermAst& t, bool last) {
  uint32_t n = static_cast<uint32_t>(t.args.size());
  for (uint32_t j = 1; j <= n; ++j) {
    const TermAst& a = t.args[j - 1];
    switch (a.kind) {
      case TermAst::Kind::Var: {
        VarInfo& v = vars_[static_cast<size_t>(resolve(a.name))];
        if (!v.materialized) {
          comp_.emit({.op = Op::PutVariable, .a = v.reg, .b = Reg::a(j)});
          v.materialized = true;
          v.heap_safe = true;
        } else if (!(v.reg == Reg::a(j))) {
          comp_.emit({.op = Op::PutValue, .a = v.reg, .b = Reg::a(j)});
        }
        break;
      }
      case TermAst::Kind::Const:
        comp_.emit({.op = Op::PutConstant, .b = Reg::a(j), .sym = comp_.intern(a.name)});
        break;
      case TermAst::Kind::Struct:
        emit_put_struct(a, Reg::a(j));
        break;
    }
  }
  Sym name = comp_.intern(t.name);
  if (last) {
    if (needs_env_) comp_.emit({.op = Op::Deallocate});
    comp_.emit({.op = Op::Execute, .sym = name, .arity = n});
    ended_with_execute_ = true;
  } else {
    comp_.emit({.op = Op::Call, .n = perm_count_, .sym = name, .arity = n});
  }
}

void ClauseCompiler::emit_goal(const GoalAst& g) {
  switch (g.kind) {
    case GoalAst::Kind::True:
      break;
    case GoalAst::Kind::Atom:
      emit_atom(g.atom, &g == lco_);
      break;
    case GoalAst::Kind::And:
      emit_goal(g.sub[0]);
      emit_goal(g.sub[1]);
      break;
    case GoalAst::Kind::Or: {
      uint32_t try_at = comp_.emit({.op = Op::TryMeElse});
      emit_goal(g.sub[0]);
      uint32_t jump_at = comp_.emit({.op = Op::Jump});
      comp_.img_.code[try_at].target = comp_.here();
      comp_.emit({.op = Op::TrustMe});
      emit_goal(g.sub[1]);
      comp_.img_.code[jump_at].target = comp_.here();
      break;
    }
    case GoalAst::Kind::Exists: {
      VarInfo& v = vars_[static_cast<size_t>(binder_seq_[binder_cursor_++])];
      scope_.emplace_back(g.var, static_cast<int>(&v - vars_.data()));
      if (v.permanent) {
        comp_.emit({.op = Op::SetExistTag, .a = v.reg});
        v.materialized = true;
        v.heap_safe = true;
      }
      emit_goal(g.sub[0]);
      scope_.pop_back();
      break;
    }
    case GoalAst::Kind::Forall: {
      VarInfo& v = vars_[static_cast<size_t>(binder_seq_[binder_cursor_++])];
      scope_.emplace_back(g.var, static_cast<int>(&v - vars_.data()));
      comp_.emit({.op = Op::IncrUniverse});
      comp_.emit({.op = Op::SetUnivTag, .a = v.reg});
      v.materialized = true;
      v.heap_safe = true;
      emit_goal(g.sub[0]);
      comp_.emit({.op = Op::DecrUniverse});
      scope_.pop_back();
      break;
    }
    case GoalAst::Kind::Implies: {
      uint32_t tidx = comp_.new_table();
      std::map<std::string, uint32_t> tied;
      for (const auto& cl : g.antecedent) {
        for (const auto& n : cl.free_vars) {
          const VarInfo& v = vars_[static_cast<size_t>(resolve(n))];
          assert(v.permanent);
          tied[n] = v.reg.idx;
        }
      }
      comp_.pending_.push_back({tidx, &g.antecedent, std::move(tied)});
      comp_.emit({.op = Op::PushImplPoint, .n = tidx, .n2 = perm_count_});
      emit_goal(g.sub[0]);
      comp_.emit({.op = Op::PopImplPoint});
      break;
    }
  }
}

// ------------------------------------------------------------- unit driver

void Compiler::compile_unit(uint32_t table, const std::vector<const ClauseAst*>& clauses,
                            bool global, const std::map<std::string, uint32_t>* tied_slots) {
  struct Group {
    std::string name;
    uint32_t arity;
    std::vector<const ClauseAst*> cls;
  };
  std::vector<Group> groups;
  for (const ClauseAst* c : clauses) {
    std::string name = c->head.name;
    uint32_t arity = static_cast<uint32_t>(c->head.args.size());
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.name == name && g.arity == arity;
    });
    if (it == groups.end())
      groups.push_back({name, arity, {c}});
    else
      it->cls.push_back(c);
  }

  auto compile_clause = [&](const ClauseAst* c) {
    ClauseCompiler cc(*this, &c->head, c->body.get(), c->explicit_quantified,
                      c->free_vars, tied_slots, false);
    cc.compile();
  };

  for (size_t gi = 0; gi < groups.size(); ++gi) {
    Group& g = groups[gi];
    uint32_t entry = here();
    img_.tables[table].entries.push_back({intern(g.name), g.arity, entry});
    img_.labels[entry] = g.name;
    uint32_t offset = static_cast<uint32_t>(gi + 1);
    size_t k = g.cls.size();
    if (global && k == 1) {
      compile_clause(g.cls[0]);
    } else if (global) {
      uint32_t prev = emit({.op = Op::TryMeElse});
      compile_clause(g.cls[0]);
      for (size_t i = 1; i < k; ++i) {
        img_.code[prev].target = here();
        img_.labels[here()] = "C" + std::to_string(i);
        if (i + 1 < k)
          prev = emit({.op = Op::RetryMeElse});
        else
          emit({.op = Op::TrustMe});
        compile_clause(g.cls[i]);
      }
    } else {
      uint32_t prev = emit({.op = Op::TryMeElse});
      compile_clause(g.cls[0]);
      for (size_t i = 1; i < k; ++i) {
        img_.code[prev].target = here();
        img_.labels[here()] = "C" + std::to_string(i);
        prev = emit({.op = Op::RetryMeElse});
        compile_clause(g.cls[i]);
      }
      img_.code[prev].target = here();
      img_.labels[here()] = "C" + std::to_string(k);
      emit({.op = Op::TrustExt, .n = offset});
    }
    img_.procs.push_back({table, g.name, g.arity, entry, here()});
  }
}

void Compiler::compile_query(const QueryAst& query) {
  img_.query_entry = here();
  img_.labels[here()] = "query";
  static const std::vector<std::string> kNoTied;
  ClauseCompiler cc(*this, nullptr, &query.goal, query.answer_vars, kNoTied, nullptr, true);
  cc.compile();
  img_.query_env_size = cc.env_size();
  for (const auto& n : query.answer_vars)
    img_.answer_slots.emplace_back(n, cc.slot_of(n));
}

void Compiler::drain_pending() {
  while (!pending_.empty()) {
    PendingUnit u = std::move(pending_.front());
    pending_.pop_front();
    std::vector<const ClauseAst*> ptrs;
    for (const auto& c : *u.clauses) ptrs.push_back(&c);
    compile_unit(u.table, ptrs, false, &u.tied_slots);
  }
}

CodeImage Compiler::run(const ProgramAst& program, const QueryAst& query) {
  std::vector<const ClauseAst*> globals;
  for (const auto& c : program.clauses) globals.push_back(&c);
  compile_unit(0, globals, true, nullptr);
  drain_pending();
  compile_query(query);
  drain_pending();
  return std::move(img_);
}

}  // namespace

CodeImage compile_program(const ProgramAst& program, const QueryAst& query, Symtab& syms) {
  return Compiler(syms).run(program, query);
}

}  // namespace harrop
