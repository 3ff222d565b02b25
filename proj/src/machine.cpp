#include "harrop/machine.hpp"

#include <cassert>
#include <ostream>

namespace harrop {

Machine::Machine(Store& store, const CodeImage& image, Config cfg)
    : store_(store), img_(image), cfg_(cfg) {
  dot_ = store_.syms().intern(".");
  tables_.reserve(img_.tables.size());
  for (size_t t = 0; t < img_.tables.size(); ++t) {
    std::vector<ImplTable::Entry> entries;
    for (const auto& e : img_.tables[t].entries)
      entries.push_back({PredKey{e.name, e.arity}, e.addr});
    tables_.emplace_back(std::move(entries));
    tables_.back().unit_ref = static_cast<uint32_t>(t);
  }
}

void Machine::start() {
  root_ = ctx_.make_root(&tables_[0], kNoEnv);
  p_ = img_.query_entry;
  cont_ = kHalt;
  e_ = ce_ = kNoEnv;
  i_ = ci_ = root_;
  ui_ = 1;
  started_ = true;
  finished_ = false;
  need_backtrack_ = false;
  end_reason_ = EndReason::Exhausted;
}

CellRef& Machine::areg(uint32_t i) {
  if (regs_.size() < i) regs_.resize(i, kNoCell);
  return regs_[i - 1];
}

CellRef& Machine::vreg(const Reg& r) {
  if (r.is_perm()) return envs_[e_].slots[r.idx - 1];
  return areg(r.idx);
}

void Machine::resolve(Sym name, uint32_t arity) {
  auto lk = ctx_.lookup(PredKey{name, arity}, i_);
  if (!lk.found) {
    p_ = kHalt;  // signalled via Fail by caller
    return;
  }
  ci_ = lk.record;
  ce_ = lk.payload;
  p_ = lk.code;
}

bool Machine::finish_write() {
  if (--w_remaining_ > 0) return true;
  write_mode_ = false;
  if (w_var_ == kNoCell) return true;  // put_list/put_structure: nothing to bind
  CellRef var = w_var_;
  w_var_ = kNoCell;
  return store_.unify(var, w_struct_).ok;
}

bool Machine::backtrack() {
  if (cps_.empty()) return false;
  const ChoicePoint& cp = cps_.back();
  store_.undo_to(cp.tr);
  store_.truncate_heap(cp.h);
  for (uint32_t k = 0; k < cp.na; ++k) areg(k + 1) = cp.args[k];
  e_ = cp.e;
  cont_ = cp.cont;
  ui_ = cp.ui;
  i_ = ctx_.restore(cp.i);
  ci_ = cp.ci;
  ce_ = cp.ce;
  na_ = cp.na;
  write_mode_ = false;
  w_var_ = kNoCell;
  p_ = cp.next_addr;
  return true;
}

void Machine::trace_step(const Instr& ins, uint32_t at) {
  *cfg_.trace << "step=" << steps_ << " P=" << at << ' '
              << format_instr(ins, img_, store_.syms()) << "  UI=" << ui_
              << " I=" << i_ << " CI=" << ci_ << " B=" << cps_.size() << '\n';
}

Machine::StepResult Machine::step() {
  uint32_t at = p_;
  const Instr& ins = img_.code[at];
  ++p_;
  ++steps_;
  if (cfg_.trace) trace_step(ins, at);
  switch (ins.op) {
    case Op::Allocate: {
      Env env;
      env.prev = e_;
      env.cont = cont_;
      env.slots.reserve(ins.n);
      for (uint32_t k = 0; k < ins.n; ++k) env.slots.push_back(store_.fresh_var(ui_));
      envs_.push_back(std::move(env));
      e_ = static_cast<uint32_t>(envs_.size() - 1);
      return StepResult::Ok;
    }
    case Op::Deallocate:
      cont_ = envs_[e_].cont;
      e_ = envs_[e_].prev;
      return StepResult::Ok;
    case Op::Call:
      na_ = ins.arity;
      cont_ = p_;
      resolve(ins.sym, ins.arity);
      return p_ == kHalt ? StepResult::Fail : StepResult::Ok;
    case Op::Execute:
      na_ = ins.arity;
      resolve(ins.sym, ins.arity);
      return p_ == kHalt ? StepResult::Fail : StepResult::Ok;
    case Op::Proceed:
      p_ = cont_;
      return StepResult::Ok;
    case Op::TryMeElse: {
      ChoicePoint cp;
      cp.args.reserve(na_);
      for (uint32_t k = 0; k < na_; ++k) cp.args.push_back(areg(k + 1));
      cp.e = e_;
      cp.cont = cont_;
      cp.next_addr = ins.target;
      cp.tr = store_.mark();
      cp.h = store_.heap_size();
      cp.ui = ui_;
      cp.i = i_;
      cp.ci = ci_;
      cp.ce = ce_;
      cp.na = na_;
      cps_.push_back(std::move(cp));
      return StepResult::Ok;
    }
    case Op::RetryMeElse:
      cps_.back().next_addr = ins.target;
      return StepResult::Ok;
    case Op::TrustMe:
      cps_.pop_back();
      return StepResult::Ok;
    case Op::TrustExt: {
      cps_.pop_back();
      auto nc = ctx_.next_clause(ci_, ins.n);
      if (nc.code == kFailCode) return StepResult::Fail;
      ci_ = nc.record;
      p_ = nc.code;
      ce_ = ctx_.record(ci_).payload;
      return StepResult::Ok;
    }
    case Op::Jump:
      p_ = ins.target;
      return StepResult::Ok;
    case Op::Stop:
      return StepResult::FoundAnswer;

    case Op::GetVariable:
      vreg(ins.a) = areg(ins.b.idx);
      return StepResult::Ok;
    case Op::GetValue:
      return store_.unify(vreg(ins.a), areg(ins.b.idx)).ok ? StepResult::Ok
                                                           : StepResult::Fail;
    case Op::GetConstant:
      return store_.unify(areg(ins.b.idx), store_.user_const(ins.sym)).ok
                 ? StepResult::Ok
                 : StepResult::Fail;
    case Op::GetList:
    case Op::GetStructure: {
      Sym f = ins.op == Op::GetList ? dot_ : ins.sym;
      uint32_t n = ins.op == Op::GetList ? 2 : ins.arity;
      CellRef d = store_.deref(areg(ins.b.idx));
      const Cell& c = store_.cell(d);
      if (c.kind == Cell::Kind::Struct && c.sym == f && c.arity == n) {
        write_mode_ = false;
        s_ = d + 1;
        return StepResult::Ok;
      }
      if (c.kind == Cell::Kind::Unbound) {
        write_mode_ = true;
        w_var_ = d;
        w_struct_ = store_.open_struct(f, n);
        w_remaining_ = n;
        return StepResult::Ok;
      }
      return StepResult::Fail;
    }

    case Op::PutVariable:
      if (ins.a.is_perm()) {
        areg(ins.b.idx) = envs_[e_].slots[ins.a.idx - 1];
      } else {
        CellRef c = store_.fresh_var(ui_);
        vreg(ins.a) = c;
        areg(ins.b.idx) = c;
      }
      return StepResult::Ok;
    case Op::PutValue:
      areg(ins.b.idx) = vreg(ins.a);
      return StepResult::Ok;
    case Op::PutConstant:
      areg(ins.b.idx) = store_.user_const(ins.sym);
      return StepResult::Ok;
    case Op::PutList:
    case Op::PutStructure: {
      Sym f = ins.op == Op::PutList ? dot_ : ins.sym;
      uint32_t n = ins.op == Op::PutList ? 2 : ins.arity;
      write_mode_ = true;
      w_var_ = kNoCell;
      w_struct_ = store_.open_struct(f, n);
      w_remaining_ = n;
      areg(ins.b.idx) = w_struct_;
      return StepResult::Ok;
    }

    case Op::UnifyVariable:
      if (write_mode_) {
        CellRef c = store_.fresh_var(ui_);
        vreg(ins.a) = c;
        return finish_write() ? StepResult::Ok : StepResult::Fail;
      }
      vreg(ins.a) = s_++;
      return StepResult::Ok;
    case Op::UnifyValue:
    case Op::UnifyLocalValue:
      if (write_mode_) {
        store_.push_ref(vreg(ins.a));
        return finish_write() ? StepResult::Ok : StepResult::Fail;
      }
      return store_.unify(vreg(ins.a), s_++).ok ? StepResult::Ok : StepResult::Fail;
    case Op::UnifyConstant:
      if (write_mode_) {
        store_.user_const(ins.sym);
        return finish_write() ? StepResult::Ok : StepResult::Fail;
      }
      return store_.unify(s_++, store_.user_const(ins.sym)).ok ? StepResult::Ok
                                                               : StepResult::Fail;

    case Op::SetVariable: {
      CellRef c = store_.fresh_var(ui_);
      vreg(ins.a) = c;
      return finish_write() ? StepResult::Ok : StepResult::Fail;
    }
    case Op::SetValue:
    case Op::SetLocalValue:
      store_.push_ref(vreg(ins.a));
      return finish_write() ? StepResult::Ok : StepResult::Fail;
    case Op::SetConstant:
      store_.user_const(ins.sym);
      return finish_write() ? StepResult::Ok : StepResult::Fail;

    case Op::IncrUniverse:
      ++ui_;
      return StepResult::Ok;
    case Op::DecrUniverse:
      --ui_;
      return StepResult::Ok;
    case Op::SetUnivTag:
      // The slot becomes a fresh constant of the current universe; the
      // slot's placeholder cell is simply superseded.
      envs_[e_].slots[ins.a.idx - 1] = store_.fresh_gen_const(ui_);
      return StepResult::Ok;
    case Op::SetExistTag:
      store_.set_tag(store_.deref(envs_[e_].slots[ins.a.idx - 1]), ui_);
      return StepResult::Ok;
    case Op::PushImplPoint:
      i_ = ctx_.push(&tables_[ins.n], e_, i_);
      return StepResult::Ok;
    case Op::PopImplPoint:
      i_ = ctx_.pop(i_);
      return StepResult::Ok;
    case Op::Initialize:
      vreg(ins.a) = envs_[ce_].slots[ins.n - 1];
      return StepResult::Ok;
  }
  return StepResult::Fail;
}

std::optional<Answer> Machine::next() {
  assert(started_);
  if (finished_) return std::nullopt;
  if (need_backtrack_) {
    need_backtrack_ = false;
    if (!backtrack()) {
      finished_ = true;
      return std::nullopt;
    }
  }
  for (;;) {
    if (cfg_.max_steps && steps_ >= cfg_.max_steps) {
      finished_ = true;
      end_reason_ = EndReason::Limit;
      return std::nullopt;
    }
    StepResult r = step();
    if (r == StepResult::Ok) continue;
    if (r == StepResult::FoundAnswer) {
      need_backtrack_ = true;
      Answer a;
      for (const auto& [name, slot] : img_.answer_slots)
        a.bindings.emplace_back(name, envs_[e_].slots[slot - 1]);
      return a;
    }
    if (!backtrack()) {
      finished_ = true;
      return std::nullopt;
    }
  }
}

}  // namespace harrop
