#include "harrop/store.hpp"

#include <cassert>
#include <sstream>

namespace harrop {

const char* fail_reason_name(FailReason r) {
  switch (r) {
    case FailReason::None: return "none";
    case FailReason::Clash: return "clash";
    case FailReason::OccursCheck: return "occurs-check";
    case FailReason::TagConflict: return "tag-conflict";
  }
  return "?";
}

CellRef Store::fresh_var(uint32_t tag) {
  Cell c;
  c.kind = Cell::Kind::Unbound;
  c.tag = tag;
  c.serial = ++var_counter_;
  heap_.push_back(c);
  return static_cast<CellRef>(heap_.size() - 1);
}

CellRef Store::fresh_gen_const(uint32_t tag) {
  Cell c;
  c.kind = Cell::Kind::GenConst;
  c.tag = tag;
  c.serial = ++gen_serials_[tag];
  heap_.push_back(c);
  return static_cast<CellRef>(heap_.size() - 1);
}

CellRef Store::user_const(Sym name) {
  Cell c;
  c.kind = Cell::Kind::UserConst;
  c.tag = 1;
  c.sym = name;
  heap_.push_back(c);
  return static_cast<CellRef>(heap_.size() - 1);
}

CellRef Store::open_struct(Sym functor, uint32_t arity) {
  Cell c;
  c.kind = Cell::Kind::Struct;
  c.sym = functor;
  c.arity = arity;
  heap_.push_back(c);
  return static_cast<CellRef>(heap_.size() - 1);
}

CellRef Store::push_ref(CellRef target) {
  Cell c;
  c.kind = Cell::Kind::Ref;
  c.target = target;
  heap_.push_back(c);
  return static_cast<CellRef>(heap_.size() - 1);
}

CellRef Store::deref(CellRef r) const {
  for (;;) {
    const Cell& c = heap_[r];
    if (c.kind == Cell::Kind::Ref) {
      r = c.target;
      continue;
    }
    if (c.kind == Cell::Kind::Unbound && c.target != kNoCell) {
      r = c.target;
      continue;
    }
    return r;
  }
}

TagCheck Store::check_tags(uint32_t var_tag, CellRef t, CellRef var) const {
  TagCheck out{true, FailReason::None, {}};
  std::vector<CellRef> work{t};
  while (!work.empty()) {
    CellRef r = deref(work.back());
    work.pop_back();
    const Cell& c = heap_[r];
    switch (c.kind) {
      case Cell::Kind::Unbound:
        if (r == var) return {false, FailReason::OccursCheck, {}};
        if (c.tag > var_tag) out.vars_to_lower.push_back(r);
        break;
      case Cell::Kind::UserConst:
      case Cell::Kind::GenConst:
        if (c.tag > var_tag) return {false, FailReason::TagConflict, {}};
        break;
      case Cell::Kind::Struct:
        for (uint32_t i = 0; i < c.arity; ++i) work.push_back(struct_arg(r, i));
        break;
      case Cell::Kind::Ref:
        assert(false && "deref returned a Ref");
        break;
    }
  }
  return out;
}

void Store::bind_raw(CellRef var, CellRef t) {
  assert(heap_[var].kind == Cell::Kind::Unbound && heap_[var].target == kNoCell);
  heap_[var].target = t;
  trail_.push_back({TrailEntry::Kind::Bind, var, 0});
}

void Store::bind(CellRef var, CellRef t, const TagCheck& chk) {
  assert(chk.ok);
  uint32_t var_tag = heap_[var].tag;
  for (CellRef v : chk.vars_to_lower) {
    if (heap_[v].tag <= var_tag) continue;  // may appear twice in the term
    trail_.push_back({TrailEntry::Kind::Tag, v, heap_[v].tag});
    heap_[v].tag = var_tag;
  }
  bind_raw(var, t);
}

void Store::set_tag(CellRef var, uint32_t tag) {
  assert(heap_[var].kind == Cell::Kind::Unbound && heap_[var].target == kNoCell);
  trail_.push_back({TrailEntry::Kind::Tag, var, heap_[var].tag});
  heap_[var].tag = tag;
}

UnifyOutcome Store::unify(CellRef a, CellRef b) {
  TrailMark entry = mark();
  std::vector<std::pair<CellRef, CellRef>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    const Cell& cx = heap_[x];
    const Cell& cy = heap_[y];
    bool vx = cx.kind == Cell::Kind::Unbound;
    bool vy = cy.kind == Cell::Kind::Unbound;
    if (vx && vy) {
      // Bind the variable with the higher tag to the other; with equal
      // tags, bind the younger variable to the older one.
      CellRef from = x, to = y;
      if (cx.tag != cy.tag ? cx.tag < cy.tag : cx.serial < cy.serial) {
        from = y;
        to = x;
      }
      bind_raw(from, to);
      continue;
    }
    if (vx || vy) {
      CellRef var = vx ? x : y;
      CellRef t = vx ? y : x;
      TagCheck chk = check_tags(heap_[var].tag, t, var);
      if (!chk.ok) {
        undo_to(entry);
        return {false, chk.reason};
      }
      bind(var, t, chk);
      continue;
    }
    FailReason clash = FailReason::None;
    if (cx.kind != cy.kind) {
      clash = FailReason::Clash;
    } else if (cx.kind == Cell::Kind::UserConst) {
      if (cx.sym != cy.sym) clash = FailReason::Clash;
    } else if (cx.kind == Cell::Kind::GenConst) {
      if (cx.tag != cy.tag || cx.serial != cy.serial) clash = FailReason::Clash;
    } else {  // Struct
      if (cx.sym != cy.sym || cx.arity != cy.arity) {
        clash = FailReason::Clash;
      } else {
        for (uint32_t i = 0; i < cx.arity; ++i)
          work.emplace_back(struct_arg(x, i), struct_arg(y, i));
      }
    }
    if (clash != FailReason::None) {
      undo_to(entry);
      return {false, clash};
    }
  }
  return {true, FailReason::None};
}

void Store::undo_to(TrailMark m) {
  while (trail_.size() > m) {
    const TrailEntry& e = trail_.back();
    if (e.kind == TrailEntry::Kind::Bind)
      heap_[e.cell].target = kNoCell;
    else
      heap_[e.cell].tag = e.old_tag;
    trail_.pop_back();
  }
}

void Store::truncate_heap(uint32_t size) {
  assert(size <= heap_.size());
  heap_.resize(size);
}

std::string Store::snapshot() const {
  std::ostringstream os;
  os << "cells " << heap_.size() << "\n";
  for (size_t i = 0; i < heap_.size(); ++i) {
    const Cell& c = heap_[i];
    os << i << ": ";
    switch (c.kind) {
      case Cell::Kind::Unbound:
        if (c.target == kNoCell)
          os << "var serial=" << c.serial << " tag=" << c.tag;
        else
          os << "var serial=" << c.serial << " tag=" << c.tag << " bound=" << c.target;
        break;
      case Cell::Kind::Ref:
        os << "ref " << c.target;
        break;
      case Cell::Kind::UserConst:
        os << "const " << syms_->name(c.sym) << " tag=" << c.tag;
        break;
      case Cell::Kind::GenConst:
        os << "genconst c!" << c.tag << "!" << c.serial;
        break;
      case Cell::Kind::Struct:
        os << "struct " << syms_->name(c.sym) << "/" << c.arity;
        break;
    }
    os << "\n";
  }
  os << "trail " << trail_.size() << "\n";
  return os.str();
}

}  // namespace harrop
