#pragma once

// Rollback-totality harness: build a random store state, snapshot it,
// apply a random sequence of admissible operations (term construction,
// unification attempts, tag changes), then undo to the mark and truncate
// the heap; the snapshot must be bit-identical. Shared by the store unit
// tests and the acceptance run.

#include <random>
#include <string>

#include "harrop/store.hpp"

namespace rollback_check {

struct Result {
  bool ok;
  std::string detail;
};

inline harrop::CellRef random_term(harrop::Store& st, std::mt19937& rng,
                                   std::vector<harrop::CellRef>& vars, int depth) {
  switch (rng() % (depth > 0 ? 4 : 3)) {
    case 0:
      if (!vars.empty() && rng() % 2) return vars[rng() % vars.size()];
      vars.push_back(st.fresh_var(1 + rng() % 3));
      return vars.back();
    case 1:
      return st.user_const(st.syms().intern(std::string(1, 'a' + rng() % 3)));
    case 2:
      return st.fresh_gen_const(1 + rng() % 3);
    default: {
      uint32_t n = 1 + rng() % 2;
      std::vector<harrop::CellRef> args;
      for (uint32_t i = 0; i < n; ++i) args.push_back(random_term(st, rng, vars, depth - 1));
      harrop::CellRef s = st.open_struct(st.syms().intern(n == 1 ? "f" : "g"), n);
      for (auto a : args) st.push_ref(a);
      return s;
    }
  }
}

inline Result run_one(uint32_t seed) {
  std::mt19937 rng(seed);
  harrop::Symtab syms;
  harrop::Store st(syms);

  // Pre-existing state before the mark.
  std::vector<harrop::CellRef> vars;
  vars.push_back(st.fresh_var(1));
  vars.push_back(st.fresh_var(2));
  for (int i = 0; i < 3 + static_cast<int>(rng() % 4); ++i)
    random_term(st, rng, vars, 2);
  for (int i = 0; i < 2; ++i) {
    harrop::CellRef a = random_term(st, rng, vars, 1);
    harrop::CellRef b = random_term(st, rng, vars, 1);
    st.unify(a, b);
  }

  harrop::TrailMark mark = st.mark();
  uint32_t heap_mark = st.heap_size();
  std::string before = st.snapshot();

  // Random operations after the mark: every outcome (success, clash,
  // occurs-check, tag conflict) must be fully undoable.
  int ops = 1 + rng() % 12;
  for (int i = 0; i < ops; ++i) {
    switch (rng() % 3) {
      case 0: {
        harrop::CellRef a = random_term(st, rng, vars, 2);
        harrop::CellRef b = random_term(st, rng, vars, 2);
        st.unify(a, b);
        break;
      }
      case 1: {
        harrop::CellRef v = st.fresh_var(1 + rng() % 3);
        vars.push_back(v);
        st.set_tag(v, 1 + rng() % 3);
        break;
      }
      default: {
        harrop::CellRef v = vars[rng() % vars.size()];
        if (st.cell(st.deref(v)).kind == harrop::Cell::Kind::Unbound)
          st.set_tag(st.deref(v), 1 + rng() % 3);
        break;
      }
    }
  }

  st.undo_to(mark);
  st.truncate_heap(heap_mark);
  std::string after = st.snapshot();
  if (before != after)
    return {false, "seed " + std::to_string(seed) + ": snapshot mismatch\n--- before\n" +
                       before + "--- after\n" + after};
  return {true, ""};
}

inline Result run_many(uint32_t count, uint32_t seed_base = 0) {
  for (uint32_t i = 0; i < count; ++i) {
    Result r = run_one(seed_base + i);
    if (!r.ok) return r;
  }
  return {true, ""};
}

}  // namespace rollback_check
