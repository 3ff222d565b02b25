#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace harrop {

using Sym = uint32_t;

/// Interned symbol names shared by a whole session (parser output is
/// string-based; everything downstream uses Sym ids).
class Symtab {
 public:
  Sym intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    Sym id = static_cast<Sym>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
  }
  const std::string& name(Sym s) const { return names_[s]; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Sym> ids_;
};

using CellRef = uint32_t;
constexpr CellRef kNoCell = 0xffffffffu;

/// One heap cell. Structures are laid out flat: a Struct cell is followed
/// by `arity` argument cells at consecutive indices.
struct Cell {
  enum class Kind : uint8_t { Unbound, Ref, UserConst, GenConst, Struct };
  Kind kind;
  uint32_t tag = 0;      // Unbound / UserConst / GenConst: numeric tag
  uint32_t serial = 0;   // Unbound: creation serial; GenConst: per-tag serial
  Sym sym = 0;           // UserConst name; Struct functor
  uint32_t arity = 0;    // Struct
  CellRef target = kNoCell;  // Ref
};

/// Why a unification attempt failed; carried in traces and error reports.
enum class FailReason : uint8_t {
  None,
  Clash,        // distinct constants or functors
  OccursCheck,  // variable occurs in the term it would be bound to
  TagConflict,  // term contains a constant tagged higher than the variable
};

const char* fail_reason_name(FailReason r);

struct UnifyOutcome {
  bool ok;
  FailReason reason;  // None when ok
};

/// Result of the binding admissibility check: either a failure, or the
/// list of variables whose tags must be lowered when the binding happens.
struct TagCheck {
  bool ok;
  FailReason reason;
  std::vector<CellRef> vars_to_lower;  // variables in t with tag > limit
};

using TrailMark = uint32_t;

/// Term store with numeric tags on constants and variables. Tags realize
/// quantifier dependencies: a variable tagged i may only be bound to terms
/// all of whose constants carry tags <= i, and binding lowers the tags of
/// any more recently tagged variables in the bound term. All destructive
/// updates (bindings and tag changes) are trailed so that undo_to restores
/// any earlier state exactly.
class Store {
 public:
  explicit Store(Symtab& syms) : syms_(&syms) {}

  Symtab& syms() const { return *syms_; }

  // ---- cell construction ----
  CellRef fresh_var(uint32_t tag);
  CellRef fresh_gen_const(uint32_t tag);  // prints as c!tag!serial
  CellRef user_const(Sym name);           // user constants always carry tag 1
  /// Begin a structure: pushes the functor cell; the caller must then push
  /// exactly `arity` argument cells (push_ref / fresh_var / constants).
  CellRef open_struct(Sym functor, uint32_t arity);
  CellRef push_ref(CellRef target);

  const Cell& cell(CellRef r) const { return heap_[r]; }
  uint32_t heap_size() const { return static_cast<uint32_t>(heap_.size()); }
  CellRef struct_arg(CellRef s, uint32_t i) const { return s + 1 + i; }

  /// Follow Ref chains (and bound Unbound cells) to the representative.
  CellRef deref(CellRef r) const;

  // ---- tags and bindings ----
  /// Admissibility of binding a variable tagged var_tag to term t:
  /// fails with OccursCheck if `var` occurs in t, with TagConflict if a
  /// constant in t is tagged higher than var_tag; otherwise lists the
  /// variables in t tagged higher than var_tag.
  TagCheck check_tags(uint32_t var_tag, CellRef t, CellRef var) const;

  /// Bind an unbound cell to a term, trailing the binding and performing
  /// (and trailing) the tag lowering required by the admissibility check.
  /// Precondition: check_tags passed for this pair.
  void bind(CellRef var, CellRef t, const TagCheck& chk);

  /// Set a variable's tag directly (used when a quantifier in a goal body
  /// assigns the variable its real tag). Trailed; may raise or lower.
  void set_tag(CellRef var, uint32_t tag);

  /// Unify two terms. On failure the store is rolled back to its state at
  /// entry; on success all bindings and tag changes remain (trailed).
  UnifyOutcome unify(CellRef a, CellRef b);

  // ---- trail ----
  TrailMark mark() const { return static_cast<TrailMark>(trail_.size()); }
  void undo_to(TrailMark m);
  /// Discard heap cells above `size` (after undo_to has unwound any
  /// bindings that pointed into them).
  void truncate_heap(uint32_t size);

  uint32_t var_counter() const { return var_counter_; }

  /// Deterministic text dump of the full store state (cells, trail
  /// length, counters) for snapshot comparison in tests.
  std::string snapshot() const;

 private:
  struct TrailEntry {
    enum class Kind : uint8_t { Bind, Tag } kind;
    CellRef cell;
    uint32_t old_tag;  // Tag only
  };

  void bind_raw(CellRef var, CellRef t);

  Symtab* syms_;
  std::vector<Cell> heap_;
  std::vector<TrailEntry> trail_;
  uint32_t var_counter_ = 0;
  std::unordered_map<uint32_t, uint32_t> gen_serials_;  // tag -> next serial
};

}  // namespace harrop
