#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "harrop/store.hpp"

namespace harrop {

struct PredKey {
  Sym name;
  uint32_t arity;
  bool operator==(const PredKey& o) const { return name == o.name && arity == o.arity; }
};

using Code = uint32_t;           // engine-interpreted entry point
constexpr Code kFailCode = 0xffffffffu;

using RecordId = uint32_t;
constexpr RecordId kNoRecord = 0xffffffffu;

/// Per-implication static table: the predicates defined by one (compiled)
/// antecedent, each with an entry point and an offset numbering them
/// 1..m. Small tables are searched linearly; larger ones via a hash map.
class ImplTable {
 public:
  struct Entry {
    PredKey pred;
    Code code;
    // offset is position+1
  };

  ImplTable() = default;
  explicit ImplTable(std::vector<Entry> entries);

  uint32_t size() const { return static_cast<uint32_t>(entries_.size()); }
  const Entry& entry(uint32_t offset) const { return entries_[offset - 1]; }
  /// Offset of pred in this table, or 0 if absent.
  uint32_t offset_of(const PredKey& pred) const;

  /// Opaque engine payload: the interpreter stores a clause-group index
  /// here, the bytecode machine an index into its table pool.
  uint32_t unit_ref = 0;

 private:
  static constexpr size_t kLinearLimit = 8;
  std::vector<Entry> entries_;
  std::unordered_map<uint64_t, uint32_t> index_;  // used above kLinearLimit
};

/// Record created when an implication goal adds its antecedent to the
/// program. `next_clause` is computed once at creation: for each predicate
/// offset in the table, the entry point and record providing that
/// predicate's definitions in the *enclosing* context (or kFailCode).
struct ImplRecord {
  const ImplTable* table = nullptr;   // IC
  uint32_t payload = 0;               // engine data (E'): closure env / env frame
  RecordId parent = kNoRecord;        // IP
  struct Next {
    Code code;
    RecordId record;
  };
  std::vector<Next> next_clause;      // nc, indexed by offset-1
};

/// Observer for context operations, used by tests and tracing.
struct ContextListener {
  std::function<void(RecordId)> on_push;
  std::function<void(RecordId)> on_pop;        // argument: record popped from
  std::function<void(RecordId)> on_restore;    // argument: record restored to
  std::function<void(const PredKey&, RecordId, bool found)> on_lookup;
};

/// Arena of implication-point records. Records are never reclaimed while
/// the arena lives, so choice points and closures may refer to any record
/// ever created; backtracking restores a context by reinstating a record
/// id, which is all the restore operation needs.
class ContextArena {
 public:
  /// Create the root record for the global program.
  RecordId make_root(const ImplTable* global_table, uint32_t payload);

  /// Push one implication point over `current`, computing next_clause for
  /// every predicate of `table` by searching the enclosing chain.
  RecordId push(const ImplTable* table, uint32_t payload, RecordId current);

  /// Leaving an implication goal: the context reverts to the parent.
  RecordId pop(RecordId current);

  /// Backtracking reinstates a previously current record.
  RecordId restore(RecordId saved);

  struct Lookup {
    bool found;
    Code code;
    RecordId record;   // record whose table defines the predicate
    uint32_t payload;  // that record's payload
  };
  /// Find the definition of `pred` visible from `current`: the nearest
  /// record in the parent chain whose table defines it.
  Lookup lookup(const PredKey& pred, RecordId current) const;

  /// The (code, record) continuation after the clauses of offset `offset`
  /// in `rec`'s table are exhausted.
  ImplRecord::Next next_clause(RecordId rec, uint32_t offset) const {
    return records_[rec].next_clause[offset - 1];
  }

  const ImplRecord& record(RecordId id) const { return records_[id]; }
  size_t record_count() const { return records_.size(); }

  ContextListener listener;

 private:
  std::vector<ImplRecord> records_;
};

}  // namespace harrop
