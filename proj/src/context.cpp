#include "harrop/context.hpp"

#include <cassert>

namespace harrop {

namespace {
uint64_t key_of(const PredKey& p) {
  return (static_cast<uint64_t>(p.name) << 32) | p.arity;
}
}  // namespace

ImplTable::ImplTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.size() > kLinearLimit) {
    for (uint32_t i = 0; i < entries_.size(); ++i)
      index_.emplace(key_of(entries_[i].pred), i + 1);
  }
}

uint32_t ImplTable::offset_of(const PredKey& pred) const {
  if (entries_.size() > kLinearLimit) {
    auto it = index_.find(key_of(pred));
    return it == index_.end() ? 0 : it->second;
  }
  for (uint32_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].pred == pred) return i + 1;
  return 0;
}

RecordId ContextArena::make_root(const ImplTable* global_table, uint32_t payload) {
  ImplRecord r;
  r.table = global_table;
  r.payload = payload;
  r.parent = kNoRecord;
  // The outermost context has nothing to fall back to: every predicate's
  // continuation is failure.
  r.next_clause.assign(global_table->size(), {kFailCode, kNoRecord});
  records_.push_back(std::move(r));
  return static_cast<RecordId>(records_.size() - 1);
}

RecordId ContextArena::push(const ImplTable* table, uint32_t payload, RecordId current) {
  ImplRecord r;
  r.table = table;
  r.payload = payload;
  r.parent = current;
  r.next_clause.reserve(table->size());
  for (uint32_t off = 1; off <= table->size(); ++off) {
    const PredKey& pred = table->entry(off).pred;
    Lookup lk = lookup(pred, current);
    if (lk.found)
      r.next_clause.push_back({lk.code, lk.record});
    else
      r.next_clause.push_back({kFailCode, kNoRecord});
  }
  records_.push_back(std::move(r));
  RecordId id = static_cast<RecordId>(records_.size() - 1);
  if (listener.on_push) listener.on_push(id);
  return id;
}

RecordId ContextArena::pop(RecordId current) {
  assert(records_[current].parent != kNoRecord && "cannot pop the root context");
  if (listener.on_pop) listener.on_pop(current);
  return records_[current].parent;
}

RecordId ContextArena::restore(RecordId saved) {
  if (listener.on_restore) listener.on_restore(saved);
  return saved;
}

ContextArena::Lookup ContextArena::lookup(const PredKey& pred, RecordId current) const {
  for (RecordId id = current; id != kNoRecord; id = records_[id].parent) {
    uint32_t off = records_[id].table->offset_of(pred);
    if (off != 0) {
      if (listener.on_lookup) listener.on_lookup(pred, id, true);
      return {true, records_[id].table->entry(off).code, id, records_[id].payload};
    }
  }
  if (listener.on_lookup) listener.on_lookup(pred, kNoRecord, false);
  return {false, kFailCode, kNoRecord, 0};
}

}  // namespace harrop
