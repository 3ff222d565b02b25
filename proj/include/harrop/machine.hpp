#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "harrop/context.hpp"
#include "harrop/instr.hpp"
#include "harrop/interpreter.hpp"  // Answer, EndReason, format_answer
#include "harrop/store.hpp"

namespace harrop {

/// Bytecode machine executing a compiled CodeImage. Control is standard
/// environment/choice-point machinery extended with the universe counter
/// (UI), the implication-point chain (I), and per-call context resolution:
/// call/execute look the predicate up along the chain headed by I, and
/// trust_ext continues a unit predicate's clause chain in the enclosing
/// context. Environments and their permanent slots live in the term store
/// heap, so backtracking restores them via the trail and heap truncation.
class Machine {
 public:
  struct Config {
    uint64_t max_steps = 0;  // 0 = unlimited
    std::ostream* trace = nullptr;
    PrintOptions print_opts{};
  };

  Machine(Store& store, const CodeImage& image, Config cfg);
  Machine(Store& store, const CodeImage& image) : Machine(store, image, Config{}) {}

  void start();
  std::optional<Answer> next();
  EndReason end_reason() const { return end_reason_; }

  ContextArena& context() { return ctx_; }
  uint64_t steps() const { return steps_; }
  uint32_t universe() const { return ui_; }

 private:
  static constexpr uint32_t kNoEnv = 0xffffffffu;
  static constexpr uint32_t kHalt = 0xffffffffu;

  struct Env {
    uint32_t prev;
    uint32_t cont;
    std::vector<CellRef> slots;
  };

  struct ChoicePoint {
    std::vector<CellRef> args;
    uint32_t e;
    uint32_t cont;
    uint32_t next_addr;
    TrailMark tr;
    uint32_t h;
    uint32_t ui;
    RecordId i, ci;
    uint32_t ce;
    uint32_t na;
  };

  enum class StepResult { Ok, Fail, FoundAnswer };

  StepResult step();
  bool backtrack();
  void resolve(Sym name, uint32_t arity);
  bool finish_write();
  CellRef& areg(uint32_t i);
  CellRef& vreg(const Reg& r);
  void trace_step(const Instr& ins, uint32_t at);

  Store& store_;
  const CodeImage& img_;
  Config cfg_;
  std::vector<ImplTable> tables_;
  ContextArena ctx_;
  RecordId root_ = kNoRecord;
  Sym dot_;

  // registers
  uint32_t p_ = 0;
  uint32_t cont_ = kHalt;
  uint32_t e_ = kNoEnv;
  uint32_t ce_ = kNoEnv;
  RecordId i_ = kNoRecord, ci_ = kNoRecord;
  uint32_t ui_ = 1;
  uint32_t na_ = 0;
  bool write_mode_ = false;
  CellRef s_ = 0;                // read-mode argument cursor
  CellRef w_var_ = kNoCell;      // write mode: variable awaiting the structure
  CellRef w_struct_ = kNoCell;
  uint32_t w_remaining_ = 0;

  std::vector<CellRef> regs_;
  std::vector<Env> envs_;
  std::vector<ChoicePoint> cps_;

  bool started_ = false;
  bool finished_ = false;
  bool need_backtrack_ = false;
  EndReason end_reason_ = EndReason::Exhausted;
  uint64_t steps_ = 0;
};

}  // namespace harrop
