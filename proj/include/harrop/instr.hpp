#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "harrop/store.hpp"

namespace harrop {

// Bytecode for the extended abstract machine: the usual unification and
// control instructions plus universe bookkeeping (incr/decr_universe,
// set_univ_tag, set_exist_tag), implication-point management
// (push_impl_point / pop_impl_point), clause-unit linkage (initialize,
// trust_ext) and dynamic call resolution (call / execute search the
// current implication-point chain for the predicate's definition).

enum class Op : uint8_t {
  // control
  Allocate,     // n = environment size
  Deallocate,
  Call,         // sym/arity, n = caller environment size (informational)
  Execute,      // sym/arity
  Proceed,
  TryMeElse,    // target
  RetryMeElse,  // target
  TrustMe,
  TrustExt,     // n = predicate offset within the enclosing unit table
  Jump,         // target
  Stop,         // end of query code: report an answer
  // head unification
  GetVariable,  // a := A[b]
  GetValue,     // unify a with A[b]
  GetConstant,  // sym with A[b]
  GetList,      // A[b]
  GetStructure, // sym/arity with A[b]
  // argument preparation
  PutVariable,  // fresh (or slot) cell into a and A[b]
  PutValue,     // A[b] := a
  PutConstant,  // A[b] := sym
  PutList,      // A[b] := new list cell, args follow as set_*
  PutStructure, // A[b] := new structure, args follow as set_*
  // structure arguments, read/write mode after a get_list/get_structure
  UnifyVariable,
  UnifyValue,
  UnifyLocalValue,
  UnifyConstant,
  // structure arguments, write-only after a put_list/put_structure
  SetVariable,
  SetValue,
  SetLocalValue,
  SetConstant,
  // scoping
  IncrUniverse,
  DecrUniverse,
  SetUnivTag,     // a (permanent): bind to fresh constant tagged UI
  SetExistTag,    // a (permanent): tag with current UI
  PushImplPoint,  // n = table index, b.idx reused? no: table in tbl; n2 = env size
  PopImplPoint,
  Initialize,     // a := variable n of the environment referenced by CE
};

const char* op_name(Op op);

/// Register operand. A and X name the same physical register file; the
/// bank only records how the operand is written in listings.
struct Reg {
  enum class Bank : uint8_t { None, A, X, Y };
  Bank bank = Bank::None;
  uint32_t idx = 0;  // 1-based

  static Reg a(uint32_t i) { return {Bank::A, i}; }
  static Reg x(uint32_t i) { return {Bank::X, i}; }
  static Reg y(uint32_t i) { return {Bank::Y, i}; }
  bool is_perm() const { return bank == Bank::Y; }
  bool operator==(const Reg& o) const { return bank == o.bank && idx == o.idx; }
};

struct Instr {
  Op op = Op::Proceed;
  Reg a{};          // first register operand
  Reg b{};          // second register operand (argument register)
  uint32_t n = 0;   // numeric operand: env size / offset / table index
  uint32_t n2 = 0;  // push_impl_point: env size
  Sym sym = 0;      // constant / functor / predicate name
  uint32_t arity = 0;
  uint32_t target = 0;  // jump / try targets (code address)
};

/// Static table for one implication antecedent (or the global program):
/// the predicates it defines, in first-occurrence order (offsets 1..m),
/// each with its code entry point.
struct TableDesc {
  struct Entry {
    Sym name;
    uint32_t arity;
    uint32_t addr;
  };
  std::vector<Entry> entries;
};

struct CodeImage {
  std::vector<Instr> code;
  std::vector<TableDesc> tables;  // tables[0] = global program
  std::map<uint32_t, std::string> labels;  // code address -> label

  /// Compiled procedures: [begin, end) address ranges, per unit table.
  struct Proc {
    uint32_t table;  // owning table index
    std::string name;
    uint32_t arity;
    uint32_t begin;
    uint32_t end;
  };
  std::vector<Proc> procs;

  uint32_t query_entry = 0;
  uint32_t query_env_size = 0;
  /// Query answer variables: source name and permanent slot (1-based).
  std::vector<std::pair<std::string, uint32_t>> answer_slots;

  const Proc* find_proc(const std::string& name) const;
};

/// Textual listing of one instruction (without label).
std::string format_instr(const Instr& ins, const CodeImage& img, const Symtab& syms);

/// Listing of a code range: `label: instr` when the address is labelled,
/// otherwise indented. One instruction per line.
std::string disassemble_range(const CodeImage& img, const Symtab& syms,
                              uint32_t begin, uint32_t end);

/// Listing of a whole image: every table with its procedures.
std::string disassemble(const CodeImage& img, const Symtab& syms);

}  // namespace harrop
