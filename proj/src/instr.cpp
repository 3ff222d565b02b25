#include "harrop/instr.hpp"

#include <sstream>

namespace harrop {

const char* op_name(Op op) {
  switch (op) {
    case Op::Allocate: return "allocate";
    case Op::Deallocate: return "deallocate";
    case Op::Call: return "call";
    case Op::Execute: return "execute";
    case Op::Proceed: return "proceed";
    case Op::TryMeElse: return "try_me_else";
    case Op::RetryMeElse: return "retry_me_else";
    case Op::TrustMe: return "trust_me";
    case Op::TrustExt: return "trust_ext";
    case Op::Jump: return "jump";
    case Op::Stop: return "stop";
    case Op::GetVariable: return "get_variable";
    case Op::GetValue: return "get_value";
    case Op::GetConstant: return "get_constant";
    case Op::GetList: return "get_list";
    case Op::GetStructure: return "get_structure";
    case Op::PutVariable: return "put_variable";
    case Op::PutValue: return "put_value";
    case Op::PutConstant: return "put_constant";
    case Op::PutList: return "put_list";
    case Op::PutStructure: return "put_structure";
    case Op::UnifyVariable: return "unify_variable";
    case Op::UnifyValue: return "unify_value";
    case Op::UnifyLocalValue: return "unify_local_value";
    case Op::UnifyConstant: return "unify_constant";
    case Op::SetVariable: return "set_variable";
    case Op::SetValue: return "set_value";
    case Op::SetLocalValue: return "set_local_value";
    case Op::SetConstant: return "set_constant";
    case Op::IncrUniverse: return "incr_universe";
    case Op::DecrUniverse: return "decr_universe";
    case Op::SetUnivTag: return "set_univ_tag";
    case Op::SetExistTag: return "set_exist_tag";
    case Op::PushImplPoint: return "push_impl_point";
    case Op::PopImplPoint: return "pop_impl_point";
    case Op::Initialize: return "initialize";
  }
  return "?";
}

namespace {

std::string reg_str(const Reg& r) {
  const char* bank = r.bank == Reg::Bank::A ? "A" : r.bank == Reg::Bank::Y ? "Y" : "X";
  return bank + std::to_string(r.idx);
}

std::string target_str(uint32_t addr, const CodeImage& img) {
  auto it = img.labels.find(addr);
  if (it != img.labels.end()) return it->second;
  return "L" + std::to_string(addr);
}

}  // namespace

const CodeImage::Proc* CodeImage::find_proc(const std::string& name) const {
  for (const auto& p : procs)
    if (p.name == name) return &p;
  return nullptr;
}

std::string format_instr(const Instr& ins, const CodeImage& img, const Symtab& syms) {
  std::ostringstream os;
  os << op_name(ins.op);
  switch (ins.op) {
    case Op::Allocate:
      os << ' ' << ins.n;
      break;
    case Op::Call:
      os << ' ' << syms.name(ins.sym) << '/' << ins.arity << ',' << ins.n;
      break;
    case Op::Execute:
      os << ' ' << syms.name(ins.sym) << '/' << ins.arity;
      break;
    case Op::TryMeElse:
    case Op::RetryMeElse:
    case Op::Jump:
      os << ' ' << target_str(ins.target, img);
      break;
    case Op::TrustExt:
      os << ' ' << ins.n;
      break;
    case Op::GetVariable:
    case Op::GetValue:
    case Op::PutVariable:
    case Op::PutValue:
      os << ' ' << reg_str(ins.a) << ',' << reg_str(ins.b);
      break;
    case Op::GetConstant:
    case Op::PutConstant:
      os << ' ' << syms.name(ins.sym) << ',' << reg_str(ins.b);
      break;
    case Op::GetList:
    case Op::PutList:
      os << ' ' << reg_str(ins.b);
      break;
    case Op::GetStructure:
    case Op::PutStructure:
      os << ' ' << syms.name(ins.sym) << '/' << ins.arity << ',' << reg_str(ins.b);
      break;
    case Op::UnifyVariable:
    case Op::UnifyValue:
    case Op::UnifyLocalValue:
    case Op::SetVariable:
    case Op::SetValue:
    case Op::SetLocalValue:
    case Op::SetUnivTag:
    case Op::SetExistTag:
      os << ' ' << reg_str(ins.a);
      break;
    case Op::UnifyConstant:
    case Op::SetConstant:
      os << ' ' << syms.name(ins.sym);
      break;
    case Op::PushImplPoint:
      os << " t" << ins.n << ',' << ins.n2;
      break;
    case Op::Initialize:
      os << ' ' << reg_str(ins.a) << ',' << ins.n;
      break;
    default:
      break;  // no operands
  }
  return os.str();
}

std::string disassemble_range(const CodeImage& img, const Symtab& syms,
                              uint32_t begin, uint32_t end) {
  std::ostringstream os;
  for (uint32_t addr = begin; addr < end; ++addr) {
    auto it = img.labels.find(addr);
    if (it != img.labels.end())
      os << it->second << ": ";
    else
      os << "    ";
    os << format_instr(img.code[addr], img, syms) << '\n';
  }
  return os.str();
}

std::string disassemble(const CodeImage& img, const Symtab& syms) {
  std::ostringstream os;
  for (size_t t = 0; t < img.tables.size(); ++t) {
    os << "; table t" << t << (t == 0 ? " (global program)" : "") << '\n';
    for (size_t i = 0; i < img.tables[t].entries.size(); ++i) {
      const auto& e = img.tables[t].entries[i];
      os << ";   offset " << (i + 1) << ": " << syms.name(e.name) << '/' << e.arity
         << " at " << target_str(e.addr, img) << '\n';
    }
    for (const auto& p : img.procs) {
      if (p.table != t) continue;
      os << disassemble_range(img, syms, p.begin, p.end);
    }
    os << '\n';
  }
  os << "; query\n";
  uint32_t qend = static_cast<uint32_t>(img.code.size());
  for (const auto& p : img.procs)
    if (p.begin >= img.query_entry) qend = std::min(qend, p.begin);
  os << disassemble_range(img, syms, img.query_entry, qend);
  return os.str();
}

}  // namespace harrop
