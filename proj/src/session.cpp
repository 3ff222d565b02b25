#include "harrop/session.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "harrop/compiler.hpp"
#include "harrop/instr.hpp"
#include "harrop/interpreter.hpp"
#include "harrop/machine.hpp"
#include "harrop/parser.hpp"
#include "harrop/printer.hpp"
#include "harrop/store.hpp"

namespace harrop {

namespace {

bool read_files(const std::vector<std::string>& paths, std::string& text,
                std::ostream& err) {
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) {
      err << "error: cannot open " << p << "\n";
      return false;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    text += ss.str();
    text += "\n";
  }
  return true;
}

struct SolveOutcome {
  size_t count = 0;
  bool limit = false;
};

/// Enumerate answers of one engine, feeding each formatted answer to
/// `emit`; stops after max_solutions answers when that limit is set.
template <typename Emit>
SolveOutcome solve(const ProgramAst& prog, const QueryAst& query,
                   const SessionConfig& cfg, SessionConfig::Engine engine,
                   uint64_t max_solutions, std::ostream& err, Emit emit) {
  SolveOutcome r;
  PrintOptions popts{cfg.show_tags};
  if (engine == SessionConfig::Engine::Interp) {
    Symtab syms;
    Store store(syms);
    Interpreter::Config icfg;
    icfg.max_depth = cfg.max_depth;
    icfg.max_steps = cfg.max_steps;
    icfg.trace = cfg.trace ? &err : nullptr;
    icfg.print_opts = popts;
    Interpreter interp(store, prog, icfg);
    interp.start(query);
    while (auto a = interp.next()) {
      bool more = emit(format_answer(store, *a, popts));
      if (++r.count == max_solutions || !more) return r;
    }
    r.limit = interp.end_reason() == EndReason::Limit;
  } else {
    Symtab syms;
    Store store(syms);
    CodeImage img = compile_program(prog, query, syms);
    Machine::Config mcfg;
    mcfg.max_steps = cfg.max_steps;
    mcfg.trace = cfg.trace ? &err : nullptr;
    mcfg.print_opts = popts;
    Machine m(store, img, mcfg);
    m.start();
    while (auto a = m.next()) {
      bool more = emit(format_answer(store, *a, popts));
      if (++r.count == max_solutions || !more) return r;
    }
    r.limit = m.end_reason() == EndReason::Limit;
  }
  return r;
}

/// Generated-constant serials depend on enumeration order, which may
/// legitimately differ between the engines; renumber c!tag!serial by
/// per-tag first occurrence before comparing answer strings.
std::string canon_gen_consts(const std::string& s) {
  std::string out;
  std::map<std::string, int> seen;
  std::map<std::string, int> next_per_tag;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == 'c' && i + 1 < s.size() && s[i + 1] == '!') {
      size_t j = i + 2;
      std::string tag, serial;
      while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) tag += s[j++];
      if (j < s.size() && s[j] == '!' && !tag.empty()) {
        ++j;
        while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) serial += s[j++];
        if (!serial.empty()) {
          std::string key = tag + "!" + serial;
          auto it = seen.find(key);
          if (it == seen.end()) it = seen.emplace(key, ++next_per_tag[tag]).first;
          out += "c!" + tag + "!" + std::to_string(it->second);
          i = j;
          continue;
        }
      }
    }
    out += s[i++];
  }
  return out;
}

std::vector<std::string> normalize_answers(std::vector<std::string> v) {
  for (auto& s : v) s = canon_gen_consts(s);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

int run_files(const std::vector<std::string>& paths, const std::string& query_text,
              const SessionConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_files(paths, text, err)) return kExitError;
  try {
    ProgramAst prog = parse_program(text);
    QueryAst query = parse_query(query_text);
    if (cfg.emit_bytecode) {
      Symtab syms;
      out << disassemble(compile_program(prog, query, syms), syms);
    }
    uint64_t limit = cfg.all_solutions ? cfg.max_solutions
                                       : (cfg.max_solutions ? cfg.max_solutions : 1);
    SolveOutcome r = solve(prog, query, cfg, cfg.engine, limit, err,
                           [&](const std::string& a) {
                             out << a << "\n";
                             return true;
                           });
    if (r.count > 0) {
      out << "yes\n";
      return kExitAnswers;
    }
    if (r.limit) {
      out << "unknown (limit reached)\n";
      return kExitLimit;
    }
    out << "no\n";
    return kExitNoAnswers;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const compile_error& e) {
    err << "compile error: " << e.what() << "\n";
    return kExitError;
  }
}

int repl(const std::vector<std::string>& paths, SessionConfig cfg, std::istream& in,
         std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_files(paths, text, err)) return kExitError;
  ProgramAst prog;
  try {
    prog = parse_program(text);
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitError;
  }
  std::string line;
  out << "?- " << std::flush;
  while (std::getline(in, line)) {
    // trim
    auto b = line.find_first_not_of(" \t\r\n");
    auto e = line.find_last_not_of(" \t\r\n");
    line = (b == std::string::npos) ? "" : line.substr(b, e - b + 1);
    if (line.empty()) {
      out << "?- " << std::flush;
      continue;
    }
    if (line == ":quit") return 0;
    if (line.rfind(":engine", 0) == 0) {
      if (line.find("interp") != std::string::npos)
        cfg.engine = SessionConfig::Engine::Interp;
      else if (line.find("wam") != std::string::npos)
        cfg.engine = SessionConfig::Engine::Wam;
      else
        err << "usage: :engine interp|wam\n";
      out << "?- " << std::flush;
      continue;
    }
    if (line.rfind(":trace", 0) == 0) {
      cfg.trace = line.find("off") == std::string::npos;
      out << "?- " << std::flush;
      continue;
    }
    try {
      QueryAst query = parse_query(line);
      // Re-run the engine per answer request by raising the cap: keep the
      // single-pass engines but stream answers one at a time.
      bool stopped = false;
      SolveOutcome r =
          solve(prog, query, cfg, cfg.engine, cfg.max_solutions, err,
                [&](const std::string& a) {
                  out << a << " " << std::flush;
                  std::string more;
                  bool next = std::getline(in, more) && !more.empty() && more[0] == ';';
                  out << "\n";
                  stopped = !next;
                  return next;
                });
      if (stopped) {
        // user accepted an answer; nothing further to report
      } else if (r.count == 0 && r.limit) {
        out << "unknown (limit reached)\n";
      } else {
        out << "no\n";
      }
    } catch (const parse_error& e) {
      err << "parse error: " << e.what() << "\n";
    } catch (const compile_error& e) {
      err << "compile error: " << e.what() << "\n";
    }
    out << "?- " << std::flush;
  }
  return 0;
}

int cross_check(const std::vector<std::string>& paths, const std::string& query_text,
                const SessionConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_files(paths, text, err)) return kExitError;
  try {
    ProgramAst prog = parse_program(text);
    QueryAst query = parse_query(query_text);
    std::vector<std::string> ia, ma;
    SolveOutcome ri = solve(prog, query, cfg, SessionConfig::Engine::Interp,
                            cfg.max_solutions, err,
                            [&](const std::string& a) {
                              ia.push_back(a);
                              return true;
                            });
    SolveOutcome rm = solve(prog, query, cfg, SessionConfig::Engine::Wam,
                            cfg.max_solutions, err,
                            [&](const std::string& a) {
                              ma.push_back(a);
                              return true;
                            });
    if (ri.limit || rm.limit) {
      out << "INCONCLUSIVE: limit reached on "
          << (ri.limit ? (rm.limit ? "both engines" : "the interpreter")
                       : "the machine")
          << "\n";
      return kExitLimit;
    }
    std::vector<std::string> ni = normalize_answers(ia), nm = normalize_answers(ma);
    if (ni == nm) {
      out << "AGREE: " << ni.size() << " answer(s)\n";
      return kExitAnswers;
    }
    out << "DISAGREE\n";
    out << "interpreter (" << ni.size() << "):\n";
    for (const auto& a : ni) out << "  " << a << "\n";
    out << "machine (" << nm.size() << "):\n";
    for (const auto& a : nm) out << "  " << a << "\n";
    // minimized witness: first normalized answer present on one side only
    std::vector<std::string> only;
    std::set_symmetric_difference(ni.begin(), ni.end(), nm.begin(), nm.end(),
                                  std::back_inserter(only));
    if (!only.empty()) out << "witness: " << only.front() << "\n";
    return kExitDisagree;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const compile_error& e) {
    err << "compile error: " << e.what() << "\n";
    return kExitError;
  }
}

int compile_files(const std::vector<std::string>& paths, const std::string& query_text,
                  std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_files(paths, text, err)) return kExitError;
  try {
    ProgramAst prog = parse_program(text);
    QueryAst query = parse_query(query_text.empty() ? "true." : query_text);
    Symtab syms;
    out << disassemble(compile_program(prog, query, syms), syms);
    return 0;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const compile_error& e) {
    err << "compile error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace harrop
