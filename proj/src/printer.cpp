#include "harrop/printer.hpp"

#include <sstream>

namespace harrop {

namespace {

bool is_list_cons(const TermAst& t) {
  return t.kind == TermAst::Kind::Struct && t.name == "." && t.args.size() == 2;
}
bool is_nil(const TermAst& t) { return t.kind == TermAst::Kind::Const && t.name == "[]"; }

void term_rec(const TermAst& t, std::string& out) {
  switch (t.kind) {
    case TermAst::Kind::Var:
    case TermAst::Kind::Const:
      out += t.name;
      return;
    case TermAst::Kind::Struct:
      if (is_list_cons(t)) {
        out += '[';
        const TermAst* cur = &t;
        term_rec(cur->args[0], out);
        while (is_list_cons(cur->args[1])) {
          cur = &cur->args[1];
          out += ',';
          term_rec(cur->args[0], out);
        }
        if (!is_nil(cur->args[1])) {
          out += '|';
          term_rec(cur->args[1], out);
        }
        out += ']';
        return;
      }
      out += t.name;
      out += '(';
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ',';
        term_rec(t.args[i], out);
      }
      out += ')';
      return;
  }
}

// Goal printing with explicit grouping: precedence from loosest to
// tightest is ';', '=>', ','; quantifier bodies and clause bodies are
// parenthesized whenever they are compound, which keeps printing a right
// inverse of parsing.
enum Level { LvSemi = 0, LvArrow = 1, LvComma = 2, LvPrim = 3 };

void goal_rec(const GoalAst& g, Level lv, std::string& out);

void clause_rec(const ClauseAst& c, std::string& out) {
  bool quantified = !c.explicit_quantified.empty();
  if (quantified) out += '(';
  for (const auto& v : c.explicit_quantified) {
    out += "forall ";
    out += v;
    out += ' ';
  }
  if (c.body) out += '(';
  term_rec(c.head, out);
  if (c.body) {
    out += " :- ";
    goal_rec(*c.body, LvSemi, out);
    out += ')';
  }
  if (quantified) out += ')';
}

void goal_rec(const GoalAst& g, Level lv, std::string& out) {
  auto paren = [&](Level mine, auto&& body) {
    bool need = lv > mine;
    if (need) out += '(';
    body();
    if (need) out += ')';
  };
  switch (g.kind) {
    case GoalAst::Kind::True:
      out += "true";
      return;
    case GoalAst::Kind::Atom:
      term_rec(g.atom, out);
      return;
    case GoalAst::Kind::And:
      paren(LvComma, [&] {
        goal_rec(g.sub[0], LvPrim, out);
        out += ", ";
        goal_rec(g.sub[1], LvComma, out);
      });
      return;
    case GoalAst::Kind::Or:
      paren(LvSemi, [&] {
        goal_rec(g.sub[0], LvArrow, out);
        out += "; ";
        goal_rec(g.sub[1], LvSemi, out);
      });
      return;
    case GoalAst::Kind::Implies:
      paren(LvArrow, [&] {
        out += '(';
        for (size_t i = 0; i < g.antecedent.size(); ++i) {
          if (i) out += ", ";
          clause_rec(g.antecedent[i], out);
        }
        out += ") => ";
        goal_rec(g.sub[0], LvArrow, out);
      });
      return;
    case GoalAst::Kind::Exists:
    case GoalAst::Kind::Forall: {
      // Quantifiers scope maximally rightward, so the whole quantified
      // goal is parenthesized whenever anything could follow it.
      bool need = lv > LvSemi;
      if (need) out += '(';
      out += g.kind == GoalAst::Kind::Forall ? "forall " : "exists ";
      out += g.var;
      out += " (";
      goal_rec(g.sub[0], LvSemi, out);
      out += ')';
      if (need) out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_term(const TermAst& t) {
  std::string out;
  term_rec(t, out);
  return out;
}

std::string print_goal(const GoalAst& g) {
  std::string out;
  goal_rec(g, LvSemi, out);
  return out;
}

std::string print_clause(const ClauseAst& c) {
  // Top-level form: implicit quantification is re-printed explicitly so
  // the output is unambiguous about binding.
  std::string out;
  clause_rec(c, out);
  out += '.';
  return out;
}

std::string print_program(const ProgramAst& p) {
  std::string out;
  for (const auto& c : p.clauses) {
    out += print_clause(c);
    out += '\n';
  }
  return out;
}

// ---- store terms ------------------------------------------------------

std::string TermPrinter::print(CellRef r) {
  std::string out;
  rec(r, out);
  return out;
}

void TermPrinter::rec(CellRef r, std::string& out) {
  r = store_->deref(r);
  const Cell& c = store_->cell(r);
  switch (c.kind) {
    case Cell::Kind::Unbound: {
      auto it = names_.find(r);
      if (it != names_.end()) {
        out += it->second;
      } else {
        std::string n = "_G" + std::to_string(++next_anon_);
        names_.emplace(r, n);
        out += n;
      }
      if (opts_.show_tags) out += "^" + std::to_string(c.tag);
      return;
    }
    case Cell::Kind::UserConst:
      out += store_->syms().name(c.sym);
      if (opts_.show_tags) out += "^" + std::to_string(c.tag);
      return;
    case Cell::Kind::GenConst:
      out += "c!" + std::to_string(c.tag) + "!" + std::to_string(c.serial);
      if (opts_.show_tags) out += "^" + std::to_string(c.tag);
      return;
    case Cell::Kind::Struct: {
      const std::string& f = store_->syms().name(c.sym);
      if (f == "." && c.arity == 2) {
        // list sugar
        out += '[';
        CellRef cur = r;
        rec(store_->struct_arg(cur, 0), out);
        for (;;) {
          CellRef tail = store_->deref(store_->struct_arg(cur, 1));
          const Cell& tc = store_->cell(tail);
          if (tc.kind == Cell::Kind::Struct && store_->syms().name(tc.sym) == "." &&
              tc.arity == 2) {
            out += ',';
            rec(store_->struct_arg(tail, 0), out);
            cur = tail;
            continue;
          }
          if (tc.kind == Cell::Kind::UserConst && store_->syms().name(tc.sym) == "[]") break;
          out += '|';
          rec(tail, out);
          break;
        }
        out += ']';
        return;
      }
      out += f;
      out += '(';
      for (uint32_t i = 0; i < c.arity; ++i) {
        if (i) out += ',';
        rec(store_->struct_arg(r, i), out);
      }
      out += ')';
      return;
    }
    case Cell::Kind::Ref:
      rec(c.target, out);
      return;
  }
}

std::string print_store_term(const Store& store, CellRef r, PrintOptions opts) {
  TermPrinter p(store, opts);
  return p.print(r);
}

}  // namespace harrop
