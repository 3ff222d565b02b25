#include "harrop/parser.hpp"

#include <cctype>
#include <memory>
#include <variant>

namespace harrop {

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Bar,
  Dot,
  Semi,
  Arrow,   // =>
  Neck,    // :-
  Name,    // lowercase identifier or integer literal
  Var,     // uppercase / underscore identifier
  Forall,
  Exists,
  True,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void err(const std::string& msg) { throw parse_error(line_, col_, msg); }

  int cur() const { return pos_ < src_.size() ? static_cast<unsigned char>(src_[pos_]) : -1; }

  void bump() {
    if (pos_ < src_.size()) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      int c = cur();
      if (c == '%') {
        while (cur() != '\n' && cur() != -1) bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        return;
      }
    }
  }

  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    int c = cur();
    if (c == -1) {
      tok_.kind = Tok::End;
      return;
    }
    switch (c) {
      case '(': bump(); tok_.kind = Tok::LParen; return;
      case ')': bump(); tok_.kind = Tok::RParen; return;
      case '[': bump(); tok_.kind = Tok::LBracket; return;
      case ']': bump(); tok_.kind = Tok::RBracket; return;
      case ',': bump(); tok_.kind = Tok::Comma; return;
      case '|': bump(); tok_.kind = Tok::Bar; return;
      case ';': bump(); tok_.kind = Tok::Semi; return;
      case '.': bump(); tok_.kind = Tok::Dot; return;
      case '=':
        bump();
        if (cur() != '>') err("expected '>' after '='");
        bump();
        tok_.kind = Tok::Arrow;
        return;
      case ':':
        bump();
        if (cur() != '-') err("expected '-' after ':'");
        bump();
        tok_.kind = Tok::Neck;
        return;
      default:
        break;
    }
    if (std::isdigit(c)) {
      while (std::isdigit(cur())) {
        tok_.text.push_back(static_cast<char>(cur()));
        bump();
      }
      tok_.kind = Tok::Name;
      return;
    }
    if (std::isalpha(c) || c == '_') {
      while (std::isalnum(cur()) || cur() == '_') {
        tok_.text.push_back(static_cast<char>(cur()));
        bump();
      }
      if (tok_.text == "forall")
        tok_.kind = Tok::Forall;
      else if (tok_.text == "exists")
        tok_.kind = Tok::Exists;
      else if (tok_.text == "true")
        tok_.kind = Tok::True;
      else if (is_var_name(tok_.text))
        tok_.kind = Tok::Var;
      else
        tok_.kind = Tok::Name;
      return;
    }
    err(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_{};
};

// Intermediate parse result: either a goal, a clause, or a comma list of
// either. Comma lists are kept unelaborated until we know whether they sit
// to the left of '=>' (antecedent clause list) or stand alone (conjunction).
struct Node;
using NodeList = std::vector<Node>;

struct Node {
  std::variant<GoalAst, ClauseAst, NodeList> v;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lx_(src) {}

  ProgramAst program() {
    ProgramAst p;
    while (lx_.peek().kind != Tok::End) {
      Token at = lx_.peek();
      Node n = p0();
      expect(Tok::Dot, "expected '.' at end of clause");
      p.clauses.push_back(close_toplevel(to_clause(std::move(n), at), at));
    }
    return p;
  }

  QueryAst query() {
    QueryAst q;
    Token at = lx_.peek();
    if (at.kind == Tok::End) throw parse_error(at.line, at.col, "empty query");
    Node n = p0();
    expect(Tok::Dot, "expected '.' at end of query");
    Token rest = lx_.peek();
    if (rest.kind != Tok::End)
      throw parse_error(rest.line, rest.col, "unexpected text after query terminator");
    q.goal = to_goal(std::move(n), at);
    q.answer_vars = free_vars_of(q.goal);
    return q;
  }

 private:
  Lexer lx_;

  [[noreturn]] void err(const Token& t, const std::string& msg) {
    throw parse_error(t.line, t.col, msg);
  }

  Token expect(Tok k, const std::string& msg) {
    if (lx_.peek().kind != k) err(lx_.peek(), msg);
    return lx_.take();
  }

  // Grammar levels, loosest to tightest: ':-' then ';' then '=>' then ','.
  // Quantifiers scope maximally rightward up to ':-', '.', or a closing
  // delimiter.

  Node p0() {
    Token at = lx_.peek();
    Node left = p1();
    if (lx_.peek().kind == Tok::Neck) {
      lx_.take();
      TermAst head = to_head(std::move(left), at);
      Token bat = lx_.peek();
      Node body = p1();
      ClauseAst c;
      c.head = std::move(head);
      c.body = std::make_shared<GoalAst>(to_goal(std::move(body), bat));
      return Node{std::move(c)};
    }
    return left;
  }

  Node p1() {  // ';'
    Token at = lx_.peek();
    Node left = p2();
    if (lx_.peek().kind == Tok::Semi) {
      lx_.take();
      Token rat = lx_.peek();
      Node right = p1();
      return Node{GoalAst::mk_bin(GoalAst::Kind::Or, to_goal(std::move(left), at),
                                  to_goal(std::move(right), rat))};
    }
    return left;
  }

  Node p2() {  // '=>'
    Token at = lx_.peek();
    Node left = p3();
    if (lx_.peek().kind == Tok::Arrow) {
      lx_.take();
      std::vector<ClauseAst> ds;
      to_clause_list(std::move(left), at, ds);
      Token rat = lx_.peek();
      Node right = p2();
      return Node{GoalAst::mk_implies(std::move(ds), to_goal(std::move(right), rat))};
    }
    return left;
  }

  Node p3() {  // ','
    NodeList items;
    items.push_back(p4());
    while (lx_.peek().kind == Tok::Comma) {
      lx_.take();
      items.push_back(p4());
    }
    if (items.size() == 1) return std::move(items[0]);
    return Node{std::move(items)};
  }

  Node p4() {  // primary
    Token t = lx_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lx_.take();
        Node n = p0();
        expect(Tok::RParen, "expected ')'");
        return n;
      }
      case Tok::Forall:
      case Tok::Exists: {
        lx_.take();
        Token v = expect(Tok::Var, "expected a variable after quantifier");
        Token bat = lx_.peek();
        Node body = p1();
        return quantify(t.kind == Tok::Forall, v.text, std::move(body), bat);
      }
      case Tok::True:
        lx_.take();
        return Node{GoalAst::mk_true()};
      case Tok::Name:
      case Tok::Var:
      case Tok::LBracket:
        return Node{GoalAst::mk_atom(term())};
      default:
        err(t, "expected a goal, clause or term");
    }
  }

  Node quantify(bool universal, const std::string& v, Node body, const Token& at) {
    if (std::holds_alternative<ClauseAst>(body.v)) {
      if (!universal) err(at, "'exists' cannot quantify a clause");
      ClauseAst c = std::get<ClauseAst>(std::move(body.v));
      c.explicit_quantified.insert(c.explicit_quantified.begin(), v);
      return Node{std::move(c)};
    }
    GoalAst g = to_goal(std::move(body), at);
    return Node{GoalAst::mk_quant(universal ? GoalAst::Kind::Forall : GoalAst::Kind::Exists, v,
                                  std::move(g))};
  }

  TermAst term() {
    Token t = lx_.take();
    switch (t.kind) {
      case Tok::Var: {
        if (t.text == "_") return TermAst::var(fresh_anon());
        return TermAst::var(t.text);
      }
      case Tok::Name: {
        if (lx_.peek().kind == Tok::LParen) {
          lx_.take();
          std::vector<TermAst> args;
          args.push_back(term());
          while (lx_.peek().kind == Tok::Comma) {
            lx_.take();
            args.push_back(term());
          }
          expect(Tok::RParen, "expected ')' in argument list");
          return TermAst::str(t.text, std::move(args));
        }
        return TermAst::cst(t.text);
      }
      case Tok::LBracket:
        return list_tail();
      case Tok::LParen: {
        TermAst inner = term();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      default:
        err(t, "expected a term");
    }
  }

  TermAst list_tail() {
    if (lx_.peek().kind == Tok::RBracket) {
      lx_.take();
      return TermAst::cst("[]");
    }
    std::vector<TermAst> elems;
    elems.push_back(term());
    while (lx_.peek().kind == Tok::Comma) {
      lx_.take();
      elems.push_back(term());
    }
    TermAst tail = TermAst::cst("[]");
    if (lx_.peek().kind == Tok::Bar) {
      lx_.take();
      tail = term();
    }
    expect(Tok::RBracket, "expected ']'");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it)
      tail = TermAst::str(".", {std::move(*it), std::move(tail)});
    return tail;
  }

  std::string fresh_anon() { return "_Anon" + std::to_string(++anon_counter_); }

  // ---- elaboration ----------------------------------------------------

  GoalAst to_goal(Node n, const Token& at) {
    if (std::holds_alternative<GoalAst>(n.v)) {
      GoalAst g = std::get<GoalAst>(std::move(n.v));
      if (g.kind == GoalAst::Kind::Atom && g.atom.kind == TermAst::Kind::Var)
        err(at, "a bare variable is not a goal");
      return g;
    }
    if (std::holds_alternative<ClauseAst>(n.v))
      err(at, "clause syntax ':-' cannot be used as a goal connective");
    NodeList items = std::get<NodeList>(std::move(n.v));
    GoalAst g = to_goal(std::move(items.back()), at);
    for (size_t i = items.size() - 1; i-- > 0;)
      g = GoalAst::mk_bin(GoalAst::Kind::And, to_goal(std::move(items[i]), at), std::move(g));
    return g;
  }

  void to_clause_list(Node n, const Token& at, std::vector<ClauseAst>& out) {
    if (std::holds_alternative<NodeList>(n.v)) {
      NodeList items = std::get<NodeList>(std::move(n.v));
      for (auto& item : items) to_clause_list(std::move(item), at, out);
      return;
    }
    // Conjunctions written with parenthesized nesting also flatten into
    // the in-order leaf sequence of the antecedent list.
    if (std::holds_alternative<GoalAst>(n.v) &&
        std::get<GoalAst>(n.v).kind == GoalAst::Kind::And) {
      GoalAst g = std::get<GoalAst>(std::move(n.v));
      to_clause_list(Node{std::move(g.sub[0])}, at, out);
      to_clause_list(Node{std::move(g.sub[1])}, at, out);
      return;
    }
    out.push_back(to_clause(std::move(n), at));
  }

  ClauseAst to_clause(Node n, const Token& at) {
    if (std::holds_alternative<ClauseAst>(n.v)) return std::get<ClauseAst>(std::move(n.v));
    if (std::holds_alternative<GoalAst>(n.v)) {
      GoalAst g = std::get<GoalAst>(std::move(n.v));
      ClauseAst c;
      // A universally quantified atom, e.g. forall L r([],L,L), is a
      // clause whose quantifier prefix was written in goal position.
      while (g.kind == GoalAst::Kind::Forall) {
        c.explicit_quantified.push_back(g.var);
        GoalAst inner = std::move(g.sub[0]);
        g = std::move(inner);
      }
      c.head = check_rigid(goal_to_head(std::move(g), at), at);
      return c;
    }
    err(at, "expected a clause, found a conjunction of goals");
  }

  TermAst to_head(Node n, const Token& at) {
    if (!std::holds_alternative<GoalAst>(n.v)) err(at, "clause head must be an atom");
    return check_rigid(goal_to_head(std::get<GoalAst>(std::move(n.v)), at), at);
  }

  TermAst goal_to_head(GoalAst g, const Token& at) {
    if (g.kind != GoalAst::Kind::Atom) err(at, "clause head must be an atom");
    return std::move(g.atom);
  }

  TermAst check_rigid(TermAst t, const Token& at) {
    if (t.kind == TermAst::Kind::Var)
      err(at, "clause head must be rigid: its predicate symbol cannot be a variable");
    return t;
  }

  ClauseAst close_toplevel(ClauseAst c, const Token& at) {
    // Implicit clause-level universal quantification of remaining free
    // variables keeps every top-level clause closed.
    for (const auto& v : free_vars_of(c)) c.explicit_quantified.push_back(v);
    annotate_free_vars(c);
    if (!c.free_vars.empty())
      err(at, "top-level clause has unbound variable " + c.free_vars.front());
    return c;
  }

  int anon_counter_ = 0;
};

}  // namespace

ProgramAst parse_program(const std::string& text) { return Parser(text).program(); }

QueryAst parse_query(const std::string& text) {
  QueryAst q = Parser(text).query();
  if (q.goal.kind == GoalAst::Kind::Atom) {
    // fine
  }
  // Annotate free variables of clauses nested inside the query goal.
  ClauseAst wrapper;
  wrapper.head = TermAst::cst("query");
  wrapper.body = std::make_shared<GoalAst>(q.goal);
  annotate_free_vars(wrapper);
  q.goal = *wrapper.body;
  return q;
}

}  // namespace harrop
