#include "harrop/ast.hpp"

#include <algorithm>
#include <map>

namespace harrop {

bool is_var_name(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

bool is_const_name(const std::string& s) { return !s.empty() && !is_var_name(s); }

static bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void collect_free_vars(const TermAst& t, std::vector<std::string>& bound,
                       std::vector<std::string>& out) {
  switch (t.kind) {
    case TermAst::Kind::Var:
      if (!contains(bound, t.name) && !contains(out, t.name)) out.push_back(t.name);
      break;
    case TermAst::Kind::Const:
      break;
    case TermAst::Kind::Struct:
      for (const auto& a : t.args) collect_free_vars(a, bound, out);
      break;
  }
}

void collect_free_vars(const GoalAst& g, std::vector<std::string>& bound,
                       std::vector<std::string>& out) {
  switch (g.kind) {
    case GoalAst::Kind::True:
      break;
    case GoalAst::Kind::Atom:
      collect_free_vars(g.atom, bound, out);
      break;
    case GoalAst::Kind::And:
    case GoalAst::Kind::Or:
      collect_free_vars(g.sub[0], bound, out);
      collect_free_vars(g.sub[1], bound, out);
      break;
    case GoalAst::Kind::Exists:
    case GoalAst::Kind::Forall:
      bound.push_back(g.var);
      collect_free_vars(g.sub[0], bound, out);
      bound.pop_back();
      break;
    case GoalAst::Kind::Implies:
      for (const auto& c : g.antecedent) collect_free_vars(c, bound, out);
      collect_free_vars(g.sub[0], bound, out);
      break;
  }
}

void collect_free_vars(const ClauseAst& c, std::vector<std::string>& bound,
                       std::vector<std::string>& out) {
  size_t n = c.explicit_quantified.size();
  for (const auto& v : c.explicit_quantified) bound.push_back(v);
  collect_free_vars(c.head, bound, out);
  if (c.body) collect_free_vars(*c.body, bound, out);
  bound.resize(bound.size() - n);
}

std::vector<std::string> free_vars_of(const GoalAst& g) {
  std::vector<std::string> bound, out;
  collect_free_vars(g, bound, out);
  return out;
}

std::vector<std::string> free_vars_of(const ClauseAst& c) {
  std::vector<std::string> bound, out;
  collect_free_vars(c, bound, out);
  return out;
}

static void annotate_goal(GoalAst& g) {
  switch (g.kind) {
    case GoalAst::Kind::Implies:
      for (auto& c : g.antecedent) annotate_free_vars(c);
      annotate_goal(g.sub[0]);
      break;
    case GoalAst::Kind::And:
    case GoalAst::Kind::Or:
      annotate_goal(g.sub[0]);
      annotate_goal(g.sub[1]);
      break;
    case GoalAst::Kind::Exists:
    case GoalAst::Kind::Forall:
      annotate_goal(g.sub[0]);
      break;
    default:
      break;
  }
}

void annotate_free_vars(ClauseAst& c) {
  c.free_vars = free_vars_of(c);
  if (c.body) annotate_goal(*c.body);
}

// ---- alpha equality ---------------------------------------------------

namespace {

struct AlphaEnv {
  // Pairs of corresponding bound names, innermost last.
  std::vector<std::pair<std::string, std::string>> pairs;

  bool vars_match(const std::string& a, const std::string& b) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      if (it->first == a || it->second == b) return it->first == a && it->second == b;
    }
    return a == b;  // both free
  }
};

bool term_eq(const TermAst& a, const TermAst& b, const AlphaEnv& env) {
  if (a.kind != b.kind) return false;
  if (a.kind == TermAst::Kind::Var) return env.vars_match(a.name, b.name);
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!term_eq(a.args[i], b.args[i], env)) return false;
  return true;
}

bool goal_eq(const GoalAst& a, const GoalAst& b, AlphaEnv& env);

bool clause_eq(const ClauseAst& a, const ClauseAst& b, AlphaEnv& env) {
  if (a.explicit_quantified.size() != b.explicit_quantified.size()) return false;
  size_t n = a.explicit_quantified.size();
  for (size_t i = 0; i < n; ++i)
    env.pairs.emplace_back(a.explicit_quantified[i], b.explicit_quantified[i]);
  bool ok = term_eq(a.head, b.head, env) && static_cast<bool>(a.body) == static_cast<bool>(b.body);
  if (ok && a.body) ok = goal_eq(*a.body, *b.body, env);
  env.pairs.resize(env.pairs.size() - n);
  return ok;
}

bool goal_eq(const GoalAst& a, const GoalAst& b, AlphaEnv& env) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case GoalAst::Kind::True:
      return true;
    case GoalAst::Kind::Atom:
      return term_eq(a.atom, b.atom, env);
    case GoalAst::Kind::And:
    case GoalAst::Kind::Or:
      return goal_eq(a.sub[0], b.sub[0], env) && goal_eq(a.sub[1], b.sub[1], env);
    case GoalAst::Kind::Exists:
    case GoalAst::Kind::Forall: {
      env.pairs.emplace_back(a.var, b.var);
      bool ok = goal_eq(a.sub[0], b.sub[0], env);
      env.pairs.pop_back();
      return ok;
    }
    case GoalAst::Kind::Implies: {
      if (a.antecedent.size() != b.antecedent.size()) return false;
      for (size_t i = 0; i < a.antecedent.size(); ++i)
        if (!clause_eq(a.antecedent[i], b.antecedent[i], env)) return false;
      return goal_eq(a.sub[0], b.sub[0], env);
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const GoalAst& a, const GoalAst& b) {
  AlphaEnv env;
  return goal_eq(a, b, env);
}

bool alpha_equal(const ClauseAst& a, const ClauseAst& b) {
  AlphaEnv env;
  return clause_eq(a, b, env);
}

bool alpha_equal(const ProgramAst& a, const ProgramAst& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i)
    if (!alpha_equal(a.clauses[i], b.clauses[i])) return false;
  return true;
}

}  // namespace harrop
