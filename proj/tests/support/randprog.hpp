#pragma once

// Random program generator for engine-against-engine differential tests.
// Programs terminate by construction: predicates are stratified (p<i> may
// only call p<j> with j < i, including inside implication antecedents), so
// every derivation strictly descends and exhaustive search is finite.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace randprog {

struct Generated {
  std::string program;
  std::string query;
};

class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  Generated make() {
    int npreds = 3 + pick(3);  // p0 .. p<npreds-1>
    arity_.clear();
    for (int i = 0; i < npreds; ++i) arity_.push_back(i == 0 ? 1 : pick(3));
    var_counter_ = 0;
    std::string prog;
    int clause_budget = 6;
    // Every predicate gets at least one clause while the budget lasts,
    // lowest first so callees exist.
    for (int i = 0; i < npreds && clause_budget > 0; ++i) {
      int k = 1 + (pick(3) == 0 ? 1 : 0);
      for (int c = 0; c < k && clause_budget > 0; ++c, --clause_budget)
        prog += clause(i) + "\n";
    }
    Generated g;
    g.program = prog;
    int top = npreds - 1;
    std::vector<std::string> qvars;
    if (arity_[top] >= 1) qvars.push_back("X");
    if (arity_[top] >= 2) qvars.push_back("Y");
    g.query = atom(top, qvars, /*ground_only=*/false) + ".";
    return g;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<int> arity_;
  int var_counter_ = 0;

  int pick(int n) { return static_cast<int>(rng_() % static_cast<uint64_t>(n)); }
  std::string fresh(const char* stem) { return stem + std::to_string(++var_counter_); }

  std::string term(const std::vector<std::string>& scope, int depth, bool ground_only) {
    int c = pick(10);
    if (!ground_only && !scope.empty() && c < 4) return scope[pick((int)scope.size())];
    if (depth > 0 && c >= 8) {
      if (pick(2) == 0) return "f(" + term(scope, depth - 1, ground_only) + ")";
      return "[" + term(scope, depth - 1, ground_only) + "]";
    }
    return std::string(1, static_cast<char>('a' + pick(3)));
  }

  std::string atom(int j, const std::vector<std::string>& scope, bool ground_only) {
    std::string s = "p" + std::to_string(j);
    int n = arity_[j];
    if (n == 0) return s;
    s += "(";
    for (int k = 0; k < n; ++k) {
      if (k) s += ",";
      if (!ground_only && k < (int)scope.size() && pick(3) == 0)
        s += scope[k];  // bias toward using in-scope variables directly
      else
        s += term(scope, 2, ground_only);
    }
    return s + ")";
  }

  // A clause usable in an implication antecedent. Head over tied
  // variables from the enclosing scope, constants, and (under an explicit
  // quantifier prefix) one local variable.
  std::string unit_clause(int max_pred, const std::vector<std::string>& scope) {
    int j = pick(max_pred + 1);
    std::vector<std::string> cvars;
    std::string prefix;
    if (pick(2) == 0) {
      cvars.push_back(fresh("A"));
      prefix = "forall " + cvars.back() + " ";
    }
    std::vector<std::string> usable = cvars;
    if (!scope.empty() && pick(2) == 0) usable.push_back(scope[pick((int)scope.size())]);
    std::string head = atom(j, usable, false);
    std::string cl = head;
    if (j > 0 && pick(2) == 0) cl += " :- " + atom(pick(j), usable, false);
    if (!prefix.empty()) return "(" + prefix + "(" + cl + "))";
    return "(" + cl + ")";
  }

  std::string goal(int i, std::vector<std::string> scope, int depth, int scope_nest) {
    if (i == 0) return "true";
    if (depth <= 0) return atom(pick(i), scope, false);
    switch (pick(8)) {
      case 0:
      case 1:
      case 2:
        return atom(pick(i), scope, false);
      case 3:
        return "(" + goal(i, scope, depth - 1, scope_nest) + ", " +
               goal(i, scope, depth - 1, scope_nest) + ")";
      case 4:
        return "(" + goal(i, scope, depth - 1, scope_nest) + "; " +
               goal(i, scope, depth - 1, scope_nest) + ")";
      case 5: {
        std::string v = fresh("E");
        scope.push_back(v);
        return "(exists " + v + " (" + goal(i, scope, depth - 1, scope_nest) + "))";
      }
      case 6: {
        if (scope_nest >= 2) return atom(pick(i), scope, false);
        std::string v = fresh("U");
        scope.push_back(v);
        return "(forall " + v + " (" + goal(i, scope, depth - 1, scope_nest + 1) + "))";
      }
      default: {
        if (scope_nest >= 2) return atom(pick(i), scope, false);
        std::string ds = unit_clause(i - 1, scope);
        if (pick(2) == 0) ds += ", " + unit_clause(i - 1, scope);
        return "((" + ds + ") => (" + goal(i, scope, depth - 1, scope_nest + 1) + "))";
      }
    }
  }

  std::string clause(int i) {
    std::vector<std::string> cvars;
    int nv = pick(3);
    for (int k = 0; k < nv; ++k) cvars.push_back(fresh("V"));
    std::string head = atom(i, cvars, false);
    if (i == 0 || pick(3) == 0) return head + ".";
    return head + " :- " + goal(i, cvars, 2, 0) + ".";
  }
};

}  // namespace randprog
