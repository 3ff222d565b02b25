#pragma once

// Independent oracle prover. Works directly on the surface AST with
// immutable terms and explicit substitutions, searches breadth-first over
// proof states, and enumerates every answer whose proof stays within a
// step bound. Used to cross-check the engines' answers (soundness of each
// answer and completeness of leftmost depth-first enumeration at small
// scope). Deliberately shares no code with the engine store.

#include <deque>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "harrop/ast.hpp"
#include "harrop/parser.hpp"

namespace naive_prover {

using harrop::ClauseAst;
using harrop::GoalAst;
using harrop::TermAst;

struct NTerm {
  enum class K { Var, Con, App } k;
  int var = -1;            // Var: global id
  std::string name;        // Con / App functor
  int tag = 0;             // Con only (Var tags live in the state's tag map)
  std::vector<NTerm> args;

  static NTerm v(int id) { return {K::Var, id, "", 0, {}}; }
  static NTerm c(std::string n, int tag) { return {K::Con, -1, std::move(n), tag, {}}; }
  static NTerm app(std::string f, std::vector<NTerm> a) {
    return {K::App, -1, std::move(f), 0, std::move(a)};
  }
};

using Subst = std::map<int, NTerm>;
using TagMap = std::map<int, int>;

inline NTerm walk(const NTerm& t, const Subst& s) {
  if (t.k == NTerm::K::Var) {
    auto it = s.find(t.var);
    if (it != s.end()) return walk(it->second, s);
    return t;
  }
  if (t.k == NTerm::K::Con) return t;
  NTerm out = NTerm::app(t.name, {});
  for (const auto& a : t.args) out.args.push_back(walk(a, s));
  return out;
}

inline bool occurs(int v, const NTerm& t) {
  if (t.k == NTerm::K::Var) return t.var == v;
  for (const auto& a : t.args)
    if (occurs(v, a)) return true;
  return false;
}

inline int max_con_tag(const NTerm& t) {
  if (t.k == NTerm::K::Con) return t.tag;
  int m = 0;
  for (const auto& a : t.args) m = std::max(m, max_con_tag(a));
  return m;
}

inline void collect_vars(const NTerm& t, std::set<int>& out) {
  if (t.k == NTerm::K::Var) out.insert(t.var);
  for (const auto& a : t.args) collect_vars(a, out);
}

inline bool unify(const NTerm& a, const NTerm& b, Subst& s, TagMap& tags) {
  NTerm x = walk(a, s), y = walk(b, s);
  if (x.k == NTerm::K::Var && y.k == NTerm::K::Var && x.var == y.var) return true;
  if (x.k == NTerm::K::Var || y.k == NTerm::K::Var) {
    if (y.k == NTerm::K::Var && x.k != NTerm::K::Var) std::swap(x, y);
    // x is a variable; bind it to y if the tags admit it
    int vtag = tags.at(x.var);
    if (occurs(x.var, y)) return false;
    if (max_con_tag(y) > vtag) return false;
    std::set<int> vs;
    collect_vars(y, vs);
    for (int v : vs)
      if (tags.at(v) > vtag) tags[v] = vtag;  // tag lowering
    s[x.var] = y;
    return true;
  }
  if (x.k == NTerm::K::Con)
    return y.k == NTerm::K::Con && x.name == y.name && x.tag == y.tag;
  if (y.k == NTerm::K::Con) return false;
  if (x.name != y.name || x.args.size() != y.args.size()) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!unify(x.args[i], y.args[i], s, tags)) return false;
  return true;
}

// A hypothetical program unit: clauses plus the closure binding their
// tied variables.
struct UnitRef {
  const std::vector<ClauseAst>* clauses;
  std::shared_ptr<std::map<std::string, NTerm>> closure;
};

struct Frame {
  const GoalAst* goal;
  std::shared_ptr<std::map<std::string, NTerm>> env;
  int universe;
  std::vector<UnitRef> context;  // innermost last
  int depth;
};

struct State {
  std::vector<Frame> goals;  // leftmost at back
  Subst subst;
  TagMap tags;
};

class Prover {
 public:
  Prover(const harrop::ProgramAst& program, int max_steps)
      : program_(program), max_steps_(max_steps) {}

  /// Enumerate all answers reachable within the step bound as canonical
  /// strings; sets `complete` to false if the bound cut anything off.
  std::vector<std::string> solve(const harrop::QueryAst& query, bool* complete = nullptr) {
    var_counter_ = 0;
    gen_counters_.clear();
    std::vector<std::string> answers;
    State init;
    auto env = std::make_shared<std::map<std::string, NTerm>>();
    std::vector<std::pair<std::string, NTerm>> answer_vars;
    for (const auto& v : query.answer_vars) {
      NTerm t = fresh_var(init, 1);
      (*env)[v] = t;
      answer_vars.emplace_back(v, t);
    }
    Frame f{&query.goal, env, 1, {UnitRef{&program_.clauses, nullptr}}, 0};
    init.goals.push_back(f);

    bool cut_off = false;
    std::deque<State> queue{init};
    int steps = 0;
    while (!queue.empty()) {
      if (++steps > max_steps_) {
        cut_off = true;
        break;
      }
      State st = std::move(queue.front());
      queue.pop_front();
      if (st.goals.empty()) {
        answers.push_back(format_answer(answer_vars, st));
        continue;
      }
      expand(std::move(st), queue);
    }
    if (complete) *complete = !cut_off;
    return answers;
  }

 private:
  NTerm fresh_var(State& st, int tag) {
    int id = var_counter_++;
    st.tags[id] = tag;
    return NTerm::v(id);
  }

  NTerm fresh_gen_const(int tag) {
    int serial = ++gen_counters_[tag];
    return NTerm::c("c!" + std::to_string(tag) + "!" + std::to_string(serial), tag);
  }

  NTerm build(const TermAst& t, const std::map<std::string, NTerm>& env) {
    switch (t.kind) {
      case TermAst::Kind::Var:
        return env.at(t.name);
      case TermAst::Kind::Const:
        return NTerm::c(t.name, 1);
      case TermAst::Kind::Struct: {
        std::vector<NTerm> args;
        for (const auto& a : t.args) args.push_back(build(a, env));
        return NTerm::app(t.name, std::move(args));
      }
    }
    return NTerm::c("?", 1);
  }

  void expand(State st, std::deque<State>& queue) {
    Frame f = st.goals.back();
    st.goals.pop_back();
    const GoalAst& g = *f.goal;
    switch (g.kind) {
      case GoalAst::Kind::True:
        queue.push_back(std::move(st));
        return;
      case GoalAst::Kind::And: {
        st.goals.push_back({&g.sub[1], f.env, f.universe, f.context, f.depth});
        st.goals.push_back({&g.sub[0], f.env, f.universe, f.context, f.depth});
        queue.push_back(std::move(st));
        return;
      }
      case GoalAst::Kind::Or: {
        State alt = st;
        st.goals.push_back({&g.sub[0], f.env, f.universe, f.context, f.depth});
        alt.goals.push_back({&g.sub[1], f.env, f.universe, f.context, f.depth});
        queue.push_back(std::move(st));
        queue.push_back(std::move(alt));
        return;
      }
      case GoalAst::Kind::Exists: {
        auto env = std::make_shared<std::map<std::string, NTerm>>(*f.env);
        (*env)[g.var] = fresh_var(st, f.universe);
        st.goals.push_back({&g.sub[0], env, f.universe, f.context, f.depth});
        queue.push_back(std::move(st));
        return;
      }
      case GoalAst::Kind::Forall: {
        auto env = std::make_shared<std::map<std::string, NTerm>>(*f.env);
        (*env)[g.var] = fresh_gen_const(f.universe + 1);
        st.goals.push_back({&g.sub[0], env, f.universe + 1, f.context, f.depth});
        queue.push_back(std::move(st));
        return;
      }
      case GoalAst::Kind::Implies: {
        auto closure = std::make_shared<std::map<std::string, NTerm>>();
        for (const auto& c : g.antecedent)
          for (const auto& v : c.free_vars)
            if (!closure->count(v)) (*closure)[v] = f.env->at(v);
        std::vector<UnitRef> ctx = f.context;
        ctx.push_back(UnitRef{&g.antecedent, closure});
        st.goals.push_back({&g.sub[0], f.env, f.universe, ctx, f.depth});
        queue.push_back(std::move(st));
        return;
      }
      case GoalAst::Kind::Atom: {
        NTerm goal_term = build(g.atom, *f.env);
        // innermost unit first, clauses in textual order
        for (auto uit = f.context.rbegin(); uit != f.context.rend(); ++uit) {
          for (const auto& clause : *uit->clauses) {
            if (clause.head.name != g.atom.name ||
                clause.head.args.size() != g.atom.args.size())
              continue;
            State next = st;
            std::map<std::string, NTerm> inst;
            if (uit->closure) inst = *uit->closure;
            for (const auto& qv : clause.explicit_quantified)
              inst[qv] = fresh_var(next, f.universe);
            NTerm head = build(clause.head, inst);
            if (!unify(goal_term, head, next.subst, next.tags)) continue;
            if (clause.body) {
              auto benv = std::make_shared<std::map<std::string, NTerm>>(std::move(inst));
              next.goals.push_back(
                  {clause.body.get(), benv, f.universe, f.context, f.depth + 1});
            }
            queue.push_back(std::move(next));
          }
        }
        return;
      }
    }
  }

  std::string format_answer(const std::vector<std::pair<std::string, NTerm>>& vars,
                            const State& st) {
    std::map<int, std::string> names;
    int counter = 0;
    std::string out;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (i) out += ", ";
      out += vars[i].first + " = ";
      print(walk(vars[i].second, st.subst), names, counter, out);
    }
    if (vars.empty()) out = "yes";
    return out;
  }

  static void print(const NTerm& t, std::map<int, std::string>& names, int& counter,
                    std::string& out) {
    switch (t.k) {
      case NTerm::K::Var: {
        auto it = names.find(t.var);
        if (it == names.end())
          it = names.emplace(t.var, "_G" + std::to_string(++counter)).first;
        out += it->second;
        return;
      }
      case NTerm::K::Con:
        out += t.name;
        return;
      case NTerm::K::App:
        if (t.name == "." && t.args.size() == 2) {
          out += '[';
          const NTerm* cur = &t;
          print(cur->args[0], names, counter, out);
          while (cur->args[1].k == NTerm::K::App && cur->args[1].name == "." &&
                 cur->args[1].args.size() == 2) {
            cur = &cur->args[1];
            out += ',';
            print(cur->args[0], names, counter, out);
          }
          if (!(cur->args[1].k == NTerm::K::Con && cur->args[1].name == "[]")) {
            out += '|';
            print(cur->args[1], names, counter, out);
          }
          out += ']';
          return;
        }
        out += t.name;
        out += '(';
        for (size_t i = 0; i < t.args.size(); ++i) {
          if (i) out += ',';
          print(t.args[i], names, counter, out);
        }
        out += ')';
        return;
    }
  }

  const harrop::ProgramAst& program_;
  int max_steps_;
  int var_counter_ = 0;
  std::map<int, int> gen_counters_;
};

}  // namespace naive_prover
