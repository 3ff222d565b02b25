// Acceptance gate: one pass/fail line per top-level criterion. Exits
// nonzero if any criterion fails. Each check runs in seconds at desk
// scale; most exercise both execution engines.

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "harrop/compiler.hpp"
#include "harrop/instr.hpp"
#include "harrop/interpreter.hpp"
#include "harrop/machine.hpp"
#include "harrop/parser.hpp"
#include "support/answers.hpp"
#include "support/listing.hpp"
#include "support/mgu_oracle.hpp"
#include "support/randprog.hpp"
#include "support/rollback.hpp"

using namespace harrop;

namespace {

std::vector<std::string> interp_all(const std::string& prog, const std::string& query,
                                    uint64_t max_steps = 500000) {
  Symtab syms;
  Store store(syms);
  ProgramAst p = parse_program(prog);
  Interpreter ip(store, p, Interpreter::Config{.max_steps = max_steps});
  ip.start(parse_query(query));
  std::vector<std::string> out;
  while (auto a = ip.next()) out.push_back(format_answer(store, *a));
  return out;
}

std::vector<std::string> machine_all(const std::string& prog, const std::string& query,
                                     uint64_t max_steps = 500000) {
  Symtab syms;
  Store store(syms);
  CodeImage img = compile_program(parse_program(prog), parse_query(query), syms);
  Machine m(store, img, Machine::Config{.max_steps = max_steps});
  m.start();
  std::vector<std::string> out;
  while (auto a = m.next()) out.push_back(format_answer(store, *a));
  return out;
}

bool both_fail(const std::string& prog, const std::string& query) {
  return interp_all(prog, query).empty() && machine_all(prog, query).empty();
}

bool both_succeed(const std::string& prog, const std::string& query) {
  return !interp_all(prog, query).empty() && !machine_all(prog, query).empty();
}

int failures = 0;

void report(int n, const char* what, bool ok) {
  std::printf("%s  %2d  %s\n", ok ? "PASS" : "FAIL", n, what);
  if (!ok) ++failures;
}

// ---- criterion bodies -------------------------------------------------

bool quantifier_order() {
  return both_fail("p(X,X).", "exists X forall Y p(X,Y).") &&
         both_succeed("p(X,X).", "forall Y exists X p(X,Y).");
}

bool hypothetical_scope() {
  return both_fail("", "(q :- forall X p(X)) => (exists X (p(X) => q)).");
}

bool tied_variables() {
  return both_fail("q(a). g(X) :- q(X), p(b).", "exists X (p(X) => g(X)).") &&
         both_succeed("q(b). g(X) :- q(X), p(b).", "exists X (p(X) => g(X)).");
}

bool generic_instance_trace() {
  const char* prog = "p(d(Z)) :- q(Z).";
  const char* query = "exists X forall Y ((q(Y)) => p(X)).";
  if (!both_fail(prog, query)) return false;
  // the interpreter trace must show the tag-1 variable failing against
  // the tag-2 generated constant
  std::ostringstream trace;
  Symtab syms;
  Store store(syms);
  ProgramAst p = parse_program(prog);
  Interpreter::Config cfg;
  cfg.trace = &trace;
  Interpreter ip(store, p, cfg);
  ip.start(parse_query(query));
  if (ip.next().has_value()) return false;
  std::string t = trace.str();
  return t.find("FAIL tag-conflict") != std::string::npos &&
         t.find("c!2!1^2") != std::string::npos;
}

const char* kRevPlain =
    "rev(L1,L2) :- rev_aux(L1,L2,[]). "
    "rev_aux([],L,L). "
    "rev_aux([X|L1],L2,L3) :- rev_aux(L1,L2,[X|L3]).";
const char* kRevLocal =
    "rev(L1,L2) :- ((forall L rev_aux([],L,L)), "
    "(forall X forall L1 forall L2 forall L3 "
    "(rev_aux([X|L1],L2,L3) :- rev_aux(L1,L2,[X|L3])))) => rev_aux(L1,L2,[]).";
const char* kRevShared =
    "rev(L1,L2) :- (rev_aux([],L2), (forall X forall L1 forall L3 "
    "(rev_aux([X|L1],L3) :- rev_aux(L1,[X|L3])))) => rev_aux(L1,[]).";

bool scoped_auxiliaries() {
  std::vector<std::string> expect{"L = [3,2,1]"};
  for (const char* prog : {kRevPlain, kRevLocal, kRevShared}) {
    if (interp_all(prog, "rev([1,2,3],L).") != expect) return false;
    if (machine_all(prog, "rev([1,2,3],L).") != expect) return false;
  }
  // a conflicting global auxiliary does not disturb the scoped variants
  std::string g3 = std::string(kRevLocal) + " rev_aux(x,x,x).";
  std::string g2 = std::string(kRevShared) + " rev_aux(x,x).";
  if (interp_all(g3, "rev([1,2,3],L).") != expect) return false;
  if (machine_all(g3, "rev([1,2,3],L).") != expect) return false;
  if (interp_all(g2, "rev([1,2,3],L).") != expect) return false;
  if (machine_all(g2, "rev([1,2,3],L).") != expect) return false;
  // front addition is observable when the global clause does match
  std::vector<std::string> order{"X = local", "X = global"};
  return interp_all("p(global). t(X) :- (p(local)) => p(X).", "t(X).") == order &&
         machine_all("p(global). t(X) :- (p(local)) => p(X).", "t(X).") == order;
}

bool backtracking_restores_context() {
  const char* prog =
      "p :- ((d1) => p1), ((d2) => p2). "
      "p1 :- ((d3) => p3), ((d4) => p4). "
      "p2 :- ((d5(a), d5(b)) => p5(X)), ((d6(X)) => p6). "
      "p3. p4. "
      "p5(V) :- d5(V). "
      "p6 :- d6(Y), q6(Y). "
      "q6(b).";
  Symtab syms;
  Store store(syms);
  ProgramAst past = parse_program(prog);
  Interpreter ip(store, past, {});
  Sym d5 = syms.intern("d5");
  Sym d6 = syms.intern("d6");
  ContextArena& ctx = ip.context();
  // instrumented lookup: on every context restore, probe which
  // hypothetical predicates the reinstated program can resolve
  bool saw_d5_without_d6 = false;
  bool probing = false;
  ctx.listener.on_restore = [&](RecordId r) {
    if (probing) return;
    probing = true;
    bool h5 = ctx.lookup({d5, 1}, r).found;
    bool h6 = ctx.lookup({d6, 1}, r).found;
    saw_d5_without_d6 = saw_d5_without_d6 || (h5 && !h6);
    probing = false;
  };
  ip.start(parse_query("p."));
  if (!ip.next().has_value()) return false;
  if (ip.next().has_value()) return false;  // exactly one proof
  if (!saw_d5_without_d6) return false;
  // the compiled machine reaches the same verdict as the oracle
  return machine_all(prog, "p.") == std::vector<std::string>{"yes"};
}

bool golden_code() {
  const char* prog = R"PROG(
rev(L1,L2) :-
  (rev_aux([],L2),
   forall X forall L1 forall L3 (rev_aux([X|L1],L3) :- rev_aux(L1,[X|L3])))
  => rev_aux(L1,[]).

p(Y) :- (forall U exists Z
          (((forall W (d1(Y,W,Z) :- r(Y,W))),
            (forall W (d2(Z,W) :- d1(Z,W,W))))
           => exists V g(Z,U,Y,V))),
        h(Y).
)PROG";
  Symtab syms;
  CodeImage img = compile_program(parse_program(prog), parse_query("rev([1,2],L)."), syms);
  auto listing = [&](const char* name) {
    const CodeImage::Proc* p = img.find_proc(name);
    return p ? disassemble_range(img, syms, p->begin, p->end) : std::string("<missing>");
  };
  const std::string rev_expected = R"(
rev: allocate 1
     get_variable Y1,A2
     push_impl_point t1,1
     put_constant [],A2
     call rev_aux,1
     pop_impl_point
     deallocate
     proceed
)";
  const std::string rev_aux_expected = R"(
rev_aux: try_me_else C1
     initialize X3,1
     get_constant [],A1
     get_value X3,A2
     proceed
C1:  retry_me_else C2
     get_list A1
     unify_variable X3
     unify_variable A1
     get_variable X4,A2
     put_list A2
     set_value X3
     set_local_value X4
     execute rev_aux
C2:  trust_ext 1
)";
  const std::string p_expected = R"(
p:   allocate 4
     get_variable Y1,A1
     incr_universe
     set_univ_tag Y2
     set_exist_tag Y3
     push_impl_point t2,4
     set_exist_tag Y4
     put_value Y3,A1
     put_value Y2,A2
     put_value Y1,A3
     put_value Y4,A4
     call g,4
     pop_impl_point
     decr_universe
     put_value Y1,A1
     deallocate
     execute h
)";
  return listing::normalize(listing("rev")) == listing::normalize(rev_expected) &&
         listing::normalize(listing("rev_aux")) == listing::normalize(rev_aux_expected) &&
         listing::normalize(listing("p")) == listing::normalize(p_expected);
}

bool differential_equivalence() {
  int compared = 0;
  for (uint32_t seed = 0; seed < 1500 && compared < 500; ++seed) {
    randprog::Gen gen(seed);
    auto g = gen.make();
    std::vector<std::string> ia, ma;
    bool limit = false;
    {
      Symtab syms;
      Store store(syms);
      ProgramAst p = parse_program(g.program);
      Interpreter ip(store, p, Interpreter::Config{.max_depth = 50, .max_steps = 200000});
      ip.start(parse_query(g.query));
      while (auto a = ip.next()) ia.push_back(format_answer(store, *a));
      limit = limit || ip.end_reason() == EndReason::Limit;
    }
    {
      Symtab syms;
      Store store(syms);
      CodeImage img = compile_program(parse_program(g.program), parse_query(g.query), syms);
      Machine m(store, img, Machine::Config{.max_steps = 200000});
      m.start();
      while (auto a = m.next()) ma.push_back(format_answer(store, *a));
      limit = limit || m.end_reason() == EndReason::Limit;
    }
    if (limit) continue;  // inconclusive under the shared budget
    if (answers::normalize(ia) != answers::normalize(ma)) return false;
    ++compared;
  }
  return compared >= 500;
}

bool unification_oracle() {
  auto st = mgu_oracle::run(/*stride=*/1);
  return st.failures == 0 && st.pairs == st.agree && st.unifiable > 100 &&
         st.pairs - st.unifiable > 100;
}

bool rollback_totality() { return rollback_check::run_many(1000).ok; }

bool typing_shadowing_defect() {
  const char* prog =
      "type_of(1,int). "
      "type_of(plus,arr(int,arr(int,int))). "
      "type_of(app(E1,E2),T1) :- type_of(E1,arr(T2,T1)), type_of(E2,T2). "
      "type_of(abst(X,E),arr(T1,T2)) :- (type_of(X,T1)) => type_of(E,T2).";
  // well-formed terms type as expected ...
  if (interp_all(prog, "type_of(abst(v,app(app(plus,v),v)),T).") !=
      std::vector<std::string>{"T = arr(int,int)"})
    return false;
  // ... and the shadowing term, which a sound treatment of binding would
  // reject, wrongly receives a type on both engines: the inner hypothesis
  // about the constant v coexists with the outer one (documented negative
  // example, not a correctness claim)
  const char* bad = "type_of(abst(v,abst(v,app(app(plus,v),app(v,v)))),T).";
  auto ia = interp_all(prog, bad, 2000000);
  auto ma = machine_all(prog, bad, 2000000);
  return !ia.empty() && !ma.empty() &&
         ia.front() == "T = arr(arr(int,int),arr(int,int))" &&
         ma.front() == ia.front();
}

}  // namespace

int main() {
  report(1, "quantifier order decides solvability on both engines", quantifier_order());
  report(2, "universal hypotheses cannot leak into existential scope",
         hypothetical_scope());
  report(3, "tied variables cannot be instantiated two ways", tied_variables());
  report(4, "generic instances escape is refused with a tag-conflict trace",
         generic_instance_trace());
  report(5, "scoped auxiliaries: all reversal formulations, noise-immune",
         scoped_auxiliaries());
  report(6, "backtracking reinstates the hypothetical program in force",
         backtracking_restores_context());
  report(7, "compiled listings match the reference code after normalization",
         golden_code());
  report(8, "machine and interpreter agree on 500 random programs",
         differential_equivalence());
  report(9, "tagged unification matches the brute-force unifier enumeration",
         unification_oracle());
  report(10, "1000 unify-then-fail sequences restore the store bit-for-bit",
         rollback_totality());
  report(11, "constant-named binders reproduce the documented typing defect",
         typing_shadowing_defect());
  if (failures > 0) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all 11 criteria passed\n");
  return 0;
}
