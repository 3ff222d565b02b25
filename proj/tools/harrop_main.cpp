#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harrop/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"harrop: logic programming with scoped clauses — Horn clauses "
               "extended with implication and universal quantification in goals"};
  app.require_subcommand(1);

  harrop::SessionConfig cfg;
  std::vector<std::string> files;
  std::string query;
  std::string engine = "wam";

  auto add_common = [&](CLI::App* c, bool need_query) {
    c->add_option("files", files, "program files")->required();
    auto* q = c->add_option("-q,--query", query, "query goal, '.'-terminated");
    if (need_query) q->required();
    c->add_option("--engine", engine, "interp | wam")
        ->check(CLI::IsMember({"interp", "wam"}));
    c->add_flag("--all", cfg.all_solutions, "enumerate all answers");
    c->add_option("--max-solutions", cfg.max_solutions, "stop after N answers");
    c->add_option("--max-depth", cfg.max_depth, "interpreter depth limit");
    c->add_option("--max-steps", cfg.max_steps, "step budget");
    c->add_flag("--trace", cfg.trace, "per-step trace on stderr");
    c->add_flag("--show-tags", cfg.show_tags, "print ^tag on variables/constants");
    c->add_flag("--emit-bytecode", cfg.emit_bytecode, "dump compiled listing");
  };

  CLI::App* run = app.add_subcommand("run", "solve a query and print answers");
  add_common(run, true);
  CLI::App* rep = app.add_subcommand("repl", "interactive query loop");
  add_common(rep, false);
  CLI::App* chk = app.add_subcommand("check", "run both engines and compare");
  add_common(chk, true);
  CLI::App* cmp = app.add_subcommand("compile", "print the compiled bytecode listing");
  add_common(cmp, false);

  CLI11_PARSE(app, argc, argv);
  cfg.engine = engine == "interp" ? harrop::SessionConfig::Engine::Interp
                                  : harrop::SessionConfig::Engine::Wam;

  if (run->parsed())
    return harrop::run_files(files, query, cfg, std::cout, std::cerr);
  if (rep->parsed())
    return harrop::repl(files, cfg, std::cin, std::cout, std::cerr);
  if (chk->parsed())
    return harrop::cross_check(files, query, cfg, std::cout, std::cerr);
  return harrop::compile_files(files, query, std::cout, std::cerr);
}
