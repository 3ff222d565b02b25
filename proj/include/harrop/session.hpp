#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace harrop {

/// Settings shared by all front-end commands.
struct SessionConfig {
  enum class Engine { Interp, Wam };
  Engine engine = Engine::Wam;   // compiled machine by default
  bool all_solutions = false;    // run: enumerate every answer
  uint64_t max_solutions = 0;    // 0 = unlimited
  uint32_t max_depth = 0;        // interpreter backchaining depth, 0 = unlimited
  uint64_t max_steps = 0;        // machine / interpreter step budget, 0 = unlimited
  bool trace = false;            // per-step trace on standard error
  bool show_tags = false;        // print ^tag on variables and constants
  bool emit_bytecode = false;    // run: also dump the compiled listing
};

// Exit statuses shared by the commands below. Every outcome maps to
// exactly one code; user input never escapes as an exception.
inline constexpr int kExitAnswers = 0;       // at least one answer (run) / AGREE (check)
inline constexpr int kExitNoAnswers = 1;     // exhaustive search, no answer
inline constexpr int kExitError = 2;         // I/O or parse error
inline constexpr int kExitLimit = 3;         // limit hit / INCONCLUSIVE (check)
inline constexpr int kExitDisagree = 4;      // check: engines disagree

/// Load the programs, solve the query, print answers ("Var = term" lines,
/// then "yes"; "no" when the search exhausts without an answer).
int run_files(const std::vector<std::string>& paths, const std::string& query_text,
              const SessionConfig& cfg, std::ostream& out, std::ostream& err);

/// Interactive loop: reads '.'-terminated queries, prints one answer at a
/// time; a line starting with ';' asks for the next answer, anything else
/// stops the enumeration. Directives: :engine interp|wam, :trace on|off,
/// :quit. Per-query errors are reported and the loop continues.
int repl(const std::vector<std::string>& paths, SessionConfig cfg, std::istream& in,
         std::ostream& out, std::ostream& err);

/// Run the query on both engines under the shared limits and compare the
/// answer multisets up to variable renaming and generated-constant
/// numbering. Prints AGREE, DISAGREE (with a witness), or INCONCLUSIVE.
int cross_check(const std::vector<std::string>& paths, const std::string& query_text,
                const SessionConfig& cfg, std::ostream& out, std::ostream& err);

/// Compile the programs (and the query, when given) and print the textual
/// bytecode listing.
int compile_files(const std::vector<std::string>& paths, const std::string& query_text,
                  std::ostream& out, std::ostream& err);

}  // namespace harrop
