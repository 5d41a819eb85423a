// Command-line driver.

#ifndef LIMITFORGE_CLI_HPP_
#define LIMITFORGE_CLI_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "limitforge/oracle.hpp"
#include "limitforge/presentation.hpp"
#include "limitforge/recognize.hpp"

namespace limitforge {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 limit (or success), 1 not limit, 2 unknown, 3 error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// FNV-1a 64 of the text, as "fnv1a64:<16 hex digits>".
std::string digest(std::string_view text);

//! The bundled ground-truth cases. `may_be_unknown` marks a case whose
//! correct verdict is Limit but where Unknown is accepted.
struct CorpusCase {
  std::string name;
  Presentation presentation;
  OraclePtr oracle;
  VerdictKind expected = VerdictKind::Limit;
  bool may_be_unknown = false;
};
std::vector<CorpusCase> ground_truth_corpus();

// Whether a verdict is acceptable for the case.
bool corpus_pass(const CorpusCase& c, VerdictKind got);

}  // namespace limitforge

#endif  // LIMITFORGE_CLI_HPP_
