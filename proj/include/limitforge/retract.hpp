// Retractions of finite-index subgroups and presentations of retracts.

#ifndef LIMITFORGE_RETRACT_HPP_
#define LIMITFORGE_RETRACT_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "limitforge/coset.hpp"
#include "limitforge/oracle.hpp"
#include "limitforge/presentation.hpp"
#include "limitforge/process.hpp"
#include "limitforge/tietze.hpp"

namespace limitforge {

class NotRetraction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RetractStatus { Complete, Incomplete };

//! Presentation of rho(G) for an idempotent endomorphism rho of G.
//! Output generators are the surviving generators x of G, standing for
//! rho(x).
struct RetractPresentation {
  RetractStatus status = RetractStatus::Complete;
  Presentation start;            // <X | R, x^-1 rho(x)>
  Presentation presentation;     // after eliminating the kernel generators
  std::vector<TietzeMove> moves;  // start -> presentation
  std::vector<Word> embedding;    // per output generator, over G
  std::vector<Word> substitution;  // per generator x of G: rho(x) over the output
};

// Checks rho against the oracle: a relator mapping to a nontrivial word or
// rho(rho(x)) != rho(x) throws NotRetraction; an unknown answer marks the
// result Incomplete.
RetractPresentation retract_presentation(const Presentation& p, const std::vector<Word>& rho,
                                         WordOracle& wp);

// Blind alternative: Tietze enumeration from `r.start` until a presentation
// with the same canonical key as `r.presentation` appears. Returns the path.
std::optional<std::vector<TietzeMove>> retract_by_tietze_search(const RetractPresentation& r,
                                                               std::uint64_t budget);

//! A finite-index subgroup K containing S, presented on generators Z, and
//! the map z -> Y_z with Y_z a word in the symbols of S. It is a retraction
//! of K onto <S> when every relator r satisfies r(Y) = 1 and every s_i
//! satisfies s_i(Y) = s_i in K.
struct Retraction {
  SubgroupPresentation subgroup;
  std::vector<Word> images;       // Y, per generator of K, over S symbols
  std::vector<Word> s_in_subgroup;  // s_i over the generators of K
  std::size_t cost = 0;             // index + total length of the searched slots
};

// Searches K and Y by increasing cost; within a cost, by index, then the
// low-index order, then Y in lexicographic order of the slot words. Slots
// forced by an equation s_i(Y) = s_i are solved instead of searched and
// cost nothing. Yields the first verified retraction and stops.
Process<Retraction> find_retraction(Presentation p, std::vector<Word> S, OraclePtr wp);

// Independent re-check of every defining equation of a retraction.
Tri verify_retraction(const Presentation& p, const std::vector<Word>& S, const Retraction& r,
                      WordOracle& wp);

enum class SearchStatus { Found, BudgetExhausted, Incomplete };
const char* to_string(SearchStatus s);

//! Presentation of <S> with its generator correspondence.
struct SubgroupResult {
  SearchStatus status = SearchStatus::BudgetExhausted;
  Presentation presentation;
  std::vector<Word> generators_in_s;  // per output generator, over S symbols
  std::vector<Word> s_in_generators;  // per s_i, over the output generators
  std::optional<Retraction> retraction;
  std::optional<RetractPresentation> retract;
  std::optional<std::vector<TietzeMove>> tietze_path;  // conformance mode only
  std::uint64_t steps = 0;
};

struct SubgroupOptions {
  std::uint64_t budget = 1000000;
  bool conformance_tietze = false;
};

SubgroupResult subgroup_presentation_lr(const Presentation& p, const std::vector<Word>& S,
                                        OraclePtr wp, SubgroupOptions opts = {});

// The second half of subgroup_presentation_lr, for callers that drive
// find_retraction themselves.
SubgroupResult subgroup_from_retraction(const Retraction& r, OraclePtr wp, SubgroupOptions opts = {},
                                        std::uint64_t steps = 0);

// The images of the output generators under the embedding into p, over p.
std::vector<Word> generators_in_ambient(const SubgroupResult& r, const std::vector<Word>& S);

}  // namespace limitforge

#endif  // LIMITFORGE_RETRACT_HPP_
