// Word-problem oracles chosen by name.

#ifndef LIMITFORGE_ORACLE_FACTORY_HPP_
#define LIMITFORGE_ORACLE_FACTORY_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "limitforge/oracle.hpp"
#include "limitforge/presentation.hpp"

namespace limitforge {

//! Strategies:
//!   builtin:free, builtin:abelian, builtin:finite, builtin:klein,
//!   builtin:product    direct product of blocks, each chosen by builtin:auto
//!   builtin:pinched    one relator u v^-1 with u, v over disjoint generators
//!   builtin:ice=PATH   tower file whose presentation is p
//!   builtin:auto       the first exact engine that accepts p
//!   cmd:PATH           subprocess speaking the line protocol
//!   dovetail[=N]       semi-decision with N steps per query
//! Throws OracleError when the strategy does not apply to p.
OraclePtr oracle_from(const Presentation& p, std::string_view strategy);

// Finest splitting of the generators into blocks that pairwise commute by
// relators [x, y], with every other relator inside one block.
std::vector<std::vector<std::size_t>> product_blocks(const Presentation& p);

}  // namespace limitforge

#endif  // LIMITFORGE_ORACLE_FACTORY_HPP_
