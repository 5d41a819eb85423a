#include "limitforge/oracle_factory.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "limitforge/ice.hpp"
#include "limitforge/recognize.hpp"

namespace limitforge {

namespace {

bool is_generator_commutator(const Word& r, std::size_t& x, std::size_t& y) {
  if (r.size() != 4) return false;
  std::set<std::size_t> gens;
  for (Letter l : r) gens.insert(generator_of(l));
  if (gens.size() != 2) return false;
  x = *gens.begin();
  y = *gens.rbegin();
  return cyclic_canonical(r) == cyclic_canonical(commutator(Word::generator(x), Word::generator(y)));
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

Presentation block_presentation(const Presentation& p, const std::vector<std::size_t>& block) {
  std::vector<Word> images(p.rank());
  std::vector<bool> inside(p.rank(), false);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < block.size(); ++i) {
    images[block[i]] = Word::generator(i);
    inside[block[i]] = true;
    names.push_back(p.generators()[block[i]]);
  }
  std::vector<Word> rels;
  for (const auto& r : p.relators()) {
    if (inside[generator_of(r.letters().front())]) rels.push_back(substitute(r, images));
  }
  return Presentation(std::move(names), std::move(rels));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OracleError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OraclePtr ice_oracle(const Presentation& p, const std::string& path) {
  IceTower t = tower_from_json(read_file(path));
  Presentation q = presentation_of(t);
  std::set<Word> have, want;
  for (const auto& r : p.relators()) have.insert(cyclic_canonical(r));
  for (const auto& r : q.relators()) want.insert(cyclic_canonical(r));
  if (p.rank() != q.rank() || have != want) {
    throw OracleError("builtin:ice: the presentation is not the tower's presentation " + serialize(q));
  }
  return std::make_shared<IceOracle>(std::move(t));
}

OraclePtr product_oracle(const Presentation& p);

OraclePtr auto_oracle(const Presentation& p) {
  if (p.relators().empty()) return std::make_shared<FreeOracle>(p.rank());
  try {
    return std::make_shared<AbelianOracle>(p);
  } catch (const OracleError&) {
  }
  try {
    return std::make_shared<KleinOracle>(p);
  } catch (const OracleError&) {
  }
  if (product_blocks(p).size() >= 2) return product_oracle(p);
  if (auto pinched = detect_pinched(p)) return pinched;
  try {
    return std::make_shared<FiniteOracle>(p, 20000);
  } catch (const OracleError&) {
  }
  throw OracleError("builtin:auto: no exact engine accepts " + serialize(p) +
                    "; use cmd:PATH or dovetail");
}

OraclePtr product_oracle(const Presentation& p) {
  auto blocks = product_blocks(p);
  if (blocks.size() < 2) throw OracleError("builtin:product: the generators do not split into commuting blocks");
  std::vector<ProductOracle::Block> parts;
  for (auto& b : blocks) {
    OraclePtr o = auto_oracle(block_presentation(p, b));
    parts.push_back({std::move(b), std::move(o)});
  }
  return std::make_shared<ProductOracle>(p.rank(), std::move(parts));
}

}  // namespace

std::vector<std::vector<std::size_t>> product_blocks(const Presentation& p) {
  const std::size_t n = p.rank();
  std::vector<std::vector<bool>> commute(n, std::vector<bool>(n, false));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto join = [&](std::size_t x, std::size_t y) { parent[find_root(parent, x)] = find_root(parent, y); };
  for (const auto& r : p.relators()) {
    std::size_t x, y;
    if (is_generator_commutator(r, x, y)) {
      commute[x][y] = commute[y][x] = true;
      continue;
    }
    Letter first = r.letters().front();
    for (Letter l : r) join(generator_of(first), generator_of(l));
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (!commute[x][y]) join(x, y);
    }
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<int> slot(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = find_root(parent, x);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].push_back(x);
  }
  return blocks;
}

OraclePtr oracle_from(const Presentation& p, std::string_view strategy) {
  std::string s(strategy);
  if (s.starts_with("cmd:")) {
    if (s.size() == 4) throw OracleError("cmd: needs a program path");
    return std::make_shared<SubprocessOracle>(p.generators(), s.substr(4));
  }
  if (s == "dovetail") return std::make_shared<DovetailOracle>(p);
  if (s.starts_with("dovetail=")) {
    std::size_t used = 0;
    unsigned long long budget = 0;
    try {
      budget = std::stoull(s.substr(9), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() - 9 || budget == 0) throw OracleError("bad dovetail budget in " + s);
    return std::make_shared<DovetailOracle>(p, budget);
  }
  if (!s.starts_with("builtin:")) throw OracleError("unknown oracle strategy " + s);
  std::string name = s.substr(8);
  if (name == "free") {
    if (!p.relators().empty()) throw OracleError("builtin:free expects no relators");
    return std::make_shared<FreeOracle>(p.rank());
  }
  if (name == "abelian") return std::make_shared<AbelianOracle>(p);
  if (name == "finite") return std::make_shared<FiniteOracle>(p);
  if (name == "klein") return std::make_shared<KleinOracle>(p);
  if (name == "product") return product_oracle(p);
  if (name == "pinched") {
    if (auto o = detect_pinched(p)) return o;
    throw OracleError("builtin:pinched expects one relator u v^-1 with u, v over disjoint generators");
  }
  if (name.starts_with("ice=")) return ice_oracle(p, name.substr(4));
  if (name == "auto") return auto_oracle(p);
  throw OracleError("unknown builtin oracle " + name);
}

}  // namespace limitforge
