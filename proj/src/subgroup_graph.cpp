#include "limitforge/subgroup_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>

namespace limitforge {

namespace {

struct Edge {
  int from;
  std::size_t gen;
  int to;
  auto operator<=>(const Edge&) const = default;
};

struct UnionFind {
  std::vector<int> parent;
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // Keeps the smaller representative so the base vertex stays 0.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::size_t SubgroupGraph::edge_count() const noexcept {
  std::size_t e = 0;
  for (const auto& row : out_) {
    for (std::size_t g = 0; g < rank_; ++g) e += row[2 * g] != kNone;
  }
  return e;
}

std::optional<Word> SubgroupGraph::member(const Word& w) const {
  if (w.support_rank() > rank_) throw AlphabetError("word outside ambient alphabet");
  int v = 0;
  std::vector<Letter> expr;
  for (Letter l : w) {
    std::size_t code = letter_code(l);
    int next = out_[v][code];
    if (next == kNone) return std::nullopt;
    if (int id = basis_id_[v][code]; id != kNone) {
      expr.push_back(l > 0 ? make_letter(id) : make_letter(id, -1));
    }
    v = next;
  }
  if (v != 0) return std::nullopt;
  return Word::reduce(expr);
}

std::optional<std::size_t> SubgroupGraph::index() const {
  for (const auto& row : out_) {
    if (std::find(row.begin(), row.end(), kNone) != row.end()) return std::nullopt;
  }
  return out_.size();
}

SubgroupGraph fold(std::size_t rank, const std::vector<Word>& S) {
  UnionFind uf;
  std::vector<Edge> edges;
  uf.add();  // base
  for (const auto& s : S) {
    if (s.support_rank() > rank) throw AlphabetError("generator outside ambient alphabet");
    if (s.empty()) continue;
    int prev = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      int next = i + 1 == s.size() ? 0 : uf.add();
      Letter l = s[i];
      if (l > 0) {
        edges.push_back({prev, generator_of(l), next});
      } else {
        edges.push_back({next, generator_of(l), prev});
      }
      prev = next;
    }
  }

  // Fold to a fixpoint: two edges with the same label at a vertex merge
  // their other endpoints.
  for (bool changed = true; changed;) {
    changed = false;
    std::set<Edge> canon;
    for (auto& e : edges) canon.insert({uf.find(e.from), e.gen, uf.find(e.to)});
    edges.assign(canon.begin(), canon.end());
    std::vector<std::tuple<int, std::size_t, int>> fwd, bwd;
    for (const auto& e : edges) {
      fwd.emplace_back(e.from, e.gen, e.to);
      bwd.emplace_back(e.to, e.gen, e.from);
    }
    for (auto* list : {&fwd, &bwd}) {
      std::sort(list->begin(), list->end());
      for (std::size_t i = 1; i < list->size(); ++i) {
        auto [v0, g0, t0] = (*list)[i - 1];
        auto [v1, g1, t1] = (*list)[i];
        if (v0 == v1 && g0 == g1 && uf.find(t0) != uf.find(t1)) {
          uf.unite(t0, t1);
          changed = true;
        }
      }
    }
  }

  // Trim hanging trees.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> degree(uf.parent.size(), 0);
    for (const auto& e : edges) {
      ++degree[e.from];
      ++degree[e.to];
    }
    std::vector<Edge> kept;
    for (const auto& e : edges) {
      bool hanging = (e.from != 0 && degree[e.from] == 1) || (e.to != 0 && degree[e.to] == 1);
      if (hanging) {
        changed = true;
      } else {
        kept.push_back(e);
      }
    }
    edges = std::move(kept);
  }

  std::vector<std::vector<std::pair<std::size_t, int>>> adj(uf.parent.size());
  for (const auto& e : edges) {
    adj[e.from].push_back({2 * e.gen, e.to});
    adj[e.to].push_back({2 * e.gen + 1, e.from});
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  SubgroupGraph g;
  g.rank_ = rank;
  g.generators_ = S;
  std::vector<int> number(uf.parent.size(), SubgroupGraph::kNone);
  std::vector<int> order{0};
  std::vector<Word> path{Word{}};
  number[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int old = order[head];
    for (auto [code, to] : adj[old]) {
      if (number[to] == SubgroupGraph::kNone) {
        number[to] = static_cast<int>(order.size());
        order.push_back(to);
        path.push_back(path[head] * Word::letter(letter_from_code(code)));
      }
    }
  }
  const std::size_t n = order.size();
  g.out_.assign(n, std::vector<int>(2 * rank, SubgroupGraph::kNone));
  g.basis_id_.assign(n, std::vector<int>(2 * rank, SubgroupGraph::kNone));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto [code, to] : adj[order[i]]) g.out_[i][code] = number[to];
  }
  // Tree edges: the edge that discovered each non-base vertex.
  std::vector<std::vector<bool>> is_tree(n, std::vector<bool>(2 * rank, false));
  {
    std::vector<bool> seen(n, false);
    seen[0] = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t code = 0; code < 2 * rank; ++code) {
        int to = g.out_[i][code];
        if (to != SubgroupGraph::kNone && !seen[to]) {
          seen[to] = true;
          is_tree[i][code] = true;
          is_tree[to][code ^ 1] = true;
        }
      }
    }
  }
  for (std::size_t gen = 0; gen < rank; ++gen) {
    for (std::size_t i = 0; i < n; ++i) {
      int to = g.out_[i][2 * gen];
      if (to == SubgroupGraph::kNone || is_tree[i][2 * gen]) continue;
      int id = static_cast<int>(g.basis_.size());
      g.basis_id_[i][2 * gen] = id;
      g.basis_id_[to][2 * gen + 1] = id;
      g.basis_.push_back(path[i] * Word::generator(gen) * path[to].inverse());
    }
  }
  return g;
}

RankIndex graph_rank_index(const SubgroupGraph& g) { return {g.rank(), g.index()}; }

}  // namespace limitforge
