#include "ibg/safety.hpp"

#include <algorithm>
#include <deque>

namespace ibg {

std::uint32_t Arena::Builder::add_vertex(Player owner) {
  owners_.push_back(owner);
  return static_cast<std::uint32_t>(owners_.size() - 1);
}

void Arena::Builder::add_edge(std::uint32_t from, std::uint32_t to) { edges_.emplace_back(from, to); }

Arena Arena::Builder::build() && {
  Arena a;
  const auto n = owners_.size();
  for (auto [f, t] : edges_)
    if (f >= n || t >= n) throw std::out_of_range("arena: edge endpoint is not a vertex");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  a.owners_ = std::move(owners_);
  a.offsets_.assign(n + 1, 0);
  a.rev_offsets_.assign(n + 1, 0);
  for (auto [f, t] : edges_) {
    ++a.offsets_[f + 1];
    ++a.rev_offsets_[t + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    a.offsets_[v + 1] += a.offsets_[v];
    a.rev_offsets_[v + 1] += a.rev_offsets_[v];
  }
  a.targets_.resize(edges_.size());
  a.sources_.resize(edges_.size());
  auto fill = a.rev_offsets_;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    a.targets_[e] = edges_[e].second;
    a.sources_[fill[edges_[e].second]++] = edges_[e].first;
  }
  return a;
}

void Arena::write_edge_list(std::ostream& out) const {
  for (std::uint32_t v = 0; v < size(); ++v) out << "v " << v << ' ' << (owner(v) == Player::Zero ? 0 : 1) << '\n';
  for (std::uint32_t v = 0; v < size(); ++v)
    for (auto t : successors(v)) out << "e " << v << ' ' << t << '\n';
}

SafetySolution solve_safety(const Arena& arena, const std::vector<bool>& safe) {
  const auto n = static_cast<std::uint32_t>(arena.size());
  if (safe.size() != n) throw std::invalid_argument("solve_safety: safe set size does not match the arena");
  SafetySolution sol;
  sol.win0.assign(n, true);
  sol.strategy0.assign(n, kNone);
  sol.strategy1.assign(n, kNone);
  sol.rank.assign(n, kNone);

  // Backward attractor for agent 1. `pending` counts agent-0 successors not yet attracted.
  std::vector<std::uint32_t> pending(n);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < n; ++v) {
    pending[v] = static_cast<std::uint32_t>(arena.successors(v).size());
    const bool dead0 = arena.owner(v) == Player::Zero && pending[v] == 0;
    if (!safe[v] || dead0) {
      sol.win0[v] = false;
      sol.rank[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto p : arena.predecessors(v)) {
      if (!sol.win0[p]) continue;
      if (arena.owner(p) == Player::One) {
        sol.win0[p] = false;
        sol.strategy1[p] = v;
      } else if (--pending[p] > 0) {
        continue;
      } else {
        sol.win0[p] = false;
      }
      sol.rank[p] = sol.rank[v] + 1;
      queue.push_back(p);
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!sol.win0[v] || arena.owner(v) != Player::Zero) continue;
    for (auto t : arena.successors(v)) {
      if (sol.win0[t]) {
        sol.strategy0[v] = t;
        break;
      }
    }
  }
  return sol;
}

}  // namespace ibg
