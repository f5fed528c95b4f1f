#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "ibg/alphabet.hpp"

namespace ibg {

enum class Player : std::uint8_t { Zero, One };

/// Turn-based arena in compressed adjacency form.
class Arena {
 public:
  class Builder {
   public:
    std::uint32_t add_vertex(Player owner);
    void add_edge(std::uint32_t from, std::uint32_t to);
    std::size_t size() const { return owners_.size(); }
    Arena build() &&;

   private:
    std::vector<Player> owners_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  };

  std::size_t size() const { return owners_.size(); }
  std::size_t num_edges() const { return targets_.size(); }
  Player owner(std::uint32_t v) const { return owners_[v]; }
  std::span<const std::uint32_t> successors(std::uint32_t v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const std::uint32_t> predecessors(std::uint32_t v) const {
    return {sources_.data() + rev_offsets_[v], sources_.data() + rev_offsets_[v + 1]};
  }

  /// Line-based dump: `v <id> <0|1>` per vertex, then `e <from> <to>` per edge.
  void write_edge_list(std::ostream& out) const;

 private:
  std::vector<Player> owners_;
  std::vector<std::uint32_t> offsets_, targets_;
  std::vector<std::uint32_t> rev_offsets_, sources_;
};

/// Winning regions of the safety game where agent 0 must stay inside `safe`
/// and must not get stuck. Agent 1 getting stuck is harmless for agent 0.
struct SafetySolution {
  std::vector<bool> win0;
  /// Agent-0 vertices in Win0: lowest-id successor in Win0; kNone elsewhere.
  std::vector<std::uint32_t> strategy0;
  /// Agent-1 vertices in Win1: a successor of strictly smaller rank; kNone elsewhere.
  std::vector<std::uint32_t> strategy1;
  /// Attractor layer for Win1 vertices (0 = unsafe or dead agent-0 vertex); kNone in Win0.
  std::vector<std::uint32_t> rank;

  bool winning0(std::uint32_t v) const { return win0[v]; }
  bool winning1(std::uint32_t v) const { return !win0[v]; }
};

SafetySolution solve_safety(const Arena& arena, const std::vector<bool>& safe);

}  // namespace ibg
