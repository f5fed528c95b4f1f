#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ibg/game.hpp"

namespace ibg {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Game file: { version, agents: [ { name, alphabet, goal } ] }. Goal kinds are
/// dfa, nfa, afa and ltlf; unknown fields are rejected with the field path in
/// the InputError message.
Ibg game_from_json(const Json& doc);
Json game_to_json(const Ibg& game);

Json goal_to_json(const GoalAutomaton& goal);

/// Profile file: { version, machines: [ { states, initial, channels, output, transitions } ] }.
StrategyProfile profile_from_json(const Json& doc, const Ibg& game);
Json profile_to_json(const StrategyProfile& profile);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

Ibg read_game_file(const std::filesystem::path& path);
StrategyProfile read_profile_file(const std::filesystem::path& path, const Ibg& game);

}  // namespace ibg
