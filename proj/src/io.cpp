#include "ibg/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <optional>

#include "ibg/ltlf.hpp"

namespace ibg {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

void check_keys(const Json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(where + "." + key, "unknown field");
}

const Json& field(const Json& j, const std::string& where, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing field");
  return *it;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::uint32_t as_index(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) fail(where, "expected a non-negative integer");
  const auto v = j.get<std::uint64_t>();
  if (v > kNone - 1) fail(where, "value out of range");
  return static_cast<std::uint32_t>(v);
}

std::vector<std::string> string_list(const Json& j, const std::string& where, bool unique) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto s = as_string(j[i], where + "[" + std::to_string(i) + "]");
    if (unique && std::find(out.begin(), out.end(), s) != out.end())
      fail(where + "[" + std::to_string(i) + "]", "duplicate entry '" + s + "'");
    out.push_back(std::move(s));
  }
  return out;
}

void check_version(const Json& doc) {
  const auto& v = field(doc, "$", "version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
    fail("$.version", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
}

ChannelMask mask_from_json(const Json* j, std::size_t num_channels, const std::string& where) {
  if (!j) return ChannelMask::full(num_channels);
  if (!j->is_array()) fail(where, "expected an array of agent indices");
  std::vector<std::uint32_t> agents;
  for (std::size_t i = 0; i < j->size(); ++i) {
    const auto a = as_index((*j)[i], where + "[" + std::to_string(i) + "]");
    if (a >= num_channels) fail(where + "[" + std::to_string(i) + "]", "no agent " + std::to_string(a));
    if (std::find(agents.begin(), agents.end(), a) != agents.end())
      fail(where + "[" + std::to_string(i) + "]", "duplicate agent");
    agents.push_back(a);
  }
  return ChannelMask(std::move(agents));
}

Json mask_to_json(const ChannelMask& mask) {
  Json out = Json::array();
  for (auto a : mask.agents()) out.push_back(a);
  return out;
}

/// Named states of an automaton or machine section.
struct StateNames {
  std::vector<std::string> names;

  StateId find(const Json& j, const std::string& where) const {
    const auto name = as_string(j, where);
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) fail(where, "unknown state '" + name + "'");
    return static_cast<StateId>(it - names.begin());
  }
};

StateNames states_from_json(const Json& j, const std::string& where) {
  StateNames s{string_list(j, where, true)};
  if (s.names.empty()) fail(where, "at least one state is required");
  return s;
}

/// Restricted letter indices matched by a symbol pattern ("*" matches anything).
std::vector<LetterIndex> matching_letters(const Json& j, const std::string& where, const ProductAlphabet& alphabet,
                                          const RestrictedAlphabet& restricted) {
  const auto channels = restricted.mask().agents();
  if (!j.is_array() || j.size() != channels.size())
    fail(where, "expected an array of " + std::to_string(channels.size()) + " symbols");
  std::vector<std::optional<std::uint32_t>> pattern;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto sym = as_string(j[i], where + "[" + std::to_string(i) + "]");
    if (sym == "*") {
      pattern.emplace_back();
      continue;
    }
    const auto idx = alphabet.find(channels[i], sym);
    if (!idx)
      fail(where + "[" + std::to_string(i) + "]",
           "'" + sym + "' is not a symbol of agent " + std::to_string(channels[i]));
    pattern.emplace_back(*idx);
  }
  std::vector<LetterIndex> out;
  for (LetterIndex r = 0; r < restricted.size(); ++r) {
    const auto picks = restricted.picks(r);
    bool match = true;
    for (std::size_t i = 0; i < picks.size() && match; ++i) match = !pattern[i] || *pattern[i] == picks[i];
    if (match) out.push_back(r);
  }
  return out;
}

Json letter_to_json(const ProductAlphabet& alphabet, const RestrictedAlphabet& restricted, LetterIndex r) {
  Json out = Json::array();
  const auto channels = restricted.mask().agents();
  const auto picks = restricted.picks(r);
  for (std::size_t i = 0; i < picks.size(); ++i) out.push_back(alphabet.symbol(channels[i], picks[i]));
  return out;
}

std::string describe_letter(const ProductAlphabet& alphabet, const RestrictedAlphabet& restricted, LetterIndex r) {
  return letter_to_json(alphabet, restricted, r).dump();
}

PositiveFormula formula_from_json(const Json& j, const std::string& where, const StateNames& states) {
  if (j.is_string()) return PositiveFormula::atom(states.find(j, where));
  check_keys(j, where, {"op", "args", "state"});
  const auto op = as_string(field(j, where, "op"), where + ".op");
  if (op == "true" || op == "false") {
    if (j.contains("args") || j.contains("state")) fail(where, "'" + op + "' takes no operands");
    return op == "true" ? PositiveFormula::top() : PositiveFormula::bottom();
  }
  if (op == "atom") {
    if (j.contains("args")) fail(where + ".args", "'atom' takes a state, not args");
    return PositiveFormula::atom(states.find(field(j, where, "state"), where + ".state"));
  }
  if (op != "and" && op != "or") fail(where + ".op", "unknown operator '" + op + "'");
  if (j.contains("state")) fail(where + ".state", "'" + op + "' takes args, not a state");
  const auto& args = field(j, where, "args");
  if (!args.is_array()) fail(where + ".args", "expected an array");
  std::vector<PositiveFormula> parts;
  for (std::size_t i = 0; i < args.size(); ++i)
    parts.push_back(formula_from_json(args[i], where + ".args[" + std::to_string(i) + "]", states));
  return op == "and" ? PositiveFormula::conj(std::move(parts)) : PositiveFormula::disj(std::move(parts));
}

Json formula_to_json(const PositiveFormula& f, const std::vector<std::string>& names) {
  switch (f.kind()) {
    case PositiveFormula::Kind::True:
      return Json{{"op", "true"}};
    case PositiveFormula::Kind::False:
      return Json{{"op", "false"}};
    case PositiveFormula::Kind::Atom:
      return Json{{"op", "atom"}, {"state", names[f.state()]}};
    case PositiveFormula::Kind::And:
    case PositiveFormula::Kind::Or: {
      Json args = Json::array();
      for (const auto& a : f.args()) args.push_back(formula_to_json(a, names));
      return Json{{"op", f.kind() == PositiveFormula::Kind::And ? "and" : "or"}, {"args", std::move(args)}};
    }
  }
  return {};
}

GoalAutomaton goal_from_json(const Json& j, const std::string& where, const AlphabetPtr& alphabet) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto kind = as_string(field(j, where, "kind"), where + ".kind");
  if (kind == "ltlf") {
    check_keys(j, where, {"kind", "formula"});
    const auto text = as_string(field(j, where, "formula"), where + ".formula");
    try {
      return ltlf::compile_to_afa(ltlf::parse(text, *alphabet), alphabet);
    } catch (const InputError& e) {
      fail(where + ".formula", e.what());
    }
  }
  if (kind != "dfa" && kind != "nfa" && kind != "afa") fail(where + ".kind", "unknown goal kind '" + kind + "'");
  check_keys(j, where, {"kind", "channels", "states", "initial", "accepting", "transitions"});

  const auto mask =
      mask_from_json(j.contains("channels") ? &j.at("channels") : nullptr, alphabet->num_channels(), where + ".channels");
  const RestrictedAlphabet restricted(*alphabet, mask);
  const auto states = states_from_json(field(j, where, "states"), where + ".states");
  const auto n = states.names.size();
  const auto initial = states.find(field(j, where, "initial"), where + ".initial");
  std::vector<bool> accepting(n, false);
  const auto& acc = field(j, where, "accepting");
  if (!acc.is_array()) fail(where + ".accepting", "expected an array");
  for (std::size_t i = 0; i < acc.size(); ++i)
    accepting[states.find(acc[i], where + ".accepting[" + std::to_string(i) + "]")] = true;

  const auto& transitions = field(j, where, "transitions");
  if (!transitions.is_array()) fail(where + ".transitions", "expected an array");
  const auto slots = n * restricted.size();
  std::vector<StateId> dfa_table(kind == "dfa" ? slots : 0, kNone);
  std::vector<StateSet> nfa_table(kind == "nfa" ? slots : 0);
  std::vector<PositiveFormula> afa_table(kind == "afa" ? slots : 0);
  std::vector<bool> afa_set(kind == "afa" ? slots : 0, false);

  for (std::size_t t = 0; t < transitions.size(); ++t) {
    const auto at = where + ".transitions[" + std::to_string(t) + "]";
    const auto& tr = transitions[t];
    check_keys(tr, at, {"from", "letter", "to"});
    const auto from = states.find(field(tr, at, "from"), at + ".from");
    const auto letters = matching_letters(field(tr, at, "letter"), at + ".letter", *alphabet, restricted);
    const auto& to = field(tr, at, "to");
    if (kind == "dfa") {
      const auto target = states.find(to, at + ".to");
      for (auto r : letters) {
        auto& slot = dfa_table[from * restricted.size() + r];
        if (slot != kNone && slot != target) fail(at, "conflicting transition for letter " + describe_letter(*alphabet, restricted, r));
        slot = target;
      }
    } else if (kind == "nfa") {
      StateSet targets;
      if (to.is_array()) {
        for (std::size_t i = 0; i < to.size(); ++i) targets.push_back(states.find(to[i], at + ".to[" + std::to_string(i) + "]"));
      } else {
        targets.push_back(states.find(to, at + ".to"));
      }
      for (auto r : letters) {
        auto& slot = nfa_table[from * restricted.size() + r];
        slot.insert(slot.end(), targets.begin(), targets.end());
        std::sort(slot.begin(), slot.end());
        slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
      }
    } else {
      const auto f = formula_from_json(to, at + ".to", states);
      for (auto r : letters) {
        const auto slot = from * restricted.size() + r;
        if (afa_set[slot]) fail(at, "duplicate transition for letter " + describe_letter(*alphabet, restricted, r));
        afa_set[slot] = true;
        afa_table[slot] = f;
      }
    }
  }

  if (kind == "dfa") {
    for (std::size_t s = 0; s < slots; ++s)
      if (dfa_table[s] == kNone)
        fail(where + ".transitions", "dfa is not total: no transition from '" + states.names[s / restricted.size()] +
                                         "' on " + describe_letter(*alphabet, restricted, s % restricted.size()));
    return Dfa(alphabet, mask, initial, std::move(dfa_table), std::move(accepting), states.names);
  }
  if (kind == "nfa") return Nfa(alphabet, mask, initial, std::move(nfa_table), std::move(accepting), states.names);
  return Afa(alphabet, mask, initial, std::move(afa_table), std::move(accepting), states.names);
}

}  // namespace

Ibg game_from_json(const Json& doc) {
  check_keys(doc, "$", {"version", "agents"});
  check_version(doc);
  const auto& agents = field(doc, "$", "agents");
  if (!agents.is_array() || agents.empty()) fail("$.agents", "expected a nonempty array");
  if (agents.size() > kMaxAgents) fail("$.agents", "too many agents");

  std::vector<std::string> names;
  std::vector<std::vector<std::string>> channels;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto at = "$.agents[" + std::to_string(i) + "]";
    check_keys(agents[i], at, {"name", "alphabet", "goal"});
    names.push_back(agents[i].contains("name") ? as_string(agents[i].at("name"), at + ".name") : "agent" + std::to_string(i));
    auto symbols = string_list(field(agents[i], at, "alphabet"), at + ".alphabet", true);
    if (symbols.empty()) fail(at + ".alphabet", "alphabet must be nonempty");
    channels.push_back(std::move(symbols));
  }
  AlphabetPtr alphabet;
  try {
    alphabet = std::make_shared<const ProductAlphabet>(std::move(channels));
  } catch (const InputError& e) {
    fail("$.agents", e.what());
  }
  std::vector<GoalAutomaton> goals;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto at = "$.agents[" + std::to_string(i) + "].goal";
    goals.push_back(goal_from_json(field(agents[i], "$.agents[" + std::to_string(i) + "]", "goal"), at, alphabet));
  }
  return Ibg(alphabet, std::move(names), std::move(goals));
}

Json goal_to_json(const GoalAutomaton& goal) {
  const auto& base = base_of(goal);
  const auto& alphabet = *base.alphabet();
  const auto& restricted = base.restricted();
  const auto& names = base.state_names();
  Json out;
  out["kind"] = kind_name(goal);
  out["channels"] = mask_to_json(base.mask());
  out["states"] = names;
  out["initial"] = names[base.initial()];
  Json acc = Json::array();
  for (StateId q = 0; q < base.num_states(); ++q)
    if (base.accepting(q)) acc.push_back(names[q]);
  out["accepting"] = std::move(acc);
  Json transitions = Json::array();
  for (StateId q = 0; q < base.num_states(); ++q) {
    for (LetterIndex r = 0; r < restricted.size(); ++r) {
      Json to;
      if (const auto* d = std::get_if<Dfa>(&goal)) {
        to = names[d->step_restricted(q, r)];
      } else if (const auto* n = std::get_if<Nfa>(&goal)) {
        const auto succ = n->successors_restricted(q, r);
        if (succ.empty()) continue;
        to = Json::array();
        for (auto t : succ) to.push_back(names[t]);
      } else {
        const auto& f = std::get<Afa>(goal).transition_restricted(q, r);
        if (f.kind() == PositiveFormula::Kind::False) continue;
        to = formula_to_json(f, names);
      }
      transitions.push_back(Json{{"from", names[q]}, {"letter", letter_to_json(alphabet, restricted, r)}, {"to", std::move(to)}});
    }
  }
  out["transitions"] = std::move(transitions);
  return out;
}

Json game_to_json(const Ibg& game) {
  Json out;
  out["version"] = kFormatVersion;
  Json agents = Json::array();
  for (std::size_t i = 0; i < game.num_agents(); ++i)
    agents.push_back(Json{{"name", game.agent_name(i)},
                          {"alphabet", game.alphabet()->channel(i)},
                          {"goal", goal_to_json(game.goal(i))}});
  out["agents"] = std::move(agents);
  return out;
}

StrategyProfile profile_from_json(const Json& doc, const Ibg& game) {
  check_keys(doc, "$", {"version", "machines"});
  check_version(doc);
  const auto& machines = field(doc, "$", "machines");
  if (!machines.is_array()) fail("$.machines", "expected an array");
  if (machines.size() != game.num_agents())
    fail("$.machines", "expected " + std::to_string(game.num_agents()) + " machines, found " +
                           std::to_string(machines.size()));
  const auto& alphabet = game.alphabet();
  StrategyProfile profile;
  for (std::uint32_t i = 0; i < machines.size(); ++i) {
    const auto at = "$.machines[" + std::to_string(i) + "]";
    const auto& m = machines[i];
    check_keys(m, at, {"states", "initial", "channels", "output", "transitions"});
    const auto mask =
        mask_from_json(m.contains("channels") ? &m.at("channels") : nullptr, alphabet->num_channels(), at + ".channels");
    const RestrictedAlphabet restricted(*alphabet, mask);
    const auto states = states_from_json(field(m, at, "states"), at + ".states");
    const auto n = states.names.size();
    const auto initial = states.find(field(m, at, "initial"), at + ".initial");

    const auto& out = field(m, at, "output");
    if (!out.is_object()) fail(at + ".output", "expected an object mapping states to symbols");
    std::vector<std::uint32_t> output(n, kNone);
    for (const auto& [name, sym] : out.items()) {
      const auto q = states.find(Json(name), at + ".output." + name);
      const auto s = as_string(sym, at + ".output." + name);
      const auto idx = alphabet->find(i, s);
      if (!idx) fail(at + ".output." + name, "'" + s + "' is not a symbol of agent " + std::to_string(i));
      output[q] = *idx;
    }
    for (StateId q = 0; q < n; ++q)
      if (output[q] == kNone) fail(at + ".output", "no output for state '" + states.names[q] + "'");

    const auto& transitions = field(m, at, "transitions");
    if (!transitions.is_array()) fail(at + ".transitions", "expected an array");
    std::vector<StateId> table(n * restricted.size(), kNone);
    for (std::size_t t = 0; t < transitions.size(); ++t) {
      const auto tat = at + ".transitions[" + std::to_string(t) + "]";
      const auto& tr = transitions[t];
      check_keys(tr, tat, {"from", "letter", "to"});
      const auto from = states.find(field(tr, tat, "from"), tat + ".from");
      const auto target = states.find(field(tr, tat, "to"), tat + ".to");
      for (auto r : matching_letters(field(tr, tat, "letter"), tat + ".letter", *alphabet, restricted)) {
        auto& slot = table[from * restricted.size() + r];
        if (slot != kNone && slot != target)
          fail(tat, "conflicting transition for letter " + describe_letter(*alphabet, restricted, r));
        slot = target;
      }
    }
    for (std::size_t s = 0; s < table.size(); ++s)
      if (table[s] == kNone)
        fail(at + ".transitions", "machine is not total: no transition from '" + states.names[s / restricted.size()] +
                                      "' on " + describe_letter(*alphabet, restricted, s % restricted.size()));
    profile.machines.emplace_back(alphabet, i, mask, initial, std::move(table), std::move(output), states.names);
  }
  check_profile(game, profile);
  return profile;
}

Json profile_to_json(const StrategyProfile& profile) {
  Json out;
  out["version"] = kFormatVersion;
  Json machines = Json::array();
  for (const auto& m : profile.machines) {
    const auto& alphabet = *m.alphabet();
    const auto& names = m.state_names();
    Json j;
    j["states"] = names;
    j["initial"] = names[m.initial()];
    j["channels"] = mask_to_json(m.mask());
    Json output = Json::object();
    for (StateId s = 0; s < m.num_states(); ++s) output[names[s]] = alphabet.symbol(m.owner(), m.output(s));
    j["output"] = std::move(output);
    Json transitions = Json::array();
    for (StateId s = 0; s < m.num_states(); ++s)
      for (LetterIndex r = 0; r < m.restricted().size(); ++r)
        transitions.push_back(Json{{"from", names[s]},
                                   {"letter", letter_to_json(alphabet, m.restricted(), r)},
                                   {"to", names[m.step_restricted(s, r)]}});
    j["transitions"] = std::move(transitions);
    machines.push_back(std::move(j));
  }
  out["machines"] = std::move(machines);
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot write file");
  out << doc.dump(2) << '\n';
}

Ibg read_game_file(const std::filesystem::path& path) { return game_from_json(read_json_file(path)); }

StrategyProfile read_profile_file(const std::filesystem::path& path, const Ibg& game) {
  return profile_from_json(read_json_file(path), game);
}

}  // namespace ibg
