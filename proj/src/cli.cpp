#include "ibg/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ibg/io.hpp"
#include "ibg/ltlf.hpp"
#include "ibg/oracle.hpp"
#include "ibg/random.hpp"
#include "ibg/realizability.hpp"
#include "ibg/verification.hpp"

namespace ibg {

namespace {

AgentSet parse_winners(const std::string& text, const Ibg& game) {
  AgentSet w;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto begin = token.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    token = token.substr(begin, token.find_last_not_of(" \t") - begin + 1);
    std::uint32_t agent = kNone;
    const auto& names = game.agent_names();
    if (const auto it = std::find(names.begin(), names.end(), token); it != names.end()) {
      agent = static_cast<std::uint32_t>(it - names.begin());
    } else if (token.find_first_not_of("0123456789") == std::string::npos && token.size() < 10) {
      agent = static_cast<std::uint32_t>(std::stoul(token));
    } else {
      throw InputError("--winners: '" + token + "' is neither an agent index nor an agent name");
    }
    if (agent >= game.num_agents())
      throw InputError("--winners: no agent " + token + " in a " + std::to_string(game.num_agents()) + "-agent game");
    w.insert(agent);
  }
  return w;
}

Json winners_json(AgentSet w) {
  Json out = Json::array();
  for (auto a : w.members()) out.push_back(a);
  return out;
}

Json letters_json(const ProductAlphabet& alphabet, const std::vector<Letter>& letters) {
  Json out = Json::array();
  for (const auto& l : letters) out.push_back(alphabet.format(l));
  return out;
}

Json path_json(const ProductAlphabet& alphabet, const QueryGoal& goal, const std::vector<PathStep>& path) {
  const auto& names = std::visit([](const auto& a) -> const AutomatonBase& { return a; }, goal).state_names();
  Json out = Json::array();
  for (const auto& step : path)
    out.push_back(Json{{"letter", alphabet.format(alphabet.letter(step.letter))},
                       {"goal_state", names[step.goal_state]},
                       {"profile_state", step.profile_state}});
  return out;
}

std::string violation_name(Violation v) {
  switch (v) {
    case Violation::PrimaryTrace:
      return "primary-trace";
    case Violation::DeviantTrace:
      return "deviant-trace";
    case Violation::None:
      break;
  }
  return "none";
}

Json command_json(const std::vector<std::string>& args) {
  Json out = Json::array();
  for (const auto& a : args) out.push_back(a);
  return out;
}

struct Emitter {
  std::ostream& out;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const std::string& verdict, Json record) {
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    record["wall_time_ms"] = std::round(elapsed.count() * 1000.0) / 1000.0;
    out << verdict << '\n' << record.dump(2) << '\n';
  }
};

Json base_record(const std::vector<std::string>& args, const std::string& verdict) {
  Json r;
  r["command"] = command_json(args);
  r["verdict"] = verdict;
  return r;
}

// ---------------------------------------------------------------------------

struct RealizableOptions {
  std::string game, winners, witness, dump_dir;
  bool stats = false, serial = false;
};

int cmd_realizable(const RealizableOptions& o, const std::vector<std::string>& args, Emitter& em) {
  const auto game = read_game_file(o.game);
  const auto w = parse_winners(o.winners, game);
  const auto policy = o.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
  const auto verdict = realizable(game, w, policy);
  const auto& alphabet = *game.alphabet();

  if (!o.dump_dir.empty()) {
    std::filesystem::create_directories(o.dump_dir);
    for (std::uint32_t j = 0; j < game.num_agents(); ++j) {
      if (w.contains(j)) continue;
      const auto g = build_deviation_game(game, j, to_dfa(game.goal(j)));
      std::ofstream f(std::filesystem::path(o.dump_dir) / ("deviation_game_" + std::to_string(j) + ".txt"));
      g.arena.write_edge_list(f);
    }
  }

  const std::string word = verdict.realizable ? "REALIZABLE" : "UNREALIZABLE";
  auto record = base_record(args, word);
  record["winners"] = winners_json(w);
  if (verdict.witness) {
    const auto profile = profile_to_json(verdict.witness->profile);
    record["witness"] = Json{{"lasso",
                              Json{{"prefix", letters_json(alphabet, verdict.witness->lasso.prefix)},
                                   {"period", letters_json(alphabet, verdict.witness->lasso.period)}}},
                             {"profile", profile}};
    if (!o.witness.empty()) write_json_file(o.witness, profile);
  }
  if (o.stats) {
    const auto& s = verdict.stats;
    record["stats"] = Json{{"goal_dfa_states", s.goal_dfa_states},
                           {"deviation_game_vertices", s.deviation_game_vertices},
                           {"product_states", s.product_states},
                           {"product_transitions", s.product_transitions}};
  }
  em.emit(word, std::move(record));
  return verdict.realizable ? kExitPositive : kExitNegative;
}

struct VerifyOptions {
  std::string game, profile, winners;
  bool explain = false, serial = false;
};

int cmd_verify(const VerifyOptions& o, const std::vector<std::string>& args, Emitter& em) {
  const auto game = read_game_file(o.game);
  const auto profile = read_profile_file(o.profile, game);
  const auto w = parse_winners(o.winners, game);
  const auto report = verify(game, w, profile, o.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel);
  const auto& alphabet = *game.alphabet();

  const std::string word = report.is_ne ? "IS_NE" : "NOT_NE";
  auto record = base_record(args, word);
  record["winners"] = winners_json(w);
  Json agents = Json::array();
  for (const auto& a : report.agents) {
    Json j;
    j["agent"] = a.agent;
    j["query"] = a.winner ? "i" : "j";
    j["passed"] = a.passed;
    if (a.winner && a.passed) j["path_length"] = a.path.size();
    if (!a.winner && !a.passed) j["violation"] = violation_name(a.violation);
    if (o.explain && (a.winner == a.passed)) {
      const auto goal = query_goal(game.goal(a.agent));
      j["path"] = path_json(alphabet, goal, a.path);
      if (a.violation == Violation::DeviantTrace) j["escape"] = path_json(alphabet, goal, a.escape);
    }
    j["graph_vertices"] = a.graph_vertices;
    j["game_vertices"] = a.game_vertices;
    agents.push_back(std::move(j));
  }
  record["report"] = Json{{"agents", std::move(agents)}, {"profile_states", report.profile_states}};
  em.emit(word, std::move(record));
  return report.is_ne ? kExitPositive : kExitNegative;
}

struct ConvertOptions {
  bool determinize = false, afa2nfa = false;
  std::string ltlf, in, out;
  int agent = -1;
};

int cmd_convert(const ConvertOptions& o, const std::vector<std::string>& args, Emitter& em) {
  const int modes = int(o.determinize) + int(o.afa2nfa) + int(!o.ltlf.empty());
  if (modes != 1) throw InputError("convert: choose exactly one of --determinize, --afa2nfa, --ltlf2afa");
  const auto game = read_game_file(o.in);
  if (o.agent >= 0 && static_cast<std::size_t>(o.agent) >= game.num_agents())
    throw InputError("--agent: no agent " + std::to_string(o.agent));
  if (!o.ltlf.empty() && o.agent < 0) throw InputError("--ltlf2afa requires --agent");

  std::vector<GoalAutomaton> goals = game.goals();
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (o.agent >= 0 && static_cast<std::size_t>(o.agent) != i) continue;
    if (!o.ltlf.empty()) {
      goals[i] = ltlf::compile_to_afa(ltlf::parse(o.ltlf, *game.alphabet()), game.alphabet());
    } else if (o.determinize) {
      if (const auto* n = std::get_if<Nfa>(&goals[i])) goals[i] = determinize(*n);
      else if (const auto* a = std::get_if<Afa>(&goals[i])) goals[i] = afa_to_dfa(*a);
    } else if (const auto* a = std::get_if<Afa>(&goals[i])) {
      goals[i] = afa_to_nfa(*a);
    }
  }
  const Ibg converted(game.alphabet(), game.agent_names(), std::move(goals));
  write_json_file(o.out, game_to_json(converted));

  auto record = base_record(args, "CONVERTED");
  Json summary = Json::array();
  for (std::size_t i = 0; i < converted.num_agents(); ++i)
    summary.push_back(Json{{"agent", i},
                           {"kind", kind_name(converted.goal(i))},
                           {"states", base_of(converted.goal(i)).num_states()}});
  record["goals"] = std::move(summary);
  em.emit("CONVERTED", std::move(record));
  return kExitPositive;
}

struct OracleOptions {
  std::string game, profile, winners;
  std::size_t max_states = OracleConfig{}.max_states;
  std::size_t max_profiles = OracleConfig{}.max_profiles;
  unsigned memory = 1;
};

int cmd_oracle_verify(const OracleOptions& o, const std::vector<std::string>& args, Emitter& em) {
  const auto game = read_game_file(o.game);
  const auto profile = read_profile_file(o.profile, game);
  const auto w = parse_winners(o.winners, game);
  OracleConfig config;
  config.max_states = o.max_states;
  try {
    const bool ok = oracle_verify(game, w, profile, config);
    const std::string word = ok ? "TRUE" : "FALSE";
    auto record = base_record(args, word);
    record["winners"] = winners_json(w);
    em.emit(word, std::move(record));
    return ok ? kExitPositive : kExitNegative;
  } catch (const OracleOverflow& e) {
    auto record = base_record(args, "OVERFLOW");
    record["winners"] = winners_json(w);
    record["message"] = e.what();
    em.emit("OVERFLOW", std::move(record));
    return kExitOverflow;
  }
}

int cmd_oracle_realizable(const OracleOptions& o, const std::vector<std::string>& args, Emitter& em) {
  const auto game = read_game_file(o.game);
  const auto w = parse_winners(o.winners, game);
  OracleConfig config;
  config.max_states = o.max_states;
  config.max_profiles = o.max_profiles;
  config.memory = o.memory;
  const auto r = oracle_realizable_onesided(game, w, config);
  const std::string word = r.witness ? "FOUND" : "UNKNOWN";
  auto record = base_record(args, word);
  record["winners"] = winners_json(w);
  record["profiles_checked"] = r.profiles_checked;
  record["truncated"] = r.truncated;
  if (r.witness) record["witness"] = profile_to_json(*r.witness);
  em.emit(word, std::move(record));
  return r.witness ? kExitPositive : kExitNegative;
}

struct GenerateOptions {
  std::uint64_t seed = 0;
  std::size_t agents = 2, symbols = 2, states = 4, machine_states = 3;
  std::string kind = "dfa", out, profile_out;
};

int cmd_generate(const GenerateOptions& o, const std::vector<std::string>& args, Emitter& em) {
  RandomGameParams params;
  params.agents = o.agents;
  params.max_symbols = o.symbols;
  params.max_states = o.states;
  if (o.kind == "dfa") params.kind = GoalKind::Dfa;
  else if (o.kind == "nfa") params.kind = GoalKind::Nfa;
  else if (o.kind == "afa") params.kind = GoalKind::Afa;
  else if (o.kind == "mixed") params.kind = GoalKind::Mixed;
  else throw InputError("--kind: expected dfa, nfa, afa or mixed");
  if (o.agents == 0 || o.agents > kMaxAgents) throw InputError("--agents: out of range");
  if (o.symbols == 0 || o.states == 0 || o.machine_states == 0) throw InputError("sizes must be positive");

  Rng rng(o.seed);
  const auto game = random_game(rng, params);
  const auto doc = game_to_json(game);
  auto record = base_record(args, "GENERATED");
  if (o.out.empty()) record["game"] = doc;
  else write_json_file(o.out, doc);
  if (!o.profile_out.empty()) write_json_file(o.profile_out, profile_to_json(random_profile(rng, game, o.machine_states)));
  em.emit("GENERATED", std::move(record));
  return kExitPositive;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterated Boolean game realizability and verification"};
  app.require_subcommand(1);

  RealizableOptions ro;
  auto* realizable_cmd = app.add_subcommand("realizable", "Decide whether a W-NE exists");
  realizable_cmd->add_option("game", ro.game, "Game file")->required();
  realizable_cmd->add_option("--winners", ro.winners, "Comma-separated winning set W (may be empty)")->required();
  realizable_cmd->add_option("--witness", ro.witness, "Write the witness profile here");
  realizable_cmd->add_flag("--stats", ro.stats, "Report construction sizes");
  realizable_cmd->add_option("--dump-arenas", ro.dump_dir, "Write deviation-game edge lists into this directory");
  realizable_cmd->add_flag("--serial", ro.serial, "Disable parallel kernels");

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "Check whether a profile is a W-NE");
  verify_cmd->add_option("game", vo.game, "Game file")->required();
  verify_cmd->add_option("profile", vo.profile, "Profile file")->required();
  verify_cmd->add_option("--winners", vo.winners, "Comma-separated winning set W (may be empty)")->required();
  verify_cmd->add_flag("--explain", vo.explain, "Include query paths");
  verify_cmd->add_flag("--serial", vo.serial, "Disable parallel kernels");

  ConvertOptions co;
  auto* convert_cmd = app.add_subcommand("convert", "Convert goal automata");
  convert_cmd->add_flag("--determinize", co.determinize, "NFA/AFA goals to DFA");
  convert_cmd->add_flag("--afa2nfa", co.afa2nfa, "AFA goals to NFA");
  convert_cmd->add_option("--ltlf2afa", co.ltlf, "Replace the goal of --agent by this LTLf formula");
  convert_cmd->add_option("--in", co.in, "Input game file")->required();
  convert_cmd->add_option("--out", co.out, "Output game file")->required();
  convert_cmd->add_option("--agent", co.agent, "Only convert this agent's goal");

  OracleOptions oo;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference procedures");
  oracle_cmd->require_subcommand(1);
  auto* oracle_verify_cmd = oracle_cmd->add_subcommand("verify", "Direct simulation of the W-NE conditions");
  oracle_verify_cmd->add_option("game", oo.game, "Game file")->required();
  oracle_verify_cmd->add_option("profile", oo.profile, "Profile file")->required();
  oracle_verify_cmd->add_option("--winners", oo.winners, "Winning set W")->required();
  oracle_verify_cmd->add_option("--budget", oo.max_states, "Search state budget");
  auto* oracle_real_cmd =
      oracle_cmd->add_subcommand("realizable-onesided", "Search small-memory profiles for a W-NE");
  oracle_real_cmd->add_option("game", oo.game, "Game file")->required();
  oracle_real_cmd->add_option("--winners", oo.winners, "Winning set W")->required();
  oracle_real_cmd->add_option("--budget", oo.max_states, "Search state budget per profile");
  oracle_real_cmd->add_option("--profiles", oo.max_profiles, "Maximum number of profiles tried");
  oracle_real_cmd->add_option("--memory", oo.memory, "0: constant machines, 1: last-letter machines")
      ->check(CLI::Range(0, 1));

  GenerateOptions go;
  auto* generate_cmd = app.add_subcommand("generate", "Write a random game");
  generate_cmd->add_option("--seed", go.seed, "RNG seed")->required();
  generate_cmd->add_option("--agents", go.agents, "Number of agents");
  generate_cmd->add_option("--symbols", go.symbols, "Maximum symbols per agent");
  generate_cmd->add_option("--states", go.states, "Maximum goal states");
  generate_cmd->add_option("--kind", go.kind, "dfa, nfa, afa or mixed");
  generate_cmd->add_option("--out", go.out, "Game file (record only when absent)");
  generate_cmd->add_option("--profile", go.profile_out, "Also write a random profile here");
  generate_cmd->add_option("--machine-states", go.machine_states, "Maximum machine states");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPositive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  Emitter em{out};
  try {
    if (*realizable_cmd) return cmd_realizable(ro, args, em);
    if (*verify_cmd) return cmd_verify(vo, args, em);
    if (*convert_cmd) return cmd_convert(co, args, em);
    if (*oracle_verify_cmd) return cmd_oracle_verify(oo, args, em);
    if (*oracle_real_cmd) return cmd_oracle_realizable(oo, args, em);
    if (*generate_cmd) return cmd_generate(go, args, em);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace ibg
