#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace osa::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s, const std::string& key) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("'" + key + "': expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s, const std::string& key) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, const std::string& key) {
  const std::uint64_t v = parse_uint(s, key);
  if (v > 1'000'000) throw ConfigError("'" + key + "': value too large");
  return static_cast<int>(v);
}

// Bracketed list: either flat numbers or a list of flat lists.
struct ListValue {
  std::vector<std::string> atoms;
  std::vector<std::vector<std::string>> nested;
  bool is_nested = false;
};

std::vector<std::string> split_flat(std::string_view body, const std::string& key) {
  std::vector<std::string> out;
  body = trim(body);
  if (body.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    const auto piece = trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
    if (piece.empty()) throw ConfigError("'" + key + "': empty list element");
    if (piece.find_first_of("[]") != std::string_view::npos) {
      throw ConfigError("'" + key + "': malformed list");
    }
    out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ListValue parse_list(std::string_view s, const std::string& key) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ConfigError("'" + key + "': expected a bracketed list");
  }
  std::string_view body = trim(s.substr(1, s.size() - 2));
  ListValue out;
  if (!body.empty() && body.front() == '[') {
    out.is_nested = true;
    std::size_t pos = 0;
    while (pos < body.size()) {
      if (body[pos] != '[') throw ConfigError("'" + key + "': malformed nested list");
      const auto close = body.find(']', pos);
      if (close == std::string_view::npos) throw ConfigError("'" + key + "': unbalanced brackets");
      out.nested.push_back(split_flat(body.substr(pos + 1, close - pos - 1), key));
      pos = close + 1;
      while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
      if (pos < body.size()) {
        if (body[pos] != ',') throw ConfigError("'" + key + "': expected ',' between lists");
        ++pos;
        while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
      }
    }
  } else {
    out.atoms = split_flat(body, key);
  }
  return out;
}

SensingAction parse_action(const std::vector<std::string>& atoms) {
  std::vector<int> channels;
  for (const auto& a : atoms) channels.push_back(parse_int(a, "policy"));
  try {
    return SensingAction(std::move(channels));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("'policy': ") + e.what());
  }
}

std::string join_action(const SensingAction& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(a[i]);
  }
  return s + "]";
}

const std::set<std::string> known_keys = {"channels", "sense_k",        "horizon_T", "p01",
                                          "p11",      "initial_belief", "utility",   "policy",
                                          "seed",     "episodes"};
const std::set<std::string> required_keys = {"channels", "sense_k", "horizon_T",
                                             "p01",      "p11",     "initial_belief"};

}  // namespace

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string to_string(UtilityKind u) {
  return u == UtilityKind::count_idle ? "count-idle" : "at-least-one";
}

void set_policy(RunConfig& cfg, std::string_view text) {
  text = trim(text);
  cfg.fixed_actions.clear();
  if (text == "myopic" || text == "optimal") {
    cfg.policy_kind = std::string(text);
    return;
  }
  const ListValue list = parse_list(text, "policy");
  if (list.is_nested) {
    for (const auto& atoms : list.nested) cfg.fixed_actions.push_back(parse_action(atoms));
  } else {
    cfg.fixed_actions.push_back(parse_action(list.atoms));
  }
  cfg.policy_kind = "fixed";
}

PolicySpec RunConfig::policy() const {
  if (policy_kind == "optimal") return PolicySpec::optimal();
  PolicySpec spec = PolicySpec::myopic();
  for (auto it = fixed_actions.rbegin(); it != fixed_actions.rend(); ++it) {
    spec = PolicySpec::fixed_first(*it, std::move(spec));
  }
  return spec;
}

RunConfig parse_run_config(std::string_view text) {
  std::map<std::string, std::string> values;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!known_keys.count(key)) throw ConfigError("unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("'" + key + "': missing value");
    if (!values.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  for (const auto& key : required_keys) {
    if (!values.count(key)) throw ConfigError("missing required key '" + key + "'");
  }

  RunConfig cfg;
  try {
    auto& e = cfg.experiment;
    e.channels = parse_int(values["channels"], "channels");
    e.sense = parse_int(values["sense_k"], "sense_k");
    e.horizon = parse_int(values["horizon_T"], "horizon_T");
    e.model = ChannelModel(parse_double(values["p01"], "p01"), parse_double(values["p11"], "p11"));

    if (auto it = values.find("utility"); it != values.end()) {
      if (it->second == "at-least-one") e.utility = UtilityKind::at_least_one;
      else if (it->second == "count-idle") e.utility = UtilityKind::count_idle;
      else throw ConfigError("'utility': expected at-least-one or count-idle");
    }

    const std::string& belief = values["initial_belief"];
    if (belief == "stationary" || belief == "paper-footnote") {
      cfg.belief_source = belief;
      if (e.channels < 1) throw ConfigError("'channels' must be at least 1");
      const double w = belief == "stationary" ? stationary_belief(e.model) : footnote_belief(e.model);
      e.initial_belief = BeliefVector(std::vector<double>(static_cast<std::size_t>(e.channels), w));
    } else {
      const ListValue list = parse_list(belief, "initial_belief");
      if (list.is_nested) throw ConfigError("'initial_belief': expected a flat list");
      std::vector<double> w;
      for (const auto& a : list.atoms) w.push_back(parse_double(a, "initial_belief"));
      e.initial_belief = BeliefVector(std::move(w));
    }

    if (auto it = values.find("policy"); it != values.end()) set_policy(cfg, it->second);
    if (auto it = values.find("seed"); it != values.end()) cfg.seed = parse_uint(it->second, "seed");
    if (auto it = values.find("episodes"); it != values.end()) {
      cfg.episodes = parse_uint(it->second, "episodes");
    }
    e.validate();
    for (const auto& a : cfg.fixed_actions) {
      if (a.size() != static_cast<std::size_t>(e.sense)) {
        throw ConfigError("'policy': every action must sense exactly sense_k channels");
      }
      a.validate_for(static_cast<std::size_t>(e.channels));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string format_run_config(const RunConfig& cfg) {
  const auto& e = cfg.experiment;
  std::ostringstream out;
  out << "channels = " << e.channels << "\n";
  out << "sense_k = " << e.sense << "\n";
  out << "horizon_T = " << e.horizon << "\n";
  out << "p01 = " << shortest(e.model.p01()) << "\n";
  out << "p11 = " << shortest(e.model.p11()) << "\n";
  if (cfg.belief_source == "list") {
    out << "initial_belief = [";
    for (std::size_t i = 0; i < e.initial_belief.size(); ++i) {
      if (i) out << ", ";
      out << shortest(e.initial_belief[i]);
    }
    out << "]\n";
  } else {
    out << "initial_belief = " << cfg.belief_source << "\n";
  }
  out << "utility = " << to_string(e.utility) << "\n";
  if (cfg.policy_kind == "fixed") {
    out << "policy = ";
    if (cfg.fixed_actions.size() == 1) {
      out << join_action(cfg.fixed_actions.front());
    } else {
      out << "[";
      for (std::size_t i = 0; i < cfg.fixed_actions.size(); ++i) {
        if (i) out << ", ";
        out << join_action(cfg.fixed_actions[i]);
      }
      out << "]";
    }
    out << "\n";
  } else {
    out << "policy = " << cfg.policy_kind << "\n";
  }
  if (cfg.seed) out << "seed = " << *cfg.seed << "\n";
  if (cfg.episodes) out << "episodes = " << *cfg.episodes << "\n";
  return out.str();
}

}  // namespace osa::cli
