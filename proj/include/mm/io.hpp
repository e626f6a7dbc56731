#pragma once

// Market text files and JSON reports.
//
// Market file:
//   market <num_men> <num_women>
//   m1: w2 w1 self
//   ...
// One line per agent, partners best first, `self` exactly once. Blank lines
// and lines starting with '#' are ignored.

#include <nlohmann/json.hpp>

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mm/axioms.hpp"
#include "mm/market.hpp"
#include "mm/replication.hpp"
#include "mm/sweep.hpp"

namespace mm {

enum class Diagnostic {
  BadHeader,       // E01
  MalformedLine,   // E02
  UnknownName,     // E03
  DuplicateAgent,  // E04
  DuplicatePartner,// E05
  MissingSelf,     // E06
  SizeMismatch,    // E07
  MissingAgent,    // E08
};

inline const char* code_of(Diagnostic d) {
  switch (d) {
    case Diagnostic::BadHeader: return "E01";
    case Diagnostic::MalformedLine: return "E02";
    case Diagnostic::UnknownName: return "E03";
    case Diagnostic::DuplicateAgent: return "E04";
    case Diagnostic::DuplicatePartner: return "E05";
    case Diagnostic::MissingSelf: return "E06";
    case Diagnostic::SizeMismatch: return "E07";
    case Diagnostic::MissingAgent: return "E08";
  }
  return "E??";
}

class ParseError : public Error {
 public:
  ParseError(Diagnostic d, int line, const std::string& msg)
      : Error(ErrorCode::InvalidInput, "line " + std::to_string(line) + ": " + code_of(d) + ": " + msg),
        diagnostic_(d),
        line_(line) {}
  Diagnostic diagnostic() const { return diagnostic_; }
  int line() const { return line_; }

 private:
  Diagnostic diagnostic_;
  int line_;
};

/// "m3" -> man 2, "self" -> Self. Empty on anything else.
inline std::optional<Partner> parse_partner_name(std::string_view s) {
  if (s == "self") return Partner::self();
  if (s.size() < 2 || (s[0] != 'm' && s[0] != 'w') || s[1] == '0') return std::nullopt;
  int n = 0;
  auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) return std::nullopt;
  return Partner(AgentId{s[0] == 'm' ? Side::Man : Side::Woman, n - 1});
}

inline std::optional<AgentId> parse_agent_name(std::string_view s) {
  auto p = parse_partner_name(s);
  if (!p || p->is_self()) return std::nullopt;
  return p->agent();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Builds a preference for `owner` from partner names, with diagnostics.
inline Preference parse_preference_tokens(const Market& mk, AgentId owner, const std::vector<std::string>& names,
                                          int line) {
  const int n = mk.size(opposite(owner.side));
  std::vector<Partner> order;
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (const std::string& tok : names) {
    auto p = parse_partner_name(tok);
    if (!p || (!p->is_self() && (p->agent().side == owner.side || !mk.contains(p->agent()))))
      throw ParseError(Diagnostic::UnknownName, line, "'" + tok + "' is not a partner option of " + name_of(owner));
    const std::size_t slot = p->is_self() ? static_cast<std::size_t>(n) : static_cast<std::size_t>(p->agent().index);
    if (seen[slot]) throw ParseError(Diagnostic::DuplicatePartner, line, "'" + tok + "' listed twice");
    seen[slot] = true;
    order.push_back(*p);
  }
  if (!seen[static_cast<std::size_t>(n)]) throw ParseError(Diagnostic::MissingSelf, line, "no 'self' entry");
  if (static_cast<int>(order.size()) != n + 1)
    throw ParseError(Diagnostic::SizeMismatch, line,
                     name_of(owner) + " lists " + std::to_string(order.size()) + " of " + std::to_string(n + 1) +
                         " options");
  return Preference(owner, std::move(order));
}

inline Profile parse_market(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::optional<Market> mk;
  std::map<AgentId, Preference> prefs;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    if (!mk) {
      const auto tok = detail::split_ws(raw);
      int men = 0, women = 0;
      if (tok.size() != 3 || tok[0] != "market" || std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), men).ec != std::errc() ||
          std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), women).ec != std::errc() || men < 1 || women < 1)
        throw ParseError(Diagnostic::BadHeader, line_no, "expected 'market <num_men> <num_women>'");
      mk = Market(men, women);
      continue;
    }
    const auto colon = raw.find(':');
    if (colon == std::string::npos) throw ParseError(Diagnostic::MalformedLine, line_no, "expected '<agent>: <partners>'");
    const auto head = detail::split_ws(raw.substr(0, colon));
    if (head.size() != 1) throw ParseError(Diagnostic::MalformedLine, line_no, "expected a single agent name before ':'");
    const auto agent = parse_agent_name(head[0]);
    if (!agent || !mk->contains(*agent))
      throw ParseError(Diagnostic::UnknownName, line_no, "unknown agent '" + head[0] + "'");
    if (prefs.count(*agent)) throw ParseError(Diagnostic::DuplicateAgent, line_no, name_of(*agent) + " defined twice");
    prefs.emplace(*agent, parse_preference_tokens(*mk, *agent, detail::split_ws(raw.substr(colon + 1)), line_no));
  }
  if (!mk) throw ParseError(Diagnostic::BadHeader, line_no + 1, "missing 'market' header");
  std::vector<Preference> ordered;
  for (int i = 0; i < mk->num_agents(); ++i) {
    const AgentId a = mk->agent_at(i);
    auto it = prefs.find(a);
    if (it == prefs.end()) throw ParseError(Diagnostic::MissingAgent, line_no + 1, "no line for " + name_of(a));
    ordered.push_back(it->second);
  }
  return Profile(*mk, std::move(ordered));
}

inline std::string serialize_market(const Profile& p) {
  std::string s = "market " + std::to_string(p.market().num_men) + " " + std::to_string(p.market().num_women) + "\n";
  for (const Preference& pref : p.prefs()) {
    s += name_of(pref.owner()) + ":";
    for (Partner x : pref.order()) s += " " + name_of(x);
    s += "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON. Keys are emitted in a fixed order (ordered_json) so output is
// byte-stable.

using Json = nlohmann::ordered_json;

inline Json to_json(const Preference& p) {
  Json a = Json::array();
  for (Partner x : p.order()) a.push_back(name_of(x));
  return a;
}

inline Json to_json(const Profile& p) {
  Json prefs = Json::object();
  for (const Preference& pref : p.prefs()) prefs[name_of(pref.owner())] = to_json(pref);
  return Json{{"market", {{"men", p.market().num_men}, {"women", p.market().num_women}}}, {"preferences", prefs}};
}

inline Json to_json(const Matching& mu) {
  Json j = Json::object();
  for (int i = 0; i < mu.market().num_agents(); ++i) {
    const AgentId a = mu.market().agent_at(i);
    j[name_of(a)] = name_of(mu.partner(a));
  }
  return j;
}

inline Json to_json(const BlockReport& r) {
  Json ind = Json::array();
  for (AgentId a : r.blocking_individuals) ind.push_back(name_of(a));
  Json pairs = Json::array();
  for (auto [m, w] : r.blocking_pairs) pairs.push_back(Json::array({name_of(m), name_of(w)}));
  return Json{{"blocking_individuals", ind}, {"blocking_pairs", pairs}};
}

inline Json to_json(const Witness& w) {
  Json j{{"axiom", to_string(w.axiom)}, {"mechanism", to_string(w.mechanism)}, {"profile", to_json(w.profile)}};
  if (w.agent) j["agent"] = name_of(*w.agent);
  if (w.misreport) j["misreport"] = to_json(*w.misreport);
  j["truthful_outcome"] = to_json(w.truthful_outcome);
  if (w.deviant_outcome) j["deviant_outcome"] = to_json(*w.deviant_outcome);
  if (w.block_report) j["block_report"] = to_json(*w.block_report);
  return j;
}

namespace detail {

inline AgentId agent_from_json(const Json& j, const Market& mk) {
  const auto a = parse_agent_name(j.get<std::string>());
  if (!a || !mk.contains(*a)) throw Error(ErrorCode::InvalidInput, "bad agent name in JSON");
  return *a;
}

inline Preference preference_from_json(const Json& j, const Market& mk, AgentId owner) {
  std::vector<std::string> names;
  for (const auto& x : j) names.push_back(x.get<std::string>());
  return parse_preference_tokens(mk, owner, names, 0);
}

}  // namespace detail

inline Profile profile_from_json(const Json& j) {
  const Market mk(j.at("market").at("men").get<int>(), j.at("market").at("women").get<int>());
  std::vector<Preference> prefs;
  for (int i = 0; i < mk.num_agents(); ++i) {
    const AgentId a = mk.agent_at(i);
    prefs.push_back(detail::preference_from_json(j.at("preferences").at(name_of(a)), mk, a));
  }
  return Profile(mk, std::move(prefs));
}

inline Matching matching_from_json(const Json& j, const Market& mk) {
  Matching mu(mk);
  for (int i = 0; i < mk.num_agents(); ++i) {
    const AgentId a = mk.agent_at(i);
    const auto p = parse_partner_name(j.at(name_of(a)).get<std::string>());
    if (!p) throw Error(ErrorCode::InvalidInput, "bad partner name in JSON");
    mu.set_raw(a, *p);
  }
  return mu;
}

inline Witness witness_from_json(const Json& j) {
  Witness w;
  w.axiom = parse_axiom(j.at("axiom").get<std::string>());
  w.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
  w.profile = profile_from_json(j.at("profile"));
  const Market& mk = w.profile.market();
  if (j.contains("agent")) w.agent = detail::agent_from_json(j.at("agent"), mk);
  if (j.contains("misreport")) {
    if (!w.agent) throw Error(ErrorCode::InvalidInput, "misreport without agent");
    w.misreport = detail::preference_from_json(j.at("misreport"), mk, *w.agent);
  }
  w.truthful_outcome = matching_from_json(j.at("truthful_outcome"), mk);
  if (j.contains("deviant_outcome")) w.deviant_outcome = matching_from_json(j.at("deviant_outcome"), mk);
  if (j.contains("block_report")) {
    BlockReport r;
    for (const auto& a : j.at("block_report").at("blocking_individuals"))
      r.blocking_individuals.insert(detail::agent_from_json(a, mk));
    for (const auto& pr : j.at("block_report").at("blocking_pairs"))
      r.blocking_pairs.emplace(detail::agent_from_json(pr.at(0), mk), detail::agent_from_json(pr.at(1), mk));
    w.block_report = std::move(r);
  }
  return w;
}

inline std::string mode_name(const SweepMode& m) {
  switch (m.kind) {
    case SweepMode::Kind::FirstWitness: return "first";
    case SweepMode::Kind::CountAll: return "count";
    case SweepMode::Kind::CollectUpTo: return "collect=" + std::to_string(m.limit);
  }
  return "?";
}

/// Wall time and worker count are left out unless asked for, so the default
/// output depends only on the spec's domain, mechanism, axioms and mode.
inline Json to_json(const SweepReport& r, bool include_timing = false) {
  Json axioms = Json::array();
  for (Axiom a : r.spec.axioms) axioms.push_back(to_string(a));
  Json spec{{"size", std::to_string(r.spec.market.num_men) + "x" + std::to_string(r.spec.market.num_women)},
            {"domain", to_string(r.spec.restriction.kind)},
            {"mechanism", to_string(r.spec.mechanism)},
            {"axioms", axioms},
            {"mode", mode_name(r.spec.mode)}};
  if (r.spec.restriction.kind == DomainRestriction::Kind::Sampled) {
    spec["samples"] = r.spec.restriction.sample_count;
    spec["seed"] = r.spec.restriction.seed;
  }
  if (r.spec.budget) spec["budget"] = *r.spec.budget;
  Json counts = Json::object();
  for (const auto& [a, c] : r.counts) counts[to_string(a)] = c;
  Json ws = Json::array();
  for (const SweptWitness& sw : r.witnesses) {
    Json e{{"profile_index", sw.profile_index}};
    e["witness"] = to_json(sw.witness);
    ws.push_back(std::move(e));
  }
  Json j{{"spec", spec},
         {"domain_size", r.domain_size},
         {"profiles_examined", r.profiles_examined},
         {"counts", counts},
         {"witnesses_truncated", r.witnesses_truncated},
         {"witnesses", ws}};
  if (include_timing) {
    j["workers"] = r.spec.workers;
    j["wall_seconds"] = r.wall_seconds;
  }
  return j;
}

inline Json to_json(const CrossValidationReport& r) {
  return Json{{"boost_witnesses", r.boost_witnesses},
              {"converted", r.converted},
              {"success_rate", r.success_rate()},
              {"branches", {{"profitable_misreport", r.profitable_misreport}, {"profitable_reversal", r.profitable_reversal}}},
              {"failures", r.failures}};
}

inline Json to_json(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const Check& c : checks) a.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return a;
}

inline Json to_json(const ReplicationReport& r) {
  Json j{{"name", to_string(r.name)}, {"passed", r.passed()}, {"profile", to_json(r.profile)}, {"checks", to_json(r.checks)}};
  if (r.name == NamedMarket::Example1) {
    Json t = Json::array(), b = Json::array();
    for (const auto& p : r.truncation_set) t.push_back(to_json(p));
    for (const auto& p : r.boost_set) b.push_back(to_json(p));
    j["truncation_set"] = t;
    j["boost_set"] = b;
  } else {
    j["misreport"] = to_json(*r.misreport);
    j["truthful_matching"] = to_json(*r.truthful_matching);
    j["deviant_matching"] = to_json(*r.deviant_matching);
    j["truthful_assignment"] = name_of(*r.truthful_assignment);
    j["deviant_assignment"] = name_of(*r.deviant_assignment);
    j["witness"] = to_json(*r.witness);
  }
  return j;
}

inline Json to_json(const Step1Report& r) {
  return Json{{"woman", name_of(r.woman)}, {"p_prime", to_json(r.p_prime)}, {"passed", r.passed()}, {"checks", to_json(r.checks)}};
}

inline Json to_json(const Step1SweepReport& r) {
  Json f = Json::object();
  for (const auto& [k, v] : r.failures_by_check) f[k] = v;
  Json ex = Json::array();
  for (const auto& [idx, rep] : r.first_failures) ex.push_back(Json{{"profile_index", idx}, {"report", to_json(rep)}});
  return Json{{"profiles_examined", r.profiles_examined},
              {"women_checked", r.women_checked},
              {"women_skipped", r.women_skipped},
              {"passed", r.ok()},
              {"failures_by_check", f},
              {"first_failures", ex}};
}

}  // namespace mm
