#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.
//
// Exit codes: 0 success, 1 expectation not met (--expect-none/--expect-some),
// 2 input error, 3 internal validation failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mm/mm.hpp"

namespace mm::cli {

enum Exit : int { kOk = 0, kExpectationFailed = 1, kInputError = 2, kValidationFailure = 3 };

inline Profile load_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read market file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_market(ss.str());
}

inline Market parse_size(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const int r = std::stoi(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    const int c = std::stoi(s.substr(x + 1), &used);
    if (used != s.size() - x - 1) throw std::invalid_argument(s);
    return Market(r, c);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidInput, "size must look like RxC, got '" + s + "'");
  }
}

inline SweepMode parse_mode(const std::string& s) {
  if (s == "first") return SweepMode::first_witness();
  if (s == "count") return SweepMode::count_all();
  if (s.rfind("collect=", 0) == 0) {
    try {
      const long long n = std::stoll(s.substr(8));
      if (n >= 1) return SweepMode::collect_up_to(static_cast<std::uint64_t>(n));
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::InvalidInput, "mode must be first, count or collect=N");
}

inline DomainRestriction parse_domain(const std::string& s, std::uint64_t samples, std::uint64_t seed) {
  if (s == "full") return DomainRestriction::full();
  if (s == "all-acceptable") return DomainRestriction::all_acceptable();
  if (s == "sampled") return DomainRestriction::sampled(samples, seed);
  throw Error(ErrorCode::InvalidInput, "domain must be full, all-acceptable or sampled");
}

inline std::vector<Axiom> parse_axioms(const std::string& s) {
  std::vector<Axiom> out;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, ',');) out.push_back(parse_axiom(tok));
  return out;
}

/// --workers, else MM_WORKERS, else the hardware thread count.
inline unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("MM_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::logic_error&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void print_witness(std::ostream& out, const Witness& w) {
  out << "  " << to_string(w.axiom) << " violation";
  if (w.agent) out << " by " << name_of(*w.agent);
  out << "\n";
  if (w.misreport) out << "    misreport: " << to_string(*w.misreport) << "\n";
  out << "    truthful: " << to_string(w.truthful_outcome) << "\n";
  if (w.deviant_outcome) out << "    deviant:  " << to_string(*w.deviant_outcome) << "\n";
  if (w.agent && w.deviant_outcome)
    out << "    " << name_of(*w.agent) << ": " << name_of(w.truthful_outcome.partner(*w.agent)) << " -> "
        << name_of(w.deviant_outcome->partner(*w.agent)) << "\n";
  if (w.block_report) {
    out << "    blocking:";
    for (AgentId a : w.block_report->blocking_individuals) out << " " << name_of(a);
    for (auto [m, wo] : w.block_report->blocking_pairs) out << " (" << name_of(m) << "," << name_of(wo) << ")";
    out << "\n";
  }
}

inline void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  for (const Check& c : checks) out << "  [" << (c.passed ? "ok" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
}

struct Expectation {
  bool none = false;
  bool some = false;

  int exit_for(std::uint64_t witnesses) const {
    if (none && witnesses > 0) return kExpectationFailed;
    if (some && witnesses == 0) return kExpectationFailed;
    return kOk;
  }
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit two-sided matching mechanisms against incentive and stability axioms", "mm"};
  app.require_subcommand(1);

  std::string mechanism, market_file, axiom, size, domain = "full", mode = "count", target;
  std::uint64_t samples = 1000, seed = 0;
  std::optional<std::uint64_t> budget;
  std::uint64_t store = 1000;
  std::optional<unsigned> workers;
  bool json = false, long_run = false, timing = false, xval = false;
  Expectation expect;

  auto* run_cmd = app.add_subcommand("run", "Run a mechanism on a market file");
  run_cmd->add_option("--mechanism", mechanism, "mda, wda, mia or wia")->required();
  run_cmd->add_option("--market", market_file, "Market file")->required();
  run_cmd->add_flag("--json", json);

  auto* stable_cmd = app.add_subcommand("stable", "List the stable matchings of a market file");
  stable_cmd->add_option("--market", market_file)->required();
  stable_cmd->add_flag("--json", json);

  auto* check_cmd = app.add_subcommand("check", "Check one axiom at one profile");
  check_cmd->add_option("--mechanism", mechanism)->required();
  check_cmd->add_option("--axiom", axiom, "sp, boost, trunc, stability or ir (comma-separated)")->required();
  check_cmd->add_option("--market", market_file)->required();
  check_cmd->add_flag("--json", json);

  auto* search_cmd = app.add_subcommand("search", "Sweep a profile domain");
  search_cmd->add_option("--mechanism", mechanism)->required();
  search_cmd->add_option("--axiom", axiom)->required();
  search_cmd->add_option("--size", size, "RxC")->required();
  search_cmd->add_option("--domain", domain, "full, all-acceptable or sampled");
  search_cmd->add_option("--samples", samples);
  search_cmd->add_option("--seed", seed);
  search_cmd->add_option("--mode", mode, "first, count or collect=N");
  search_cmd->add_option("--budget", budget, "Examine at most this many profiles");
  search_cmd->add_option("--store", store, "Witnesses kept in count mode (counts stay exact)");
  search_cmd->add_flag("--long-run", long_run, "Allow domains above 10^7 profiles");
  search_cmd->add_option("--workers", workers);
  search_cmd->add_flag("--json", json);
  search_cmd->add_flag("--timing", timing, "Include wall time and worker count in JSON");
  search_cmd->add_flag("--cross-validate", xval, "Convert boost witnesses into strategy-proofness witnesses");

  auto* rep_cmd = app.add_subcommand("replicate", "Replay the named constructions");
  rep_cmd->add_option("target", target, "example1, theorem1 or step1")->required();
  rep_cmd->add_option("--size", size, "RxC (step1)");
  rep_cmd->add_option("--domain", domain, "all-acceptable (default for step1), full or sampled");
  rep_cmd->add_option("--samples", samples);
  rep_cmd->add_option("--seed", seed);
  rep_cmd->add_flag("--long-run", long_run);
  rep_cmd->add_option("--workers", workers);
  rep_cmd->add_flag("--json", json);

  for (auto* sc : {check_cmd, search_cmd}) {
    auto* none = sc->add_flag("--expect-none", expect.none, "Exit 1 if any witness is found");
    auto* some = sc->add_flag("--expect-some", expect.some, "Exit 1 if no witness is found");
    none->excludes(some);
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kInputError;
  }

  try {
    if (*run_cmd) {
      const Profile p = load_market(market_file);
      const Matching mu = run_mechanism(parse_mechanism(mechanism), p);
      if (json)
        out << to_json(mu).dump(2) << "\n";
      else
        out << to_string(mu) << "\n";
      return kOk;
    }

    if (*stable_cmd) {
      const Profile p = load_market(market_file);
      const auto set = enumerate_stable_matchings(p);
      const Matching best_m = side_optimal(p, set, Side::Man);
      const Matching best_w = side_optimal(p, set, Side::Woman);
      const auto matched = matched_agent_set(p, set.front());
      if (json) {
        Json arr = Json::array();
        for (const Matching& mu : set) arr.push_back(to_json(mu));
        Json m = Json::array();
        for (AgentId a : matched) m.push_back(name_of(a));
        out << Json{{"stable_matchings", arr}, {"matched_agents", m}, {"man_optimal", to_json(best_m)},
                    {"woman_optimal", to_json(best_w)}}
                   .dump(2)
            << "\n";
      } else {
        out << set.size() << " stable matching(s)\n";
        for (const Matching& mu : set) out << "  " << to_string(mu) << "\n";
        out << "matched agents:";
        for (AgentId a : matched) out << " " << name_of(a);
        out << "\nman-optimal:   " << to_string(best_m) << "\nwoman-optimal: " << to_string(best_w) << "\n";
      }
      return kOk;
    }

    if (*check_cmd) {
      const Profile p = load_market(market_file);
      const MechanismId id = parse_mechanism(mechanism);
      std::vector<Witness> ws;
      for (Axiom a : parse_axioms(axiom))
        for (Witness& w : check_axiom(a, id, p)) ws.push_back(std::move(w));
      for (const Witness& w : ws)
        if (!validate_witness(w)) {
          err << "internal error: witness failed re-validation\n";
          return kValidationFailure;
        }
      if (json) {
        Json arr = Json::array();
        for (const Witness& w : ws) arr.push_back(to_json(w));
        out << Json{{"mechanism", to_string(id)}, {"witnesses", arr}}.dump(2) << "\n";
      } else {
        out << ws.size() << " witness(es) for " << to_string(id) << "\n";
        for (const Witness& w : ws) print_witness(out, w);
      }
      return expect.exit_for(ws.size());
    }

    if (*search_cmd) {
      SweepSpec spec;
      spec.market = parse_size(size);
      spec.restriction = parse_domain(domain, samples, seed);
      spec.mechanism = parse_mechanism(mechanism);
      spec.axioms = parse_axioms(axiom);
      spec.mode = parse_mode(mode);
      spec.budget = budget;
      spec.long_run = long_run;
      spec.workers = resolve_workers(workers);
      spec.max_stored = store;
      const SweepReport rep = sweep(spec);
      for (const SweptWitness& sw : rep.witnesses)
        if (!validate_witness(sw.witness)) {
          err << "internal error: witness at profile " << sw.profile_index << " failed re-validation\n";
          return kValidationFailure;
        }
      std::optional<CrossValidationReport> xv;
      if (xval) xv = rep.witnesses_truncated ? cross_validate(spec) : cross_validate(rep);
      if (json) {
        Json j = to_json(rep, timing);
        if (xv) j["cross_validation"] = to_json(*xv);
        out << j.dump(2) << "\n";
      } else {
        out << "examined " << rep.profiles_examined << " of " << rep.domain_size << " profiles in "
            << rep.wall_seconds << " s\n";
        for (const auto& [a, c] : rep.counts) out << "  " << to_string(a) << ": " << c << " witness(es)\n";
        if (!rep.witnesses.empty()) {
          out << "first witness at profile " << rep.witnesses.front().profile_index << ":\n";
          out << serialize_market(rep.witnesses.front().witness.profile);
          print_witness(out, rep.witnesses.front().witness);
        }
        if (xv)
          out << "cross-validation: " << xv->converted << "/" << xv->boost_witnesses << " converted ("
              << xv->profitable_misreport << " profitable-misreport, " << xv->profitable_reversal
              << " profitable-reversal)\n";
      }
      if (xv && !xv->ok()) {
        for (const auto& f : xv->failures) err << "conversion failure: " << f << "\n";
        return kValidationFailure;
      }
      return expect.exit_for(rep.total());
    }

    if (*rep_cmd) {
      if (target == "example1" || target == "theorem1") {
        const ReplicationReport rep =
            replicate(target == "example1" ? NamedMarket::Example1 : NamedMarket::Theorem1Step2);
        if (json) {
          out << to_json(rep).dump(2) << "\n";
        } else {
          out << "replicate " << target << "\n";
          print_checks(out, rep.checks);
          if (rep.truthful_assignment)
            out << "m2: " << name_of(*rep.truthful_assignment) << " -> " << name_of(*rep.deviant_assignment) << "\n";
        }
        return rep.passed() ? kOk : kValidationFailure;
      }
      if (target == "step1") {
        if (size.empty()) throw Error(ErrorCode::InvalidInput, "step1 needs --size RxC");
        const Market mk = parse_size(size);
        const DomainRestriction r =
            rep_cmd->count("--domain") ? parse_domain(domain, samples, seed) : DomainRestriction::all_acceptable();
        const Step1SweepReport rep = sweep_step1(mk, r, resolve_workers(workers), std::nullopt, long_run);
        if (json) {
          out << to_json(rep).dump(2) << "\n";
        } else {
          out << "step1 over " << rep.profiles_examined << " profiles: " << rep.women_checked << " women checked, "
              << rep.women_skipped << " skipped (single)\n";
          for (const auto& [k, v] : rep.failures_by_check) out << "  FAIL " << k << ": " << v << "\n";
          for (const auto& [idx, r1] : rep.first_failures) {
            out << "profile " << idx << ", " << name_of(r1.woman) << ":\n";
            print_checks(out, r1.checks);
          }
        }
        return rep.ok() ? kOk : kValidationFailure;
      }
      throw Error(ErrorCode::InvalidInput, "replicate target must be example1, theorem1 or step1");
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::ConversionFailure) return kValidationFailure;
    // Bad option values get the usage text of the subcommand they belong to.
    if (e.code() == ErrorCode::InvalidInput)
      for (const CLI::App* sc : app.get_subcommands()) err << sc->help();
    return kInputError;
  }
  return kInputError;
}

}  // namespace mm::cli
