// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mm/mm.hpp"
#include "oracles.hpp"

using namespace mm;

namespace {

constexpr unsigned kWorkers = 4;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_seconds) {
    o.passed = false;
    o.detail += " [over time limit " + std::to_string(static_cast<int>(limit_seconds)) + " s]";
  }
  failures += !o.passed;
  std::printf("%s  C%-2d %-44s %7.2f s  %s\n", o.passed ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

SweepSpec spec_for(Market mk, DomainRestriction r, MechanismId m, Axiom a, SweepMode mode) {
  SweepSpec s;
  s.market = mk;
  s.restriction = r;
  s.mechanism = m;
  s.axioms = {a};
  s.mode = mode;
  s.workers = kWorkers;
  s.max_stored = 0;
  return s;
}

std::uint64_t count_witnesses(Market mk, DomainRestriction r, MechanismId m, Axiom a) {
  return sweep(spec_for(mk, r, m, a, SweepMode::count_all())).total();
}

const Market k3x3(3, 3);
const DomainRestriction kAA = DomainRestriction::all_acceptable();

Outcome theorem1_replication() {
  const ReplicationReport r = replicate(NamedMarket::Theorem1Step2);
  const Market& mk = r.profile.market();
  const bool exact = *r.truthful_matching == make_matching(mk, {{0, 2}, {1, 0}, {2, 1}}) &&
                     *r.deviant_matching == make_matching(mk, {{0, 0}, {1, 2}, {2, 1}}) &&
                     *r.truthful_assignment == Partner(AgentId::woman(0)) &&
                     *r.deviant_assignment == Partner(AgentId::woman(2));
  return {exact && r.passed(), "m2: " + name_of(*r.truthful_assignment) + " -> " + name_of(*r.deviant_assignment) +
                                   ", truthful " + to_string(*r.truthful_matching) + ", deviant " +
                                   to_string(*r.deviant_matching)};
}

Outcome example1_replication() {
  const ReplicationReport r = replicate(NamedMarket::Example1);
  const AgentId m1 = AgentId::man(0);
  const Partner w1 = AgentId::woman(0), w2 = AgentId::woman(1), self = Partner::self();
  const std::set<Preference> trunc(r.truncation_set.begin(), r.truncation_set.end());
  const std::set<Preference> boost(r.boost_set.begin(), r.boost_set.end());
  const std::set<Preference> want_trunc = {Preference(m1, {w2, self, w1}), Preference(m1, {self, w1, w2}),
                                           Preference(m1, {self, w2, w1})};
  const std::set<Preference> want_boost = {Preference(m1, {w1, w2, self}), Preference(m1, {w1, self, w2})};
  bool disjoint = true;
  for (const Preference& p : trunc) disjoint = disjoint && !boost.count(p);
  return {trunc == want_trunc && boost == want_boost && disjoint && r.truncation_set.size() == 3 &&
              r.boost_set.size() == 2,
          std::to_string(trunc.size()) + " truncations, " + std::to_string(boost.size()) + " boosts, disjoint=" +
              (disjoint ? "yes" : "no")};
}

Outcome theorem1_at_scale() {
  SweepSpec s = spec_for(k3x3, kAA, MechanismId::woman_da(), Axiom::BoostInvariance, SweepMode::count_all());
  s.max_stored.reset();
  const SweepReport r = sweep(s);
  const Profile named = named_profile(NamedMarket::Theorem1Step2);
  bool named_found = false;
  std::set<std::uint64_t> violating;
  for (const SweptWitness& w : r.witnesses) {
    violating.insert(w.profile_index);
    named_found = named_found || w.witness.profile.prefs() == named.prefs();
  }
  return {r.profiles_examined == 46656 && r.total() >= 1 && named_found,
          std::to_string(r.total()) + " witnesses in " + std::to_string(violating.size()) + " of " +
              std::to_string(r.profiles_examined) + " profiles, named profile " + (named_found ? "present" : "absent")};
}

Outcome theorem0() {
  const std::uint64_t mda = count_witnesses(k3x3, kAA, MechanismId::man_da(), Axiom::StrategyProofness);
  const std::uint64_t wda = count_witnesses(k3x3, kAA, MechanismId::woman_da(), Axiom::StrategyProofness);
  return {mda >= 1 && wda >= 1, "mda " + std::to_string(mda) + ", wda " + std::to_string(wda) + " SP witnesses"};
}

Outcome boost_to_sp_conversion() {
  std::uint64_t boost = 0, converted = 0, direct = 0, reversal = 0, failed = 0;
  std::string first_failure;
  for (MechanismId m : {MechanismId::man_da(), MechanismId::woman_da()}) {
    const CrossValidationReport x =
        cross_validate(spec_for(k3x3, kAA, m, Axiom::BoostInvariance, SweepMode::count_all()));
    boost += x.boost_witnesses;
    converted += x.converted;
    direct += x.profitable_misreport;
    reversal += x.profitable_reversal;
    failed += x.failures.size();
    if (first_failure.empty() && !x.failures.empty()) first_failure = x.failures.front();
  }
  const bool all_converted = boost > 0 && converted == boost && failed == 0;
  const bool both_branches = direct > 0 && reversal > 0;
  std::string detail = std::to_string(converted) + "/" + std::to_string(boost) + " converted, " +
                       std::to_string(failed) + " failures; branches: profitable-misreport " + std::to_string(direct) +
                       ", profitable-reversal " + std::to_string(reversal);
  if (!both_branches) detail += "; not both branches exercised";
  if (!first_failure.empty()) detail += "; first failure: " + first_failure;
  return {all_converted && both_branches, detail};
}

Outcome ia_positive_control() {
  std::ostringstream d;
  std::uint64_t total = 0;
  for (MechanismId m : {MechanismId::man_ia(), MechanismId::woman_ia()}) {
    const std::uint64_t a = count_witnesses(Market(2, 2), DomainRestriction::full(), m, Axiom::BoostInvariance);
    const std::uint64_t b = count_witnesses(k3x3, kAA, m, Axiom::BoostInvariance);
    const std::uint64_t c =
        count_witnesses(k3x3, DomainRestriction::sampled(10000, 20240601), m, Axiom::BoostInvariance);
    total += a + b + c;
    d << to_string(m) << " " << a << "/" << b << "/" << c << "  ";
  }
  d << "(2x2 full / 3x3 all-acceptable / 3x3 sampled 10000)";
  return {total == 0, d.str()};
}

Outcome ia_negative_control() {
  const std::uint64_t sp = count_witnesses(k3x3, kAA, MechanismId::man_ia(), Axiom::StrategyProofness);
  const std::uint64_t unstable = count_witnesses(k3x3, kAA, MechanismId::man_ia(), Axiom::Stability);
  return {sp >= 1 && unstable >= 1,
          std::to_string(sp) + " SP witnesses, " + std::to_string(unstable) + " unstable outcomes (mia)"};
}

Outcome step1_suite() {
  const Step1SweepReport r = sweep_step1(k3x3, kAA, kWorkers);
  std::string detail = std::to_string(r.profiles_examined) + " profiles, " + std::to_string(r.women_checked) +
                       " women checked, " + std::to_string(r.women_skipped) + " single";
  for (const auto& [k, v] : r.failures_by_check) detail += "; " + k + " failed " + std::to_string(v);
  return {r.ok() && r.profiles_examined == 46656 && r.women_checked > 0, detail};
}

Outcome classical_oracles() {
  std::vector<Profile> domain = enumerate_profiles(Market(2, 2), DomainRestriction::full());
  const ProfileSpace sampled(k3x3, DomainRestriction::sampled(5000, 77));
  for (std::uint64_t k = 0; k < sampled.size(); ++k) domain.push_back(sampled.at(k));
  std::mt19937_64 rng(123);
  std::uint64_t violations = 0, joins = 0;
  for (const Profile& p : domain) {
    const oracle::Table t = oracle::table_of(p);
    const std::vector<oracle::Map> stable = oracle::stable_maps(t);
    auto in_stable = [&](const Matching& mu) {
      return std::find(stable.begin(), stable.end(), oracle::map_of(mu)) != stable.end();
    };
    for (Side side : {Side::Man, Side::Woman}) {
      const Matching mu = deferred_acceptance(p, side);
      const oracle::Map m = oracle::map_of(mu);
      if (!in_stable(mu)) ++violations;
      const int lo = side == Side::Man ? 0 : t.M, hi = side == Side::Man ? t.M : t.n();
      for (const oracle::Map& s : stable)
        for (int a = lo; a < hi; ++a)
          if (t.better(a, s[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(a)])) ++violations;
      for (int k = 0; k < 20; ++k) {
        auto pick = [&](const std::vector<int>& free) {
          return std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng);
        };
        if (!(deferred_acceptance(p, side, pick) == mu)) ++violations;
      }
    }
    auto matched = [&](const oracle::Map& m) {
      std::vector<bool> v;
      for (int x : m) v.push_back(x != -1);
      return v;
    };
    const std::vector<Matching> lib = enumerate_stable_matchings(p);
    if (lib.size() != stable.size()) ++violations;
    for (const oracle::Map& s : stable)
      if (matched(s) != matched(stable.front())) ++violations;
    for (const Matching& a : lib)
      for (const Matching& b : lib)
        for (Side side : {Side::Man, Side::Woman}) {
          ++joins;
          if (!in_stable(lattice_join(p, a, b, side))) ++violations;
        }
  }
  return {violations == 0, std::to_string(domain.size()) + " profiles, " + std::to_string(joins) + " joins, " +
                               std::to_string(violations) + " violations"};
}

Outcome generator_equivalence() {
  const auto orders = oracle::all_orders(3);
  std::uint64_t mismatches = 0, checked = 0;
  for (AgentId owner : {AgentId::man(0), AgentId::woman(0)})
    for (const auto& t : orders) {
      const Preference truth = oracle::preference_of(owner, t);
      std::set<Preference> want_trunc;
      for (const auto& c : orders)
        if (oracle::truncation_predicate(t, c)) want_trunc.insert(oracle::preference_of(owner, c));
      const auto trunc = truncation_strategies(truth);
      mismatches += std::set<Preference>(trunc.begin(), trunc.end()) != want_trunc || trunc.size() != want_trunc.size();
      ++checked;
      for (int pivot = -1; pivot < 3; ++pivot) {
        const Partner pv = pivot == -1 ? Partner::self() : Partner(AgentId{opposite(owner.side), pivot});
        std::set<Preference> want;
        for (const auto& c : orders)
          if (oracle::boost_predicate(t, pivot, c)) want.insert(oracle::preference_of(owner, c));
        const auto got = boost_misrepresentations(truth, pv);
        mismatches += std::set<Preference>(got.begin(), got.end()) != want || got.size() != want.size();
        ++checked;
      }
    }
  return {mismatches == 0, std::to_string(checked) + " (type, family) pairs, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  criterion(1, "named 3x3 market: wda boost witness for m2", 1, theorem1_replication);
  criterion(2, "named 2x2 market: truncation and boost sets", 1, example1_replication);
  criterion(3, "boost-invariance violated at scale (wda)", 60, theorem1_at_scale);
  criterion(4, "strategy-proofness violated (mda, wda)", 120, theorem0);
  criterion(5, "boost witnesses convert to SP witnesses", 120, boost_to_sp_conversion);
  criterion(6, "IA positive control (boost-invariance)", 120, ia_positive_control);
  criterion(7, "IA negative control (SP, stability)", 60, ia_negative_control);
  criterion(8, "step 1 identities on 3x3 all-acceptable", 600, step1_suite);
  criterion(9, "classical property oracles", 600, classical_oracles);
  criterion(10, "generator oracle equivalence", 60, generator_equivalence);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
