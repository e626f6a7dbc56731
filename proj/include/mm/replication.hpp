#pragma once

// Named markets and the preference constructions used in the impossibility
// argument, turned into executable checks.

#include <algorithm>
#include <string>
#include <vector>

#include "mm/axioms.hpp"
#include "mm/enumerate.hpp"
#include "mm/market.hpp"
#include "mm/mechanisms.hpp"
#include "mm/stability.hpp"
#include "mm/strategy_space.hpp"

namespace mm {

enum class NamedMarket { Example1, Theorem1Step2 };

inline const char* to_string(NamedMarket n) { return n == NamedMarket::Example1 ? "example1" : "theorem1"; }

namespace detail {

// Compact literal: men's lists as woman numbers (1-based), women's as man
// numbers, Self appended last.
inline Profile literal_profile(int n, const std::vector<std::vector<int>>& men,
                               const std::vector<std::vector<int>>& women) {
  const Market mk(n, n);
  std::vector<Preference> prefs;
  auto build = [&](AgentId owner, const std::vector<int>& list) {
    std::vector<Partner> order;
    for (int x : list) order.emplace_back(AgentId{opposite(owner.side), x - 1});
    order.push_back(Partner::self());
    prefs.emplace_back(owner, std::move(order));
  };
  for (int m = 0; m < n; ++m) build(AgentId::man(m), men[static_cast<std::size_t>(m)]);
  for (int w = 0; w < n; ++w) build(AgentId::woman(w), women[static_cast<std::size_t>(w)]);
  return Profile(mk, std::move(prefs));
}

}  // namespace detail

inline Profile named_profile(NamedMarket name) {
  if (name == NamedMarket::Example1) return detail::literal_profile(2, {{2, 1}, {1, 2}}, {{1, 2}, {2, 1}});
  return detail::literal_profile(3, {{2, 3, 1}, {1, 2, 3}, {1, 3, 2}}, {{1, 2, 3}, {2, 3, 1}, {2, 1, 3}});
}

namespace detail {

// True prefix through `pivot`, then Self, then the remaining partners in true order.
inline Preference truncate_after(const Preference& truth, Partner pivot) {
  std::vector<Partner> order;
  const int cut = truth.rank(pivot);
  for (int r = 1; r <= cut; ++r) order.push_back(truth.at_rank(r));
  if (!pivot.is_self()) order.push_back(Partner::self());
  for (int r = cut + 1; r <= truth.num_options() + 1; ++r)
    if (!truth.at_rank(r).is_self()) order.push_back(truth.at_rank(r));
  return Preference(truth.owner(), std::move(order));
}

inline void require_woman(const Profile& profile, AgentId w) {
  if (w.side != Side::Woman || !profile.market().contains(w))
    throw Error(ErrorCode::InvalidInput, name_of(w) + " is not a woman of this market");
}

}  // namespace detail

/// Woman w truncates right below her woman-optimal stable partner.
inline Preference construct_p_prime(const Profile& profile, AgentId w) {
  detail::require_woman(profile, w);
  const Partner best = deferred_acceptance(profile, Side::Woman).partner(w);
  if (best.is_self())
    throw Error(ErrorCode::NotApplicable, name_of(w) + " is single under woman-proposing DA");
  return detail::truncate_after(profile.of(w), best);
}

/// Woman w truncates right below a given assignment (kept as is when the
/// assignment is Self).
inline Preference construct_p_double_prime(const Profile& profile, AgentId w, Partner phi_assignment) {
  detail::require_woman(profile, w);
  if (!profile.of(w).is_valid_partner(phi_assignment))
    throw Error(ErrorCode::InvalidPartner, name_of(phi_assignment) + " is not a partner option of " + name_of(w));
  return detail::truncate_after(profile.of(w), phi_assignment);
}

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

struct Step1Report {
  AgentId woman;
  Preference p_prime;
  std::vector<Check> checks;

  bool passed() const { return all_passed(checks); }
};

/// Checks the identities that pin every stable mechanism to woman-optimal DA
/// at the profile where w truncates below her woman-optimal partner.
inline Step1Report verify_step1_identities(const Profile& profile, AgentId w) {
  Step1Report rep{w, construct_p_prime(profile, w), {}};
  const Matching wda = deferred_acceptance(profile, Side::Woman);
  const Matching mda = deferred_acceptance(profile, Side::Man);
  const Partner target = wda.partner(w);
  const Profile deviated = profile.with(rep.p_prime);
  const Matching wda_dev = deferred_acceptance(deviated, Side::Woman);
  const Matching mda_dev = deferred_acceptance(deviated, Side::Man);
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.checks.push_back(Check{std::move(name), ok, std::move(detail)});
  };

  add("wda-fixed-point", wda_dev == wda, to_string(wda_dev) + " vs " + to_string(wda));

  const Partner m_dev = mda_dev.partner(w);
  add("mda-in-two-element-set", m_dev.is_self() || m_dev == wda_dev.partner(w),
      name_of(w) + " gets " + name_of(m_dev) + " under man-proposing DA");

  add("matched-under-mda", !m_dev.is_self(), name_of(w) + " gets " + name_of(m_dev));

  add("mda-equals-wda-equals-target", m_dev == wda_dev.partner(w) && wda_dev.partner(w) == target,
      name_of(m_dev) + ", " + name_of(wda_dev.partner(w)) + ", " + name_of(target));

  const std::vector<Matching> stable = enumerate_stable_matchings(deviated);
  const bool every_stable_agrees = !stable.empty() && std::all_of(stable.begin(), stable.end(), [&](const Matching& mu) {
                                     return mu.partner(w) == target;
                                   });
  add("all-stable-give-target", every_stable_agrees,
      std::to_string(stable.size()) + " stable matchings at the deviated profile");

  bool same_matched = !stable.empty();
  for (const Matching& mu : stable)
    same_matched = same_matched && matched_agent_set(deviated, mu) == matched_agent_set(deviated, stable.front());
  add("rural-hospital", same_matched, "matched sets across the stable set");

  // P'' for the man-optimal stable mechanism, whose assignment to w can differ
  // from the woman-optimal one. When it does, P'' must be a boost
  // misrepresentation relative to both the truthful and the deviated profile.
  const Partner phi = mda.partner(w);
  if (phi != target) {
    const Preference pp = construct_p_double_prime(profile, w, phi);
    const bool wrt_truth = is_boost_misrepresentation(profile.of(w), phi, pp);
    const bool wrt_deviated = is_boost_misrepresentation(rep.p_prime, mda_dev.partner(w), pp);
    add("p-double-prime-boost-both", wrt_truth && wrt_deviated,
        to_string(pp) + " for assignments " + name_of(phi) + " / " + name_of(mda_dev.partner(w)));
  }
  return rep;
}

struct ReplicationReport {
  NamedMarket name;
  Profile profile;
  std::vector<Check> checks;

  // Example1
  std::vector<Preference> truncation_set;
  std::vector<Preference> boost_set;

  // Theorem1Step2
  std::optional<Preference> misreport;
  std::optional<Matching> truthful_matching;
  std::optional<Matching> deviant_matching;
  std::optional<Partner> truthful_assignment;
  std::optional<Partner> deviant_assignment;
  std::optional<Witness> witness;

  bool passed() const { return all_passed(checks); }
};

namespace detail {

inline Preference pref_of(AgentId owner, std::initializer_list<Partner> order) { return Preference(owner, order); }

inline bool same_set(std::vector<Preference> a, std::vector<Preference> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline std::string list(const std::vector<Preference>& ps) {
  std::string s = "{";
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + to_string(ps[i]);
  return s + "}";
}

}  // namespace detail

inline ReplicationReport replicate(NamedMarket name) {
  ReplicationReport rep{name, named_profile(name), {}, {}, {}, {}, {}, {}, {}, {}, {}};
  const Profile& prof = rep.profile;
  const AgentId m1 = AgentId::man(0), m2 = AgentId::man(1);
  const AgentId w1 = AgentId::woman(0), w2 = AgentId::woman(1), w3 = AgentId::woman(2);
  const Partner self = Partner::self();
  auto add = [&](std::string n, bool ok, std::string d) { rep.checks.push_back(Check{std::move(n), ok, std::move(d)}); };

  if (name == NamedMarket::Example1) {
    const Matching wda = deferred_acceptance(prof, Side::Woman);
    add("wda-matching", wda == make_matching(prof.market(), {{0, 0}, {1, 1}}), to_string(wda));
    const Preference& truth = prof.of(m1);
    rep.truncation_set = truncation_strategies(truth, false);
    rep.boost_set = boost_misrepresentations(truth, wda.partner(m1), false);
    const std::vector<Preference> expected_trunc = {detail::pref_of(m1, {w2, self, w1}),
                                                    detail::pref_of(m1, {self, w1, w2}),
                                                    detail::pref_of(m1, {self, w2, w1})};
    const std::vector<Preference> expected_boost = {detail::pref_of(m1, {w1, w2, self}),
                                                    detail::pref_of(m1, {w1, self, w2})};
    add("truncation-set", detail::same_set(rep.truncation_set, expected_trunc), detail::list(rep.truncation_set));
    add("boost-set", detail::same_set(rep.boost_set, expected_boost), detail::list(rep.boost_set));
    bool disjoint = true;
    for (const Preference& p : rep.truncation_set)
      disjoint = disjoint && std::find(rep.boost_set.begin(), rep.boost_set.end(), p) == rep.boost_set.end();
    add("sets-disjoint", disjoint, "truncations vs boosts");
    return rep;
  }

  const Matching boxed = make_matching(prof.market(), {{0, 2}, {1, 0}, {2, 1}});
  const Matching starred = make_matching(prof.market(), {{0, 0}, {1, 2}, {2, 1}});
  const Preference lie = detail::pref_of(m2, {w1, w3, w2, self});
  const Matching honest = deferred_acceptance(prof, Side::Woman);
  const Matching deviant = deferred_acceptance(prof.with(lie), Side::Woman);
  rep.misreport = lie;
  rep.truthful_matching = honest;
  rep.deviant_matching = deviant;
  rep.truthful_assignment = honest.partner(m2);
  rep.deviant_assignment = deviant.partner(m2);
  add("wda-truthful", honest == boxed, to_string(honest));
  add("wda-deviant", deviant == starred, to_string(deviant));
  add("misreport-is-boost", is_boost_misrepresentation(prof.of(m2), honest.partner(m2), lie), to_string(lie));
  add("assignment-changes", honest.partner(m2) == Partner(w1) && deviant.partner(m2) == Partner(w3),
      name_of(honest.partner(m2)) + " -> " + name_of(deviant.partner(m2)));
  Witness w{Axiom::BoostInvariance, MechanismId::woman_da(), prof, m2, lie, honest, deviant, std::nullopt};
  add("witness-valid", validate_witness(w), "re-executed");
  rep.witness = std::move(w);
  return rep;
}

}  // namespace mm
