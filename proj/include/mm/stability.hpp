#pragma once

// Blocking analysis, brute-force stable sets and lattice operations.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mm/market.hpp"

namespace mm {

struct BlockReport {
  std::set<AgentId> blocking_individuals;
  std::set<std::pair<AgentId, AgentId>> blocking_pairs;  // (man, woman)

  bool empty() const { return blocking_individuals.empty() && blocking_pairs.empty(); }
  friend bool operator==(const BlockReport&, const BlockReport&) = default;
};

namespace detail {

inline void require_compatible(const Profile& profile, const Matching& mu) {
  if (!(mu.market() == profile.market()))
    throw Error(ErrorCode::InvalidInput, "matching and profile belong to different markets");
  if (auto v = validate_matching(mu); !v.empty()) throw Error(ErrorCode::InvalidInput, "invalid matching: " + v.front());
}

}  // namespace detail

inline BlockReport block_report(const Profile& profile, const Matching& mu) {
  detail::require_compatible(profile, mu);
  const Market& mk = profile.market();
  BlockReport rep;
  for (int i = 0; i < mk.num_agents(); ++i) {
    const AgentId a = mk.agent_at(i);
    if (profile.of(a).prefers(Partner::self(), mu.partner(a))) rep.blocking_individuals.insert(a);
  }
  for (int m = 0; m < mk.num_men; ++m) {
    const AgentId man = AgentId::man(m);
    for (int w = 0; w < mk.num_women; ++w) {
      const AgentId woman = AgentId::woman(w);
      if (profile.of(man).prefers(woman, mu.partner(man)) && profile.of(woman).prefers(man, mu.partner(woman)))
        rep.blocking_pairs.emplace(man, woman);
    }
  }
  return rep;
}

inline bool is_stable(const Profile& profile, const Matching& mu) {
  detail::require_compatible(profile, mu);
  const Market& mk = profile.market();
  for (int i = 0; i < mk.num_agents(); ++i) {
    const AgentId a = mk.agent_at(i);
    if (profile.of(a).prefers(Partner::self(), mu.partner(a))) return false;
  }
  for (int m = 0; m < mk.num_men; ++m) {
    const AgentId man = AgentId::man(m);
    const Preference& pm = profile.of(man);
    const Partner cur = mu.partner(man);
    for (int w = 0; w < mk.num_women; ++w) {
      const AgentId woman = AgentId::woman(w);
      if (pm.prefers(woman, cur) && profile.of(woman).prefers(man, mu.partner(woman))) return false;
    }
  }
  return true;
}

inline bool is_individually_rational(const Profile& profile, const Matching& mu) {
  return block_report(profile, mu).blocking_individuals.empty();
}

inline constexpr int kDefaultBruteForceBound = 5;

/// Every valid matching of the market: subsets of matched men in increasing
/// bitmask order, then injections into women in lexicographic order.
inline std::vector<Matching> enumerate_matchings(const Market& mk, int bound = kDefaultBruteForceBound) {
  if (mk.num_men > bound || mk.num_women > bound)
    throw Error(ErrorCode::Capacity, "market " + std::to_string(mk.num_men) + "x" + std::to_string(mk.num_women) +
                                         " exceeds brute-force bound " + std::to_string(bound));
  std::vector<Matching> out;
  const int n = mk.num_men;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> men;
    for (int m = 0; m < n; ++m)
      if (mask & (1u << m)) men.push_back(m);
    if (static_cast<int>(men.size()) > mk.num_women) continue;
    // Injections men -> women, lexicographic over the women assigned in order.
    std::vector<int> assign(men.size(), -1);
    std::vector<bool> used(static_cast<std::size_t>(mk.num_women), false);
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k == men.size()) {
        Matching mu(mk);
        for (std::size_t i = 0; i < men.size(); ++i) mu.match(AgentId::man(men[i]), AgentId::woman(assign[i]));
        out.push_back(std::move(mu));
        return;
      }
      for (int w = 0; w < mk.num_women; ++w) {
        if (used[static_cast<std::size_t>(w)]) continue;
        used[static_cast<std::size_t>(w)] = true;
        assign[k] = w;
        self(self, k + 1);
        used[static_cast<std::size_t>(w)] = false;
      }
    };
    rec(rec, 0);
  }
  return out;
}

/// The full stable set, by filtering all matchings.
inline std::vector<Matching> enumerate_stable_matchings(const Profile& profile, int bound = kDefaultBruteForceBound) {
  std::vector<Matching> out;
  for (Matching& mu : enumerate_matchings(profile.market(), bound))
    if (is_stable(profile, mu)) out.push_back(std::move(mu));
  return out;
}

/// Pointwise best for `side`, pointwise worst for the other side.
inline Matching lattice_join(const Profile& profile, const Matching& mu, const Matching& nu, Side side) {
  if (!is_stable(profile, mu) || !is_stable(profile, nu))
    throw Error(ErrorCode::Precondition, "lattice_join needs two stable matchings");
  const Market& mk = profile.market();
  Matching out(mk);
  for (int i = 0; i < mk.num_agents(); ++i) {
    const AgentId a = mk.agent_at(i);
    const Preference& p = profile.of(a);
    const Partner x = mu.partner(a);
    const Partner y = nu.partner(a);
    const bool x_better = p.weakly_prefers(x, y);
    out.set_raw(a, (a.side == side) == x_better ? x : y);
  }
  return out;
}

/// The side-optimal element of a stable set (fold of lattice_join).
inline Matching side_optimal(const Profile& profile, const std::vector<Matching>& stable_set, Side side) {
  if (stable_set.empty()) throw Error(ErrorCode::Precondition, "empty stable set");
  Matching best = stable_set.front();
  for (std::size_t i = 1; i < stable_set.size(); ++i) best = lattice_join(profile, best, stable_set[i], side);
  return best;
}

inline std::set<AgentId> matched_agent_set(const Profile& profile, const Matching& mu) {
  detail::require_compatible(profile, mu);
  std::set<AgentId> out;
  const Market& mk = profile.market();
  for (int i = 0; i < mk.num_agents(); ++i)
    if (!mu.partner(mk.agent_at(i)).is_self()) out.insert(mk.agent_at(i));
  return out;
}

}  // namespace mm
