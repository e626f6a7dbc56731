#pragma once

// Deferred acceptance and immediate acceptance, either side proposing.

#include <algorithm>
#include <string>
#include <vector>

#include "mm/market.hpp"

namespace mm {

enum class Algorithm : std::uint8_t { DeferredAcceptance, ImmediateAcceptance };

struct MechanismId {
  Algorithm algorithm = Algorithm::DeferredAcceptance;
  Side proposing_side = Side::Man;

  static constexpr MechanismId man_da() { return {Algorithm::DeferredAcceptance, Side::Man}; }
  static constexpr MechanismId woman_da() { return {Algorithm::DeferredAcceptance, Side::Woman}; }
  static constexpr MechanismId man_ia() { return {Algorithm::ImmediateAcceptance, Side::Man}; }
  static constexpr MechanismId woman_ia() { return {Algorithm::ImmediateAcceptance, Side::Woman}; }

  friend constexpr bool operator==(const MechanismId&, const MechanismId&) = default;
};

inline constexpr MechanismId kAllMechanisms[] = {MechanismId::man_da(), MechanismId::woman_da(),
                                                 MechanismId::man_ia(), MechanismId::woman_ia()};

/// CLI short name: mda, wda, mia, wia.
inline std::string to_string(MechanismId id) {
  std::string s = id.proposing_side == Side::Man ? "m" : "w";
  return s + (id.algorithm == Algorithm::DeferredAcceptance ? "da" : "ia");
}

inline MechanismId parse_mechanism(const std::string& s) {
  for (MechanismId id : kAllMechanisms)
    if (to_string(id) == s) return id;
  throw Error(ErrorCode::InvalidInput, "unknown mechanism '" + s + "'");
}

namespace detail {

inline void require_valid(const Profile& profile) {
  if (static_cast<int>(profile.prefs().size()) != profile.market().num_agents())
    throw Error(ErrorCode::InvalidInput, "profile does not cover the market");
}

inline AgentId member(Side s, int i) { return AgentId{s, i}; }

}  // namespace detail

/// Picks the smallest free proposer; the default schedule.
struct AscendingSchedule {
  std::size_t operator()(const std::vector<int>& free_proposers) const {
    return static_cast<std::size_t>(std::min_element(free_proposers.begin(), free_proposers.end()) -
                                    free_proposers.begin());
  }
};

/// Deferred acceptance with an explicit proposal schedule. `choose` receives the
/// current free proposers (with at least one list entry left) and returns the
/// position of the one who proposes next.
template <class Schedule>
Matching deferred_acceptance(const Profile& profile, Side side, Schedule&& choose) {
  detail::require_valid(profile);
  const Market& mk = profile.market();
  const Side recv = opposite(side);
  const int np = mk.size(side);
  const int nr = mk.size(recv);

  std::vector<int> next(static_cast<std::size_t>(np), 0);   // next list position to try
  std::vector<int> held(static_cast<std::size_t>(nr), -1);  // proposer index held by each receiver
  std::vector<int> free;
  for (int p = 0; p < np; ++p) free.push_back(p);

  while (!free.empty()) {
    const std::size_t pos = choose(std::as_const(free));
    const int p = free[pos];
    const Preference& pp = profile.of(detail::member(side, p));
    const Partner target = pp.order()[static_cast<std::size_t>(next[static_cast<std::size_t>(p)]++)];
    if (target.is_self()) {
      // Remaining entries are unacceptable: p stays single.
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(pos));
      continue;
    }
    const int r = target.agent().index;
    const Preference& rp = profile.of(target.agent());
    const Partner proposer = detail::member(side, p);
    if (!rp.is_acceptable(proposer)) continue;
    int& h = held[static_cast<std::size_t>(r)];
    if (h < 0) {
      h = p;
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(pos));
    } else if (rp.prefers(proposer, detail::member(side, h))) {
      free[pos] = h;
      h = p;
    }
  }

  Matching mu(mk);
  for (int r = 0; r < nr; ++r) {
    const int h = held[static_cast<std::size_t>(r)];
    if (h < 0) continue;
    const AgentId proposer = detail::member(side, h);
    const AgentId receiver = detail::member(recv, r);
    mu.match(side == Side::Man ? proposer : receiver, side == Side::Man ? receiver : proposer);
  }
  return mu;
}

inline Matching deferred_acceptance(const Profile& profile, Side side) {
  return deferred_acceptance(profile, side, AscendingSchedule{});
}

/// How an IA receiver treats proposers she ranks below Self.
enum class ReceiverRule {
  /// Accepts her favourite proposer of the round, acceptable or not.
  AnyProposer,
  /// Accepts only proposers ranked above Self.
  AcceptableOnly,
};

/// Immediate acceptance. In round k every remaining proposer looks at the k-th
/// entry of its list: Self ends its participation, an already removed receiver
/// is a wasted proposal, anything else is a proposal. Each remaining receiver
/// permanently accepts her best proposer of the round (subject to `rule`).
inline Matching immediate_acceptance(const Profile& profile, Side side,
                                     ReceiverRule rule = ReceiverRule::AnyProposer) {
  detail::require_valid(profile);
  const Market& mk = profile.market();
  const Side recv = opposite(side);
  const int np = mk.size(side);
  const int nr = mk.size(recv);

  std::vector<bool> proposer_done(static_cast<std::size_t>(np), false);
  std::vector<bool> receiver_done(static_cast<std::size_t>(nr), false);
  Matching mu(mk);
  const int rounds = nr + 1;

  for (int k = 0; k < rounds; ++k) {
    std::vector<std::vector<int>> proposals(static_cast<std::size_t>(nr));
    bool any_left = false;
    for (int p = 0; p < np; ++p) {
      if (proposer_done[static_cast<std::size_t>(p)]) continue;
      const Partner target = profile.of(detail::member(side, p)).order()[static_cast<std::size_t>(k)];
      if (target.is_self()) {
        proposer_done[static_cast<std::size_t>(p)] = true;
        continue;
      }
      any_left = true;
      if (receiver_done[static_cast<std::size_t>(target.agent().index)]) continue;
      proposals[static_cast<std::size_t>(target.agent().index)].push_back(p);
    }
    for (int r = 0; r < nr; ++r) {
      const auto& props = proposals[static_cast<std::size_t>(r)];
      if (props.empty()) continue;
      const AgentId receiver = detail::member(recv, r);
      const Preference& rp = profile.of(receiver);
      int best = -1;
      for (int p : props) {
        const Partner cand = detail::member(side, p);
        if (rule == ReceiverRule::AcceptableOnly && !rp.is_acceptable(cand)) continue;
        if (best < 0 || rp.prefers(cand, detail::member(side, best))) best = p;
      }
      if (best < 0) continue;
      const AgentId proposer = detail::member(side, best);
      mu.match(side == Side::Man ? proposer : receiver, side == Side::Man ? receiver : proposer);
      proposer_done[static_cast<std::size_t>(best)] = true;
      receiver_done[static_cast<std::size_t>(r)] = true;
    }
    if (!any_left) break;
  }
  return mu;
}

inline Matching run_mechanism(MechanismId id, const Profile& profile) {
  return id.algorithm == Algorithm::DeferredAcceptance ? deferred_acceptance(profile, id.proposing_side)
                                                       : immediate_acceptance(profile, id.proposing_side);
}

}  // namespace mm
