#pragma once

// Misreport families: boost misrepresentations, truncation strategies and the
// unrestricted misreport space.

#include <algorithm>
#include <vector>

#include "mm/enumerate.hpp"
#include "mm/market.hpp"

namespace mm {

enum class MisrepKind { BoostMisrepresentation, TruncationStrategy, Arbitrary };

/// Every partner ranked above `pivot` in `candidate` keeps its true rank.
inline bool preserves_prefix_above(const Preference& truth, Partner pivot, const Preference& candidate) {
  if (truth.owner() != candidate.owner() || truth.num_options() != candidate.num_options())
    throw Error(ErrorCode::InvalidInput, "candidate is not a preference of the same agent");
  const int pivot_rank = candidate.rank(pivot);
  for (int r = 1; r < pivot_rank; ++r)
    if (truth.rank(candidate.at_rank(r)) != r) return false;
  return true;
}

/// Predicate form of a boost misrepresentation for the given assignment.
inline bool is_boost_misrepresentation(const Preference& truth, Partner assignment, const Preference& candidate) {
  return preserves_prefix_above(truth, assignment, candidate);
}

/// Predicate form of a truncation strategy: Self raised, order above it kept.
inline bool is_truncation_strategy(const Preference& truth, const Preference& candidate) {
  return preserves_prefix_above(truth, Partner::self(), candidate);
}

namespace detail {

// Pivot placed at every rank r <= its true rank, true top-(r-1) kept, the rest
// in every order. Results are sorted by the placement rank, then tail order.
inline std::vector<Preference> raise_with_prefix(const Preference& truth, Partner pivot, bool include_identity) {
  if (!truth.is_valid_partner(pivot))
    throw Error(ErrorCode::InvalidInput, name_of(pivot) + " is not in the list of " + name_of(truth.owner()));
  const int true_rank = truth.rank(pivot);
  const auto& order = truth.order();
  std::vector<Preference> out;
  for (int r = 1; r <= true_rank; ++r) {
    std::vector<Partner> head(order.begin(), order.begin() + (r - 1));
    head.push_back(pivot);
    std::vector<Partner> tail;
    for (auto it = order.begin() + (r - 1); it != order.end(); ++it)
      if (*it != pivot) tail.push_back(*it);
    std::sort(tail.begin(), tail.end());
    do {
      std::vector<Partner> full = head;
      full.insert(full.end(), tail.begin(), tail.end());
      Preference p(truth.owner(), std::move(full));
      if (include_identity || !(p == truth)) out.push_back(std::move(p));
    } while (std::next_permutation(tail.begin(), tail.end()));
  }
  return out;
}

}  // namespace detail

inline std::vector<Preference> boost_misrepresentations(const Preference& truth, Partner assignment,
                                                        bool include_identity = true) {
  return detail::raise_with_prefix(truth, assignment, include_identity);
}

inline std::vector<Preference> truncation_strategies(const Preference& truth, bool include_identity = true) {
  return detail::raise_with_prefix(truth, Partner::self(), include_identity);
}

/// Every other preference of the owner's type space, in enumeration order.
inline std::vector<Preference> all_misrepresentations(const Preference& truth) {
  std::vector<Partner> order = truth.order();
  std::sort(order.begin(), order.end());
  std::vector<Preference> out;
  do {
    if (order != truth.order()) out.emplace_back(truth.owner(), order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace mm
