#pragma once

// Deterministic enumeration of preference types and profile domains.
//
// Preferences are enumerated lexicographically over the partner indexing
// "opposite agents by ascending index, then Self". Profiles are the Cartesian
// product over agents in profile order (men, then women), with the first agent
// as the most significant digit. Both spaces are random-access so a sweep can
// split them into contiguous chunks.

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mm/market.hpp"

namespace mm {

struct DomainRestriction {
  enum class Kind { Full, AllAcceptable, Sampled };

  Kind kind = Kind::Full;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;

  static DomainRestriction full() { return {Kind::Full, 0, 0}; }
  static DomainRestriction all_acceptable() { return {Kind::AllAcceptable, 0, 0}; }
  static DomainRestriction sampled(std::uint64_t count, std::uint64_t seed) { return {Kind::Sampled, count, seed}; }

  friend bool operator==(const DomainRestriction&, const DomainRestriction&) = default;
};

inline const char* to_string(DomainRestriction::Kind k) {
  switch (k) {
    case DomainRestriction::Kind::Full: return "full";
    case DomainRestriction::Kind::AllAcceptable: return "all-acceptable";
    case DomainRestriction::Kind::Sampled: return "sampled";
  }
  return "?";
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw Error(ErrorCode::Capacity, "domain size overflows 64 bits");
  return a * b;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f = checked_mul(f, static_cast<std::uint64_t>(i));
  return f;
}

inline Partner slot_partner(AgentId owner, int slot, int n) {
  return slot == n ? Partner::self() : Partner(AgentId{opposite(owner.side), slot});
}

// k-th permutation (lexicographic) of the given ascending slots.
inline std::vector<int> nth_permutation(std::vector<int> slots, std::uint64_t k) {
  std::vector<int> out;
  out.reserve(slots.size());
  while (!slots.empty()) {
    const std::uint64_t block = factorial(static_cast<int>(slots.size()) - 1);
    const auto pick = static_cast<std::size_t>(k / block);
    k %= block;
    out.push_back(slots[pick]);
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace detail

/// The type space of a single agent under a Full or AllAcceptable restriction.
class PreferenceSpace {
 public:
  PreferenceSpace(const Market& market, AgentId owner, const DomainRestriction& r) : owner_(owner) {
    if (!market.contains(owner)) throw Error(ErrorCode::InvalidInput, "unknown agent " + name_of(owner));
    if (r.kind == DomainRestriction::Kind::Sampled)
      throw Error(ErrorCode::UnsupportedRestriction, "sampling is defined over profiles, not single preferences");
    n_ = market.size(opposite(owner.side));
    self_last_ = r.kind == DomainRestriction::Kind::AllAcceptable;
    size_ = detail::factorial(self_last_ ? n_ : n_ + 1);
  }

  std::uint64_t size() const { return size_; }
  AgentId owner() const { return owner_; }

  Preference at(std::uint64_t k) const {
    if (k >= size_) throw Error(ErrorCode::InvalidInput, "preference index out of range");
    std::vector<int> slots(static_cast<std::size_t>(self_last_ ? n_ : n_ + 1));
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
    std::vector<int> perm = detail::nth_permutation(std::move(slots), k);
    if (self_last_) perm.push_back(n_);
    std::vector<Partner> order;
    order.reserve(perm.size());
    for (int s : perm) order.push_back(detail::slot_partner(owner_, s, n_));
    return Preference(owner_, std::move(order));
  }

  std::vector<Preference> all() const {
    std::vector<Preference> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (std::uint64_t k = 0; k < size_; ++k) out.push_back(at(k));
    return out;
  }

 private:
  AgentId owner_;
  int n_ = 0;
  bool self_last_ = false;
  std::uint64_t size_ = 0;
};

inline std::vector<Preference> enumerate_preferences(const Market& market, AgentId owner,
                                                     const DomainRestriction& r) {
  return PreferenceSpace(market, owner, r).all();
}

/// Random-access profile domain. For Sampled, profile k is drawn from the Full
/// domain by an RNG seeded with (seed, k), so any chunk can be regenerated
/// independently of the others.
class ProfileSpace {
 public:
  ProfileSpace(const Market& market, const DomainRestriction& r) : market_(market), restriction_(r) {
    const DomainRestriction base =
        r.kind == DomainRestriction::Kind::Sampled ? DomainRestriction::full() : r;
    // Per-agent types are materialised once; the product is decoded on demand.
    types_.reserve(static_cast<std::size_t>(market.num_agents()));
    for (int i = 0; i < market.num_agents(); ++i) {
      const PreferenceSpace space(market, market.agent_at(i), base);
      if (space.size() > kMaxTypesPerAgent)
        throw Error(ErrorCode::Capacity, "type space of " + name_of(market.agent_at(i)) + " too large to tabulate");
      types_.push_back(space.all());
    }
    radix_.assign(types_.size(), 0);
    for (std::size_t i = 0; i < types_.size(); ++i) radix_[i] = types_[i].size();
    if (r.kind == DomainRestriction::Kind::Sampled) {
      size_ = r.sample_count;
    } else {
      size_ = 1;
      for (auto d : radix_) size_ = detail::checked_mul(size_, d);
    }
  }

  const Market& market() const { return market_; }
  const DomainRestriction& restriction() const { return restriction_; }
  std::uint64_t size() const { return size_; }

  /// Per-agent type indices of profile k.
  std::vector<std::uint64_t> digits(std::uint64_t k) const {
    if (k >= size_) throw Error(ErrorCode::InvalidInput, "profile index out of range");
    std::vector<std::uint64_t> d(radix_.size());
    if (restriction_.kind == DomainRestriction::Kind::Sampled) {
      std::seed_seq seq{static_cast<std::uint32_t>(restriction_.seed), static_cast<std::uint32_t>(restriction_.seed >> 32),
                        static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
      std::mt19937_64 rng(seq);
      for (std::size_t i = 0; i < d.size(); ++i) {
        std::uniform_int_distribution<std::uint64_t> pick(0, radix_[i] - 1);
        d[i] = pick(rng);
      }
      return d;
    }
    for (std::size_t i = d.size(); i-- > 0;) {
      d[i] = k % radix_[i];
      k /= radix_[i];
    }
    return d;
  }

  Profile at(std::uint64_t k) const {
    const auto d = digits(k);
    std::vector<Preference> prefs;
    prefs.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) prefs.push_back(types_[i][static_cast<std::size_t>(d[i])]);
    return Profile(market_, std::move(prefs));
  }

  /// [begin, end) ranges of at most `chunk` profiles covering the domain.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks(std::uint64_t chunk) const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    if (chunk == 0) chunk = 1;
    for (std::uint64_t b = 0; b < size_; b += chunk) out.emplace_back(b, std::min(size_, b + chunk));
    return out;
  }

 private:
  static constexpr std::uint64_t kMaxTypesPerAgent = 1'000'000;

  Market market_;
  DomainRestriction restriction_;
  std::vector<std::vector<Preference>> types_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t size_ = 0;
};

inline std::vector<Profile> enumerate_profiles(const Market& market, const DomainRestriction& r) {
  const ProfileSpace space(market, r);
  std::vector<Profile> out;
  out.reserve(static_cast<std::size_t>(space.size()));
  for (std::uint64_t k = 0; k < space.size(); ++k) out.push_back(space.at(k));
  return out;
}

}  // namespace mm
