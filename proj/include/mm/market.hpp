#pragma once

// Core value types of a one-to-one (marriage) market: agents, preferences,
// profiles and matchings.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mm {

enum class ErrorCode {
  InvalidPartner,
  InvalidInput,
  UnsupportedRestriction,
  Capacity,
  Precondition,
  NotApplicable,
  ConversionFailure,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidPartner: return "invalid-partner";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::UnsupportedRestriction: return "unsupported-restriction";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::NotApplicable: return "not-applicable";
    case ErrorCode::ConversionFailure: return "conversion-failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Side : std::uint8_t { Man, Woman };

constexpr Side opposite(Side s) { return s == Side::Man ? Side::Woman : Side::Man; }

struct AgentId {
  Side side = Side::Man;
  int index = 0;

  static constexpr AgentId man(int i) { return {Side::Man, i}; }
  static constexpr AgentId woman(int i) { return {Side::Woman, i}; }

  friend constexpr auto operator<=>(const AgentId&, const AgentId&) = default;
};

/// External name, 1-based: m1, m2, ..., w1, w2, ...
inline std::string name_of(AgentId a) {
  return (a.side == Side::Man ? "m" : "w") + std::to_string(a.index + 1);
}

/// A potential partner: an agent of the opposite side, or the outside option.
class Partner {
 public:
  constexpr Partner() = default;
  constexpr Partner(AgentId a) : self_(false), agent_(a) {}  // NOLINT: implicit by design of the model
  static constexpr Partner self() { return Partner(); }

  constexpr bool is_self() const { return self_; }
  constexpr AgentId agent() const { return agent_; }

  friend constexpr bool operator==(const Partner& a, const Partner& b) {
    return a.self_ == b.self_ && (a.self_ || a.agent_ == b.agent_);
  }
  // Agents ascending, Self last.
  friend constexpr std::strong_ordering operator<=>(const Partner& a, const Partner& b) {
    if (a.self_ != b.self_) return a.self_ ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.self_) return std::strong_ordering::equal;
    return a.agent_ <=> b.agent_;
  }

 private:
  bool self_ = true;
  AgentId agent_{};
};

inline std::string name_of(Partner p) { return p.is_self() ? "self" : name_of(p.agent()); }

struct Market {
  int num_men = 1;
  int num_women = 1;

  Market() = default;
  Market(int men, int women) : num_men(men), num_women(women) {
    if (men < 1 || women < 1) throw Error(ErrorCode::InvalidInput, "market sides must be non-empty");
  }

  int size(Side s) const { return s == Side::Man ? num_men : num_women; }
  int num_agents() const { return num_men + num_women; }
  bool contains(AgentId a) const { return a.index >= 0 && a.index < size(a.side); }

  /// Position of an agent in profile order: men first, then women.
  int flat_index(AgentId a) const { return a.side == Side::Man ? a.index : num_men + a.index; }
  AgentId agent_at(int flat) const {
    return flat < num_men ? AgentId::man(flat) : AgentId::woman(flat - num_men);
  }

  friend bool operator==(const Market&, const Market&) = default;
};

/// A strict order over the opposite side plus Self, best first.
class Preference {
 public:
  Preference() = default;

  Preference(AgentId owner, std::vector<Partner> order) : owner_(owner), order_(std::move(order)) {
    const int n = static_cast<int>(order_.size()) - 1;
    if (n < 0) throw Error(ErrorCode::InvalidInput, "empty preference for " + name_of(owner_));
    rank_.assign(order_.size(), 0);
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
      const Partner p = order_[pos];
      if (!p.is_self() && (p.agent().side == owner_.side || p.agent().index < 0 || p.agent().index >= n))
        throw Error(ErrorCode::InvalidPartner, name_of(p) + " cannot appear in the list of " + name_of(owner_));
      int& r = rank_[slot(p)];
      if (r != 0) throw Error(ErrorCode::InvalidInput, "duplicate " + name_of(p) + " in preference of " + name_of(owner_));
      r = static_cast<int>(pos) + 1;
    }
  }

  AgentId owner() const { return owner_; }
  const std::vector<Partner>& order() const { return order_; }
  /// |X_owner|, the size of the opposite side.
  int num_options() const { return static_cast<int>(order_.size()) - 1; }

  bool is_valid_partner(Partner p) const {
    return p.is_self() || (p.agent().side != owner_.side && p.agent().index >= 0 && p.agent().index < num_options());
  }

  /// 1-based rank; Self has a rank too.
  int rank(Partner p) const {
    if (!is_valid_partner(p))
      throw Error(ErrorCode::InvalidPartner, name_of(p) + " is not a partner option of " + name_of(owner_));
    return rank_[slot(p)];
  }

  bool prefers(Partner a, Partner b) const { return rank(a) < rank(b); }
  bool weakly_prefers(Partner a, Partner b) const { return rank(a) <= rank(b); }
  bool is_acceptable(Partner p) const { return rank(p) <= rank(Partner::self()); }

  Partner at_rank(int r) const { return order_.at(static_cast<std::size_t>(r - 1)); }

  friend bool operator==(const Preference& a, const Preference& b) {
    return a.owner_ == b.owner_ && a.order_ == b.order_;
  }
  friend auto operator<=>(const Preference& a, const Preference& b) {
    if (auto c = a.owner_ <=> b.owner_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.order_.begin(), a.order_.end(), b.order_.begin(),
                                                  b.order_.end());
  }

 private:
  // Opposite-side agents by index, Self at the end.
  int slot(Partner p) const { return p.is_self() ? num_options() : p.agent().index; }

  AgentId owner_{};
  std::vector<Partner> order_;
  std::vector<int> rank_;
};

inline int rank(const Preference& pref, Partner p) { return pref.rank(p); }
inline bool prefers(const Preference& pref, Partner a, Partner b) { return pref.prefers(a, b); }
inline bool is_acceptable(const Preference& pref, Partner p) { return pref.is_acceptable(p); }

inline std::string to_string(const Preference& pref) {
  std::string s = "(";
  for (std::size_t i = 0; i < pref.order().size(); ++i) {
    if (i) s += ", ";
    s += name_of(pref.order()[i]);
  }
  return s + ")";
}

/// One preference per agent, men first then women.
class Profile {
 public:
  Profile() = default;

  Profile(Market market, std::vector<Preference> prefs) : market_(market), prefs_(std::move(prefs)) {
    if (static_cast<int>(prefs_.size()) != market_.num_agents())
      throw Error(ErrorCode::InvalidInput, "profile needs exactly " + std::to_string(market_.num_agents()) +
                                               " preferences, got " + std::to_string(prefs_.size()));
    for (int i = 0; i < market_.num_agents(); ++i) {
      const AgentId a = market_.agent_at(i);
      const Preference& p = prefs_[static_cast<std::size_t>(i)];
      if (p.owner() != a)
        throw Error(ErrorCode::InvalidInput, "preference at position of " + name_of(a) + " belongs to " +
                                                 name_of(p.owner()));
      if (p.num_options() != market_.size(opposite(a.side)))
        throw Error(ErrorCode::InvalidInput, "preference of " + name_of(a) + " does not cover the opposite side");
    }
  }

  const Market& market() const { return market_; }
  const std::vector<Preference>& prefs() const { return prefs_; }
  const Preference& of(AgentId a) const { return prefs_.at(static_cast<std::size_t>(market_.flat_index(a))); }

  /// Copy of this profile with one agent's preference replaced.
  Profile with(const Preference& p) const {
    if (!market_.contains(p.owner()) || p.num_options() != market_.size(opposite(p.owner().side)))
      throw Error(ErrorCode::InvalidInput, "replacement preference does not fit the market");
    Profile out = *this;
    out.prefs_[static_cast<std::size_t>(market_.flat_index(p.owner()))] = p;
    return out;
  }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  Market market_{};
  std::vector<Preference> prefs_;
};

/// Partner map. Any map is representable; validate_matching reports
/// which of the formal conditions a given map breaks.
class Matching {
 public:
  Matching() = default;
  explicit Matching(Market market)
      : market_(market), partner_(static_cast<std::size_t>(market.num_agents()), Partner::self()) {}

  const Market& market() const { return market_; }
  Partner partner(AgentId a) const { return partner_.at(static_cast<std::size_t>(market_.flat_index(a))); }
  Partner operator[](AgentId a) const { return partner(a); }

  /// Sets one entry only; no symmetry maintained.
  void set_raw(AgentId a, Partner p) { partner_.at(static_cast<std::size_t>(market_.flat_index(a))) = p; }

  /// Marries m and w (both entries), or sends `a` to Self.
  void match(AgentId m, AgentId w) {
    set_raw(m, w);
    set_raw(w, m);
  }
  void unmatch(AgentId a) { set_raw(a, Partner::self()); }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching& a, const Matching& b) {
    return std::lexicographical_compare_three_way(a.partner_.begin(), a.partner_.end(), b.partner_.begin(),
                                                  b.partner_.end());
  }

 private:
  Market market_{};
  std::vector<Partner> partner_;
};

/// Builds a matching from man/woman index pairs; everyone else gets Self.
inline Matching make_matching(Market market, std::initializer_list<std::pair<int, int>> pairs) {
  Matching mu(market);
  for (auto [m, w] : pairs) mu.match(AgentId::man(m), AgentId::woman(w));
  return mu;
}

inline std::string to_string(const Matching& mu) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < mu.market().num_men; ++i) {
    if (!first) s += ", ";
    first = false;
    s += name_of(AgentId::man(i)) + "-" + name_of(mu.partner(AgentId::man(i)));
  }
  for (int j = 0; j < mu.market().num_women; ++j) {
    const AgentId w = AgentId::woman(j);
    if (mu.partner(w).is_self()) s += ", " + name_of(w) + "-self";
  }
  return s + "}";
}

/// Empty iff the map is an involution respecting sides.
inline std::vector<std::string> validate_matching(const Matching& mu) {
  std::vector<std::string> out;
  const Market& mk = mu.market();
  for (int i = 0; i < mk.num_agents(); ++i) {
    const AgentId a = mk.agent_at(i);
    const Partner p = mu.partner(a);
    if (p.is_self()) continue;
    const AgentId b = p.agent();
    if (b.side == a.side || !mk.contains(b)) {
      out.push_back("side: " + name_of(a) + " is assigned " + name_of(b));
      continue;
    }
    const Partner back = mu.partner(b);
    if (back != Partner(a))
      out.push_back("involution: " + name_of(a) + " -> " + name_of(b) + " but " + name_of(b) + " -> " +
                    name_of(back));
  }
  return out;
}

}  // namespace mm
