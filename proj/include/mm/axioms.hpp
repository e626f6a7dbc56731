#pragma once

// Axiom checkers. Each violation is materialised as a Witness that carries
// everything needed to replay it.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mm/market.hpp"
#include "mm/mechanisms.hpp"
#include "mm/stability.hpp"
#include "mm/strategy_space.hpp"

namespace mm {

enum class Axiom : std::uint8_t {
  StrategyProofness,
  BoostInvariance,
  TruncationInvariance,
  Stability,
  IndividualRationality,
};

inline constexpr Axiom kAllAxioms[] = {Axiom::StrategyProofness, Axiom::BoostInvariance,
                                       Axiom::TruncationInvariance, Axiom::Stability,
                                       Axiom::IndividualRationality};

/// CLI short name: sp, boost, trunc, stability, ir.
inline std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::StrategyProofness: return "sp";
    case Axiom::BoostInvariance: return "boost";
    case Axiom::TruncationInvariance: return "trunc";
    case Axiom::Stability: return "stability";
    case Axiom::IndividualRationality: return "ir";
  }
  return "?";
}

inline Axiom parse_axiom(const std::string& s) {
  for (Axiom a : kAllAxioms)
    if (to_string(a) == s) return a;
  throw Error(ErrorCode::InvalidInput, "unknown axiom '" + s + "'");
}

inline bool is_deviation_axiom(Axiom a) {
  return a == Axiom::StrategyProofness || a == Axiom::BoostInvariance || a == Axiom::TruncationInvariance;
}

struct Witness {
  Axiom axiom = Axiom::StrategyProofness;
  MechanismId mechanism;
  Profile profile;
  std::optional<AgentId> agent;
  std::optional<Preference> misreport;
  Matching truthful_outcome;
  std::optional<Matching> deviant_outcome;
  std::optional<BlockReport> block_report;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Re-runs the mechanism on the stored inputs and re-evaluates the violation.
inline bool validate_witness(const Witness& w) {
  try {
    if (!(run_mechanism(w.mechanism, w.profile) == w.truthful_outcome)) return false;
    if (is_deviation_axiom(w.axiom)) {
      if (!w.agent || !w.misreport || !w.deviant_outcome) return false;
      const AgentId i = *w.agent;
      const Preference& truth = w.profile.of(i);
      if (w.misreport->owner() != i || *w.misreport == truth) return false;
      if (!(run_mechanism(w.mechanism, w.profile.with(*w.misreport)) == *w.deviant_outcome)) return false;
      const Partner honest = w.truthful_outcome.partner(i);
      const Partner deviant = w.deviant_outcome->partner(i);
      switch (w.axiom) {
        case Axiom::StrategyProofness:
          return truth.prefers(deviant, honest);
        case Axiom::BoostInvariance:
          return is_boost_misrepresentation(truth, honest, *w.misreport) && deviant != honest;
        case Axiom::TruncationInvariance:
          return is_truncation_strategy(truth, *w.misreport) && deviant != honest;
        default:
          return false;
      }
    }
    if (!w.block_report || w.agent || w.misreport || w.deviant_outcome) return false;
    const BlockReport rep = mm::block_report(w.profile, w.truthful_outcome);
    if (!(rep == *w.block_report)) return false;
    return w.axiom == Axiom::Stability ? !rep.empty() : !rep.blocking_individuals.empty();
  } catch (const Error&) {
    return false;
  }
}

/// Misreports to try for one agent, given its true preference and its
/// assignment at the truthful profile.
using MisreportGenerator = std::function<std::vector<Preference>(const Preference& truth, Partner assignment)>;

/// Emits a witness for every misreport whose outcome for the deviating agent
/// differs from the truthful one.
inline std::vector<Witness> check_invariance_with(MechanismId mech, const Profile& profile, Axiom axiom,
                                                  const MisreportGenerator& generate) {
  std::vector<Witness> out;
  const Matching honest = run_mechanism(mech, profile);
  const Market& mk = profile.market();
  for (int k = 0; k < mk.num_agents(); ++k) {
    const AgentId i = mk.agent_at(k);
    const Preference& truth = profile.of(i);
    const Partner assignment = honest.partner(i);
    for (Preference& lie : generate(truth, assignment)) {
      Matching dev = run_mechanism(mech, profile.with(lie));
      if (dev.partner(i) == assignment) continue;
      out.push_back(Witness{axiom, mech, profile, i, std::move(lie), honest, std::move(dev), std::nullopt});
    }
  }
  return out;
}

/// Profitable unilateral deviations, others held at truth.
inline std::vector<Witness> check_strategy_proofness(MechanismId mech, const Profile& profile) {
  std::vector<Witness> out;
  const Matching honest = run_mechanism(mech, profile);
  const Market& mk = profile.market();
  for (int k = 0; k < mk.num_agents(); ++k) {
    const AgentId i = mk.agent_at(k);
    const Preference& truth = profile.of(i);
    const Partner assignment = honest.partner(i);
    if (truth.rank(assignment) == 1) continue;  // nothing to gain
    for (Preference& lie : all_misrepresentations(truth)) {
      Matching dev = run_mechanism(mech, profile.with(lie));
      if (!truth.prefers(dev.partner(i), assignment)) continue;
      out.push_back(Witness{Axiom::StrategyProofness, mech, profile, i, std::move(lie), honest, std::move(dev),
                            std::nullopt});
    }
  }
  return out;
}

inline std::vector<Witness> check_boost_invariance(MechanismId mech, const Profile& profile) {
  return check_invariance_with(mech, profile, Axiom::BoostInvariance,
                               [](const Preference& truth, Partner a) { return boost_misrepresentations(truth, a); });
}

inline std::vector<Witness> check_truncation_invariance(MechanismId mech, const Profile& profile) {
  return check_invariance_with(mech, profile, Axiom::TruncationInvariance,
                               [](const Preference& truth, Partner) { return truncation_strategies(truth); });
}

/// Stability and individual-rationality witnesses for the mechanism's output.
inline std::vector<Witness> audit_mechanism(MechanismId mech, const Profile& profile,
                                            bool stability = true, bool individual_rationality = true) {
  std::vector<Witness> out;
  Matching honest = run_mechanism(mech, profile);
  const BlockReport rep = block_report(profile, honest);
  if (stability && !rep.empty())
    out.push_back(Witness{Axiom::Stability, mech, profile, std::nullopt, std::nullopt, honest, std::nullopt, rep});
  if (individual_rationality && !rep.blocking_individuals.empty())
    out.push_back(Witness{Axiom::IndividualRationality, mech, profile, std::nullopt, std::nullopt, honest,
                          std::nullopt, rep});
  return out;
}

inline std::vector<Witness> check_axiom(Axiom axiom, MechanismId mech, const Profile& profile) {
  switch (axiom) {
    case Axiom::StrategyProofness: return check_strategy_proofness(mech, profile);
    case Axiom::BoostInvariance: return check_boost_invariance(mech, profile);
    case Axiom::TruncationInvariance: return check_truncation_invariance(mech, profile);
    case Axiom::Stability: return audit_mechanism(mech, profile, true, false);
    case Axiom::IndividualRationality: return audit_mechanism(mech, profile, false, true);
  }
  return {};
}

/// Which way a boost witness turns into a profitable deviation.
enum class ConversionBranch {
  /// The boost misreport itself is profitable at the original profile.
  ProfitableMisreport,
  /// With the misreport as the true type, reporting the original type is profitable.
  ProfitableReversal,
};

inline const char* to_string(ConversionBranch b) {
  return b == ConversionBranch::ProfitableMisreport ? "profitable-misreport" : "profitable-reversal";
}

struct SpConversion {
  Witness witness;
  ConversionBranch branch;
};

/// Decides how a boost-invariance violation by `agent` reporting `lie` at
/// `profile` becomes a profitable deviation, for any mechanism callable
/// (Profile -> Matching). Empty when neither direction pays off.
template <class Mechanism>
std::optional<ConversionBranch> conversion_branch(const Mechanism& mechanism, const Profile& profile, AgentId agent,
                                                  const Preference& lie) {
  const Preference& truth = profile.of(agent);
  const Partner honest = mechanism(profile).partner(agent);
  const Partner deviant = mechanism(profile.with(lie)).partner(agent);
  if (truth.prefers(deviant, honest)) return ConversionBranch::ProfitableMisreport;
  if (lie.prefers(honest, deviant)) return ConversionBranch::ProfitableReversal;
  return std::nullopt;
}

/// Turns a boost-invariance violation into a strategy-proofness violation of
/// the same mechanism.
inline SpConversion convert_boost_witness_to_sp_witness(const Witness& w) {
  if (w.axiom != Axiom::BoostInvariance || !validate_witness(w))
    throw Error(ErrorCode::Precondition, "conversion needs a self-valid boost-invariance witness");
  const AgentId i = *w.agent;
  const Preference& lie = *w.misreport;
  const auto branch = conversion_branch([&](const Profile& p) { return run_mechanism(w.mechanism, p); }, w.profile, i, lie);
  if (!branch)
    throw Error(ErrorCode::ConversionFailure, "boost witness for " + name_of(i) + " converts in neither direction");

  // Either the lie pays off against the true type, or, with the lie taken as
  // the true type, reporting the original type pays off.
  Witness sp = *branch == ConversionBranch::ProfitableMisreport
                   ? Witness{Axiom::StrategyProofness, w.mechanism, w.profile, i, lie, w.truthful_outcome,
                             w.deviant_outcome, std::nullopt}
                   : Witness{Axiom::StrategyProofness, w.mechanism, w.profile.with(lie), i, w.profile.of(i),
                             *w.deviant_outcome, w.truthful_outcome, std::nullopt};
  if (!validate_witness(sp))
    throw Error(ErrorCode::ConversionFailure, "converted witness for " + name_of(i) + " does not re-validate");
  return {std::move(sp), *branch};
}

}  // namespace mm
