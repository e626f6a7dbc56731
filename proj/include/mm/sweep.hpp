#pragma once

// Parallel sweeps of profile domains through the axiom checkers.
//
// The domain is cut into contiguous chunks that workers claim in order. Each
// chunk's witnesses are kept separately and merged by chunk index, so reports
// do not depend on the worker count. Early exit stops claiming new chunks once
// a contiguous prefix of finished chunks holds enough witnesses; anything found
// beyond that prefix is discarded.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "mm/axioms.hpp"
#include "mm/enumerate.hpp"
#include "mm/replication.hpp"

namespace mm {

struct SweepMode {
  enum class Kind { FirstWitness, CountAll, CollectUpTo };
  Kind kind = Kind::CountAll;
  std::uint64_t limit = 0;  // CollectUpTo only

  static SweepMode first_witness() { return {Kind::FirstWitness, 1}; }
  static SweepMode count_all() { return {Kind::CountAll, 0}; }
  static SweepMode collect_up_to(std::uint64_t n) { return {Kind::CollectUpTo, n}; }

  friend bool operator==(const SweepMode&, const SweepMode&) = default;
};

/// Domains above this many profiles need `long_run`.
inline constexpr std::uint64_t kLongRunThreshold = 10'000'000;

struct SweepSpec {
  Market market;
  DomainRestriction restriction;
  MechanismId mechanism;
  std::vector<Axiom> axioms;
  SweepMode mode;
  std::optional<std::uint64_t> budget;
  bool long_run = false;
  unsigned workers = 1;
  std::uint64_t chunk_size = 256;
  /// CountAll keeps at most this many witnesses (counts stay exact).
  std::optional<std::uint64_t> max_stored;
};

struct SweptWitness {
  std::uint64_t profile_index = 0;
  Witness witness;
};

struct SweepReport {
  SweepSpec spec;
  std::uint64_t domain_size = 0;
  std::uint64_t profiles_examined = 0;
  std::vector<SweptWitness> witnesses;
  std::map<Axiom, std::uint64_t> counts;
  bool witnesses_truncated = false;
  double wall_seconds = 0.0;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [a, c] : counts) t += c;
    return t;
  }
};

inline void validate_spec(const SweepSpec& spec, std::uint64_t domain_size) {
  if (spec.axioms.empty()) throw Error(ErrorCode::InvalidInput, "sweep needs at least one axiom");
  if (spec.mode.kind == SweepMode::Kind::CollectUpTo && spec.mode.limit < 1)
    throw Error(ErrorCode::InvalidInput, "collect mode needs a limit of at least 1");
  if (spec.restriction.kind != DomainRestriction::Kind::Sampled) {
    if (spec.budget && *spec.budget > domain_size)
      throw Error(ErrorCode::Capacity, "budget exceeds the domain size " + std::to_string(domain_size));
  }
  const std::uint64_t planned = spec.budget ? std::min(*spec.budget, domain_size) : domain_size;
  if (planned > kLongRunThreshold && !spec.long_run)
    throw Error(ErrorCode::Capacity, "domain of " + std::to_string(planned) + " profiles needs the long-run flag");
}

namespace detail {

// Runs `work(index)` over [0, total) in chunks. `work` returns the number of
// hits for that index. Returns the per-chunk results and the number of chunks
// in the reported prefix.
template <class Result, class Work>
std::pair<std::vector<std::optional<Result>>, std::size_t> run_chunked(std::uint64_t total, std::uint64_t chunk_size,
                                                                      unsigned workers, std::uint64_t stop_after,
                                                                      Work&& work) {
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t nchunks = static_cast<std::size_t>((total + chunk_size - 1) / chunk_size);
  std::vector<std::optional<Result>> results(nchunks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> cutoff{nchunks};  // chunks at or beyond this are not needed
  std::mutex mu;
  std::size_t done_prefix = 0;
  std::uint64_t prefix_hits = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= nchunks || c >= cutoff.load()) return;
        const std::uint64_t b = c * chunk_size;
        const std::uint64_t e = std::min(total, b + chunk_size);
        Result r = work(b, e);
        std::lock_guard<std::mutex> lock(mu);
        results[c] = std::move(r);
        while (done_prefix < nchunks && results[done_prefix]) {
          prefix_hits += results[done_prefix]->hits();
          ++done_prefix;
          if (stop_after && prefix_hits >= stop_after) {
            cutoff.store(std::min(cutoff.load(), done_prefix));
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
      cutoff.store(0);
    }
  };

  workers = std::max(1u, workers);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return {std::move(results), std::min(cutoff.load(), nchunks)};
}

struct ChunkWitnesses {
  std::vector<SweptWitness> items;  // a prefix of the chunk's witnesses
  std::map<Axiom, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t hits() const { return total; }
};

}  // namespace detail

inline SweepReport sweep(const SweepSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const ProfileSpace space(spec.market, spec.restriction);
  validate_spec(spec, space.size());
  const std::uint64_t total = spec.budget ? std::min(*spec.budget, space.size()) : space.size();
  const std::uint64_t stop_after = spec.mode.kind == SweepMode::Kind::CountAll ? 0 : std::max<std::uint64_t>(1, spec.mode.limit);

  const bool count_all = spec.mode.kind == SweepMode::Kind::CountAll;
  const std::uint64_t keep = count_all ? spec.max_stored.value_or(std::numeric_limits<std::uint64_t>::max()) : stop_after;

  auto [results, prefix] = detail::run_chunked<detail::ChunkWitnesses>(
      total, spec.chunk_size, spec.workers, stop_after, [&](std::uint64_t b, std::uint64_t e) {
        detail::ChunkWitnesses out;
        for (std::uint64_t k = b; k < e; ++k) {
          const Profile p = space.at(k);
          for (Axiom a : spec.axioms)
            for (Witness& w : check_axiom(a, spec.mechanism, p)) {
              ++out.total;
              ++out.counts[a];
              if (out.items.size() < keep) out.items.push_back({k, std::move(w)});
            }
        }
        return out;
      });

  SweepReport rep;
  rep.spec = spec;
  rep.domain_size = space.size();
  for (Axiom a : spec.axioms) rep.counts[a] = 0;
  for (std::size_t c = 0; c < prefix; ++c) {
    detail::ChunkWitnesses& ch = *results[c];
    if (count_all)
      for (const auto& [a, n] : ch.counts) rep.counts[a] += n;
    for (SweptWitness& sw : ch.items) {
      if (rep.witnesses.size() >= keep) break;
      if (!count_all) rep.counts[sw.witness.axiom]++;
      rep.witnesses.push_back(std::move(sw));
    }
  }
  rep.witnesses_truncated = rep.witnesses.size() < rep.total();
  if (!count_all && rep.witnesses.size() >= stop_after)
    rep.profiles_examined = rep.witnesses.back().profile_index + 1;
  else
    rep.profiles_examined = std::min(total, static_cast<std::uint64_t>(prefix) * std::max<std::uint64_t>(1, spec.chunk_size));
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

struct CrossValidationReport {
  std::uint64_t boost_witnesses = 0;
  std::uint64_t converted = 0;
  std::uint64_t profitable_misreport = 0;
  std::uint64_t profitable_reversal = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty() && converted == boost_witnesses; }
  double success_rate() const {
    return boost_witnesses == 0 ? 1.0 : static_cast<double>(converted) / static_cast<double>(boost_witnesses);
  }
};

/// Converts every boost witness of the sweep into a strategy-proofness witness
/// and re-validates it.
namespace detail {

inline void convert_into(CrossValidationReport& out, std::uint64_t profile_index, const Witness& w) {
  ++out.boost_witnesses;
  try {
    SpConversion c = convert_boost_witness_to_sp_witness(w);
    if (!validate_witness(c.witness)) {
      out.failures.push_back("profile " + std::to_string(profile_index) + ": converted witness does not validate");
      return;
    }
    ++out.converted;
    ++(c.branch == ConversionBranch::ProfitableMisreport ? out.profitable_misreport : out.profitable_reversal);
  } catch (const Error& e) {
    out.failures.push_back("profile " + std::to_string(profile_index) + ": " + e.what());
  }
}

}  // namespace detail

/// Converts every stored boost witness of a report.
inline CrossValidationReport cross_validate(const SweepReport& rep) {
  CrossValidationReport out;
  for (const SweptWitness& sw : rep.witnesses)
    if (sw.witness.axiom == Axiom::BoostInvariance) detail::convert_into(out, sw.profile_index, sw.witness);
  return out;
}

/// Sweeps the spec's domain for boost-invariance witnesses and converts each
/// one as it is found, without storing them.
inline CrossValidationReport cross_validate(const SweepSpec& spec) {
  if (std::find(spec.axioms.begin(), spec.axioms.end(), Axiom::BoostInvariance) == spec.axioms.end())
    throw Error(ErrorCode::InvalidInput, "cross validation needs the boost-invariance axiom in the sweep");
  const ProfileSpace space(spec.market, spec.restriction);
  validate_spec(spec, space.size());
  const std::uint64_t total = spec.budget ? std::min(*spec.budget, space.size()) : space.size();
  struct Chunk {
    CrossValidationReport r;
    std::uint64_t hits() const { return 0; }
  };
  auto [results, prefix] =
      detail::run_chunked<Chunk>(total, spec.chunk_size, spec.workers, 0, [&](std::uint64_t b, std::uint64_t e) {
        Chunk out;
        for (std::uint64_t k = b; k < e; ++k)
          for (const Witness& w : check_boost_invariance(spec.mechanism, space.at(k))) detail::convert_into(out.r, k, w);
        return out;
      });
  CrossValidationReport out;
  for (std::size_t c = 0; c < prefix; ++c) {
    const CrossValidationReport& r = results[c]->r;
    out.boost_witnesses += r.boost_witnesses;
    out.converted += r.converted;
    out.profitable_misreport += r.profitable_misreport;
    out.profitable_reversal += r.profitable_reversal;
    out.failures.insert(out.failures.end(), r.failures.begin(), r.failures.end());
  }
  return out;
}

struct Step1SweepReport {
  std::uint64_t profiles_examined = 0;
  std::uint64_t women_checked = 0;
  std::uint64_t women_skipped = 0;  // single under woman-proposing DA
  std::map<std::string, std::uint64_t> failures_by_check;
  std::vector<std::pair<std::uint64_t, Step1Report>> first_failures;  // capped

  bool ok() const { return failures_by_check.empty(); }
};

/// verify_step1_identities for every woman matched under woman-proposing DA,
/// over a whole domain.
inline Step1SweepReport sweep_step1(const Market& market, const DomainRestriction& r, unsigned workers,
                                    std::optional<std::uint64_t> budget = std::nullopt, bool long_run = false) {
  const ProfileSpace space(market, r);
  const std::uint64_t total = budget ? std::min(*budget, space.size()) : space.size();
  if (total > kLongRunThreshold && !long_run)
    throw Error(ErrorCode::Capacity, "domain of " + std::to_string(total) + " profiles needs the long-run flag");

  struct Chunk {
    std::uint64_t checked = 0, skipped = 0;
    std::map<std::string, std::uint64_t> failures;
    std::vector<std::pair<std::uint64_t, Step1Report>> examples;
    std::uint64_t hits() const { return 0; }
  };
  auto [results, prefix] = detail::run_chunked<Chunk>(total, 256, workers, 0, [&](std::uint64_t b, std::uint64_t e) {
    Chunk out;
    for (std::uint64_t k = b; k < e; ++k) {
      const Profile p = space.at(k);
      const Matching wda = deferred_acceptance(p, Side::Woman);
      for (int j = 0; j < market.num_women; ++j) {
        const AgentId w = AgentId::woman(j);
        if (wda.partner(w).is_self()) {
          ++out.skipped;
          continue;
        }
        ++out.checked;
        Step1Report rep = verify_step1_identities(p, w);
        if (rep.passed()) continue;
        for (const Check& c : rep.checks)
          if (!c.passed) out.failures[c.name]++;
        if (out.examples.size() < 5) out.examples.emplace_back(k, std::move(rep));
      }
    }
    return out;
  });

  Step1SweepReport rep;
  rep.profiles_examined = total;
  for (std::size_t c = 0; c < prefix; ++c) {
    Chunk& ch = *results[c];
    rep.women_checked += ch.checked;
    rep.women_skipped += ch.skipped;
    for (auto& [k, v] : ch.failures) rep.failures_by_check[k] += v;
    for (auto& ex : ch.examples)
      if (rep.first_failures.size() < 5) rep.first_failures.push_back(std::move(ex));
  }
  return rep;
}

}  // namespace mm
