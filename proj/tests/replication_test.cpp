#include <gtest/gtest.h>

#include "mm/mm.hpp"

using namespace mm;

namespace {

const AgentId m1 = AgentId::man(0), m2 = AgentId::man(1), m3 = AgentId::man(2);
const AgentId w1 = AgentId::woman(0), w2 = AgentId::woman(1), w3 = AgentId::woman(2);
const Partner self = Partner::self();

}  // namespace

TEST(NamedProfiles, Tables) {
  const Profile th = named_profile(NamedMarket::Theorem1Step2);
  EXPECT_EQ(th.of(m1), Preference(m1, {w2, w3, w1, self}));
  EXPECT_EQ(th.of(m3), Preference(m3, {w1, w3, w2, self}));
  EXPECT_EQ(th.of(w3), Preference(w3, {m2, m1, m3, self}));
  const Profile ex = named_profile(NamedMarket::Example1);
  EXPECT_EQ(ex.of(m1), Preference(m1, {w2, w1, self}));
  EXPECT_EQ(ex.of(w2), Preference(w2, {m2, m1, self}));
}

TEST(PPrime, TruncatesBelowWomanOptimalPartner) {
  const Profile th = named_profile(NamedMarket::Theorem1Step2);
  EXPECT_EQ(construct_p_prime(th, w3), Preference(w3, {m2, m1, self, m3}));
  EXPECT_EQ(construct_p_prime(th, w1), Preference(w1, {m1, m2, self, m3}));
  EXPECT_EQ(construct_p_prime(th, w2), Preference(w2, {m2, m3, self, m1}));
  for (const AgentId w : {w1, w2, w3}) EXPECT_TRUE(is_truncation_strategy(th.of(w), construct_p_prime(th, w)));
}

TEST(PPrime, Errors) {
  const Profile th = named_profile(NamedMarket::Theorem1Step2);
  EXPECT_THROW(construct_p_prime(th, m1), Error);
  // w1 finds nobody acceptable, so she is single under woman-proposing DA.
  const Profile lonely = th.with(Preference(w1, {self, m1, m2, m3}));
  try {
    construct_p_prime(lonely, w1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotApplicable);
  }
}

TEST(PDoublePrime, Construction) {
  const Profile th = named_profile(NamedMarket::Theorem1Step2);
  EXPECT_EQ(construct_p_double_prime(th, w1, m1), Preference(w1, {m1, self, m2, m3}));
  EXPECT_EQ(construct_p_double_prime(th, w1, self), th.of(w1));
  EXPECT_THROW(construct_p_double_prime(th, w1, w2), Error);
}

TEST(PPrime, UnacceptableTailDoesNotMatter) {
  const Profile th = named_profile(NamedMarket::Theorem1Step2);
  for (const AgentId w : {w1, w2, w3}) {
    const Preference pp = construct_p_prime(th, w);
    const Matching expected = deferred_acceptance(th.with(pp), Side::Woman);
    for (const Preference& q : truncation_strategies(th.of(w))) {
      // Same acceptable prefix as P'_w, any order below Self.
      if (q.rank(self) != pp.rank(self)) continue;
      EXPECT_EQ(deferred_acceptance(th.with(q), Side::Woman), expected) << to_string(q);
      EXPECT_EQ(deferred_acceptance(th.with(q), Side::Man), deferred_acceptance(th.with(pp), Side::Man));
    }
  }
}

TEST(Step1, IdentitiesHoldOnNamedMarkets) {
  for (NamedMarket n : {NamedMarket::Example1, NamedMarket::Theorem1Step2}) {
    const Profile p = named_profile(n);
    for (int j = 0; j < p.market().num_women; ++j) {
      const Step1Report r = verify_step1_identities(p, AgentId::woman(j));
      EXPECT_TRUE(r.passed()) << to_string(n) << " w" << j + 1;
      EXPECT_GE(r.checks.size(), 6u);
    }
  }
  // In Example1 the two DA outcomes differ for w1, so P'' is checked as well.
  const Step1Report r = verify_step1_identities(named_profile(NamedMarket::Example1), w1);
  EXPECT_EQ(r.checks.back().name, "p-double-prime-boost-both");
}

TEST(Step1, SampledSweep) {
  const Step1SweepReport r = sweep_step1(Market(3, 3), DomainRestriction::sampled(1000, 11), 2);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.profiles_examined, 1000u);
  EXPECT_GT(r.women_checked, 0u);
  EXPECT_GT(r.women_skipped, 0u);
}

TEST(Replicate, Example1) {
  const ReplicationReport r = replicate(NamedMarket::Example1);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.truncation_set.size(), 3u);
  EXPECT_EQ(r.boost_set.size(), 2u);
}

TEST(Replicate, Theorem1) {
  const ReplicationReport r = replicate(NamedMarket::Theorem1Step2);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(*r.truthful_assignment, Partner(w1));
  EXPECT_EQ(*r.deviant_assignment, Partner(w3));
  EXPECT_EQ(*r.truthful_matching, make_matching(r.profile.market(), {{0, 2}, {1, 0}, {2, 1}}));
  EXPECT_EQ(*r.deviant_matching, make_matching(r.profile.market(), {{0, 0}, {1, 2}, {2, 1}}));
  // The checker finds the same witness on its own.
  const auto ws = check_boost_invariance(MechanismId::woman_da(), r.profile);
  EXPECT_NE(std::find(ws.begin(), ws.end(), *r.witness), ws.end());
}
