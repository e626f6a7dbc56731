#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mm/mm.hpp"
#include "oracles.hpp"

using namespace mm;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Bad {
  std::string text;
  Diagnostic diagnostic;
  int line;
};

}  // namespace

TEST(MarketFile, Fixtures) {
  EXPECT_EQ(parse_market(read_file(MM_FIXTURE_DIR "/theorem1.market")).prefs(),
            named_profile(NamedMarket::Theorem1Step2).prefs());
  EXPECT_EQ(parse_market(read_file(MM_FIXTURE_DIR "/example1.market")).prefs(),
            named_profile(NamedMarket::Example1).prefs());
}

TEST(MarketFile, CommentsBlankLinesAndAnyAgentOrder) {
  const Profile p = parse_market("# c\n\nmarket 1 2\n  w2: self m1\nw1: m1 self\r\n# x\nm1: w2 self w1\n");
  EXPECT_EQ(p.of(AgentId::man(0)), Preference(AgentId::man(0), {AgentId::woman(1), Partner::self(), AgentId::woman(0)}));
  EXPECT_EQ(p.of(AgentId::woman(1)), Preference(AgentId::woman(1), {Partner::self(), AgentId::man(0)}));
}

TEST(MarketFile, Diagnostics) {
  const std::vector<Bad> cases = {
      {"markets 2 2\n", Diagnostic::BadHeader, 1},
      {"# only a comment\n", Diagnostic::BadHeader, 2},
      {"market 0 2\n", Diagnostic::BadHeader, 1},
      {"market 1 1\nm1 w1 self\n", Diagnostic::MalformedLine, 2},
      {"market 1 1\nm1 w1: w1 self\n", Diagnostic::MalformedLine, 2},
      {"market 1 1\nm2: w1 self\n", Diagnostic::UnknownName, 2},
      {"market 1 1\nm1: w2 self\n", Diagnostic::UnknownName, 2},
      {"market 1 1\nm1: m1 self\n", Diagnostic::UnknownName, 2},
      {"market 1 1\nm1: w1 self\n\nm1: w1 self\n", Diagnostic::DuplicateAgent, 4},
      {"market 2 2\nm1: w1 w1 self\n", Diagnostic::DuplicatePartner, 2},
      {"market 2 2\nm1: w1 w2\n", Diagnostic::MissingSelf, 2},
      {"market 2 2\nm1: w1 self\n", Diagnostic::SizeMismatch, 2},
      {"market 1 1\nm1: w1 self\n", Diagnostic::MissingAgent, 3},
  };
  for (const Bad& c : cases) {
    try {
      parse_market(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.diagnostic(), c.diagnostic) << c.text;
      EXPECT_EQ(e.line(), c.line) << c.text;
      const std::string msg = e.what();
      EXPECT_NE(msg.find("line " + std::to_string(c.line) + ": " + code_of(c.diagnostic) + ": "), std::string::npos) << msg;
    }
  }
}

TEST(MarketFile, RoundTripRandomProfiles) {
  std::mt19937_64 rng(2024);
  for (int men = 1; men <= 4; ++men)
    for (int women = 1; women <= 4; ++women) {
      const Market mk(men, women);
      for (int k = 0; k < 1000; ++k) {
        const Profile p = oracle::random_profile(mk, rng);
        const std::string text = serialize_market(p);
        const Profile q = parse_market(text);
        ASSERT_EQ(q.prefs(), p.prefs());
        ASSERT_EQ(serialize_market(q), text);
        ASSERT_EQ(profile_from_json(to_json(p)).prefs(), p.prefs());
      }
    }
}

TEST(Json, ProfileShape) {
  const Json j = to_json(named_profile(NamedMarket::Example1));
  EXPECT_EQ(j.dump(),
            R"({"market":{"men":2,"women":2},"preferences":{"m1":["w2","w1","self"],"m2":["w1","w2","self"],)"
            R"("w1":["m1","m2","self"],"w2":["m2","m1","self"]}})");
}

TEST(Json, WitnessRoundTrip) {
  std::vector<Witness> ws = check_boost_invariance(MechanismId::woman_da(), named_profile(NamedMarket::Theorem1Step2));
  const Profile q(Market(1, 1), {Preference(AgentId::man(0), {Partner::self(), AgentId::woman(0)}),
                                 Preference(AgentId::woman(0), {AgentId::man(0), Partner::self()})});
  for (Witness& w : audit_mechanism(MechanismId::woman_ia(), q)) ws.push_back(std::move(w));
  ASSERT_GT(ws.size(), 2u);
  for (const Witness& w : ws) {
    const std::string text = to_json(w).dump(2);
    const Witness back = witness_from_json(Json::parse(text));
    EXPECT_EQ(back, w);
    EXPECT_TRUE(validate_witness(back));
    EXPECT_EQ(to_json(back).dump(2), text);
  }
}

TEST(Json, SampledSweepIsByteIdentical) {
  SweepSpec s;
  s.market = Market(3, 3);
  s.restriction = DomainRestriction::sampled(400, 99);
  s.mechanism = MechanismId::woman_da();
  s.axioms = {Axiom::BoostInvariance, Axiom::StrategyProofness};
  s.mode = SweepMode::collect_up_to(20);
  s.workers = 1;
  const std::string a = to_json(sweep(s)).dump(2);
  s.workers = 4;
  const std::string b = to_json(sweep(s)).dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
  EXPECT_NE(to_json(sweep(s), true).dump().find("wall_seconds"), std::string::npos);
}
