#include <gtest/gtest.h>

#include "infprod/error.hpp"
#include "infprod/scenario.hpp"

using namespace infprod;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_scenario(text, "test.json");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({
  "name": "mini",
  "spaces": {"tail": ["0", "1"]},
  "measure": {"tail": {"kind": "constant", "weights": [0.5, 0.5]}},
  "function": {"family": "linear", "coefficients": [1]}
})";

}  // namespace

TEST(Scenario, ParsesMinimal) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "mini");
  ASSERT_TRUE(s.function);
  EXPECT_EQ(s.measure->resolve(7), CoordinateMeasure::uniform(2));
  EXPECT_EQ(s.point("all-1").at(3), 1u);
  EXPECT_EQ(s.digest.size(), 16u);
}

TEST(Scenario, ParseErrorHasLineAndColumn) {
  const std::string msg = message_of("{\n  \"name\": ,\n}");
  EXPECT_NE(msg.find("test.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(Scenario, WeightsNotSummingToOneNameTheCoordinate) {
  const std::string msg = message_of(R"({
    "name": "bad",
    "spaces": {"tail": ["0", "1"]},
    "measure": {"head": [[0.5, 0.5], [0.5, 0.5], [0.6, 0.3]],
                "tail": {"kind": "constant", "weights": [0.5, 0.5]}}
  })");
  EXPECT_NE(msg.find("coordinate 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("measure.head[2]"), std::string::npos) << msg;
}

TEST(Scenario, UnknownFormula) {
  const std::string msg = message_of(R"({
    "name": "bad",
    "spaces": {"tail": ["0", "1"]},
    "measure": {"tail": {"kind": "formula", "family": "no-such-formula"}}
  })");
  EXPECT_NE(msg.find("no-such-formula"), std::string::npos) << msg;
}

TEST(Scenario, ErrorKinds) {
  try {
    parse_scenario("{", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
  try {
    parse_scenario(R"({"name": "x"})", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
}

TEST(Scenario, DigestIgnoresFormatting) {
  std::string compact;
  for (char c : std::string(kMinimal)) {
    if (c != '\n' && c != ' ') compact += c;
  }
  EXPECT_EQ(parse_scenario(kMinimal).digest, parse_scenario(compact).digest);
  std::string changed = kMinimal;
  changed.replace(changed.find("[1]"), 3, "[2]");
  EXPECT_NE(parse_scenario(kMinimal).digest, parse_scenario(changed).digest);
}

TEST(Scenario, EveryBuiltinParses) {
  const auto names = builtin_scenarios();
  EXPECT_GE(names.size(), 7u);
  for (const auto& n : names) {
    const Scenario s = builtin_scenario(n);
    EXPECT_EQ(s.name, n);
    EXPECT_TRUE(s.function || s.game_kind != GameKind::None) << n;
    EXPECT_EQ(resolve_scenario(n).digest, s.digest);
  }
  EXPECT_THROW(builtin_scenario("missing"), Error);
}

TEST(Scenario, UnknownPoint) {
  EXPECT_THROW(parse_scenario(kMinimal).point("nowhere"), Error);
}
