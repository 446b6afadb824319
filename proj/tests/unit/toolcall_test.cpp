// Copyright 2026 The opsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "opsynth/toolcall/dispatch.hpp"
#include "opsynth/toolcall/parser.hpp"
#include "opsynth/toolcall/serialize.hpp"
#include "support/call_generators.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace opsynth {
namespace {

constexpr const char* kLpCall =
    R"(solve_lp(objective="max", c=[3,2], A=[[1,1],[1,3]], senses=["<=","<="], b=[4,6]))";

CallParseError parse_error_of(std::string_view text) {
  try {
    parse_call(text);
  } catch (const CallParseError& e) {
    return e;
  }
  ADD_FAILURE() << "parsed without error: " << text;
  return CallParseError(CallErrorKind::Syntax, 0, "", "");
}

TEST(ParseCallTest, LinearProgramCall) {
  ToolCall call = parse_call(kLpCall);
  EXPECT_EQ(call.name, "solve_lp");
  ASSERT_EQ(call.args.size(), 5u);
  EXPECT_EQ(call.args[0].first, "objective");
  EXPECT_EQ(*call.find("objective"), Value("max"));
  EXPECT_EQ(*call.find("c"), Value(Value::Array{3, 2}));
  EXPECT_EQ(*call.find("A"), Value(Value::Array{Value::Array{1, 1}, Value::Array{1, 3}}));
  EXPECT_EQ(*call.find("senses"), Value(Value::Array{"<=", "<="}));
}

TEST(ParseCallTest, NestedMatrix) {
  ToolCall call = parse_call("solve_tsp(dist=[[0,1],[1,0]])");
  EXPECT_EQ(call.name, "solve_tsp");
  ASSERT_EQ(call.args.size(), 1u);
  const Value& dist = call.args[0].second;
  ASSERT_TRUE(dist.is_array());
  ASSERT_EQ(dist.array().size(), 2u);
  EXPECT_EQ(dist.array()[1], Value(Value::Array{1, 0}));
}

TEST(ParseCallTest, TruncatedArrayIsUnterminated) {
  const std::string text = "solve_lp(c=[3,";
  auto error = parse_error_of(text);
  EXPECT_EQ(error.kind(), CallErrorKind::UnterminatedArray);
  // The input is 14 bytes long; the missing value is due at its end.
  EXPECT_EQ(error.offset(), text.size());
  EXPECT_EQ(error.expected(), "value");
  EXPECT_NE(std::string(error.what()).find("opened at offset 11"), std::string::npos);
}

TEST(ParseCallTest, DistinctErrorKinds) {
  EXPECT_EQ(parse_error_of(R"(solve_lp(objective="max)").kind(), CallErrorKind::UnterminatedString);
  EXPECT_EQ(parse_error_of("solve_lp(c=[1, 2]").kind(), CallErrorKind::UnterminatedCall);
  EXPECT_EQ(parse_error_of("solve_lp(c=[1 2])").kind(), CallErrorKind::Syntax);
  EXPECT_EQ(parse_error_of("solve_lp(c=[1 2])").offset(), 14u);
  EXPECT_EQ(parse_error_of("solve_lp(c=1, c=2)").kind(), CallErrorKind::Syntax);
  EXPECT_EQ(parse_error_of("solve_lp(3)").expected(), "parameter name");
  EXPECT_EQ(parse_error_of("solve_lp(c=null)").expected(), "value");
  EXPECT_EQ(parse_error_of("solve_lp(c=1e999)").expected(), "finite number");
  EXPECT_EQ(parse_error_of("solve_lp(c=01)").kind(), CallErrorKind::Syntax);
  EXPECT_EQ(parse_error_of("solve_lp() extra").expected(), "end of input");
  EXPECT_EQ(parse_error_of("").kind(), CallErrorKind::Syntax);
  EXPECT_EQ(parse_error_of(std::string(200, '[')).kind(), CallErrorKind::Syntax);
}

TEST(ParseCallTest, WhitespaceAndLiterals) {
  ToolCall call = parse_call(" f ( a = [ ] , b = true , c = \"x\\\"y\\u00e9\" , d = -1.5e2 , e=[[ ]] ) ");
  EXPECT_EQ(call.name, "f");
  EXPECT_EQ(*call.find("a"), Value(Value::Array{}));
  EXPECT_EQ(*call.find("b"), Value(true));
  EXPECT_EQ(*call.find("c"), Value("x\"y\xc3\xa9"));
  EXPECT_EQ(*call.find("d"), Value(-150.0));
  EXPECT_EQ(parse_call("g()").args.size(), 0u);
}

TEST(ParseCallTest, NestingLimit) {
  std::string ok = "f(a=" + std::string(kMaxCallNesting, '[') + std::string(kMaxCallNesting, ']') + ")";
  EXPECT_NO_THROW(parse_call(ok));
  std::string deep =
      "f(a=" + std::string(kMaxCallNesting + 1, '[') + std::string(kMaxCallNesting + 1, ']') + ")";
  EXPECT_THROW(parse_call(deep), CallParseError);
}

TEST(ParseCallTest, RandomBytesOnlyProduceStructuredErrors) {
  for (std::uint64_t i = 0; i < 3000; ++i) {
    auto rng = derive_stream(21, i);
    const std::string text = testgen::random_bytes(rng);
    try {
      parse_call(text);
    } catch (const CallParseError& e) {
      EXPECT_LE(e.offset(), text.size());
    }
    try {
      extract_call(text);
    } catch (const CallParseError&) {
    }
  }
}

TEST(ExtractCallTest, CallAfterReasoning) {
  const std::string message =
      "We maximize profit subject to two limits. The mixed model is solved below.\n"
      "solve_milp(objective=\"max\", c=[5, 4], A=[[6, 4]], senses=[\"<=\"], b=[10], integer=[true, false])";
  ToolCall call = extract_call(message);
  EXPECT_EQ(call.name, "solve_milp");
  EXPECT_EQ(call.args.size(), 6u);
}

TEST(ExtractCallTest, LastCallWins) {
  const std::string message = "First try solve_tsp(dist=[[0,1],[1,0]]). Then solve_lp(" + std::string(kLpCall + 9) +
                              " and we are done.";
  ToolCall call = extract_call(message);
  EXPECT_EQ(call.name, "solve_lp");
}

TEST(ExtractCallTest, NoCall) {
  try {
    extract_call("The answer is forty two. We call solve_lp later, maybe.");
    FAIL();
  } catch (const CallParseError& e) {
    EXPECT_EQ(e.kind(), CallErrorKind::NoCall);
    EXPECT_STREQ(e.what(), "no call present");
  }
}

TEST(ExtractCallTest, IgnoresLongerIdentifiers) {
  EXPECT_THROW(extract_call("my_solve_lp(c=[1])"), CallParseError);
  // Parentheses and quotes inside the arguments do not end the call early.
  ToolCall call = extract_call("so: solve_assignment(objective=\"min\", cost=[[1]]) (done)");
  EXPECT_EQ(call.name, "solve_assignment");
}

TEST(ExtractCallTest, MalformedLastCallReportsOffsetInMessage) {
  const std::string message = "ok solve_tsp(dist=[[0,1],[1,0]]) then solve_lp(c=[3,";
  try {
    extract_call(message);
    FAIL();
  } catch (const CallParseError& e) {
    EXPECT_EQ(e.kind(), CallErrorKind::UnterminatedArray);
    EXPECT_EQ(e.offset(), message.size());
  }
}

TEST(ExtractCallTest, ProseThenSerializedCallIsIdentity) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto rng = derive_stream(22, i);
    ToolCall call = testgen::random_schema_call(rng);
    std::string prose;
    const auto words = rng.uniform_int(0, 40);
    for (int w = 0; w < words; ++w) prose += "word" + std::to_string(rng.uniform_int(0, 9)) + (w % 7 ? " " : ". ");
    EXPECT_EQ(extract_call(prose + serialize_call(call)), call);
  }
}

TEST(SerializeCallTest, RoundTripOfExample) {
  ToolCall call = parse_call(kLpCall);
  const std::string text = serialize_call(call);
  EXPECT_EQ(text, R"(solve_lp(objective="max", c=[3, 2], A=[[1, 1], [1, 3]], senses=["<=", "<="], b=[4, 6]))");
  EXPECT_EQ(parse_call(text), call);
}

TEST(SerializeCallTest, SchemaOrder) {
  ToolCall call = parse_call("solve_max_flow(sink=3, source=0, arcs=[[0,3,2.50]], num_nodes=4)");
  EXPECT_EQ(serialize_call(call), "solve_max_flow(num_nodes=4, arcs=[[0, 3, 2.5]], source=0, sink=3)");
}

TEST(SerializeCallTest, UnknownToolOrParameter) {
  EXPECT_THROW(serialize_call(parse_call("solve_everything(x=1)")), std::invalid_argument);
  EXPECT_THROW(serialize_call(parse_call("solve_tsp(x=1)")), std::invalid_argument);
}

TEST(SerializeCallTest, RandomCallsRoundTrip) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto rng = derive_stream(23, i);
    ToolCall call = testgen::random_schema_call(rng);
    EXPECT_EQ(parse_call(serialize_call(call)), call) << serialize_call(call);
  }
}

TEST(DispatchTest, AssignmentExample) {
  auto result = dispatch(parse_call("solve_assignment(objective=\"min\", cost=[[4,1,3],[2,0,5],[3,2,2]])"));
  ASSERT_TRUE(result.is_optimal());
  EXPECT_DOUBLE_EQ(*result.objective, oracle::assignment_brute_force({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}, false));
  EXPECT_DOUBLE_EQ(*result.objective, 5.0);
}

TEST(DispatchTest, MissingParameter) {
  auto result = dispatch(parse_call(R"(solve_lp(objective="max", c=[3,2], A=[[1,1],[1,3]], senses=["<=","<="]))"));
  EXPECT_EQ(result.status, SolveStatus::Error);
  EXPECT_EQ(*result.message, "missing parameter b");
}

TEST(DispatchTest, RowLengthMismatchNamesViolation) {
  auto result =
      dispatch(parse_call(R"(solve_lp(objective="max", c=[3,2], A=[[1,1],[1]], senses=["<=","<="], b=[4,6]))"));
  EXPECT_EQ(result.status, SolveStatus::Error);
  EXPECT_NE(result.message->find("A row 1 has length 1"), std::string::npos);
}

TEST(DispatchTest, ShapeAndIntegerSlots) {
  EXPECT_EQ(*dispatch(parse_call("solve_tsp(dist=[1,2])")).message, "parameter dist: expected number[][]");
  EXPECT_EQ(*dispatch(parse_call("solve_max_flow(num_nodes=2.5, arcs=[[0,1,3]], source=0, sink=1)")).message,
            "parameter num_nodes: expected integer");
  EXPECT_EQ(*dispatch(parse_call("solve_max_flow(num_nodes=2, arcs=[[0,1]], source=0, sink=1)")).message,
            "parameter arcs: expected [from: integer, to: integer, capacity: number][]");
  EXPECT_EQ(*dispatch(parse_call("solve_tsp(dist=[[0]], extra=1)")).message, "unexpected parameter extra");
  EXPECT_EQ(*dispatch(parse_call("solve_nothing()")).message, "unknown tool solve_nothing");
  auto near_integer = dispatch(parse_call("solve_max_flow(num_nodes=2.0000000001, arcs=[[0,1,3]], source=0, sink=1)"));
  ASSERT_TRUE(near_integer.is_optimal());
  EXPECT_DOUBLE_EQ(*near_integer.objective, 3.0);
}

TEST(DispatchTest, BoundsAndIntegrality) {
  auto result = dispatch(parse_call(
      R"(solve_ip(objective="max", c=[1], A=[[1]], senses=["<="], b=[10], lower=[0], upper=[2.5]))"));
  ASSERT_TRUE(result.is_optimal());
  EXPECT_DOUBLE_EQ(*result.objective, 2.0);
  auto unbounded = dispatch(parse_call(
      R"(solve_lp(objective="max", c=[1], A=[[-1]], senses=["<="], b=[10], upper=["infinity"]))"));
  EXPECT_EQ(unbounded.status, SolveStatus::Unbounded);
  auto milp = dispatch(parse_call(
      R"(solve_milp(objective="max", c=[1, 1], A=[[2, 2]], senses=["<="], b=[5], integer=[true, true]))"));
  EXPECT_EQ(milp.status, SolveStatus::Error);
  EXPECT_NE(milp.message->find("MILP instances need"), std::string::npos);
}

TEST(DispatchTest, ReferenceCallReproducesInstance) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = derive_stream(24, i);
    ProblemInstance instance;
    switch (i % 6) {
      case 0: instance = {ProblemType::LP, testgen::random_bounded_lp(rng)}; break;
      case 1: {
        LpInstance lp = testgen::random_bounded_milp(rng, true);
        instance = {ProblemType::IP, lp};
        break;
      }
      case 2: instance = {ProblemType::TSP, testgen::random_tsp(rng, 3, 7)}; break;
      case 3: instance = {ProblemType::MF, testgen::random_max_flow(rng)}; break;
      case 4: instance = {ProblemType::AP, testgen::random_assignment(rng)}; break;
      default: instance = {ProblemType::MCF, testgen::random_min_cost_flow(rng)}; break;
    }
    ToolCall call = instance_to_call(instance);
    ProblemInstance back = call_to_instance(parse_call(serialize_call(call)));
    EXPECT_EQ(back, instance) << serialize_call(call);
    EXPECT_EQ(dispatch(call), solve(instance));
  }
}

TEST(DispatchTest, DefaultBoundsAreOmitted) {
  LpInstance lp;
  lp.objective = {1, 2};
  lp.matrix = {{1, 1}};
  lp.senses = {Sense::LessEqual};
  lp.rhs = {4};
  lp.fill_defaults();
  ToolCall call = instance_to_call({ProblemType::LP, lp});
  EXPECT_EQ(call.find("lower"), nullptr);
  EXPECT_EQ(call.find("upper"), nullptr);
  lp.upper_bounds[1] = 3;
  call = instance_to_call({ProblemType::LP, lp});
  ASSERT_NE(call.find("upper"), nullptr);
  EXPECT_EQ(serialize_value(*call.find("upper")), R"(["infinity", 3])");
}

}  // namespace
}  // namespace opsynth
