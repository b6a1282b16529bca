#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "utilagg/coincidence.hpp"
#include "utilagg/society_io.hpp"

using namespace utilagg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = -1;
  std::string out;
};

/// Runs the CLI with `args`; stderr is merged into the output only when asked.
Run cli(const std::string& args, bool with_stderr = false) {
  std::string cmd = std::string(UTILAGG_CLI) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(UTILAGG_FIXTURES) + "/" + name; }

const char* kMinimal = R"({
  "space": {"kind": "explicit", "states": ["a", "b"]},
  "agents": [
    {"name": "1", "utility": {"a": "0/1", "b": "1/1"}},
    {"name": "2", "utility": {"a": "1/2", "b": "0/1"}}
  ],
  "ethical": {"a": "1/2", "b": "1/1"}
})";

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  if (at == std::string::npos) throw std::logic_error("pattern not found: " + from);
  return s.replace(at, from.size(), to);
}

std::string parse_error(const std::string& text) {
  try {
    parse_society(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "<no error>";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Parse, MinimalExplicitSociety) {
  auto f = parse_society(kMinimal);
  EXPECT_FALSE(f.title);
  EXPECT_EQ(f.society.n(), 2u);
  EXPECT_EQ(f.society.space().size(), 2u);
  EXPECT_EQ(f.society.name(1), "2");
  EXPECT_TRUE(f.society.individual(1).gt(0, 1));
  EXPECT_TRUE(f.society.ethical().gt(1, 0));
}

TEST(Parse, SchemaAndValueErrorsNameTheField) {
  const std::string m = kMinimal;
  auto no_agents = R"({"space": {"kind": "explicit", "states": ["a"]}, "agents": [], "ethical": {"a": "0/1"}})";
  EXPECT_TRUE(contains(parse_error(no_agents), "$.agents"));
  EXPECT_TRUE(contains(parse_error(no_agents), "at least two agents"));

  auto zero_den = parse_error(replaced(m, R"("b": "1/1"})", R"("b": "1/0"})"));
  EXPECT_TRUE(contains(zero_den, "$.agents[0].utility[\"b\"]")) << zero_den;

  EXPECT_TRUE(contains(parse_error(replaced(m, R"("ethical")", R"("colour": 1, "ethical")")), "unknown field \"colour\""));
  EXPECT_TRUE(contains(parse_error(replaced(m, R"("ethical": {"a": "1/2", )", R"("ethical": {)")),
                       "$.ethical: missing state \"a\""));
  EXPECT_TRUE(contains(parse_error(replaced(m, R"("name": "2")", R"("name": "1")")), "duplicate agent name"));
  EXPECT_TRUE(contains(parse_error(replaced(m, R"({"a": "1/2", "b": "0/1"})", R"({"a": "1/2", "c": "0/1"})")),
                       "unknown state"));
  EXPECT_TRUE(contains(parse_error(replaced(m, R"("kind": "explicit")", R"("kind": "cloud")")), "$.space.kind"));
  EXPECT_TRUE(contains(parse_error(replaced(m, R"("1/2", "b")", R"(0.5, "b")")), "expected a rational string"));
}

TEST(Parse, MalformedJsonReportsLine) {
  auto msg = parse_error(replaced(kMinimal, R"({"name": "1",)", R"({"name" "1",)"));
  EXPECT_TRUE(contains(msg, "line 4")) << msg;
}

TEST(Parse, ProductGridKeysAreCommaJoinedCoordinates) {
  auto f = load_society(fixture("planted-affine.json"));
  const auto& sp = f.society.space();
  EXPECT_EQ(sp.size(), 9u);
  EXPECT_EQ(sp.id(sp.size() - 1), "1/1,1/1");
  EXPECT_EQ(sp.coords(sp.require("1/2,0/1")), (std::vector<Rational>{Rational(1, 2), Rational(0)}));
}

TEST(Fixtures, SimplexLoadsWithFiveStates) {
  auto f = load_society(fixture("simplex.json"));
  auto built = simplex_counterexample(Rational(1, 4));
  EXPECT_EQ(f.society.space().size(), 5u);
  EXPECT_EQ(f.society.nm()->agents, built.nm()->agents);
  EXPECT_EQ(f.society.alt()->agents, built.alt()->agents);
  EXPECT_EQ(f.society.nm()->ethical, built.nm()->ethical);
}

TEST(Fixtures, ShippedFilesRoundTripByteIdentical) {
  for (const char* name : {"simplex.json", "sqrt.json", "sqrt-degenerate.json", "planted-affine.json"}) {
    const std::string text = slurp(fixture(name));
    ASSERT_FALSE(text.empty()) << name;
    EXPECT_EQ(emit_society(parse_society(text)), text) << name;
  }
}

TEST(Fixtures, EmitterReproducesShippedFiles) {
  EXPECT_EQ(emit_society({"square-root fixture, kmax 10, eps 1/2", std::nullopt,
                          sqrt_fixture(10, Rational(1, 2)).society}),
            slurp(fixture("sqrt.json")));
  EXPECT_EQ(cli("fixture sqrt --k 10 --eps 1/2").out, slurp(fixture("sqrt.json")));
  EXPECT_EQ(cli("fixture sqrt --k 10 --eps 1/2 --degenerate").out, slurp(fixture("sqrt-degenerate.json")));
  EXPECT_EQ(cli("fixture simplex --resolution 1/4").out, slurp(fixture("simplex.json")));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("validate " + fixture("simplex.json")).code, 1);
  EXPECT_EQ(cli("recover " + fixture("simplex.json") + " --mode harsanyi").code, 0);
  EXPECT_EQ(cli("recover " + fixture("planted-affine.json") + " --mode harvey").code, 0);
  EXPECT_EQ(cli("coincide " + fixture("planted-affine.json")).code, 0);
  EXPECT_EQ(cli("coincide " + fixture("sqrt.json")).code, 1);
  EXPECT_EQ(cli("coincide " + fixture("sqrt-degenerate.json")).code, 1);
  EXPECT_EQ(cli("validate " + fixture("missing.json")).code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("recover " + fixture("simplex.json") + " --mode lottery").code, 2);
  EXPECT_EQ(cli("fixture simplex --resolution 1/3").code, 2);
}

TEST(Cli, MalformedInputGivesDiagnosticAndExitTwo) {
  const std::string path = ::testing::TempDir() + "utilagg_bad.json";
  {
    std::ofstream o(path);
    o << replaced(kMinimal, R"("b": "1/1"})", R"("b": "1/0"})");
  }
  auto r = cli("validate " + path, true);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.out, "$.agents[0].utility")) << r.out;
}

TEST(Cli, SimplexRecoveryAndValidation) {
  auto rec = nlohmann::json::parse(cli("recover " + fixture("simplex.json") + " --mode harsanyi --json").out);
  EXPECT_EQ(rec["weights"]["a"], nlohmann::json::array({"1/1", "1/1"}));
  EXPECT_EQ(rec["weights"]["b"], "0/1");
  EXPECT_EQ(rec["unique"], true);

  auto val = nlohmann::json::parse(cli("validate " + fixture("simplex.json") + " --json").out);
  std::vector<std::string> failed;
  for (const auto& c : val["checks"])
    if (c["status"] != "PASS") failed.push_back(c["name"]);
  EXPECT_EQ(failed, std::vector<std::string>{"semi-separability"});
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  for (const char* name : {"simplex.json", "sqrt.json", "planted-affine.json"}) {
    auto one = cli("validate " + fixture(name) + " --json --threads 1");
    auto many = cli("validate " + fixture(name) + " --json --threads 8");
    EXPECT_EQ(one.out, many.out) << name;
    EXPECT_EQ(one.code, many.code) << name;
  }
}

TEST(Cli, MaxStatesCapIsAnInputError) {
  auto r = cli("validate " + fixture("sqrt.json") + " --max-states 4", true);
  EXPECT_EQ(r.code, 2);
}

// Set UTILAGG_UPDATE_GOLDEN=1 to rewrite the files after an intended change.
TEST(Golden, JsonReportsAreStable) {
  const bool update = std::getenv("UTILAGG_UPDATE_GOLDEN") != nullptr;
  const std::vector<std::pair<std::string, std::string>> cases{
      {"validate-simplex.json", "validate " + fixture("simplex.json")},
      {"validate-planted-affine.json", "validate " + fixture("planted-affine.json")},
      {"recover-simplex-harsanyi.json", "recover " + fixture("simplex.json") + " --mode harsanyi"},
      {"recover-planted-affine-harvey.json", "recover " + fixture("planted-affine.json") + " --mode harvey"},
      {"coincide-planted-affine.json", "coincide " + fixture("planted-affine.json")},
      {"coincide-sqrt.json", "coincide " + fixture("sqrt.json")},
      {"coincide-sqrt-degenerate.json", "coincide " + fixture("sqrt-degenerate.json")},
  };
  for (const auto& [file, args] : cases) {
    const std::string path = std::string(UTILAGG_GOLDEN) + "/" + file;
    const std::string out = cli(args + " --json").out;
    if (update) {
      std::ofstream(path, std::ios::binary) << out;
      continue;
    }
    EXPECT_EQ(out, slurp(path)) << file << " differs from its golden copy";
  }
}
