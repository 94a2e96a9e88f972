#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "demos.hpp"
#include "json.hpp"

namespace gsos::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = runCli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kA = "(while (var 0) (assign 0 (lit 0)))";
const char* kB = "(while (mul (var 0) (lit 2)) (assign 0 (lit 0)))";

std::string tempFile(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(cli({"run", "--lang", "while"}).code, kUsage);
  EXPECT_EQ(cli({"run", "--lang", "nope", "--term", "skip", "--input", "{}"}).code, kUsage);
  EXPECT_EQ(cli({"run", "--lang", "while", "--term", "(seq skip", "--input", "{}"}).code, kUsage);
  EXPECT_EQ(cli({"coherence", "--compiler", "flatten-low", "--mode", "open"}).code, kUsage);
  EXPECT_EQ(cli({"coherence", "--compiler", "sandbox", "--seed", "zebra"}).code, kUsage);
  EXPECT_EQ(cli({"demo", "fig99"}).code, kUsage);
}

TEST(Cli, Run) {
  Result r = cli({"run", "--lang", "while", "--term", "(seq skip skip)", "--input", "{0:1}"});
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.out.find("terminated after 2 steps"), std::string::npos) << r.out;
}

TEST(Cli, CompileExampleOne) {
  Result r = cli({"compile", "--compiler", "flatten-low", "--term",
                  "(while (lt (var 0) (lit 2)) (assign 1 (add (var 1) (lit 1))))"});
  EXPECT_EQ(r.code, kPass);
  EXPECT_EQ(r.out, "br !(var 0 < 2) 3 ;; assign 1 (var 1 + 1) ;; br (lit 1) -2\n");
  Result s = cli({"compile", "--compiler", "sandbox", "--term", "skip", "--sexpr"});
  EXPECT_EQ(s.out, "(sandbox skip)\n");
}

TEST(Cli, CoherenceExitCodes) {
  EXPECT_EQ(cli({"coherence", "--compiler", "embed-flag"}).code, kFail);
  Result pass = cli({"coherence", "--compiler", "sandbox"});
  EXPECT_EQ(pass.code, kPass);
  EXPECT_NE(pass.out.find("budget:"), std::string::npos);
  EXPECT_EQ(cli({"coherence", "--compiler", "flatten-low"}).code, kFail);
}

TEST(Cli, CoherenceJsonFields) {
  Result r = cli({"coherence", "--compiler", "embed-flag", "--json"});
  ASSERT_EQ(r.code, kFail);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["format_version"], kFormatVersion);
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_EQ(j["config"]["seed"], 0xC0FFEE);
  EXPECT_EQ(j["witness"]["divergence"], "label");
  EXPECT_EQ(j["witness"]["source"], "(assign 0 (lit 1))");
  EXPECT_EQ(j["witness"]["upper"]["label"], 0);
  EXPECT_EQ(j["witness"]["lower"]["label"], 1);
  for (const char* k : {"cases", "inconclusive", "up_to_bisim", "totalized", "skipped", "window_size", "sources"})
    EXPECT_TRUE(j["tallies"].contains(k)) << k;
}

TEST(Cli, ThreadsDoNotChangeOutput) {
  Result a = cli({"coherence", "--compiler", "unsandbox", "--json"});
  Result b = cli({"coherence", "--compiler", "unsandbox", "--json", "--threads", "3"});
  auto ja = nlohmann::json::parse(a.out);
  auto jb = nlohmann::json::parse(b.out);
  EXPECT_EQ(ja["witness"], jb["witness"]);
  EXPECT_EQ(ja["tallies"], jb["tallies"]);
}

TEST(Cli, ReplayRoundTrip) {
  for (const char* c : {"embed-flag", "sandbox", "flatten-low"}) {
    Result r = cli({"coherence", "--compiler", c, "--json"});
    std::string path = tempFile(std::string("gsos_replay_") + c + ".json", r.out);
    Result rep = cli({"replay", "--report", path});
    // Replay exits 0 when the saved verdict is reproduced, whatever it was.
    EXPECT_EQ(rep.code, kPass) << c << "\n" << rep.out << rep.err;
    EXPECT_NE(rep.out.find("identical"), std::string::npos) << rep.out;
    std::filesystem::remove(path);
  }
}

TEST(Cli, ReplayDetectsTampering) {
  Result r = cli({"coherence", "--compiler", "embed-flag", "--json"});
  auto j = nlohmann::json::parse(r.out);
  j["witness"]["lower"]["label"] = 7;
  std::string path = tempFile("gsos_replay_tampered.json", j.dump());
  Result rep = cli({"replay", "--report", path});
  EXPECT_EQ(rep.code, kFail) << rep.out << rep.err;
  std::filesystem::remove(path);
}

TEST(Cli, ReplayRejectsForeignFormat) {
  std::string path = tempFile("gsos_replay_bad.json", R"({"format_version": 99})");
  EXPECT_EQ(cli({"replay", "--report", path}).code, kUsage);
  std::filesystem::remove(path);
}

TEST(Cli, Bisim) {
  EXPECT_EQ(cli({"bisim", "--lang", "while", "--left", kA, "--right", kB}).code, kPass);
  Result r = cli({"bisim", "--lang", "while-flag", "--left", kA, "--right", kB});
  EXPECT_EQ(r.code, kFail);
  EXPECT_NE(r.out.find("{0:1}"), std::string::npos);
}

TEST(Cli, PreserveWithPairsFile) {
  std::string path = tempFile("gsos_pairs.txt", std::string(kA) + " " + kB + "\n");
  Result r = cli({"preserve", "--compiler", "embed-flag", "--pairs", path});
  EXPECT_EQ(r.code, kFail);
  EXPECT_NE(r.out.find("violations: 1"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"preserve", "--compiler", "sandbox", "--pairs", path}).code, kPass);
  std::filesystem::remove(path);
}

TEST(Cli, ContextClosure) {
  Result r = cli({"ctx-closure", "--lang", "while", "--left", kA, "--right", kB});
  EXPECT_EQ(r.code, kPass) << r.out;
}

TEST(Cli, Laws) {
  Result r = cli({"laws", "--lang", "while-sec"});
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.out.find("plug round trip"), std::string::npos);
}

TEST(Cli, DemoRegistry) {
  std::vector<std::string> names;
  for (const auto& d : demos()) names.push_back(d.name);
  EXPECT_EQ(names, (std::vector<std::string>{"fig3", "fig4", "fig5", "fig6", "fig8", "fig9", "fig10", "sec6-fail",
                                             "sec6-pass", "example1", "sec3-context"}));
  EXPECT_EQ(findDemo("nope"), nullptr);
}

TEST(Cli, QuickDemosReproduce) {
  for (const char* d : {"fig3", "fig5", "fig6", "sec6-fail", "example1", "sec3-context"}) {
    Result r = cli({"demo", d});
    EXPECT_EQ(r.code, kPass) << d << "\n" << r.out << r.err;
    EXPECT_NE(r.out.find("reproduced"), std::string::npos) << d;
  }
}

TEST(Cli, DemoJsonReplays) {
  Result r = cli({"demo", "fig3", "--json"});
  ASSERT_EQ(r.code, kPass);
  std::string path = tempFile("gsos_demo_fig3.json", r.out);
  EXPECT_EQ(cli({"replay", "--report", path}).code, kPass);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace gsos::cli
