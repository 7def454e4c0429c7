#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string("\"") + SURVEYFORGE_CLI + "\" " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("surveyforge_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("defaults prints a documented table") {
  const auto r = run("defaults");
  CHECK(r.code == 0);
  CHECK(r.out.find("[summarizer]") != std::string::npos);
  CHECK(r.out.find("damping = 0.85") != std::string::npos);
}

TEST_CASE("kappa") {
  const auto dir = scratch("kappa");
  std::ofstream(dir / "r.txt") << "bg bg bg\nme,me,me\not\tot\tot\n";
  const auto r = run("kappa --in " + (dir / "r.txt").string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["items"] == 3);
  CHECK(j["raters"] == 3);
  CHECK(j["kappa"] == 1.0);
  std::ofstream(dir / "bad.txt") << "a b\nc\n";
  CHECK(run("kappa --in " + (dir / "bad.txt").string()).code == 1);
}

TEST_CASE("bad config is a usage error") {
  const auto dir = scratch("config");
  std::ofstream(dir / "c.ini") << "[summarizer]\ndamping = 1.5\n";
  CHECK(run("--config " + (dir / "c.ini").string() + " defaults").code == 2);
  CHECK(run("--config " + (dir / "missing.ini").string() + " defaults").code == 2);
  CHECK(run("no-such-command").code != 0);
}

TEST_CASE("run on the fixture") {
  const auto dir = scratch("run");
  const fs::path fixture = fs::path(SURVEYFORGE_TEST_DATA) / "fixture";
  for (const char* f : {"corpus.jsonl", "train.jsonl", "pipeline.ini"}) fs::copy_file(fixture / f, dir / f);
  const auto r = run("--quiet --config " + (dir / "pipeline.ini").string() + " run");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "summaries.jsonl"));
  const auto ev = run("evaluate --pred " + (dir / "out" / "summaries.jsonl").string() + " --ref " +
                      (dir / "out" / "labeled.jsonl").string());
  REQUIRE(ev.code == 0);
  CHECK(nlohmann::json::parse(ev.out)["examples"] == 5);
  const auto st = run("stats --in " + (dir / "out" / "labeled.jsonl").string());
  REQUIRE(st.code == 0);
  CHECK(nlohmann::json::parse(st.out)["pairs"] == 5);
}
