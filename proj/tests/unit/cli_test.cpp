#include <gtest/gtest.h>
#include <httplib.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <json.hpp>

#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const lela::testing::TempDir& dir, const std::string& args, const std::string& env = "") {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string command = env + " '" LELA_CLI "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = lela::testing::slurp(out);
  result.err = lela::testing::slurp(err);
  return result;
}

std::string error_kind(const CliResult& r) {
  const json parsed = json::parse(r.err, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("error")) return "unparseable: " + r.err;
  return parsed["error"]["kind"];
}

TEST(Cli, MissingManifestIsIoError) {
  lela::testing::TempDir dir;
  const CliResult r = run_cli(dir, "analyze --mock x.json --manifest '" + (dir / "absent.json").string() + "'");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(error_kind(r), "io");
}

TEST(Cli, MissingEndpointIsConfigError) {
  lela::testing::TempDir dir;
  ASSERT_EQ(run_cli(dir, "gen-fixtures --out '" + (dir / "fx").string() + "'").exit_code, 0);
  const std::string manifest = (dir / "fx/manifests/synth-000.json").string();
  const CliResult r = run_cli(dir, "analyze --manifest '" + manifest + "' --out '" + (dir / "store").string() + "'",
                              "env -u LELA_LLM_ENDPOINT");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(error_kind(r), "config");
  EXPECT_NE(r.err.find("LELA_LLM_ENDPOINT"), std::string::npos);
}

TEST(Cli, AnalyzeEvaluateAndNoLabels) {
  lela::testing::TempDir dir;
  ASSERT_EQ(run_cli(dir, "gen-fixtures --videos 1 --out '" + (dir / "fx").string() + "'").exit_code, 0);
  const std::string rules = (dir / "fx/mock_rules.json").string();
  const std::string store = (dir / "store").string();
  CliResult r = run_cli(dir, "analyze --mock '" + rules + "' --manifest '" +
                                 (dir / "fx/manifests/synth-000.json").string() + "' --out '" + store + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json summary = json::parse(r.out);
  EXPECT_EQ(summary["http_requests"], 0);
  r = run_cli(dir, "evaluate --store '" + store + "' --run " + summary["run_id"].get<std::string>());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["roc_auc"], 1.0);

  json manifest = json::parse(lela::testing::slurp(dir / "fx/manifests/synth-000.json"));
  manifest.erase("ground_truth");
  lela::testing::spit(dir / "unlabeled.json", manifest.dump());
  r = run_cli(dir, "analyze --mock '" + rules + "' --manifest '" + (dir / "unlabeled.json").string() + "' --out '" +
                       store + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string unlabeled = json::parse(r.out)["run_id"];
  r = run_cli(dir, "evaluate --store '" + store + "' --run " + unlabeled);
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_EQ(error_kind(r), "no-labels");
}

TEST(Cli, GenFixturesIsByteStable) {
  lela::testing::TempDir dir;
  ASSERT_EQ(run_cli(dir, "gen-fixtures --seed 11 --videos 2 --noise 0.2 --out '" + (dir / "a").string() + "'").exit_code, 0);
  ASSERT_EQ(run_cli(dir, "gen-fixtures --seed 11 --videos 2 --noise 0.2 --out '" + (dir / "b").string() + "'").exit_code, 0);
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "a");
    EXPECT_EQ(lela::testing::slurp(entry.path()), lela::testing::slurp(dir / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 4);
}

TEST(Cli, UsageErrorsExitNonZero) {
  lela::testing::TempDir dir;
  EXPECT_NE(run_cli(dir, "analyze").exit_code, 0);
  EXPECT_NE(run_cli(dir, "frobnicate").exit_code, 0);
  const CliResult r = run_cli(dir, "serve --addr nonsense");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Cli, ServeAnswersHealthz) {
  lela::testing::TempDir dir;
  int pipe_fds[2];
  ASSERT_EQ(::pipe(pipe_fds), 0);
  const std::string store = (dir / "store").string();
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    ::dup2(pipe_fds[1], STDOUT_FILENO);
    ::close(pipe_fds[0]);
    ::execl(LELA_CLI, LELA_CLI, "serve", "--addr", "127.0.0.1:0", "--store", store.c_str(), nullptr);
    ::_exit(127);
  }
  ::close(pipe_fds[1]);
  std::string line;
  char c = 0;
  while (::read(pipe_fds[0], &c, 1) == 1 && c != '\n') line.push_back(c);
  ::close(pipe_fds[0]);
  const json listening = json::parse(line, nullptr, false);
  ASSERT_FALSE(listening.is_discarded()) << line;
  const std::string addr = listening["listening"];
  const int port = std::stoi(addr.substr(addr.rfind(':') + 1));

  httplib::Client client("127.0.0.1", port);
  const auto res = client.Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");

  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

}  // namespace
