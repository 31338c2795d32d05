// Copyright 2026 The molr Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "molr/cli/commands.h"
#include "molr/cli/run_config.h"
#include "molr/cli/server.h"
#include "molr/core/error.h"
#include "molr/mol/item_cache.h"

namespace molr {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd = std::string(MOLR_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// A trained toy pipeline shared by the subprocess tests.
class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("molr_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream cfg(Config());
    cfg << "synthetic = true\nsynth_users = 120\nsynth_items = 90\nsynth_rank = 4\n"
        << "synth_per_user = 8\n"
        << "dataset = " << (dir_ / "data.csv").string() << "\n"
        << "checkpoint = " << (dir_ / "model.ckpt").string() << "\n"
        << "cache = " << (dir_ / "items.cache").string() << "\n"
        << "k_u = 2\nk_x = 2\nd = 4\ngating_hidden = 8\nuser_dim = 8\nitem_dim = 8\n"
        << "proj_hidden = 16\ntau = 1\nepochs = 1\nbatch_size = 64\nnum_negatives = 16\n"
        << "k_prime = 30\nbench_k_primes = 10,30,60,90\nbench_queries = 30\n";
    cfg.close();
    for (const char* cmd : {"ingest", "train", "build-index"}) {
      const auto r = RunCli(std::string(cmd) + " --config " + Config().string());
      ASSERT_EQ(r.code, 0) << cmd << ": " << r.out;
    }
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static fs::path Config() { return dir_ / "run.cfg"; }

  static fs::path dir_;
};

fs::path Pipeline::dir_;

TEST(RunConfig, ParsesAndRejects) {
  std::istringstream good("# comment\nk_u = 3\n\nmodel = dot\nlr = 0.01\neval_ks = 1,5\n");
  const auto c = ParseRunConfig(good);
  EXPECT_EQ(c.model.tower.mol.k_u, 3u);
  EXPECT_EQ(c.model.kind, ModelKind::kDot);
  EXPECT_EQ(c.train.lr, 0.01);
  EXPECT_EQ(c.eval_ks, (std::vector<size_t>{1, 5}));
  std::istringstream unknown("k_u = 3\nbogus = 1\n");
  try {
    ParseRunConfig(unknown);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::istringstream dup("k_u = 3\nk_u = 4\n");
  EXPECT_THROW(ParseRunConfig(dup), Error);
  std::istringstream bad_value("k_u = three\n");
  EXPECT_THROW(ParseRunConfig(bad_value), Error);
  EXPECT_THROW(LoadRunConfig("/nonexistent/run.cfg"), Error);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kConfig), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kParseError), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kMissingArtifact), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kFormat), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kIo), 4);
}

TEST_F(Pipeline, UsageAndMissingArtifactExitCodes) {
  EXPECT_EQ(RunCli("query").code, 2);
  EXPECT_EQ(RunCli("no-such-command --config x").code, 2);
  EXPECT_EQ(RunCli("query --config /nonexistent/run.cfg").code, 3);
  const fs::path bad = dir_ / "bad.cfg";
  std::ofstream(bad) << "bogus_key = 1\n";
  EXPECT_EQ(RunCli("query --config " + bad.string()).code, 2);
  const fs::path missing = dir_ / "missing.cfg";
  std::ofstream(missing) << "checkpoint = " << (dir_ / "none.ckpt").string() << "\n"
                         << "cache = " << (dir_ / "none.cache").string() << "\n";
  EXPECT_EQ(RunCli("query --config " + missing.string() + " --user 0").code, 3);
  EXPECT_EQ(RunCli("query --config " + Config().string() + " --user 100000").code, 2);
}

TEST_F(Pipeline, QueryIsByteIdenticalAndExhaustiveAtFullKPrime) {
  const std::string base = "query --config " + Config().string() + " --user 3 --k 5";
  const auto a = RunCli(base + " --seed 7");
  const auto b = RunCli(base + " --seed 7");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 5);
  EXPECT_EQ(a.out.substr(0, 2), "1\t");
  const auto full = RunCli(base + " --k-prime 90");
  ASSERT_EQ(full.code, 0);
  const Retriever r = LoadRetriever(LoadRunConfig(Config()));
  const auto ex = r.QueryExhaustive(3, 5);
  std::istringstream lines(full.out);
  for (size_t i = 0; i < ex.size(); ++i) {
    size_t rank;
    uint32_t id;
    float score;
    ASSERT_TRUE(lines >> rank >> id >> score);
    EXPECT_EQ(rank, i + 1);
    EXPECT_EQ(id, ex[i].id);
    EXPECT_FLOAT_EQ(score, ex[i].score);
  }
}

TEST_F(Pipeline, BenchCsv) {
  const auto r = RunCli("bench --config " + Config().string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k_prime,recall,qps");
  double prev = -1, recall = 0;
  size_t rows = 0, k_prime = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    char comma;
    double qps;
    ASSERT_TRUE(row >> k_prime >> comma >> recall >> comma >> qps) << line;
    EXPECT_GE(recall, prev);
    prev = recall;
    ++rows;
  }
  EXPECT_EQ(rows, 4u);
  EXPECT_EQ(k_prime, 90u);
  EXPECT_EQ(recall, 1.0);
}

TEST_F(Pipeline, EvalRankAndCostCommands) {
  const auto e = RunCli("eval --config " + Config().string());
  ASSERT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("hr@10 = "), std::string::npos);
  EXPECT_NE(e.out.find("mrr = "), std::string::npos);
  const auto rk = RunCli("rank-analysis --config " + Config().string());
  ASSERT_EQ(rk.code, 0);
  EXPECT_NE(rk.out.find("numeric_rank"), std::string::npos);
  const auto c = RunCli("cost-estimate --config " + Config().string());
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("gating_flops"), std::string::npos);
}

TEST_F(Pipeline, RequestLines) {
  const Retriever r = LoadRetriever(LoadRunConfig(Config()));
  bool quit = false;
  EXPECT_EQ(HandleRequestLine(r, "hello", &quit), "ERR parse");
  EXPECT_EQ(HandleRequestLine(r, "QUERY 1", &quit), "ERR parse");
  EXPECT_EQ(HandleRequestLine(r, "QUERY -1 3", &quit), "ERR parse");
  EXPECT_EQ(HandleRequestLine(r, "QUERY 100000 3", &quit), "ERR unknown user");
  EXPECT_EQ(HandleRequestLine(r, "QUERY 1 0", &quit), "ERR k out of range");
  EXPECT_FALSE(quit);
  const std::string ok = HandleRequestLine(r, "QUERY 1 3\r", &quit);
  EXPECT_EQ(ok.substr(0, 3), "OK ");
  EXPECT_EQ(std::count(ok.begin(), ok.end(), ':'), 3);
  const auto top = r.Query(1, 3);
  EXPECT_EQ(ok.substr(3, ok.find(':') - 3), std::to_string(top[0].id));
  EXPECT_EQ(HandleRequestLine(r, "QUIT", &quit), "OK bye");
  EXPECT_TRUE(quit);
}

TEST(Server, OneItemCorpus) {
  TowerConfig tc;
  tc.n_users = 2;
  tc.n_items = 1;
  tc.user_dim = 4;
  tc.item_dim = 4;
  tc.proj_hidden = 4;
  tc.mol.k_u = 2;
  tc.mol.k_x = 2;
  tc.mol.d = 3;
  tc.mol.gating_hidden = 4;
  Rng rng(1);
  auto params = InitParams<float>(tc, rng);
  auto cache = BuildItemCache(params);
  HIndexerConfig h;
  h.k_prime = 1;
  const Retriever r(params, cache, h, 0);
  bool quit = false;
  const std::string reply = HandleRequestLine(r, "QUERY 0 1", &quit);
  EXPECT_EQ(reply.substr(0, 5), "OK 0:");
  EXPECT_EQ(r.Query(0, 1).front().id, 0u);
}

std::string Exchange(int port, const std::string& request) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    return "connect failed";
  }
  const std::string msg = request + "\nQUIT\n";
  ::send(fd, msg.data(), msg.size(), MSG_NOSIGNAL);
  std::string got;
  char buf[4096];
  ssize_t n;
  while ((n = ::recv(fd, buf, sizeof(buf), 0)) > 0) got.append(buf, static_cast<size_t>(n));
  ::close(fd);
  return got;
}

TEST_F(Pipeline, HundredConcurrentConnectionsAgree) {
  const Retriever r = LoadRetriever(LoadRunConfig(Config()));
  LineServer server(r, 0);
  std::thread loop([&] { server.Run(); });
  std::vector<std::string> replies(100);
  std::vector<std::thread> clients;
  for (size_t i = 0; i < replies.size(); ++i) {
    clients.emplace_back([&, i] { replies[i] = Exchange(server.port(), "QUERY 5 7"); });
  }
  for (auto& t : clients) t.join();
  server.Stop();
  loop.join();
  const std::string expect = HandleRequestLine(r, "QUERY 5 7", nullptr) + "\nOK bye\n";
  for (const auto& got : replies) EXPECT_EQ(got, expect);
}

}  // namespace
}  // namespace molr
