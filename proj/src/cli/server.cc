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
#include "molr/cli/server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <csignal>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>
#include <vector>

#include "molr/core/parallel.h"

namespace molr {
namespace {

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <typename T>
bool ParseUnsigned(std::string_view s, T* out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), *out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool WriteAll(int fd, const std::string& s) {
  size_t off = 0;
  while (off < s.size()) {
    const ssize_t n = ::send(fd, s.data() + off, s.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<size_t>(n);
  }
  return true;
}

std::atomic<LineServer*> g_server{nullptr};

void HandleSignal(int) {
  if (LineServer* s = g_server.load()) s->Stop();
}

}  // namespace

std::string HandleRequestLine(const Retriever& retriever, std::string_view line,
                              bool* quit) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.remove_suffix(1);
  }
  const auto tok = Tokens(line);
  if (tok.size() == 1 && tok[0] == "QUIT") {
    if (quit) *quit = true;
    return "OK bye";
  }
  uint32_t user = 0;
  size_t k = 0;
  if (tok.size() != 3 || tok[0] != "QUERY" || !ParseUnsigned(tok[1], &user) ||
      !ParseUnsigned(tok[2], &k)) {
    return "ERR parse";
  }
  if (user >= retriever.num_users()) return "ERR unknown user";
  if (k == 0 || k > retriever.num_items()) return "ERR k out of range";
  try {
    const auto top = retriever.Query(user, k);
    std::string reply = "OK";
    char buf[64];
    for (const auto& s : top) {
      reply += ' ';
      reply += std::to_string(s.id);
      reply += ':';
      const auto r = std::to_chars(buf, buf + sizeof(buf), s.score);
      reply.append(buf, r.ptr);
    }
    return reply;
  } catch (const std::exception&) {
    return "ERR internal";
  }
}

LineServer::LineServer(const Retriever& retriever, int port) : retriever_(retriever) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::kIo, "socket failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 256) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    throw Error(ErrorCode::kIo, "cannot listen on port " + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

LineServer::~LineServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void LineServer::ServeConnection(int fd) const {
  std::string buf;
  char chunk[4096];
  bool quit = false;
  while (!quit && !stop_.load()) {
    pollfd p{fd, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buf.append(chunk, static_cast<size_t>(n));
    size_t nl;
    while (!quit && (nl = buf.find('\n')) != std::string::npos) {
      const std::string line = buf.substr(0, nl);
      buf.erase(0, nl + 1);
      if (!WriteAll(fd, HandleRequestLine(retriever_, line, &quit) + "\n")) {
        quit = true;
      }
    }
    if (buf.size() > (1u << 16)) {
      WriteAll(fd, "ERR parse\n");
      break;
    }
  }
  ::close(fd);
}

void LineServer::Run() {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<int> pending;
  bool done = false;
  const size_t workers = std::max<size_t>(1, WorkerCount());
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        int fd;
        {
          std::unique_lock lock(mu);
          cv.wait(lock, [&] { return done || !pending.empty(); });
          if (pending.empty()) return;
          fd = pending.front();
          pending.pop_front();
        }
        ServeConnection(fd);
      }
    });
  }
  while (!stop_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    {
      std::lock_guard lock(mu);
      pending.push_back(fd);
    }
    cv.notify_one();
  }
  {
    std::lock_guard lock(mu);
    done = true;
    for (const int fd : pending) ::close(fd);
    pending.clear();
  }
  cv.notify_all();
  for (auto& t : pool) t.join();
}

void CmdServe(const RunConfig& config, std::ostream& out) {
  const Retriever retriever = LoadRetriever(config);
  LineServer server(retriever, config.port);
  out << "listening\t" << server.port() << std::endl;
  g_server.store(&server);
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  server.Run();
  g_server.store(nullptr);
}

}  // namespace molr
