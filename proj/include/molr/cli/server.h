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
#ifndef MOLR_CLI_SERVER_H_
#define MOLR_CLI_SERVER_H_

#include <atomic>
#include <string>
#include <string_view>

#include "molr/cli/commands.h"

namespace molr {

// Answers one protocol line. "QUERY <user> <k>" gives "OK id:score ...";
// anything unparsable gives "ERR parse". Sets *quit on "QUIT".
std::string HandleRequestLine(const Retriever& retriever, std::string_view line,
                              bool* quit);

// Newline-delimited TCP server; one worker per connection from a pool of
// WorkerCount() threads.
class LineServer {
 public:
  // port 0 picks a free port. Throws Io when the socket cannot be bound.
  LineServer(const Retriever& retriever, int port);
  ~LineServer();
  LineServer(const LineServer&) = delete;
  LineServer& operator=(const LineServer&) = delete;

  int port() const noexcept { return port_; }

  // Blocks until Stop() is called.
  void Run();
  void Stop() { stop_.store(true); }

 private:
  void ServeConnection(int fd) const;

  const Retriever& retriever_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stop_{false};
};

void CmdServe(const RunConfig& config, std::ostream& out);

}  // namespace molr

#endif  // MOLR_CLI_SERVER_H_
