// Copyright 2026 The Inconsist Authors.
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

#ifndef INCONSIST_PROTOCOL_HPP_
#define INCONSIST_PROTOCOL_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "inconsist/esnli.hpp"

namespace inconsist {

struct ForwardResponse {
  NliLabel label = NliLabel::kNeutral;
  Explanation explanation;

  friend bool operator==(const ForwardResponse& a, const ForwardResponse& b) {
    return a.label == b.label && a.explanation.raw == b.explanation.raw;
  }
};

struct ReverseResponse {
  std::string variable;
};

// Newline-delimited JSON messages exchanged with model endpoints.
namespace wire {

enum class Op { kForward, kReverse };

struct Request {
  std::string id;
  Op op = Op::kForward;
  std::string context;
  // The hypothesis for kForward, the explanation for kReverse.
  std::string text;

  friend bool operator==(const Request&, const Request&) = default;
};

struct Reply {
  std::string id;
  std::optional<NliLabel> label;
  std::optional<std::string> explanation;
  std::optional<std::string> variable;
  std::optional<std::string> error;

  friend bool operator==(const Reply&, const Reply&) = default;
};

// Single line, no trailing newline, fixed key order.
std::string serialize(const Request& request);
std::string serialize(const Reply& reply);

// Throw ProtocolError carrying the line.
Request parse_request(std::string_view line);
Reply parse_reply(std::string_view line);

// Best-effort id extraction from a line that failed to parse.
std::optional<std::string> peek_id(std::string_view line);

}  // namespace wire

enum class TransportKind { kStdio, kHttp };

struct EndpointConfig {
  TransportKind transport = TransportKind::kStdio;
  // Shell command for kStdio, http://host:port/path for kHttp.
  std::string address;
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 8;

  // "http://..." selects HTTP, anything else is a command line.
  static EndpointConfig parse(std::string_view address);
  void validate() const;
};

// Client side of the wire protocol. Thread-safe; at most max_in_flight
// requests are outstanding at once.
class ModelClient {
 public:
  explicit ModelClient(std::size_t max_in_flight);
  virtual ~ModelClient() = default;

  ModelClient(const ModelClient&) = delete;
  ModelClient& operator=(const ModelClient&) = delete;

  ForwardResponse forward(std::string_view context, std::string_view variable);
  ReverseResponse reverse(std::string_view context,
                          std::string_view explanation);

  std::size_t max_in_flight() const { return max_in_flight_; }
  // Highest number of simultaneously outstanding requests seen so far.
  std::size_t peak_in_flight() const { return peak_; }

 protected:
  // Sends one serialized request line and returns the raw reply line.
  virtual std::string exchange(const wire::Request& request,
                               const std::string& line) = 0;

 private:
  wire::Reply call(wire::Op op, std::string_view context,
                   std::string_view text);

  std::size_t max_in_flight_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
  std::atomic<std::size_t> peak_{0};
  std::atomic<std::uint64_t> next_id_{0};
};

// Passes request lines to an in-process handler.
class LoopbackClient : public ModelClient {
 public:
  using Handler = std::function<std::string(std::string_view)>;
  LoopbackClient(Handler handler, std::size_t max_in_flight = 8)
      : ModelClient(max_in_flight), handler_(std::move(handler)) {}

 protected:
  std::string exchange(const wire::Request&, const std::string& line) override {
    return handler_(line);
  }

 private:
  Handler handler_;
};

// Opens a client for the configured transport. A stdio endpoint spawns the
// command immediately.
std::unique_ptr<ModelClient> connect(const EndpointConfig& config);

}  // namespace inconsist

#endif  // INCONSIST_PROTOCOL_HPP_
