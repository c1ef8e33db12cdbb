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

#include "inconsist/protocol.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <future>
#include <map>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "inconsist/errors.hpp"

namespace inconsist {
namespace wire {
namespace {

using Json = nlohmann::ordered_json;

Json parse_object(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("invalid JSON (") + e.what() + ")",
                        std::string(line));
  }
  if (!j.is_object()) {
    throw ProtocolError("expected a JSON object", std::string(line));
  }
  return j;
}

std::optional<std::string> string_field(const Json& j, const char* key,
                                        std::string_view line) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (!it->is_string()) {
    throw ProtocolError(std::string("field '") + key + "' is not a string",
                        std::string(line));
  }
  return it->get<std::string>();
}

std::string require(const Json& j, const char* key, std::string_view line) {
  auto v = string_field(j, key, line);
  if (!v) {
    throw ProtocolError(std::string("missing field '") + key + "'",
                        std::string(line));
  }
  return *v;
}

}  // namespace

std::string serialize(const Request& request) {
  Json j;
  j["id"] = request.id;
  j["op"] = request.op == Op::kForward ? "forward" : "reverse";
  j["context"] = request.context;
  j[request.op == Op::kForward ? "variable" : "explanation"] = request.text;
  return j.dump();
}

std::string serialize(const Reply& reply) {
  Json j;
  j["id"] = reply.id;
  if (reply.error) {
    j["error"] = *reply.error;
    return j.dump();
  }
  if (reply.label) j["label"] = std::string(label_name(*reply.label));
  if (reply.explanation) j["explanation"] = *reply.explanation;
  if (reply.variable) j["variable"] = *reply.variable;
  return j.dump();
}

Request parse_request(std::string_view line) {
  const Json j = parse_object(line);
  Request r;
  r.id = require(j, "id", line);
  const std::string op = require(j, "op", line);
  r.context = require(j, "context", line);
  if (op == "forward") {
    r.op = Op::kForward;
    r.text = require(j, "variable", line);
  } else if (op == "reverse") {
    r.op = Op::kReverse;
    r.text = require(j, "explanation", line);
  } else {
    throw ProtocolError("unknown op '" + op + "'", std::string(line));
  }
  return r;
}

Reply parse_reply(std::string_view line) {
  const Json j = parse_object(line);
  Reply r;
  r.id = require(j, "id", line);
  r.error = string_field(j, "error", line);
  if (auto label = string_field(j, "label", line)) {
    r.label = parse_label(*label);
    if (!r.label) {
      throw ProtocolError("unknown label '" + *label + "'", std::string(line));
    }
  }
  r.explanation = string_field(j, "explanation", line);
  r.variable = string_field(j, "variable", line);
  return r;
}

std::optional<std::string> peek_id(std::string_view line) {
  try {
    const Json j = Json::parse(line);
    if (j.is_object() && j.contains("id") && j["id"].is_string()) {
      return j["id"].get<std::string>();
    }
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

}  // namespace wire

EndpointConfig EndpointConfig::parse(std::string_view address) {
  EndpointConfig c;
  c.address = std::string(address);
  if (address.rfind("http://", 0) == 0) c.transport = TransportKind::kHttp;
  return c;
}

void EndpointConfig::validate() const {
  if (address.empty()) throw ArgumentError("endpoint address is empty");
  if (timeout.count() <= 0) throw ArgumentError("endpoint timeout must be > 0");
  if (max_in_flight < 1) throw ArgumentError("max in-flight must be >= 1");
}

ModelClient::ModelClient(std::size_t max_in_flight)
    : max_in_flight_(max_in_flight) {
  if (max_in_flight_ < 1) throw ArgumentError("max in-flight must be >= 1");
}

wire::Reply ModelClient::call(wire::Op op, std::string_view context,
                              std::string_view text) {
  wire::Request request;
  request.id = "r" + std::to_string(next_id_++);
  request.op = op;
  request.context = std::string(context);
  request.text = std::string(text);
  const std::string line = wire::serialize(request);

  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
    std::size_t peak = peak_.load();
    while (in_flight_ > peak && !peak_.compare_exchange_weak(peak, in_flight_)) {
    }
  }
  struct Release {
    ModelClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};

  const std::string raw = exchange(request, line);
  wire::Reply reply = wire::parse_reply(raw);
  if (reply.id != request.id) {
    throw ProtocolError("reply id does not match request " + request.id, raw);
  }
  if (reply.error) throw ProtocolError("endpoint reported an error", raw);
  return reply;
}

ForwardResponse ModelClient::forward(std::string_view context,
                                     std::string_view variable) {
  wire::Reply reply = call(wire::Op::kForward, context, variable);
  if (!reply.label || !reply.explanation) {
    throw ProtocolError("forward reply lacks label or explanation",
                        wire::serialize(reply));
  }
  ForwardResponse r{*reply.label, Explanation(*reply.explanation)};
  if (r.explanation.tokens.empty()) {
    throw ProtocolError("forward reply has an empty explanation",
                        wire::serialize(reply));
  }
  return r;
}

ReverseResponse ModelClient::reverse(std::string_view context,
                                     std::string_view explanation) {
  wire::Reply reply = call(wire::Op::kReverse, context, explanation);
  if (!reply.variable || reply.variable->empty()) {
    throw ProtocolError("reverse reply lacks a variable",
                        wire::serialize(reply));
  }
  return ReverseResponse{*reply.variable};
}

namespace {

// Child process speaking the protocol on stdin/stdout. Replies are routed
// back to callers by request id, so they may arrive in any order.
class StdioClient : public ModelClient {
 public:
  explicit StdioClient(const EndpointConfig& config)
      : ModelClient(config.max_in_flight), timeout_(config.timeout) {
    ::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0 ||
        ::pipe2(from_child, O_CLOEXEC) != 0) {
      throw TransportError(std::string("pipe: ") + std::strerror(errno), false);
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      throw TransportError(std::string("fork: ") + std::strerror(errno), false);
    }
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", config.address.c_str(),
              static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    reader_ = std::thread([this] { read_loop(); });
  }

  ~StdioClient() override {
    {
      std::lock_guard lock(write_mu_);
      if (write_fd_ >= 0) ::close(write_fd_);
      write_fd_ = -1;
    }
    int status = 0;
    bool exited = false;
    for (int i = 0; i < 200 && !exited; ++i) {
      exited = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (!exited) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    reader_.join();
    ::close(read_fd_);
  }

 protected:
  std::string exchange(const wire::Request& request,
                       const std::string& line) override {
    std::future<std::string> reply;
    {
      std::lock_guard lock(pending_mu_);
      if (closed_) throw TransportError("endpoint has exited", false);
      reply = pending_[request.id].get_future();
    }
    {
      std::lock_guard lock(write_mu_);
      std::string buf = line + "\n";
      std::size_t off = 0;
      while (off < buf.size()) {
        const ssize_t n = ::write(write_fd_, buf.data() + off, buf.size() - off);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
          forget(request.id);
          throw TransportError("endpoint closed its input", false);
        }
        off += static_cast<std::size_t>(n);
      }
    }
    if (reply.wait_for(timeout_) != std::future_status::ready) {
      forget(request.id);
      throw TransportError("request " + request.id + " timed out", true);
    }
    return reply.get();
  }

 private:
  void forget(const std::string& id) {
    std::lock_guard lock(pending_mu_);
    pending_.erase(id);
  }

  void read_loop() {
    std::string buffer;
    char chunk[4096];
    while (true) {
      const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buffer.find('\n')) != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        deliver(std::move(line));
      }
    }
    std::lock_guard lock(pending_mu_);
    closed_ = true;
    for (auto& [id, promise] : pending_) {
      promise.set_exception(std::make_exception_ptr(
          TransportError("endpoint exited before replying to " + id, false)));
    }
    pending_.clear();
  }

  void deliver(std::string line) {
    auto id = wire::peek_id(line);
    std::lock_guard lock(pending_mu_);
    if (id) {
      auto it = pending_.find(*id);
      if (it != pending_.end()) {
        it->second.set_value(std::move(line));
        pending_.erase(it);
        return;
      }
    }
    // A reply nobody waits for (late after a timeout, or unparseable). An
    // unparseable line fails the oldest request so the caller sees it.
    if (!id && !pending_.empty()) {
      auto it = pending_.begin();
      it->second.set_exception(std::make_exception_ptr(
          ProtocolError("unparseable reply", std::move(line))));
      pending_.erase(it);
    }
  }

  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::mutex write_mu_;
  std::mutex pending_mu_;
  std::map<std::string, std::promise<std::string>> pending_;
  bool closed_ = false;
  std::thread reader_;
};

class HttpClient : public ModelClient {
 public:
  explicit HttpClient(const EndpointConfig& config)
      : ModelClient(config.max_in_flight), timeout_(config.timeout) {
    const std::string_view url = config.address;
    const std::size_t host_start = std::string_view("http://").size();
    const std::size_t slash = url.find('/', host_start);
    origin_ = std::string(url.substr(0, slash));
    path_ = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
    if (origin_.size() <= host_start) {
      throw ArgumentError("malformed endpoint URL " + config.address);
    }
  }

 protected:
  std::string exchange(const wire::Request& request,
                       const std::string& line) override {
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    auto res = client.Post(path_, line, "application/json");
    if (!res) {
      const auto err = res.error();
      throw TransportError("request " + request.id + " to " + origin_ +
                               " failed: " + httplib::to_string(err),
                           true);
    }
    if (res->status != 200) {
      throw ProtocolError("HTTP status " + std::to_string(res->status),
                          res->body);
    }
    std::string body = res->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) {
      body.pop_back();
    }
    return body;
  }

 private:
  std::chrono::milliseconds timeout_;
  std::string origin_;
  std::string path_;
};

}  // namespace

std::unique_ptr<ModelClient> connect(const EndpointConfig& config) {
  config.validate();
  if (config.transport == TransportKind::kHttp) {
    return std::make_unique<HttpClient>(config);
  }
  return std::make_unique<StdioClient>(config);
}

}  // namespace inconsist
