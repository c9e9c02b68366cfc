// Copyright 2026 The OVK Authors
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

#ifndef OVK_WIRE_TRANSPORT_H_
#define OVK_WIRE_TRANSPORT_H_

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ovk/wire/frame.h"

namespace ovk::wire {

// Every serialized frame observed on a channel, in order. Used by tests to
// sweep traffic for secrets.
class TrafficLog {
 public:
  struct Entry {
    std::string channel;  // e.g. "device->service", "seed-round"
    std::string bytes;
  };

  void record(std::string channel, std::string bytes);
  std::vector<Entry> entries() const;
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

using FrameHandler = std::function<Frame(const Frame&)>;

class Transport {
 public:
  virtual ~Transport() = default;
  // The service identifier the channel authenticated.
  virtual const std::string& origin() const = 0;
  // Sends a request frame and returns the reply. Throws TransportError when
  // the channel fails; error replies come back as frames.
  virtual Frame exchange(const Frame& request) = 0;
};

// In-process transport. Both directions go through encode/decode so the
// handler only ever sees what would have crossed a real wire.
class LoopbackTransport final : public Transport {
 public:
  LoopbackTransport(FrameHandler handler, std::string origin,
                    std::shared_ptr<TrafficLog> log = nullptr);

  const std::string& origin() const override { return origin_; }
  Frame exchange(const Frame& request) override;

 private:
  FrameHandler handler_;
  std::string origin_;
  std::shared_ptr<TrafficLog> log_;
};

// POSTs the encoded frame to /<kind> on host:port.
class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string host, int port, std::string origin,
                std::shared_ptr<TrafficLog> log = nullptr);

  const std::string& origin() const override { return origin_; }
  Frame exchange(const Frame& request) override;

 private:
  std::string host_;
  int port_;
  std::string origin_;
  std::shared_ptr<TrafficLog> log_;
};

// Typed calls on top of a transport. Error replies are rethrown as Error
// with the code the service reported.
class ServiceClient {
 public:
  explicit ServiceClient(Transport& transport) : transport_(transport) {}

  const std::string& origin() const { return transport_.origin(); }

  StartAuthnResponse start_authn(const StartAuthnRequest& request);
  AccountCreated register_account(const RegisterRequest& request);
  KeyBound enroll(const EnrollRequest& request);
  SessionGranted authn(const AuthnRequest& request);

 private:
  template <typename Reply, typename Request>
  Reply call(const Request& request);

  Transport& transport_;
};

}  // namespace ovk::wire

#endif  // OVK_WIRE_TRANSPORT_H_
