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

#include "ovk/wire/transport.h"

#include <httplib.h>

namespace ovk::wire {

void TrafficLog::record(std::string channel, std::string bytes) {
  std::lock_guard lock(mu_);
  entries_.push_back({std::move(channel), std::move(bytes)});
}

std::vector<TrafficLog::Entry> TrafficLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t TrafficLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void TrafficLog::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

LoopbackTransport::LoopbackTransport(FrameHandler handler, std::string origin,
                                     std::shared_ptr<TrafficLog> log)
    : handler_(std::move(handler)), origin_(std::move(origin)), log_(std::move(log)) {}

Frame LoopbackTransport::exchange(const Frame& request) {
  std::string up = encode(request);
  if (log_) log_->record("device->service", up);
  Frame reply = handler_(decode(up, origin_));
  std::string down = encode(reply);
  if (log_) log_->record("service->device", down);
  return decode(down, origin_);
}

HttpTransport::HttpTransport(std::string host, int port, std::string origin,
                             std::shared_ptr<TrafficLog> log)
    : host_(std::move(host)), port_(port), origin_(std::move(origin)), log_(std::move(log)) {}

Frame HttpTransport::exchange(const Frame& request) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(5);
  client.set_read_timeout(30);
  std::string up = encode(request);
  if (log_) log_->record("device->service", up);
  auto res = client.Post("/" + request.kind, up, "application/json");
  if (!res) {
    throw Error(ErrorCode::kTransportError,
                "POST /" + request.kind + ": " + httplib::to_string(res.error()));
  }
  if (log_) log_->record("service->device", res->body);
  return decode(res->body, origin_);
}

template <typename Reply, typename Request>
Reply ServiceClient::call(const Request& request) {
  Frame reply = transport_.exchange(to_frame(request));
  if (reply.kind == ErrorReply::kKind) {
    auto err = from_frame<ErrorReply>(reply);
    throw Error(error_from_name(err.code).value_or(ErrorCode::kInternalError),
                err.message);
  }
  return from_frame<Reply>(reply);
}

StartAuthnResponse ServiceClient::start_authn(const StartAuthnRequest& request) {
  return call<StartAuthnResponse>(request);
}

AccountCreated ServiceClient::register_account(const RegisterRequest& request) {
  return call<AccountCreated>(request);
}

KeyBound ServiceClient::enroll(const EnrollRequest& request) {
  return call<KeyBound>(request);
}

SessionGranted ServiceClient::authn(const AuthnRequest& request) {
  return call<SessionGranted>(request);
}

}  // namespace ovk::wire
