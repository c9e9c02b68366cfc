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

#include <httplib.h>

#include <thread>

#include "ovk/error.h"
#include "ovk/service.h"

namespace ovk::service {

struct HttpHost::Impl {
  Service& service;
  std::string host;
  int port;
  httplib::Server server;
  std::thread thread;
};

HttpHost::HttpHost(Service& service, std::string host, int port)
    : impl_(new Impl{service, std::move(host), port, {}, {}}) {
  for (std::string_view kind :
       {wire::StartAuthnRequest::kKind, wire::RegisterRequest::kKind,
        wire::EnrollRequest::kKind, wire::AuthnRequest::kKind}) {
    impl_->server.Post("/" + std::string(kind), [this](const httplib::Request& req,
                                                       httplib::Response& res) {
      wire::Frame reply;
      try {
        reply = impl_->service.handle(wire::decode(req.body, impl_->service.service_id()));
      } catch (const Error& e) {
        reply = wire::to_frame(wire::ErrorReply{std::string(e.name()), e.detail()});
      }
      res.set_content(wire::encode(reply), "application/json");
    });
  }
}

HttpHost::~HttpHost() { stop(); }

int HttpHost::start() {
  int port = impl_->port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->host);
  } else if (!impl_->server.bind_to_port(impl_->host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kTransportError,
                "cannot bind " + impl_->host + ":" + std::to_string(impl_->port));
  }
  impl_->port = port;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpHost::run() {
  if (!impl_->server.listen(impl_->host, impl_->port)) {
    throw Error(ErrorCode::kTransportError,
                "cannot listen on " + impl_->host + ":" + std::to_string(impl_->port));
  }
}

void HttpHost::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ovk::service
