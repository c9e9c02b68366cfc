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

#include "ovk/error.h"

#include <array>
#include <utility>

namespace ovk {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 28> kNames = {{
    {ErrorCode::kInvalidInput, "InvalidInput"},
    {ErrorCode::kInternalError, "InternalError"},
    {ErrorCode::kParseError, "ParseError"},
    {ErrorCode::kAuthFailure, "AuthFailure"},
    {ErrorCode::kInvalidPoint, "InvalidPoint"},
    {ErrorCode::kDeviceLocked, "DeviceLocked"},
    {ErrorCode::kProtocolOrder, "ProtocolOrder"},
    {ErrorCode::kUntrustedAttestation, "UntrustedAttestation"},
    {ErrorCode::kWrongService, "WrongService"},
    {ErrorCode::kEpochOrder, "EpochOrder"},
    {ErrorCode::kNoMatchingSeed, "NoMatchingSeed"},
    {ErrorCode::kConsentRequired, "ConsentRequired"},
    {ErrorCode::kDuplicateUser, "DuplicateUser"},
    {ErrorCode::kUnknownAccount, "UnknownAccount"},
    {ErrorCode::kMalformedMetadata, "MalformedMetadata"},
    {ErrorCode::kNLimitExceeded, "NLimitExceeded"},
    {ErrorCode::kBadOwnershipSignature, "BadOwnershipSignature"},
    {ErrorCode::kMigrationInProgress, "MigrationInProgress"},
    {ErrorCode::kBadSignature, "BadSignature"},
    {ErrorCode::kStaleChallenge, "StaleChallenge"},
    {ErrorCode::kRevokedCredential, "RevokedCredential"},
    {ErrorCode::kBadUpdateSignature, "BadUpdateSignature"},
    {ErrorCode::kCorruptStore, "CorruptStore"},
    {ErrorCode::kUnknownKind, "UnknownKind"},
    {ErrorCode::kInvariantViolation, "InvariantViolation"},
    {ErrorCode::kTransportError, "TransportError"},
    {ErrorCode::kScenarioParse, "ScenarioParse"},
    {ErrorCode::kAssertionFailed, "AssertionFailed"},
}};

}  // namespace

std::string_view error_name(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "InternalError";
}

std::optional<ErrorCode> error_from_name(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) +
                         (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(detail) {}

}  // namespace ovk
