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

#ifndef OVK_ERROR_H_
#define OVK_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ovk {

// Every failure the library reports carries one of these codes. The names
// returned by error_name() are part of the wire format (error frames) and of
// the CLI contract (printed on stderr), so they must stay stable.
enum class ErrorCode {
  kInvalidInput,
  kInternalError,
  kParseError,
  kAuthFailure,
  kInvalidPoint,
  kDeviceLocked,
  kProtocolOrder,
  kUntrustedAttestation,
  kWrongService,
  kEpochOrder,
  kNoMatchingSeed,
  kConsentRequired,
  kDuplicateUser,
  kUnknownAccount,
  kMalformedMetadata,
  kNLimitExceeded,
  kBadOwnershipSignature,
  kMigrationInProgress,
  kBadSignature,
  kStaleChallenge,
  kRevokedCredential,
  kBadUpdateSignature,
  kCorruptStore,
  kUnknownKind,
  kInvariantViolation,
  kTransportError,
  kScenarioParse,
  kAssertionFailed,
};

std::string_view error_name(ErrorCode code);
std::optional<ErrorCode> error_from_name(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ovk

#endif  // OVK_ERROR_H_
