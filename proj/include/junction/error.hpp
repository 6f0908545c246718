// Copyright 2026 The Junction Authors
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

#ifndef JUNCTION__ERROR_HPP_
#define JUNCTION__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace junction
{

enum class ErrorCode {
  kInvalidArgument,
  kConfig,
  kIo,
  kMetadataMismatch,
  kInconsistentEvidence,
  kEmptyCorpus,
  kUnknownCase,
};

/// Exception carrying a machine-readable code; the C API maps it onto jn_status.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message) : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace junction

#endif  // JUNCTION__ERROR_HPP_
