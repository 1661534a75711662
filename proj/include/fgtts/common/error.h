// Copyright (c) 2026 The fgtts Authors
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

#ifndef FGTTS_COMMON_ERROR_H_
#define FGTTS_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace fgtts {

// Root of every error raised by the library. The CLI maps UsageError to exit
// code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

class InvalidSpec : public Error {
 public:
  explicit InvalidSpec(const std::string& what) : Error(what) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class ConfigError : public UsageError {
 public:
  explicit ConfigError(const std::string& what) : UsageError(what) {}
};

class FeatureFileError : public Error {
 public:
  explicit FeatureFileError(const std::string& what) : Error(what) {}
};

class ManifestError : public Error {
 public:
  ManifestError(const std::string& utt_id, const std::string& what)
      : Error(utt_id.empty() ? what : utt_id + ": " + what), utt_id_(utt_id) {}
  const std::string& utt_id() const { return utt_id_; }

 private:
  std::string utt_id_;
};

class EmptyText : public Error {
 public:
  EmptyText() : Error("empty text") {}
};

class UnknownSymbol : public Error {
 public:
  UnknownSymbol(const std::string& symbol, size_t position)
      : Error("unknown symbol '" + symbol + "' at position " +
              std::to_string(position)),
        symbol_(symbol),
        position_(position) {}
  const std::string& symbol() const { return symbol_; }
  size_t position() const { return position_; }

 private:
  std::string symbol_;
  size_t position_;
};

class EmptyOutput : public Error {
 public:
  EmptyOutput() : Error("durations sum to zero frames") {}
};

class ReferenceTooShort : public Error {
 public:
  explicit ReferenceTooShort(int min_frames)
      : Error("reference shorter than " + std::to_string(min_frames) +
              " frames"),
        min_frames_(min_frames) {}
  int min_frames() const { return min_frames_; }

 private:
  int min_frames_;
};

class MissingDurations : public Error {
 public:
  explicit MissingDurations(const std::string& utt_id)
      : Error("utterance '" + utt_id + "' has no durations") {}
};

class DimMismatch : public Error {
 public:
  explicit DimMismatch(const std::string& what) : Error(what) {}
};

class CorruptCheckpoint : public Error {
 public:
  explicit CorruptCheckpoint(const std::string& what) : Error(what) {}
};

class StageMismatch : public Error {
 public:
  explicit StageMismatch(const std::string& what) : Error(what) {}
};

// Raised by metrics that are not defined for the given input, e.g. a
// standard deviation over fewer than two tokens.
class Undefined : public Error {
 public:
  explicit Undefined(const std::string& metric)
      : Error("metric undefined: " + metric), metric_(metric) {}
  const std::string& metric() const { return metric_; }

 private:
  std::string metric_;
};

}  // namespace fgtts

#endif  // FGTTS_COMMON_ERROR_H_
