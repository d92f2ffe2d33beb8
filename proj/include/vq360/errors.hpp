// Copyright 2026 The vq360 Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQ360_ERRORS_HPP_
#define VQ360_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vq360 {

// Root of all domain errors. The CLI maps these to exit code 1; anything
// else escaping to main is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- stream / file parsing ---

class ParseError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what, int frame_index = -1)
      : Error(what), frame_index_(frame_index) {}
  int frame_index() const { return frame_index_; }

 private:
  int frame_index_;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

// --- geometry / argument contracts ---

class InvalidDimensions : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InsufficientFrames : public Error {
 public:
  using Error::Error;
};

// --- external tools ---

class ToolNotFound : public Error {
 public:
  using Error::Error;
};

class NonZeroExit : public Error {
 public:
  NonZeroExit(const std::string& what, int exit_code, std::string output)
      : Error(what), exit_code_(exit_code), output_(std::move(output)) {}
  int exit_code() const { return exit_code_; }
  const std::string& output() const { return output_; }

 private:
  int exit_code_;
  std::string output_;
};

class LogParseError : public Error {
 public:
  using Error::Error;
};

class EncodeError : public Error {
 public:
  using Error::Error;
};

// --- curve / anchor selection ---

class CurveError : public Error {
 public:
  using Error::Error;
};

class NoReferenceError : public Error {
 public:
  NoReferenceError(const std::string& what, double max_score)
      : Error(what), max_score_(max_score) {}
  double max_score() const { return max_score_; }

 private:
  double max_score_;
};

class DegenerateAnchors : public Error {
 public:
  using Error::Error;
};

// --- subjective statistics ---

class InsufficientVotes : public Error {
 public:
  using Error::Error;
};

class InvalidRating : public Error {
 public:
  using Error::Error;
};

class MissingReference : public Error {
 public:
  explicit MissingReference(const std::string& what, std::string subject_id)
      : Error(what), subject_id_(std::move(subject_id)) {}
  const std::string& subject_id() const { return subject_id_; }

 private:
  std::string subject_id_;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class MissingCell : public Error {
 public:
  using Error::Error;
};

// --- playlist / report ---

class InfeasiblePool : public Error {
 public:
  using Error::Error;
};

class MismatchedSeries : public Error {
 public:
  using Error::Error;
};

}  // namespace vq360

#endif  // VQ360_ERRORS_HPP_
