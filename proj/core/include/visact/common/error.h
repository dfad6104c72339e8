// Copyright 2026 The visact Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace visact {

// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define VISACT_DEFINE_ERROR(Name)         \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

VISACT_DEFINE_ERROR(InvalidLayout);
VISACT_DEFINE_ERROR(Unachievable);
VISACT_DEFINE_ERROR(InvalidArgument);
VISACT_DEFINE_ERROR(ShapeMismatch);
VISACT_DEFINE_ERROR(NonFiniteValue);
VISACT_DEFINE_ERROR(GraphReuse);
VISACT_DEFINE_ERROR(CaptionTooLong);
VISACT_DEFINE_ERROR(UnknownVerbTemplate);
VISACT_DEFINE_ERROR(EmptyDataset);
VISACT_DEFINE_ERROR(EmptyTaskSet);
VISACT_DEFINE_ERROR(EmptyCorpus);
VISACT_DEFINE_ERROR(CorpusTooSmall);
VISACT_DEFINE_ERROR(EmptyInput);
VISACT_DEFINE_ERROR(HashMismatch);
VISACT_DEFINE_ERROR(MissingManifest);
VISACT_DEFINE_ERROR(DataFormatError);
VISACT_DEFINE_ERROR(CheckpointError);
VISACT_DEFINE_ERROR(ConfigError);

#undef VISACT_DEFINE_ERROR

// Value-or-error for operations whose failure is ordinary data (parse
// results, simulator preconditions) rather than a broken contract.
template <class T, class E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}  // NOLINT
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}  // NOLINT

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw Error("Result::value() called on an error");
    return std::get<0>(v_);
  }
  T& value() & {
    if (!ok()) throw Error("Result::value() called on an error");
    return std::get<0>(v_);
  }
  T&& value() && {
    if (!ok()) throw Error("Result::value() called on an error");
    return std::get<0>(std::move(v_));
  }
  const E& error() const {
    if (ok()) throw Error("Result::error() called on a value");
    return std::get<1>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace visact
