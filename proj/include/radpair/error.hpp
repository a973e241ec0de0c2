// Copyright 2026 The radpair Authors
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

#ifndef RADPAIR_ERROR_HPP
#define RADPAIR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace radpair {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model or argument (bad spin, non-finite coupling, empty axis, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Hilbert space larger than the configured cap.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Step size outside the stability or discretization guard.
class StepSizeError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (non-finite loss, non-finite state, ...).
class NumericsError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration rejected by the strict parser. `path()` names the
/// offending key, e.g. "/model/custom/nuclei/0/A_mT".
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace radpair

#endif  // RADPAIR_ERROR_HPP
