// Copyright 2026 The mdclean Authors.
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

#ifndef MDCLEAN_ERROR_H_
#define MDCLEAN_ERROR_H_

#include <stdexcept>
#include <string>

namespace mdclean {

// Broad error classes; the CLI maps each to an exit status.
enum class ErrorClass {
  kValidation,  // malformed or inconsistent input
  kSemantic,    // well-formed input the requested operation cannot handle
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass error_class, std::string code, const std::string &message)
      : std::runtime_error(message),
        error_class_(error_class),
        code_(std::move(code)) {}

  ErrorClass error_class() const { return error_class_; }

  // Short machine-readable name, e.g. "SemilatticeViolation".
  const std::string &code() const { return code_; }

 private:
  ErrorClass error_class_;
  std::string code_;
};

// Syntax error in one of the textual input languages.
class ParseError : public Error {
 public:
  ParseError(std::string source, int line, int column,
             const std::string &message)
      : Error(ErrorClass::kValidation, "ParseError",
              source + ":" + std::to_string(line) + ":" +
                  std::to_string(column) + ": " + message),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string &source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string source_;
  int line_;
  int column_;
};

#define MDCLEAN_DEFINE_ERROR(Name, Class)                  \
  class Name : public Error {                              \
   public:                                                 \
    explicit Name(const std::string &message)              \
        : Error(ErrorClass::Class, #Name, message) {}      \
  };

MDCLEAN_DEFINE_ERROR(ValidationError, kValidation)
MDCLEAN_DEFINE_ERROR(SemilatticeViolation, kValidation)
MDCLEAN_DEFINE_ERROR(UnknownDomain, kValidation)
MDCLEAN_DEFINE_ERROR(UnknownRelation, kValidation)
MDCLEAN_DEFINE_ERROR(UndefinedMatch, kSemantic)
MDCLEAN_DEFINE_ERROR(PreconditionViolation, kSemantic)
MDCLEAN_DEFINE_ERROR(StepLimitExceeded, kSemantic)
MDCLEAN_DEFINE_ERROR(InstanceTooLarge, kSemantic)
MDCLEAN_DEFINE_ERROR(NotStratifiable, kSemantic)
MDCLEAN_DEFINE_ERROR(UnboundBuiltin, kSemantic)
MDCLEAN_DEFINE_ERROR(NotSci, kSemantic)
MDCLEAN_DEFINE_ERROR(EmptyCleanSet, kSemantic)
MDCLEAN_DEFINE_ERROR(IoError, kIo)

#undef MDCLEAN_DEFINE_ERROR

}  // namespace mdclean

#endif  // MDCLEAN_ERROR_H_
