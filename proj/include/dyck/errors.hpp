#pragma once

#include <stdexcept>
#include <string>

namespace dyck {

enum class ErrorKind {
  ParseError,
  DuplicateEdge,
  BadLabelIndex,
  NotBidirected,
  AlreadyPresent,
  UnknownElement,
  NotDisjoint,
  PreconditionViolated,
  InvalidDecomposition,
  NotCoResident,
  UnknownNode,
  MixedLocalEdge,
  SplitCallSite,
  StaleSummary,
  InvalidSequence,
  UnknownTerminal,
};

/// Library-wide exception. `kind` is stable and suitable for dispatch;
/// the message is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

const char* to_string(ErrorKind kind);

} // namespace dyck
