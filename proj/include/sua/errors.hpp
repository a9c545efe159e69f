#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sua {

struct ModulusMismatchError : std::runtime_error {
  explicit ModulusMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a real value does not fit the fixed-point range. Carries the
// element index when the failure happened inside a vector operation.
struct EncodeOverflowError : std::runtime_error {
  size_t index;
  EncodeOverflowError(const std::string& what, size_t idx = 0)
      : std::runtime_error(what), index(idx) {}
};

struct ParamError : std::invalid_argument {
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

struct RoleError : std::runtime_error {
  explicit RoleError(const std::string& what) : std::runtime_error(what) {}
};

struct ProtocolViolation : std::runtime_error {
  explicit ProtocolViolation(const std::string& what) : std::runtime_error(what) {}
};

// A round stalled; `what` names the senders whose messages never arrived.
struct IncompleteRoundError : std::runtime_error {
  explicit IncompleteRoundError(const std::string& what) : std::runtime_error(what) {}
};

struct StateError : std::runtime_error {
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

struct ChannelError : std::runtime_error {
  explicit ChannelError(const std::string& what) : std::runtime_error(what) {}
};

struct AuthenticationError : ChannelError {
  explicit AuthenticationError(const std::string& what) : ChannelError(what) {}
};

struct KeyMismatchError : std::runtime_error {
  explicit KeyMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  size_t sample_index;
  NumericError(const std::string& what, size_t idx = 0)
      : std::runtime_error(what), sample_index(idx) {}
};

}  // namespace sua
