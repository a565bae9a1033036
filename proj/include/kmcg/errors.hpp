#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kmcg {

// Malformed documents, invariant violations in inputs, out-of-range indices.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bounded search ran out of budget before reaching a verdict.  Exhaustion
// is reported, never silently converted into an answer.
struct ExhaustedError : std::runtime_error {
  ExhaustedError(std::string stage_, long long cap_, const std::string& what_)
      : std::runtime_error(what_), stage(std::move(stage_)), cap(cap_) {}
  std::string stage;
  long long cap;
};

// A truncated tree automorphism does not carry enough depth for the request.
struct InsufficientDepthError : std::runtime_error {
  InsufficientDepthError(int required_, int available_, const std::string& what_)
      : std::runtime_error(what_), required(required_), available(available_) {}
  int required;
  int available;
};

// An internal cross-check failed; emitting a result would be unsound.
struct VerificationError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace kmcg
