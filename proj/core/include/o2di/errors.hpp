#pragma once

#include <stdexcept>
#include <string>

namespace o2di {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or non-canonical encodings.
class DecodeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSecurityLevel : public Error {
 public:
  using Error::Error;
};

// GenProof saw a challenge with e(c2, g) != e(c1, Lambda) and aborted.
class InconsistentChallenge : public Error {
 public:
  InconsistentChallenge() : Error("challenge failed the consistency check e(c2,g) = e(c1,Lambda)") {}
};

// A block vector does not fit the configured block count or file capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class UnknownReplica : public Error {
 public:
  explicit UnknownReplica(const std::string& id) : Error("unknown replica id: " + id) {}
};

class DuplicateReplica : public Error {
 public:
  explicit DuplicateReplica(const std::string& id) : Error("replica id already cached: " + id) {}
};

// Raised by the transport layer when a server answered with an ERROR frame
// or could not be reached; kept distinct from a failed verification.
class TransportError : public Error {
 public:
  using Error::Error;
};

class PoolExhausted : public Error {
 public:
  PoolExhausted() : Error("pre-challenge pool exhausted; refill with offline_challenge") {}
};

}  // namespace o2di
