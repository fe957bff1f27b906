#pragma once

#include <stdexcept>
#include <string>

namespace bookie {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes and the service onto HTTP status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The polynomial has no sign change that isolates a real root in the bracket.
class NoRealRootInBracket : public Error {
 public:
  using Error::Error;
};

// Engine calls made in the wrong protocol order.
class OutOfOrder : public Error {
 public:
  using Error::Error;
};

class GameOver : public Error {
 public:
  using Error::Error;
};

class InvalidBet : public Error {
 public:
  using Error::Error;
};

// Oracle enumeration would exceed its configured cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace bookie
