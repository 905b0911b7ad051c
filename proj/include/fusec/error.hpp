#pragma once

#include <stdexcept>
#include <string>

namespace fusec {

struct SourcePos {
  int line = 0;
  int column = 0;
};

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A construct outside the fragment an operation supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// An enumerated set or table would exceed the configured cardinality cap.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace fusec
