#pragma once

#include <stdexcept>
#include <string>

namespace tanglie {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class SingularMap : public Error {
 public:
  using Error::Error;
};

class NonPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NotSymplecticInput : public Error {
 public:
  using Error::Error;
};

}  // namespace tanglie
