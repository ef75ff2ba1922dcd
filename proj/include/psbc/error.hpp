#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psbc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix shapes that do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid hyperparameters or model configuration (e.g. Periodic with n < 3).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Inputs outside an operation's domain (features outside [0,1], empty batch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite value produced while propagating or training.
class PropagationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class LoadError : public Error {
 public:
  LoadError(const std::string& field, const std::string& what)
      : Error("model file field '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace psbc
