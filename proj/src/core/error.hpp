#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

namespace fgi {

using json = nlohmann::json;

// Domain-level failure with a named error class and a machine-readable
// witness (the offending triple, morphism, subset, ...).
class DomainError : public std::runtime_error {
public:
  DomainError(std::string name, std::string message, json witness = json::object())
      : std::runtime_error(message),
        name_(std::move(name)),
        witness_(std::move(witness)) {}

  const std::string& name() const { return name_; }
  const json& witness() const { return witness_; }

private:
  std::string name_;
  json witness_;
};

// Malformed input document; `pointer` is a JSON pointer into the offending
// manifest.
class SchemaError : public std::runtime_error {
public:
  SchemaError(std::string pointer, std::string message)
      : std::runtime_error(message), pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

private:
  std::string pointer_;
};

}  // namespace fgi
