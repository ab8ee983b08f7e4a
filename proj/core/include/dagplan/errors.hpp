#pragma once

#include <stdexcept>
#include <string>

namespace dagplan {

// Base for every failure the library raises deliberately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model reply that does not satisfy one of the structured output schemas.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string raw)
      : Error(message), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class RenderError : public Error {
 public:
  RenderError(const std::string& message, std::string placeholder)
      : Error(message), placeholder_(std::move(placeholder)) {}

  const std::string& placeholder() const noexcept { return placeholder_; }

 private:
  std::string placeholder_;
};

// A node was asked to run before its prerequisites completed.
class SchedulingFault : public Error {
 public:
  using Error::Error;
};

// Illegal status transition or structural misuse of a TaskGraph.
class GraphError : public Error {
 public:
  using Error::Error;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class FixtureError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TelemetryError : public Error {
 public:
  using Error::Error;
};

}  // namespace dagplan
