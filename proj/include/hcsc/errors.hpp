#ifndef HCSC_ERRORS_HPP
#define HCSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hcsc {

// Error classes carry a short machine-parsable tag (the CLI prints
// "error-class: message" and exits nonzero).

class Error : public std::runtime_error {
public:
  Error(std::string tag, const std::string& msg)
      : std::runtime_error(tag + ": " + msg), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

private:
  std::string tag_;
};

class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error("shape-error", msg) {}
};

class ArgumentError : public Error {
public:
  explicit ArgumentError(const std::string& msg) : Error("argument-error", msg) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error("config-error", msg) {}
};

class DivergenceError : public Error {
public:
  explicit DivergenceError(const std::string& msg) : Error("divergence-error", msg) {}
};

class DegenerateAtomError : public Error {
public:
  explicit DegenerateAtomError(const std::string& msg)
      : Error("degenerate-atom-error", msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error("io-error", msg) {}
};

class FormatError : public Error {
public:
  FormatError(const std::string& tag, const std::string& msg) : Error(tag, msg) {}
};

} // namespace hcsc

#endif
