#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cxprobe {

// Base of every error the toolkit raises. Callers that only want to report
// and exit can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  InsufficientDataError(std::string category, std::size_t shortfall)
      : Error("insufficient data for category " + category + ": short by " +
              std::to_string(shortfall)),
        category_(std::move(category)),
        shortfall_(shortfall) {}
  const std::string& category() const noexcept { return category_; }
  std::size_t shortfall() const noexcept { return shortfall_; }

 private:
  std::string category_;
  std::size_t shortfall_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DegenerateLabelsError : public DegenerateInputError {
 public:
  using DegenerateInputError::DegenerateInputError;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

class CategoryTooSmallError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class CacheError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cxprobe
