#pragma once

#include <stdexcept>
#include <string>

namespace locov {

// Error categories; exit_code() gives the process exit code the CLI maps
// each category to (2 = configuration, 3 = input data, 4 = numerical).
enum class ErrorKind {
  invalid_input,
  config_error,
  format_error,
  parse_error,
  io_error,
  index_error,
  rank_exceeded,
  no_convergence,
  empty_neighborhood,
  singular_weights,
  isolated_point,
  degenerate_distance,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  int exit_code() const {
    switch (kind_) {
      case ErrorKind::invalid_input:
      case ErrorKind::config_error:
        return 2;
      case ErrorKind::format_error:
      case ErrorKind::parse_error:
      case ErrorKind::io_error:
      case ErrorKind::index_error:
        return 3;
      default:
        return 4;
    }
  }

 private:
  ErrorKind kind_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& m) : Error(ErrorKind::invalid_input, m) {}
};

struct ConfigError : Error {
  ConfigError(const std::string& field, const std::string& m)
      : Error(ErrorKind::config_error, "config field '" + field + "': " + m), field(field) {}
  std::string field;
};

struct FormatError : Error {
  FormatError(long line, const std::string& m)
      : Error(ErrorKind::format_error, "line " + std::to_string(line) + ": " + m), line(line) {}
  long line;
};

struct ParseError : Error {
  ParseError(long line, long column, const std::string& m)
      : Error(ErrorKind::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + m),
        line(line),
        column(column) {}
  long line;
  long column;
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorKind::io_error, m) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& m) : Error(ErrorKind::index_error, m) {}
};

struct RankExceeded : Error {
  explicit RankExceeded(const std::string& m) : Error(ErrorKind::rank_exceeded, m) {}
};

struct NoConvergence : Error {
  NoConvergence(const std::string& m, double residual)
      : Error(ErrorKind::no_convergence, m), residual(residual) {}
  double residual;
};

struct EmptyNeighborhood : Error {
  explicit EmptyNeighborhood(const std::string& m) : Error(ErrorKind::empty_neighborhood, m) {}
};

struct SingularWeights : Error {
  explicit SingularWeights(const std::string& m) : Error(ErrorKind::singular_weights, m) {}
};

struct IsolatedPoint : Error {
  IsolatedPoint(long index)
      : Error(ErrorKind::isolated_point, "point " + std::to_string(index) + " has no neighbors at this scale"),
        index(index) {}
  long index;
};

struct DegenerateDistance : Error {
  explicit DegenerateDistance(const std::string& m) : Error(ErrorKind::degenerate_distance, m) {}
};

}  // namespace locov
