#pragma once

#include <stdexcept>
#include <string>

namespace ionmap {

/// Error raised by the QASM parser; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    UnknownGate,
    UndeclaredQubit,
    DuplicateQubit,
    ArityMismatch,
    MalformedLine,
  };

  ParseError(Kind kind, int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

/// Error raised by the fabric grid parser; carries the offending cell.
class FabricError : public std::runtime_error {
 public:
  enum class Kind {
    RaggedRows,
    UnknownCell,
    BentChannel,
    OrphanTrap,
  };

  FabricError(Kind kind, int row, int col, const std::string& message)
      : std::runtime_error("cell (" + std::to_string(row) + "," +
                           std::to_string(col) + "): " + message),
        kind_(kind),
        row_(row),
        col_(col) {}

  Kind kind() const { return kind_; }
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  Kind kind_;
  int row_;
  int col_;
};

/// Error raised by the tech-parameter config parser.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// The simulator drained its event queue with instructions still pending.
class StuckError : public std::runtime_error {
 public:
  explicit StuckError(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace ionmap
