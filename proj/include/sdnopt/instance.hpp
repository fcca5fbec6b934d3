#pragma once
// Native instance file format (line-oriented, canonical to the byte; see
// docs/FORMATS.md), SNDLib plain-text import, and the content digest used
// by reports. Parse of a canonical serialization is the identity.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdnopt/core.hpp"
#include "sdnopt/placement.hpp"

namespace sdnopt {

struct Instance {
  Topology topology;
  std::vector<Flow> flows;
  std::optional<PlacementInstance> placement;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column = 0)
      : std::runtime_error(std::move(message) + " (line " + std::to_string(line) +
                           (column > 0 ? ", column " + std::to_string(column) : "") + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }  // 1-based; 0 when not applicable

 private:
  int line_;
  int column_;
};

// Canonical serialization: sorted sections, shortest round-trip numbers,
// single spaces, '\n' line ends.
std::string write_instance(const Instance& inst);
void write_instance_file(const Instance& inst, const std::string& path);

Instance parse_instance(std::string_view text);
Instance parse_instance_file(const std::string& path);

struct SndlibDefaults {
  double switch_watts = 0.0;
  double link_watts = 0.0;
  int rule_capacity = 1;
};

// Plain-text SNDLib subset: NODES / LINKS (capacity = first module, falling
// back to the pre-installed capacity) / DEMANDS (one flow each). SNDLib
// files carry no power model, so defaults must be supplied explicitly.
Instance import_sndlib(std::string_view text, const SndlibDefaults& defaults);
Instance import_sndlib_file(const std::string& path, const SndlibDefaults& defaults);

// FNV-1a 64 over the canonical serialization, "fnv1a64:" + 16 hex digits.
std::string instance_digest(const Instance& inst);

// Shortest round-trip decimal form (std::to_chars); the number format used
// everywhere in the native files.
std::string format_double(double v);

}  // namespace sdnopt
