#pragma once

#include <stdexcept>
#include <string>

namespace synchrony {

// Base class for all engine errors. Subcommands map ConfigError and the
// input-side parse errors to exit code 2, everything else to exit code 3.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition on caller-supplied values failed (bad parameter ranges,
// shape mismatches, empty axis lists, ...).
struct ValidationError : Error {
  using Error::Error;
};

// |x - y| is too small for the closed-form equilibrium (denominator x-y).
struct DegenerateBeliefs : Error {
  using Error::Error;
};

// Ring-lattice degree is odd, >= n, or otherwise unrealizable.
struct InvalidDegree : Error {
  using Error::Error;
};

// Small-world generation could not produce a connected graph.
struct ConstructionFailed : Error {
  using Error::Error;
};

struct SelfLoopError : Error {
  using Error::Error;
};

struct DuplicateEdgeError : Error {
  using Error::Error;
};

// Malformed text input (edge lists, CSV series, schedules).
struct ParseError : Error {
  using Error::Error;
};

struct NegativeCount : Error {
  using Error::Error;
};

// Initial-actor indices (or explicit vectors) do not fit the graph.
struct BadInitialActors : Error {
  using Error::Error;
};

struct EmptySchedule : Error {
  using Error::Error;
};

struct NoTransition : Error {
  using Error::Error;
};

struct UnknownAxis : Error {
  using Error::Error;
};

struct TooFewAccepted : Error {
  using Error::Error;
};

struct DegenerateBandwidth : Error {
  using Error::Error;
};

struct ChainStuck : Error {
  using Error::Error;
};

// Config-file errors carry file:line context for the CLI's diagnostics.
struct ConfigError : Error {
  ConfigError(const std::string& file, int line, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ": " + msg), line_no(line) {}
  explicit ConfigError(const std::string& msg) : Error(msg), line_no(0) {}
  int line_no;
};

}  // namespace synchrony
