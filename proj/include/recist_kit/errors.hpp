#pragma once

#include <stdexcept>
#include <string>

namespace recist_kit {

struct ZeroLengthDiameter : std::runtime_error {
  explicit ZeroLengthDiameter(const std::string& what) : std::runtime_error(what) {}
};

struct ParallelDiameters : std::runtime_error {
  explicit ParallelDiameters(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateArm : std::runtime_error {
  explicit DegenerateArm(const std::string& what) : std::runtime_error(what) {}
};

struct BothEmptyMasks : std::runtime_error {
  explicit BothEmptyMasks(const std::string& what) : std::runtime_error(what) {}
};

struct MissingMask : std::runtime_error {
  explicit MissingMask(const std::string& what) : std::runtime_error(what) {}
};

struct NoGroundTruth : std::runtime_error {
  explicit NoGroundTruth(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct RleLengthMismatch : std::runtime_error {
  explicit RleLengthMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct PlacementFailure : std::runtime_error {
  explicit PlacementFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace recist_kit
