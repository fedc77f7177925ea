#pragma once

#include <stdexcept>
#include <string>

namespace fockbell {

// Input file or state failed validation (bad format, norm, partition, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called with structurally incompatible arguments
// (mismatched partitions, wrong party, mode collisions, ...).
struct StructuralError : std::invalid_argument {
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

// A Bell construction was requested for a state with Schmidt rank < 2.
struct SeparableStateError : std::runtime_error {
  explicit SeparableStateError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical kernel failed to converge.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fockbell
