#pragma once

#include <stdexcept>
#include <string>

namespace spiked {

/// Root-finding or optimization failed to bracket / converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size cap (tensor memory, enumerable support, exact combinatorics) was exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace spiked
