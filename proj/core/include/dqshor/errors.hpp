#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dqshor {

/// Invalid planning parameters: k not dividing L without explicit boundaries,
/// boundaries out of order, epsilon outside (0,1), modulus too small.
class plan_error : public std::invalid_argument {
 public:
  explicit plan_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A simulation would allocate more qubits than the configured cap allows.
class qubit_cap_error : public std::runtime_error {
 public:
  qubit_cap_error(std::size_t requested, std::size_t cap)
      : std::runtime_error("statevector needs " + std::to_string(requested) +
                           " qubits, cap is " + std::to_string(cap)),
        requested(requested),
        cap(cap) {}
  std::size_t requested;
  std::size_t cap;
};

/// Recoverable stitching failure: the two overlap bits of adjacent node
/// outcomes differ by 2 mod 4, so no correction in {-1,0,+1} exists.
/// `node` is the 1-based index of the left-hand outcome that failed.
class correction_mismatch : public std::runtime_error {
 public:
  explicit correction_mismatch(std::size_t node)
      : std::runtime_error("no correction bit stitches node " + std::to_string(node) +
                           " to its successor"),
        node(node) {}
  std::size_t node;
};

}  // namespace dqshor
