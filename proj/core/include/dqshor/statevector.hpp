#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dqshor/bigint.hpp"
#include "dqshor/bitstring.hpp"
#include "dqshor/fraction.hpp"
#include "dqshor/rng.hpp"

namespace dqshor {

/// Modular-multiplication unitary M_{a^(2^e)} on an L-qubit work register
/// over modulus N: |x> -> |a^(2^e) * x mod N> for x < N, identity for
/// x >= N. gcd(a, N) must be 1 so the map is a permutation.
struct ModMulSpec {
  BigInt a;
  BigInt N;
  unsigned e = 0;
};

/// Default cap on total qubits; DQSHOR_QUBIT_CAP overrides it for the CLI.
constexpr std::size_t kDefaultQubitCap = 26;

/// Dense statevector over named, ordered registers. The first register holds
/// the most significant index bits; within a register, bit 1 is the most
/// significant. Amplitudes are doubles; norms survive pipelines to ~1e-12.
class StateVector {
 public:
  using Amp = std::complex<double>;

  /// Basis state: one (name, width) per register with its initial value.
  /// Throws qubit_cap_error if the total width exceeds `cap`.
  static StateVector init_state(const std::vector<std::pair<std::string, unsigned>>& registers,
                                const std::vector<BigInt>& values,
                                std::size_t cap = kDefaultQubitCap);

  /// Arbitrary state for tests; amps.size() must be 2^total and normalized.
  static StateVector from_amplitudes(const std::vector<std::pair<std::string, unsigned>>& registers,
                                     std::vector<Amp> amps, std::size_t cap = kDefaultQubitCap);

  std::size_t total_qubits() const { return total_; }
  std::size_t register_width(std::string_view name) const;
  const std::vector<Amp>& amplitudes() const { return amps_; }

  /// H on every qubit of a register.
  void apply_hadamards(std::string_view reg);

  /// Controlled modular multiplication: control register value j applies
  /// M_{a^(2^e)}^j to the work register (an exact index permutation).
  void apply_controlled_modmul(std::string_view control, std::string_view work,
                               const ModMulSpec& op);

  /// Uncontrolled M_{a^(2^e)} on one register (used by eigenstate checks).
  void apply_modmul(std::string_view reg, const ModMulSpec& op);

  /// Phase kick e^(2*pi*i*j*omega) on register value j: the effect of a
  /// controlled diagonal unitary with eigenphase omega.
  void apply_phase_kick(std::string_view reg, const PhaseFraction& omega);

  /// Exact inverse Fourier transform on one register's value index
  /// (radix-2, mathematically the dense conjugate DFT matrix / sqrt(T)).
  void apply_inverse_qft(std::string_view reg);

  /// Forward transform, for round-trip tests.
  void apply_qft(std::string_view reg);

  /// Born measurement of the first w bits of a register. Consumes exactly
  /// one uniform variate (inverse-CDF over prefix intervals), collapses and
  /// renormalizes in place, and returns the observed prefix.
  BitString measure_prefix(std::string_view reg, unsigned w, Rng& rng);

  /// Deterministic projection of a register onto basis value `value`,
  /// renormalized. Used by exact distribution enumerators; throws
  /// std::invalid_argument when the value has zero mass.
  void project_register(std::string_view reg, std::size_t value);

  /// Exact marginal distribution of the first w bits of a register,
  /// indexed by prefix value. No randomness involved.
  std::vector<double> prefix_distribution(std::string_view reg, unsigned w) const;

  /// Exact joint distribution over several registers' prefixes, flattened
  /// with the first register's prefix as the most significant digit.
  std::vector<double> joint_prefix_distribution(
      const std::vector<std::pair<std::string, unsigned>>& prefixes) const;

  /// Tensor a fresh register in basis state `value` at the front (most
  /// significant position). Throws qubit_cap_error past the cap.
  void prepend_register(const std::string& name, unsigned width, const BigInt& value);

  /// Remove a register that is in a definite basis state (e.g. fully
  /// measured). Throws std::logic_error if any superposition remains on it.
  void drop_register(std::string_view reg);

  double norm() const;

 private:
  StateVector() = default;
  struct Reg {
    std::string name;
    unsigned width;
    std::size_t shift;  // index bit offset of the register's LSB
  };
  const Reg& find(std::string_view name) const;

  std::vector<Reg> regs_;
  std::size_t total_ = 0;
  std::size_t cap_ = kDefaultQubitCap;
  std::vector<Amp> amps_;
};

/// One round of textbook phase estimation with a modular-multiplication
/// oracle: t control qubits over the work register prepared in basis state
/// `eigenstate_value`. Returns the measured t-bit outcome.
BitString run_phase_estimation(unsigned t, const ModMulSpec& op, const BigInt& eigenstate_value,
                               Rng& rng, std::size_t cap = kDefaultQubitCap);

/// Phase estimation of a pure eigenphase (diagonal oracle): no work
/// register, outcome distribution is pe_prob(t, omega, .).
BitString run_phase_estimation(unsigned t, const PhaseFraction& omega, Rng& rng,
                               std::size_t cap = kDefaultQubitCap);

/// Single-machine order-finding circuit: t = 2L + 1 + p control qubits
/// against work register |1>, measured in full. Returns the outcome and t.
std::pair<BitString, unsigned> run_order_finding_monolithic(const BigInt& N, const BigInt& a,
                                                            double epsilon, Rng& rng,
                                                            std::size_t cap = kDefaultQubitCap);

}  // namespace dqshor
