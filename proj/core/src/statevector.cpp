#include "dqshor/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/integer.hpp>

#include "dqshor/errors.hpp"
#include "dqshor/plan.hpp"

namespace dqshor {

namespace {

constexpr double kPi = std::numbers::pi;

using Amp = std::complex<double>;

// In-place power-of-two DFT: out[j] = sum_k in[k] * exp(sign*2*pi*i*j*k/T).
// Twiddles come from one polar() table indexed exactly, so there is no
// multiplicative drift at large T.
void dft_pow2(std::vector<Amp>& a, double sign) {
  const std::size_t n = a.size();
  if (n < 2) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<Amp> tw(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j)
    tw[j] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Amp w = tw[k * stride];
        Amp u = a[i + k];
        Amp v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

std::uint64_t to_u64(const BigInt& v) { return v.convert_to<std::uint64_t>(); }

}  // namespace

StateVector StateVector::init_state(
    const std::vector<std::pair<std::string, unsigned>>& registers,
    const std::vector<BigInt>& values, std::size_t cap) {
  if (registers.empty()) throw std::invalid_argument("init_state: need at least one register");
  if (registers.size() != values.size())
    throw std::invalid_argument("init_state: one value per register required");
  StateVector sv;
  sv.cap_ = cap;
  std::size_t total = 0;
  for (const auto& [name, width] : registers) {
    if (width == 0) throw std::invalid_argument("init_state: zero-width register " + name);
    for (const auto& r : sv.regs_)
      if (r.name == name) throw std::invalid_argument("init_state: duplicate register " + name);
    sv.regs_.push_back({name, width, 0});
    total += width;
  }
  if (total > cap) throw qubit_cap_error(total, cap);
  sv.total_ = total;
  std::size_t shift = total;
  for (auto& r : sv.regs_) {
    shift -= r.width;
    r.shift = shift;
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sv.regs_.size(); ++i) {
    if (values[i] < 0 || bit_length(values[i]) > sv.regs_[i].width)
      throw std::invalid_argument("init_state: value out of range for register " +
                                  sv.regs_[i].name);
    idx |= static_cast<std::size_t>(to_u64(values[i])) << sv.regs_[i].shift;
  }
  sv.amps_.assign(std::size_t{1} << total, Amp{});
  sv.amps_[idx] = 1.0;
  return sv;
}

StateVector StateVector::from_amplitudes(
    const std::vector<std::pair<std::string, unsigned>>& registers, std::vector<Amp> amps,
    std::size_t cap) {
  StateVector sv = init_state(registers, std::vector<BigInt>(registers.size(), 0), cap);
  if (amps.size() != sv.amps_.size())
    throw std::invalid_argument("from_amplitudes: need 2^total amplitudes");
  sv.amps_ = std::move(amps);
  return sv;
}

const StateVector::Reg& StateVector::find(std::string_view name) const {
  for (const auto& r : regs_)
    if (r.name == name) return r;
  throw std::invalid_argument("no register named " + std::string(name));
}

std::size_t StateVector::register_width(std::string_view name) const { return find(name).width; }

void StateVector::apply_hadamards(std::string_view reg) {
  const Reg& r = find(reg);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (unsigned q = 0; q < r.width; ++q) {
    const std::size_t bit = std::size_t{1} << (r.shift + q);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
      if (idx & bit) continue;
      Amp a = amps_[idx], b = amps_[idx | bit];
      amps_[idx] = (a + b) * inv_sqrt2;
      amps_[idx | bit] = (a - b) * inv_sqrt2;
    }
  }
}

void StateVector::apply_controlled_modmul(std::string_view control, std::string_view work,
                                          const ModMulSpec& op) {
  const Reg& c = find(control);
  const Reg& w = find(work);
  if (c.name == w.name)
    throw std::invalid_argument("controlled modmul: control and work must differ");
  if (op.N < 2) throw std::invalid_argument("controlled modmul: modulus must be >= 2");
  if (op.a < 1 || op.a >= op.N) throw std::invalid_argument("controlled modmul: need 1 <= a < N");
  if (boost::multiprecision::gcd(op.a, op.N) != 1)
    throw std::invalid_argument("controlled modmul: a and N must be coprime");
  if (bit_length(op.N) > w.width)
    throw std::invalid_argument("controlled modmul: work register narrower than modulus");

  const std::uint64_t N = to_u64(op.N);
  const std::uint64_t base =
      to_u64(boost::multiprecision::powm(op.a, pow2(op.e), op.N));
  const std::size_t cdim = std::size_t{1} << c.width;
  std::vector<std::uint64_t> factor(cdim);
  factor[0] = 1;
  for (std::size_t j = 1; j < cdim; ++j) factor[j] = factor[j - 1] * base % N;

  const std::size_t cmask = cdim - 1;
  const std::size_t wmask = (std::size_t{1} << w.width) - 1;
  std::vector<Amp> out(amps_.size(), Amp{});
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const Amp& a = amps_[idx];
    if (a == Amp{}) continue;
    const std::uint64_t x = (idx >> w.shift) & wmask;
    if (x >= N) {
      out[idx] += a;
      continue;
    }
    const std::size_t j = (idx >> c.shift) & cmask;
    const std::uint64_t nx = factor[j] * x % N;
    out[(idx & ~(wmask << w.shift)) | (static_cast<std::size_t>(nx) << w.shift)] = a;
  }
  amps_ = std::move(out);
}

void StateVector::apply_modmul(std::string_view reg, const ModMulSpec& op) {
  const Reg& w = find(reg);
  if (op.N < 2) throw std::invalid_argument("modmul: modulus must be >= 2");
  if (op.a < 1 || op.a >= op.N) throw std::invalid_argument("modmul: need 1 <= a < N");
  if (boost::multiprecision::gcd(op.a, op.N) != 1)
    throw std::invalid_argument("modmul: a and N must be coprime");
  if (bit_length(op.N) > w.width)
    throw std::invalid_argument("modmul: register narrower than modulus");
  const std::uint64_t N = to_u64(op.N);
  const std::uint64_t f = to_u64(boost::multiprecision::powm(op.a, pow2(op.e), op.N));
  const std::size_t wmask = (std::size_t{1} << w.width) - 1;
  std::vector<Amp> out(amps_.size(), Amp{});
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const Amp& a = amps_[idx];
    if (a == Amp{}) continue;
    const std::uint64_t x = (idx >> w.shift) & wmask;
    if (x >= N) {
      out[idx] += a;
      continue;
    }
    const std::uint64_t nx = f * x % N;
    out[(idx & ~(wmask << w.shift)) | (static_cast<std::size_t>(nx) << w.shift)] = a;
  }
  amps_ = std::move(out);
}

void StateVector::apply_phase_kick(std::string_view reg, const PhaseFraction& omega) {
  const Reg& r = find(reg);
  const std::size_t dim = std::size_t{1} << r.width;
  std::vector<Amp> phase(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    // exp(2*pi*i * frac(j*omega)), fraction reduced exactly first.
    BigInt num = (j * omega.numerator()) % omega.denominator();
    phase[j] = std::polar(1.0, 2.0 * kPi * ratio_as_double(num, omega.denominator()));
  }
  const std::size_t mask = dim - 1;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    amps_[idx] *= phase[(idx >> r.shift) & mask];
}

void StateVector::apply_inverse_qft(std::string_view reg) {
  const Reg& r = find(reg);
  const std::size_t dim = std::size_t{1} << r.width;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const std::size_t below = r.shift;
  const std::size_t above = total_ - r.shift - r.width;
  std::vector<Amp> buf(dim);
  for (std::size_t up = 0; up < (std::size_t{1} << above); ++up) {
    for (std::size_t lowidx = 0; lowidx < (std::size_t{1} << below); ++lowidx) {
      const std::size_t base = (up << (r.width + below)) | lowidx;
      for (std::size_t v = 0; v < dim; ++v) buf[v] = amps_[base | (v << below)];
      dft_pow2(buf, -1.0);
      for (std::size_t v = 0; v < dim; ++v) amps_[base | (v << below)] = buf[v] * scale;
    }
  }
}

void StateVector::apply_qft(std::string_view reg) {
  const Reg& r = find(reg);
  const std::size_t dim = std::size_t{1} << r.width;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const std::size_t below = r.shift;
  const std::size_t above = total_ - r.shift - r.width;
  std::vector<Amp> buf(dim);
  for (std::size_t up = 0; up < (std::size_t{1} << above); ++up) {
    for (std::size_t lowidx = 0; lowidx < (std::size_t{1} << below); ++lowidx) {
      const std::size_t base = (up << (r.width + below)) | lowidx;
      for (std::size_t v = 0; v < dim; ++v) buf[v] = amps_[base | (v << below)];
      dft_pow2(buf, +1.0);
      for (std::size_t v = 0; v < dim; ++v) amps_[base | (v << below)] = buf[v] * scale;
    }
  }
}

void StateVector::project_register(std::string_view reg, std::size_t value) {
  const Reg& r = find(reg);
  const std::size_t mask = (std::size_t{1} << r.width) - 1;
  if (value > mask) throw std::invalid_argument("project_register: value out of range");
  double mass = 0.0;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    if (((idx >> r.shift) & mask) == value) mass += std::norm(amps_[idx]);
  if (mass <= 0.0) throw std::invalid_argument("project_register: value has zero mass");
  const double scale = 1.0 / std::sqrt(mass);
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if (((idx >> r.shift) & mask) == value)
      amps_[idx] *= scale;
    else
      amps_[idx] = Amp{};
  }
}

std::vector<double> StateVector::prefix_distribution(std::string_view reg, unsigned w) const {
  const Reg& r = find(reg);
  if (w < 1 || w > r.width)
    throw std::invalid_argument("prefix_distribution: need 1 <= w <= register width");
  std::vector<double> probs(std::size_t{1} << w, 0.0);
  const std::size_t drop = r.width - w;
  const std::size_t mask = (std::size_t{1} << w) - 1;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    probs[(idx >> (r.shift + drop)) & mask] += std::norm(amps_[idx]);
  return probs;
}

std::vector<double> StateVector::joint_prefix_distribution(
    const std::vector<std::pair<std::string, unsigned>>& prefixes) const {
  std::size_t outdim = 1;
  struct Field {
    std::size_t shift, mask, width, place;
  };
  std::vector<Field> fields;
  for (const auto& [name, w] : prefixes) {
    const Reg& r = find(name);
    if (w < 1 || w > r.width)
      throw std::invalid_argument("joint_prefix_distribution: prefix width out of range");
    fields.push_back({r.shift + (r.width - w), (std::size_t{1} << w) - 1, w, 0});
    outdim <<= w;
  }
  std::size_t place = outdim;
  for (auto& f : fields) {
    place >>= f.width;
    f.place = place;
  }
  std::vector<double> probs(outdim, 0.0);
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    double p = std::norm(amps_[idx]);
    if (p == 0.0) continue;
    std::size_t key = 0;
    for (const auto& f : fields) key += ((idx >> f.shift) & f.mask) * f.place;
    probs[key] += p;
  }
  return probs;
}

BitString StateVector::measure_prefix(std::string_view reg, unsigned w, Rng& rng) {
  std::vector<double> probs = prefix_distribution(reg, w);
  // Inverse-CDF over prefix order with a single variate.
  const double u = rng.canonical();
  std::size_t chosen = probs.size() - 1;
  double cum = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    cum += probs[c];
    if (cum > u) {
      chosen = c;
      break;
    }
  }
  while (probs[chosen] <= 0.0) --chosen;  // guard against trailing roundoff
  const Reg& r = find(reg);
  const std::size_t drop = r.width - w;
  const std::size_t mask = (std::size_t{1} << w) - 1;
  const double scale = 1.0 / std::sqrt(probs[chosen]);
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if (((idx >> (r.shift + drop)) & mask) == chosen)
      amps_[idx] *= scale;
    else
      amps_[idx] = Amp{};
  }
  return BitString(w, chosen);
}

void StateVector::prepend_register(const std::string& name, unsigned width, const BigInt& value) {
  if (width == 0) throw std::invalid_argument("prepend_register: zero width");
  for (const auto& r : regs_)
    if (r.name == name) throw std::invalid_argument("prepend_register: duplicate name " + name);
  if (total_ + width > cap_) throw qubit_cap_error(total_ + width, cap_);
  if (value < 0 || bit_length(value) > width)
    throw std::invalid_argument("prepend_register: value out of range");
  const std::size_t block = amps_.size();
  std::vector<Amp> out(block << width, Amp{});
  const std::size_t at = static_cast<std::size_t>(to_u64(value)) * block;
  std::copy(amps_.begin(), amps_.end(), out.begin() + at);
  amps_ = std::move(out);
  regs_.insert(regs_.begin(), {name, width, total_});
  total_ += width;
}

void StateVector::drop_register(std::string_view reg) {
  const Reg r = find(reg);
  const std::size_t mask = (std::size_t{1} << r.width) - 1;
  // The register must hold one definite value across the support.
  std::size_t value = mask + 1;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if (amps_[idx] == Amp{}) continue;
    const std::size_t v = (idx >> r.shift) & mask;
    if (value == mask + 1)
      value = v;
    else if (v != value)
      throw std::logic_error("drop_register: register still in superposition");
  }
  if (value == mask + 1) throw std::logic_error("drop_register: empty state");
  std::vector<Amp> out(amps_.size() >> r.width);
  const std::size_t lowmask = (std::size_t{1} << r.shift) - 1;
  for (std::size_t nidx = 0; nidx < out.size(); ++nidx) {
    const std::size_t low = nidx & lowmask;
    const std::size_t high = (nidx >> r.shift) << (r.shift + r.width);
    out[nidx] = amps_[high | (value << r.shift) | low];
  }
  amps_ = std::move(out);
  total_ -= r.width;
  for (auto it = regs_.begin(); it != regs_.end(); ++it) {
    if (it->name == r.name) {
      regs_.erase(it);
      break;
    }
  }
  for (auto& other : regs_)
    if (other.shift > r.shift) other.shift -= r.width;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Amp& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

BitString run_phase_estimation(unsigned t, const ModMulSpec& op, const BigInt& eigenstate_value,
                               Rng& rng, std::size_t cap) {
  if (t < 1) throw std::invalid_argument("run_phase_estimation: t must be >= 1");
  const unsigned L = static_cast<unsigned>(bit_length(op.N));
  StateVector sv = StateVector::init_state({{"ctrl", t}, {"work", L}}, {0, eigenstate_value}, cap);
  sv.apply_hadamards("ctrl");
  sv.apply_controlled_modmul("ctrl", "work", op);
  sv.apply_inverse_qft("ctrl");
  return sv.measure_prefix("ctrl", t, rng);
}

BitString run_phase_estimation(unsigned t, const PhaseFraction& omega, Rng& rng,
                               std::size_t cap) {
  if (t < 1) throw std::invalid_argument("run_phase_estimation: t must be >= 1");
  StateVector sv = StateVector::init_state({{"ctrl", t}}, {0}, cap);
  sv.apply_hadamards("ctrl");
  sv.apply_phase_kick("ctrl", omega);
  sv.apply_inverse_qft("ctrl");
  return sv.measure_prefix("ctrl", t, rng);
}

std::pair<BitString, unsigned> run_order_finding_monolithic(const BigInt& N, const BigInt& a,
                                                            double epsilon, Rng& rng,
                                                            std::size_t cap) {
  NodePlan plan = make_plan(N, a, 1, epsilon);
  const unsigned t = plan.t(1);  // 2L + 1 + p
  StateVector sv = StateVector::init_state({{"ctrl", t}, {"work", plan.L}}, {0, 1}, cap);
  sv.apply_hadamards("ctrl");
  sv.apply_controlled_modmul("ctrl", "work", {a, N, 0});
  sv.apply_inverse_qft("ctrl");
  return {sv.measure_prefix("ctrl", t, rng), t};
}

}  // namespace dqshor
