#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cct {

enum class Task { Classification, Regression };

inline std::string to_string(Task t) {
  return t == Task::Classification ? "classification" : "regression";
}

inline Task task_from_string(const std::string &s) {
  if (s == "classification") return Task::Classification;
  if (s == "regression") return Task::Regression;
  throw std::invalid_argument("unknown task: " + s);
}

/// Error while reading a dataset file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &msg, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

inline std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent seed for sub-stream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master + 0x632be59bd9b4e019ULL * (index + 1);
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

/// Small deterministic RNG (xoshiro-free: splitmix-seeded 64-bit LCG+mix).
/// All randomness in the project flows through this type so results are
/// reproducible across runs for a fixed seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // warm up
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t uniform_int(std::size_t n) {
    // multiply-shift; bias is negligible for n << 2^64
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cct
