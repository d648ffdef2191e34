#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmnl {

// Raised for malformed user input (bad scenario, mismatched files, out-of-range
// flags).  The CLI maps it to exit code 2; genuine runtime failures stay
// std::runtime_error and map to exit code 1.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical tolerances used by validation routines.  All modules take these
// from one place so a tolerance change never has to be chased through files.
struct Tolerances {
  double probability_slack = 1e-12;    // entries may leave [0,1] by this much
  double normalization = 1e-10;        // |sum_a p(a|x) - 1|
  double nonsignaling = 1e-10;         // marginal discrepancy across inputs
  double hermiticity = 1e-12;
  double trace_deviation = 1e-12;
  double psd_slack = 1e-10;            // eigenvalues >= -psd_slack
  double unit_norm = 1e-12;
  double completeness = 1e-10;         // |sum_a M_{a|x} - 1|
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

// Largest joint Hilbert-space dimension state constructors accept.
inline constexpr std::uint64_t kDimensionCap = 59049;  // 3^10

// A Bell scenario: `parties` observers, each choosing one of `inputs`
// measurement settings with `outcomes` possible results.
//
// Flattening contract used everywhere (tables, JSON, vertex files):
//   flat(a, x) = flat_outcome(a) * inputs^parties + flat_input(x)
// where flat_outcome/flat_input are mixed-radix with party 0 most
// significant.  The whole outcome tuple is therefore more significant than
// the whole input tuple ("outcomes before inputs").
struct Scenario {
  int parties = 0;
  int inputs = 0;
  int outcomes = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;

  void validate() const {
    if (parties < 1 || inputs < 1 || outcomes < 2)
      throw InputError("scenario requires parties >= 1, inputs >= 1, outcomes >= 2");
    if (parties > 16)
      throw InputError("scenario party count above supported range");
  }

  std::uint64_t outcome_tuples() const { return ipow(outcomes, parties); }
  std::uint64_t input_tuples() const { return ipow(inputs, parties); }
  std::uint64_t table_size() const { return outcome_tuples() * input_tuples(); }

  std::uint64_t flat_outcome(std::span<const int> a) const {
    return flatten(a, outcomes);
  }
  std::uint64_t flat_input(std::span<const int> x) const {
    return flatten(x, inputs);
  }
  std::uint64_t index(std::span<const int> a, std::span<const int> x) const {
    return flat_outcome(a) * input_tuples() + flat_input(x);
  }

  std::vector<int> unflatten_outcome(std::uint64_t f) const {
    return unflatten(f, outcomes);
  }
  std::vector<int> unflatten_input(std::uint64_t f) const {
    return unflatten(f, inputs);
  }
  // Splits a table index back into (outcome tuple, input tuple).
  std::pair<std::vector<int>, std::vector<int>> unflatten_index(std::uint64_t f) const {
    return {unflatten_outcome(f / input_tuples()), unflatten_input(f % input_tuples())};
  }

  std::string str() const {
    return "(" + std::to_string(parties) + "," + std::to_string(inputs) + "," +
           std::to_string(outcomes) + ")";
  }

 private:
  static std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
  }
  std::uint64_t flatten(std::span<const int> v, int radix) const {
    if (static_cast<int>(v.size()) != parties)
      throw InputError("tuple length does not match party count");
    std::uint64_t f = 0;
    for (int c : v) {
      if (c < 0 || c >= radix) throw InputError("tuple entry out of range");
      f = f * radix + static_cast<std::uint64_t>(c);
    }
    return f;
  }
  std::vector<int> unflatten(std::uint64_t f, int radix) const {
    std::vector<int> v(parties);
    for (int k = parties - 1; k >= 0; --k) {
      v[k] = static_cast<int>(f % radix);
      f /= radix;
    }
    return v;
  }
};

}  // namespace gmnl
