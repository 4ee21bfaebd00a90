#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace relayplan {

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output. mt19937_64 output is fully specified by the standard, so a seed
// produces the same stream on every platform; std::uniform_real_distribution
// carries no such guarantee, which is why it is avoided here.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Index into a categorical distribution. Probabilities are walked in order;
// floating-point residue falls into the last bucket.
inline int sample_categorical(const std::vector<double>& pmf, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
    acc += pmf[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(pmf.size()) - 1;
}

}  // namespace relayplan
