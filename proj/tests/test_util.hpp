#pragma once

#include <random>
#include <string>
#include <vector>

#include "spb/macchannel.hpp"

namespace testutil {

inline spb::Alphabet labels(const char* prefix, std::size_t k) {
  spb::Alphabet a;
  for (std::size_t i = 0; i < k; ++i) a.push_back(prefix + std::to_string(i));
  return a;
}

// strictly positive random channel (all supports full)
inline spb::Mac random_mac(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
                           std::size_t nz, double floor = 0.05) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> w(nx * ny * nz);
  for (std::size_t c = 0; c < nx * ny; ++c) {
    double s = 0.0;
    for (std::size_t z = 0; z < nz; ++z) s += (w[c * nz + z] = u(rng));
    for (std::size_t z = 0; z < nz; ++z) w[c * nz + z] /= s;
  }
  return spb::Mac(labels("x", nx), labels("y", ny), labels("z", nz), w);
}

// noiseless binary adder: Z = X + Y over {0,1,2}
inline spb::Mac adder_mac() {
  std::vector<double> w(2 * 2 * 3, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) w[std::size_t((x * 2 + y) * 3 + x + y)] = 1.0;
  return spb::Mac({"0", "1"}, {"0", "1"}, {"0", "1", "2"}, w);
}

// output independent of both inputs
inline spb::Mac useless_mac() {
  std::vector<double> w(2 * 2 * 2, 0.5);
  return spb::Mac({"0", "1"}, {"0", "1"}, {"z0", "z1"}, w);
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k,
                                          double floor = 0.02) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (double& v : p) s += (v = u(rng));
  for (double& v : p) v /= s;
  return p;
}

inline std::vector<spb::Seq> random_codebook(std::mt19937_64& rng, int n,
                                             std::size_t m, std::size_t base,
                                             bool distinct) {
  std::uniform_int_distribution<int> sym(0, int(base) - 1);
  std::vector<spb::Seq> book;
  while (book.size() < m) {
    spb::Seq s(std::size_t(n), 0);
    for (int& v : s) v = sym(rng);
    if (distinct) {
      bool dup = false;
      for (const auto& b : book) dup = dup || b == s;
      if (dup) continue;
    }
    book.push_back(std::move(s));
  }
  return book;
}

}  // namespace testutil
