#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "spb/exponents.hpp"
#include "spb/macchannel.hpp"

using namespace spb;

namespace {

template <typename F>
double time_of(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

Mac random_mac(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
               std::size_t nz) {
  Alphabet ax, ay, az;
  for (std::size_t i = 0; i < nx; ++i) ax.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < ny; ++i) ay.push_back("y" + std::to_string(i));
  for (std::size_t i = 0; i < nz; ++i) az.push_back("z" + std::to_string(i));
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(nx * ny * nz);
  for (std::size_t c = 0; c < nx * ny; ++c) {
    double s = 0.0;
    for (std::size_t z = 0; z < nz; ++z) s += (w[c * nz + z] = u(rng));
    for (std::size_t z = 0; z < nz; ++z) w[c * nz + z] /= s;
  }
  return Mac(ax, ay, az, w);
}

}  // namespace

int main() {
  std::mt19937_64 rng(12345);
  Mac w = random_mac(rng, 2, 2, 3);
  std::vector<double> p = {0.3, 0.2, 0.25, 0.25};
  RatePair r{0.2, 0.3};

  std::printf("kernel                         serial       parallel     speedup\n");

  VGridMins a, b;
  double ts = time_of([&] { a = grid_min_divergence_serial(w, p, r, 8); });
  double tp = time_of([&] { b = grid_min_divergence(w, p, r, 8); });
  std::printf("grid oracle (denom 8)        %8.3fs    %8.3fs    %6.2fx\n", ts, tp,
              ts / tp);
  if (a.all != b.all) {
    std::printf("MISMATCH: serial %.12f parallel %.12f\n", a.all, b.all);
    return 1;
  }

  // code evaluation: random good code at n=12
  Mac w2 = random_mac(rng, 2, 2, 2);
  MultiUserCode code;
  code.n = 12;
  std::uniform_int_distribution<int> bit(0, 1);
  auto draw_book = [&](std::size_t m) {
    std::vector<Seq> book;
    while (book.size() < m) {
      Seq s(std::size_t(code.n));
      for (int& v : s) v = bit(rng);
      if (std::find(book.begin(), book.end(), s) == book.end())
        book.push_back(std::move(s));
    }
    return book;
  };
  code.codebook_x = draw_book(16);
  code.codebook_y = draw_book(16);
  code.ml = false;
  code.partition = ml_decoder(code, w2);

  ErrorReport ra, rb;
  ts = time_of([&] { ra = evaluate_serial(code, w2); });
  tp = time_of([&] { rb = evaluate(code, w2); });
  std::printf("code evaluation (n=12,16x16) %8.3fs    %8.3fs    %6.2fx\n", ts, tp,
              ts / tp);
  if (std::abs(ra.average - rb.average) > 1e-12) {
    std::printf("MISMATCH: serial %.12f parallel %.12f\n", ra.average, rb.average);
    return 1;
  }
  return 0;
}
