#include "acquisition/qmc.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace pf2es::acquisition {

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

}  // namespace

Matrix scrambled_halton(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw ContractError("halton: n and dim must be positive");
  const auto primes = first_primes(dim);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix out(n, dim);
  for (int j = 0; j < dim; ++j) {
    const int b = primes[j];
    // Enough digits that b^-digits is below double resolution.
    const int digits = static_cast<int>(std::ceil(53.0 * std::log(2.0) / std::log(static_cast<double>(b))));
    std::vector<std::vector<int>> perms(digits, std::vector<int>(b));
    for (auto& p : perms) {
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
    }
    for (int i = 0; i < n; ++i) {
      unsigned long long idx = static_cast<unsigned long long>(i);
      double value = 0.0;
      double scale = 1.0 / b;
      for (int k = 0; k < digits; ++k) {
        const int digit = static_cast<int>(idx % b);
        idx /= b;
        value += perms[k][digit] * scale;
        scale /= b;
      }
      value += u(rng) * scale * b;
      out(i, j) = std::clamp(value, 1e-16, 1.0 - 1e-16);
    }
  }
  return out;
}

Matrix normal_base_samples(int n, int dim, std::uint64_t seed) {
  Matrix u = scrambled_halton(n, dim, seed);
  return u.unaryExpr([](double p) { return normal_quantile(p); });
}

}  // namespace pf2es::acquisition
