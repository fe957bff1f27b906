#include "bookie/combinatorics.hpp"

#include <vector>

namespace bookie {

namespace {

using Table = std::vector<std::vector<BigInt>>;

// Rows 0..n_max of c(n, k) from c(n+1, k) = n c(n, k) + c(n, k-1).
Table build_unsigned_stirling(int n_max) {
  Table c(n_max + 1);
  c[0] = {BigInt(1)};
  for (int n = 0; n < n_max; ++n) {
    c[n + 1].assign(n + 2, BigInt(0));
    for (int k = 1; k <= n + 1; ++k) {
      BigInt val = k <= n ? BigInt(n) * c[n][k] : BigInt(0);
      val += c[n][k - 1];
      c[n + 1][k] = val;
    }
  }
  return c;
}

const Table& stirling_table() {
  static const Table table = build_unsigned_stirling(kStirlingTableMax);
  return table;
}

}  // namespace

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt out(1);
  for (int i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

BigInt stirling_first_unsigned(int n, int k) {
  if (n < 0 || k < 0 || k > n) return BigInt(0);
  if (n <= kStirlingTableMax) return stirling_table()[n][k];
  // Beyond the table: extend row by row in big integers.
  std::vector<BigInt> row = stirling_table()[kStirlingTableMax];
  for (int m = kStirlingTableMax; m < n; ++m) {
    std::vector<BigInt> next(m + 2, BigInt(0));
    for (int j = 1; j <= m + 1; ++j) {
      BigInt val = j <= m ? BigInt(m) * row[j] : BigInt(0);
      val += row[j - 1];
      next[j] = val;
    }
    row = std::move(next);
  }
  return row[k];
}

BigInt stirling_first_signed(int n, int k) {
  BigInt c = stirling_first_unsigned(n, k);
  return (n - k) % 2 == 0 ? c : BigInt(-c);
}

}  // namespace bookie
