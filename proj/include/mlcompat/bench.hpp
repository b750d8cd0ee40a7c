// Copyright 2026 The mlcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The seven classic language microbenchmarks (fib, parse_int, mandel,
// quicksort, pi_sum, rand_mat_stat, rand_mat_mul) and a small timing
// harness. Every kernel returns a checksum that must pass its correctness
// predicate before any timing is reported for it.

#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlcompat/error.hpp"
#include "mlcompat/matrix.hpp"
#include "mlcompat/random.hpp"

namespace mlcompat::bench {

/// Keeps `value` alive so the optimizer cannot drop the work producing it.
template <typename T>
inline void do_not_optimize(T& value) {
  asm volatile("" : : "g"(&value) : "memory");
}

/// Naive doubly recursive Fibonacci; exercises call overhead.
inline std::uint64_t fib(unsigned n) { return n < 2 ? n : fib(n - 1) + fib(n - 2); }

/// Formats random 32-bit values as hex and parses them back; returns how
/// many round-tripped exactly.
inline std::size_t parse_int_bench(std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t ok = 0;
  char buf[16];
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint32_t n = rng.next_u32();
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n, 16);
    std::uint32_t m = 0;
    std::from_chars(buf, end, m, 16);
    if (ec == std::errc() && m == n) ++ok;
  }
  return ok;
}

inline constexpr int kMandelMaxIter = 80;

/// Escape time of c: iterations completed before |z| > 2, z0 = c.
inline int mandel(std::complex<double> c, int max_iter = kMandelMaxIter) {
  std::complex<double> z = c;
  for (int n = 1; n <= max_iter; ++n) {
    if (std::abs(z) > 2.0) return n - 1;
    z = z * z + c;
  }
  return max_iter;
}

/// Escape-time sum over re in -2.0:0.1:0.5, im in -1.0:0.1:1.0.
inline std::uint64_t mandel_bench() {
  std::uint64_t total = 0;
  for (int r = -20; r <= 5; ++r)
    for (int i = -10; i <= 10; ++i)
      total += static_cast<std::uint64_t>(mandel({r / 10.0, i / 10.0}));
  return total;
}

namespace detail {

inline void quicksort_range(std::span<double> v, std::ptrdiff_t lo, std::ptrdiff_t hi) {
  while (lo < hi) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    if (v[mid] < v[lo]) std::swap(v[mid], v[lo]);
    if (v[hi] < v[lo]) std::swap(v[hi], v[lo]);
    if (v[hi] < v[mid]) std::swap(v[hi], v[mid]);
    const double pivot = v[mid];
    std::ptrdiff_t i = lo;
    std::ptrdiff_t j = hi;
    while (i <= j) {
      while (v[i] < pivot) ++i;
      while (v[j] > pivot) --j;
      if (i <= j) std::swap(v[i++], v[j--]);
    }
    // Recurse into the smaller part, loop on the larger.
    if (j - lo < hi - i) {
      quicksort_range(v, lo, j);
      lo = i;
    } else {
      quicksort_range(v, i, hi);
      hi = j;
    }
  }
}

}  // namespace detail

/// In-place recursive quicksort with a median-of-three (first, middle, last)
/// pivot. Input must be NaN-free.
inline void quicksort(std::span<double> v) {
  if (v.size() > 1) detail::quicksort_range(v, 0, static_cast<std::ptrdiff_t>(v.size()) - 1);
}

/// Position-weighted sum, sum_i v[i]*(i+1); changes if order or contents do.
inline double order_checksum(std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * static_cast<double>(i + 1);
  return s;
}

inline std::vector<double> uniform_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

inline double quicksort_bench(std::size_t n, std::uint64_t seed) {
  auto v = uniform_vector(n, seed);
  quicksort(v);
  return order_checksum(v);
}

inline constexpr double kPiSumExpected = 1.644834071848065;

/// 500 repetitions of sum_{k=1}^{10000} 1/k^2; returns the last sum.
inline double pi_sum() {
  double sum = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    sum = 0.0;
    for (int k = 1; k <= 10000; ++k) sum += 1.0 / (static_cast<double>(k) * k);
    do_not_optimize(sum);
  }
  return sum;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("inner dimensions differ");
  Matrix c(a.rows(), b.cols(), 0.0);
  constexpr std::size_t kTile = 64;
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  for (std::size_t i0 = 0; i0 < n; i0 += kTile)
    for (std::size_t k0 = 0; k0 < m; k0 += kTile)
      for (std::size_t j0 = 0; j0 < p; j0 += kTile) {
        const std::size_t i1 = std::min(i0 + kTile, n);
        const std::size_t k1 = std::min(k0 + kTile, m);
        const std::size_t j1 = std::min(j0 + kTile, p);
        for (std::size_t i = i0; i < i1; ++i)
          for (std::size_t k = k0; k < k1; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = j0; j < j1; ++j) c(i, j) += aik * b(k, j);
          }
      }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

inline double trace(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) s += a(i, i);
  return s;
}

/// trace((M' M)^4)
inline double trace_gram_fourth_power(const Matrix& m) {
  const auto g = multiply(transpose(m), m);
  const auto g2 = multiply(g, g);
  return trace(multiply(g2, g2));
}

struct MatStat {
  double s1 = 0.0;  // dispersion of trace((P'P)^4), P = [a b c d]
  double s2 = 0.0;  // dispersion of trace((Q'Q)^4), Q = [a b; c d]
};

inline constexpr std::size_t kMatStatBlock = 5;

/// Coefficient of variation (sample std / mean); 0 for fewer than 2 samples.
inline double coefficient_of_variation(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1)) / mean;
}

/// rand_mat_stat over blocks supplied by `next_block`, which must return a
/// fresh 5x5 matrix per call (a, b, c, d in that order each trial).
template <typename BlockSource>
MatStat rand_mat_stat_with(std::size_t trials, BlockSource&& next_block) {
  if (trials == 0) throw InvalidArgument("rand_mat_stat needs at least one trial");
  constexpr std::size_t n = kMatStatBlock;
  std::vector<double> v(trials), w(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix a = next_block(), b = next_block(), c = next_block(), d = next_block();
    Matrix p(n, 4 * n), q(2 * n, 2 * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        p(r, k) = a(r, k);
        p(r, n + k) = b(r, k);
        p(r, 2 * n + k) = c(r, k);
        p(r, 3 * n + k) = d(r, k);
        q(r, k) = a(r, k);
        q(r, n + k) = b(r, k);
        q(n + r, k) = c(r, k);
        q(n + r, n + k) = d(r, k);
      }
    v[t] = trace_gram_fourth_power(p);
    w[t] = trace_gram_fourth_power(q);
  }
  return {coefficient_of_variation(v), coefficient_of_variation(w)};
}

/// Gaussian blocks; each block is filled column-major from Rng::normal().
inline MatStat rand_mat_stat(std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  return rand_mat_stat_with(trials, [&rng] {
    Matrix m(kMatStatBlock, kMatStatBlock);
    for (std::size_t c = 0; c < kMatStatBlock; ++c)
      for (std::size_t r = 0; r < kMatStatBlock; ++r) m(r, c) = rng.normal();
    return m;
  });
}

/// A then B, each n x n filled row-major from Rng::uniform().
inline std::pair<Matrix, Matrix> random_operands(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(n, n), b(n, n);
  for (auto& x : a.data()) x = rng.uniform();
  for (auto& x : b.data()) x = rng.uniform();
  return {std::move(a), std::move(b)};
}

/// C = A*B for uniform random n x n operands; returns C(0,0).
inline double rand_mat_mul(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("rand_mat_mul needs n >= 1");
  const auto [a, b] = random_operands(n, seed);
  return multiply(a, b)(0, 0);
}

// ---------------------------------------------------------------------------
// Harness

struct BenchRecord {
  std::string name;
  std::size_t iterations = 0;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  double checksum = 0.0;
};

struct Benchmark {
  std::string name;
  std::function<double()> kernel;              // timed; returns the checksum
  std::function<bool(double checksum)> check;  // correctness predicate
};

struct SuiteConfig {
  std::size_t iterations = 5;
  std::uint64_t seed = 42;
  unsigned fib_n = 20;
  std::size_t parse_int_trials = 1000;
  std::size_t quicksort_n = 5000;
  std::size_t rand_mat_stat_trials = 1000;
  std::size_t rand_mat_mul_n = 1000;
};

inline std::uint64_t fib_iterative(unsigned n) {
  std::uint64_t a = 0, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    const auto next = a + b;
    a = b;
    b = next;
  }
  return a;
}

inline constexpr std::uint64_t kMandelChecksum = 14791;

inline std::vector<Benchmark> standard_benchmarks(const SuiteConfig& cfg) {
  std::vector<Benchmark> b;
  b.push_back({"fib",
               [n = cfg.fib_n] { return static_cast<double>(fib(n)); },
               [n = cfg.fib_n](double c) { return c == static_cast<double>(fib_iterative(n)); }});
  b.push_back({"parse_int",
               [t = cfg.parse_int_trials, s = cfg.seed] {
                 return static_cast<double>(parse_int_bench(t, s));
               },
               [t = cfg.parse_int_trials](double c) { return c == static_cast<double>(t); }});
  b.push_back({"mandel", [] { return static_cast<double>(mandel_bench()); },
               [](double c) { return c == static_cast<double>(kMandelChecksum); }});
  b.push_back({"quicksort",
               [n = cfg.quicksort_n, s = cfg.seed] { return quicksort_bench(n, s); },
               [n = cfg.quicksort_n, s = cfg.seed](double c) {
                 auto v = uniform_vector(n, s);
                 std::sort(v.begin(), v.end());
                 return c == order_checksum(v);
               }});
  b.push_back({"pi_sum", [] { return pi_sum(); },
               [](double c) { return std::abs(c - kPiSumExpected) < 1e-12; }});
  b.push_back({"rand_mat_stat",
               [t = cfg.rand_mat_stat_trials, s = cfg.seed] {
                 const auto st = rand_mat_stat(t, s);
                 return std::max(st.s1, st.s2);
               },
               // Both statistics must fall in (0.3, 1.0); check the pair again
               // since the checksum only carries the larger one.
               [t = cfg.rand_mat_stat_trials, s = cfg.seed](double) {
                 const auto st = rand_mat_stat(t, s);
                 return st.s1 > 0.3 && st.s1 < 1.0 && st.s2 > 0.3 && st.s2 < 1.0;
               }});
  b.push_back({"rand_mat_mul",
               [n = cfg.rand_mat_mul_n, s = cfg.seed] { return rand_mat_mul(n, s); },
               [n = cfg.rand_mat_mul_n, s = cfg.seed](double c) {
                 const auto [a, bm] = random_operands(n, s);
                 double ref = 0.0;
                 for (std::size_t k = 0; k < n; ++k) ref += a(0, k) * bm(k, 0);
                 return std::abs(c - ref) <= 1e-12 * std::abs(ref);
               }});
  return b;
}

/// Test hook: makes the named kernel return a wrong (NaN) checksum.
inline void break_kernel(std::vector<Benchmark>& benchmarks, std::string_view name) {
  for (auto& bm : benchmarks)
    if (bm.name == name)
      bm.kernel = [] { return std::nan(""); };
}

/// Checks correctness on a first run, then times `iterations` runs.
/// Throws CorrectnessFailure if the predicate rejects the checksum.
inline BenchRecord run_benchmark(const Benchmark& bm, std::size_t iterations) {
  if (iterations == 0) throw InvalidArgument("iterations must be positive");
  double checksum = bm.kernel();
  if (!bm.check(checksum)) throw CorrectnessFailure(bm.name);

  std::vector<double> seconds;
  seconds.reserve(iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    double c = bm.kernel();
    do_not_optimize(c);
    const auto t1 = std::chrono::steady_clock::now();
    seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(seconds.begin(), seconds.end());
  const std::size_t mid = seconds.size() / 2;
  const double median =
      seconds.size() % 2 ? seconds[mid] : 0.5 * (seconds[mid - 1] + seconds[mid]);
  return {bm.name, iterations, median, seconds.front(), checksum};
}

struct SuiteResult {
  std::vector<BenchRecord> records;
  std::vector<std::string> failures;  // kernels that failed their check
};

/// Runs benchmarks in order; a failing kernel is skipped, not timed.
inline SuiteResult run_suite(std::span<const Benchmark> benchmarks, std::size_t iterations) {
  SuiteResult result;
  for (const auto& bm : benchmarks) {
    try {
      result.records.push_back(run_benchmark(bm, iterations));
    } catch (const CorrectnessFailure& e) {
      result.failures.push_back(e.name());
    }
  }
  return result;
}

inline SuiteResult run_suite(const SuiteConfig& cfg) {
  const auto benchmarks = standard_benchmarks(cfg);
  return run_suite(benchmarks, cfg.iterations);
}

inline nlohmann::ordered_json to_json(const BenchRecord& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["iterations"] = r.iterations;
  j["median_seconds"] = r.median_seconds;
  j["min_seconds"] = r.min_seconds;
  j["checksum"] = r.checksum;
  return j;
}

/// One JSON object per line.
inline std::string to_jsonl(std::span<const BenchRecord> records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

/// Median time of each record divided by that of `reference` (0 if absent).
inline std::vector<std::pair<std::string, double>> relative_to(
    std::span<const BenchRecord> records, std::string_view reference = "fib") {
  double base = 0.0;
  for (const auto& r : records)
    if (r.name == reference) base = r.median_seconds;
  std::vector<std::pair<std::string, double>> out;
  for (const auto& r : records)
    out.emplace_back(r.name, base > 0.0 ? r.median_seconds / base : 0.0);
  return out;
}

}  // namespace mlcompat::bench
