#include "spintomo/block_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spintomo/errors.hpp"
#include "spintomo/parallel.hpp"

namespace spintomo {

namespace {

constexpr std::int64_t kChunk = 4096;

template <class T>
std::vector<T> chunked_block_sums(std::int64_t n, int num_blocks, int threads, const T& zero,
                                  const std::function<T(std::int64_t)>& contribution) {
  check_blocking(n, num_blocks);
  const std::int64_t block_size = n / num_blocks;
  const std::int64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::map<int, T>> partial(chunks);
  parallel_for_chunks(chunks, threads, [&](std::int64_t c) {
    const std::int64_t end = std::min(n, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < end; ++i) {
      const int block = static_cast<int>(i / block_size);
      auto [it, inserted] = partial[c].try_emplace(block, zero);
      it->second += contribution(i);
    }
  });
  std::vector<T> sums(num_blocks, zero);
  for (const auto& chunk : partial) {
    for (const auto& [block, value] : chunk) sums[block] += value;
  }
  for (auto& s : sums) s /= static_cast<double>(block_size);
  return sums;
}

}  // namespace

void check_blocking(std::int64_t num_samples, int num_blocks) {
  if (num_blocks < 2) throw InvalidArgument("at least 2 statistical blocks are required");
  if (num_samples <= 0) throw InvalidArgument("no samples to analyse");
  if (num_samples % num_blocks != 0) {
    throw InvalidArgument("sample count " + std::to_string(num_samples) + " is not divisible by " +
                          std::to_string(num_blocks) + " blocks");
  }
}

BlockStatistics statistics_from_block_means(std::vector<CMatrix> block_means) {
  const int b = static_cast<int>(block_means.size());
  if (b < 2) throw InvalidArgument("at least 2 statistical blocks are required");
  BlockStatistics out;
  out.mean = CMatrix::Zero(block_means.front().rows(), block_means.front().cols());
  for (const auto& m : block_means) out.mean += m;
  out.mean /= static_cast<double>(b);
  RMatrix var_re = RMatrix::Zero(out.mean.rows(), out.mean.cols());
  RMatrix var_im = var_re;
  for (const auto& m : block_means) {
    const CMatrix d = m - out.mean;
    var_re += d.real().cwiseAbs2();
    var_im += d.imag().cwiseAbs2();
  }
  // sample variance of the block means, then / num_blocks for the error of their mean
  const double scale = 1.0 / (static_cast<double>(b - 1) * b);
  out.err_re = (var_re * scale).cwiseSqrt();
  out.err_im = (var_im * scale).cwiseSqrt();
  out.block_means = std::move(block_means);
  return out;
}

ScalarBlockStatistics statistics_from_block_means(std::vector<double> block_means) {
  const int b = static_cast<int>(block_means.size());
  if (b < 2) throw InvalidArgument("at least 2 statistical blocks are required");
  ScalarBlockStatistics out;
  for (double m : block_means) out.mean += m;
  out.mean /= b;
  double var = 0.0;
  for (double m : block_means) var += (m - out.mean) * (m - out.mean);
  out.std_error = std::sqrt(var / (static_cast<double>(b - 1) * b));
  out.block_means = std::move(block_means);
  return out;
}

BlockStatistics block_statistics(std::span<const CMatrix> contributions, int num_blocks) {
  check_blocking(static_cast<std::int64_t>(contributions.size()), num_blocks);
  const std::size_t block_size = contributions.size() / num_blocks;
  std::vector<CMatrix> means;
  for (int b = 0; b < num_blocks; ++b) {
    CMatrix sum = CMatrix::Zero(contributions.front().rows(), contributions.front().cols());
    for (std::size_t i = b * block_size; i < (b + 1) * block_size; ++i) sum += contributions[i];
    means.push_back(sum / static_cast<double>(block_size));
  }
  return statistics_from_block_means(std::move(means));
}

ScalarBlockStatistics block_statistics(std::span<const double> contributions, int num_blocks) {
  check_blocking(static_cast<std::int64_t>(contributions.size()), num_blocks);
  const std::size_t block_size = contributions.size() / num_blocks;
  std::vector<double> means;
  for (int b = 0; b < num_blocks; ++b) {
    double sum = 0.0;
    for (std::size_t i = b * block_size; i < (b + 1) * block_size; ++i) sum += contributions[i];
    means.push_back(sum / static_cast<double>(block_size));
  }
  return statistics_from_block_means(std::move(means));
}

std::vector<CMatrix> parallel_block_means(std::int64_t num_samples, int num_blocks, int threads, int rows, int cols,
                                          const std::function<CMatrix(std::int64_t)>& contribution) {
  return chunked_block_sums<CMatrix>(num_samples, num_blocks, threads, CMatrix::Zero(rows, cols), contribution);
}

std::vector<double> parallel_block_means(std::int64_t num_samples, int num_blocks, int threads,
                                         const std::function<double(std::int64_t)>& contribution) {
  return chunked_block_sums<double>(num_samples, num_blocks, threads, 0.0, contribution);
}

}  // namespace spintomo
