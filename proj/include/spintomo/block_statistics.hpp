#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spintomo/linalg.hpp"

namespace spintomo {

/// Contiguous equal-size blocks; error = sample std of block means / sqrt(num_blocks),
/// taken separately for the real and imaginary parts.
struct BlockStatistics {
  std::vector<CMatrix> block_means;
  CMatrix mean;  // exactly the mean of block_means
  RMatrix err_re;
  RMatrix err_im;
};

struct ScalarBlockStatistics {
  std::vector<double> block_means;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Throws InvalidArgument unless num_blocks >= 2 and num_samples is a positive multiple of it.
void check_blocking(std::int64_t num_samples, int num_blocks);

BlockStatistics block_statistics(std::span<const CMatrix> contributions, int num_blocks);
ScalarBlockStatistics block_statistics(std::span<const double> contributions, int num_blocks);

BlockStatistics statistics_from_block_means(std::vector<CMatrix> block_means);
ScalarBlockStatistics statistics_from_block_means(std::vector<double> block_means);

/// Block means of contribution(i), i in [0, num_samples), evaluated on `threads` workers in
/// fixed-size chunks whose partial sums are merged in chunk order.
std::vector<CMatrix> parallel_block_means(std::int64_t num_samples, int num_blocks, int threads, int rows, int cols,
                                          const std::function<CMatrix(std::int64_t)>& contribution);
std::vector<double> parallel_block_means(std::int64_t num_samples, int num_blocks, int threads,
                                         const std::function<double(std::int64_t)>& contribution);

}  // namespace spintomo
