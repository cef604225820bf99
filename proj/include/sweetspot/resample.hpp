#pragma once

#include <cstdint>
#include <vector>

namespace sweetspot {

/// B repeats of a K-fold partition of N rows. Fold sizes differ by at most one
/// and identical (N, K, B, seed) give identical assignments.
struct ResamplePlan {
  std::size_t N = 0;
  std::size_t K = 0;
  std::size_t B = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> assignments;  // B x N, labels 1..K

  std::vector<std::size_t> test_rows(std::size_t repeat, std::size_t fold) const;   // fold is 0-based
  std::vector<std::size_t> train_rows(std::size_t repeat, std::size_t fold) const;
  std::size_t resamples() const { return K * B; }
};

/// Throws BadK unless 2 <= K <= N and B >= 1.
ResamplePlan make_plan(std::size_t N, std::size_t K, std::size_t B, std::uint64_t seed);

}  // namespace sweetspot
