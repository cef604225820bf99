#include "sweetspot/resample.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "sweetspot/error.hpp"
#include "sweetspot/models.hpp"

namespace sweetspot {

ResamplePlan make_plan(std::size_t N, std::size_t K, std::size_t B, std::uint64_t seed) {
  if (K < 2 || K > N || B < 1) {
    throw Error(Errc::BadK, "K=" + std::to_string(K) + ", N=" + std::to_string(N) + ", B=" + std::to_string(B));
  }
  ResamplePlan plan{N, K, B, seed, {}};
  for (std::size_t b = 0; b < B; ++b) {
    std::mt19937_64 rng(mix_seed(seed, b));
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> labels(N);
    for (std::size_t pos = 0; pos < N; ++pos) labels[order[pos]] = static_cast<int>(pos % K) + 1;
    plan.assignments.push_back(std::move(labels));
  }
  return plan;
}

std::vector<std::size_t> ResamplePlan::test_rows(std::size_t repeat, std::size_t fold) const {
  std::vector<std::size_t> rows;
  const auto& a = assignments.at(repeat);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == static_cast<int>(fold) + 1) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> ResamplePlan::train_rows(std::size_t repeat, std::size_t fold) const {
  std::vector<std::size_t> rows;
  const auto& a = assignments.at(repeat);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != static_cast<int>(fold) + 1) rows.push_back(i);
  }
  return rows;
}

}  // namespace sweetspot
