#ifndef DSBETA_RANDOM_HPP_
#define DSBETA_RANDOM_HPP_

#include <cstdint>
#include <random>

#include "dsbeta/linalg.hpp"

namespace dsbeta {

// Reproducible normal stream keyed by (seed, stream_id). Distinct stream ids
// under one seed give independent streams, so Monte Carlo work can be split
// into batches whose results do not depend on scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal() { return normal_(engine_); }
  // Fills row by row.
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Draws per batch when a run is partitioned into streams.
inline constexpr std::size_t kBatchSize = 4096;

}  // namespace dsbeta

#endif  // DSBETA_RANDOM_HPP_
