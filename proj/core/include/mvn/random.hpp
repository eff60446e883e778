#pragma once

#include "mvn/sample.hpp"

#include <array>
#include <cstdint>

namespace mvn {

/// Philox4x32-10 block function (Salmon et al., Random123). Counter-based: the output
/// is a pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Splits a master seed into independent streams. Stream `id` of seed `seed` owns the
/// counter space {(block, id)}, so streams never overlap and need no coordination.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t id() const noexcept { return id_; }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  double normal() noexcept;
  double exponential() noexcept;
  /// Gamma with the given shape and unit scale.
  double gamma(double shape) noexcept;
  double beta(double a, double b) noexcept;
  double chi_squared(double dof) noexcept;
  double student_t(double dof) noexcept;
  double lognormal(double meanlog, double sdlog) noexcept;

  Vector normal_vector(Index d) noexcept;
  /// Uniform on the unit sphere S^{d-1}.
  Vector unit_vector(Index d) noexcept;
  /// n x d matrix of independent standard normals, filled row by row.
  Matrix normal_matrix(Index n, Index d) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Derives a well-mixed 64-bit value from (seed, tag); used to give distinct
/// sub-experiments (null simulation, power simulation, ...) unrelated seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

}  // namespace mvn
