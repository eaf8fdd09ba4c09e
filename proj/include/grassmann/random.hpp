#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "grassmann/types.hpp"

namespace grassmann {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-mode seed splitting: the seed for item `index` of `stream` depends
/// only on (master, stream, index), never on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept;

/// Stable 64-bit FNV-1a, used to turn check names into stream ids.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Uniform in [0, 1) and unit-modulus phase, both pure functions of
/// (seed, a, b). Used where entries must not depend on the matrix size.
double hashed_uniform(std::uint64_t seed, std::uint64_t a,
                      std::uint64_t b) noexcept;
cplx hashed_phase(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0, 1/2)).
Mat gaussian_matrix(Index rows, Index cols, Rng& rng);

/// QR of a Gaussian matrix with the phases of diag(R) divided out.
Mat haar_unitary(Index n, Rng& rng);

}  // namespace grassmann
