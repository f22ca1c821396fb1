#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qid/numeric.hpp"

namespace qid::fft {

/// In-place unnormalised DFT, X_j = sum_k x_k exp(sign * 2 pi i jk/n).
/// Any length is accepted; powers of two are fastest.
void transform(std::vector<cplx>& data, int sign);

/// Chirp-z transform: X_j = sum_k a_k exp(i theta j k) for j in [0, m).
/// Used for sums over a uniform x grid evaluated on an unrelated uniform z grid.
std::vector<cplx> chirp_z(std::span<const cplx> a, double theta, std::size_t m);

std::size_t next_power_of_two(std::size_t n);

}  // namespace qid::fft
