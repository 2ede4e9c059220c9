#pragma once

#include <span>

#include "gaborfio/types.hpp"

namespace gaborfio::fft {

// forward: kernel exp(-2 pi i ...), backward: exp(+2 pi i ...).
enum class Direction { forward, backward };

// Unnormalized DFT with centered indexing along every axis of a row-major
// n^dim array:  X_k = sum_j x_j exp(-+2 pi i (j - n/2)(k - n/2) / n).
// In place. dim is 1 or 2.
void centered_dft(std::span<cplx> data, int n, int dim, Direction dir);

// Same transform applied independently to `count` contiguous 1-d rows of length n.
void centered_dft_rows(std::span<cplx> data, int n, int count, Direction dir);

}  // namespace gaborfio::fft
