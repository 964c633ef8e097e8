#pragma once

#include <cstdint>
#include <random>

#include "hmt/linalg.hpp"

namespace hmt {

using Rng = std::mt19937_64;

/// Entries drawn i.i.d. from N(0, 1).
Matrix random_normal(Rng& rng, Index rows, Index cols);
/// Square matrix with condition number at most `max_cond` (rejection sampling around I + N(0, s²)).
Matrix random_invertible(Rng& rng, Index n, double max_cond = 20.0);
/// Tall matrix with full column rank and condition number at most `max_cond`.
Matrix random_full_rank(Rng& rng, Index rows, Index cols, double max_cond = 1e3);
/// Random AlgebraElement with N(0, 1) entries.
AlgebraElement random_algebra(Rng& rng, std::span<const Index> dims);

}  // namespace hmt
