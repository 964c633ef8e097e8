#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmt/cp.hpp"
#include "hmt/quotient.hpp"
#include "hmt/random.hpp"
#include "hmt/tt.hpp"
#include "hmt/tucker.hpp"

namespace hmt {

enum class ManifoldKind { Cp, Tucker, Tt };

std::string to_string(ManifoldKind kind);
/// Accepts "cp", "tucker", "tt"; throws std::invalid_argument otherwise.
ManifoldKind parse_manifold(std::string_view name);

/// Shape of any of the three manifolds. `ranks` holds {r} for CP, (t_1..t_d) for Tucker and
/// (s_1..s_{d−1}) for TT.
struct ManifoldShape {
  ManifoldKind kind = ManifoldKind::Cp;
  std::vector<Index> dims;
  std::vector<Index> ranks;

  void validate() const;
  std::vector<Index> ks() const;
  QuotientStructure structure() const;
  Rational flop_formula(std::span<const int> z) const;
};

/// Random well-conditioned point: CP and TT from random factors/cores, Tucker from a random
/// core with invertible mode-1 unfolding and random factors.
std::vector<ModeBlocks> random_point(const ManifoldShape& shape, Rng& rng);
CpPoint random_cp_point(const CpShape& shape, Rng& rng);
TuckerPoint random_tucker_point(const TuckerShape& shape, Rng& rng);
TtPoint random_tt_point(const TtShape& shape, Rng& rng);

/// Assembled stabilizer sample of the shape's reference tensor, deterministic in the seed.
GroupElement stabilizer_sample(const ManifoldShape& shape, std::uint64_t seed);
/// Reductivity dichotomy check with the manifold's own stabilizer sampler.
ReductiveReport reductive_check(const ManifoldShape& shape, int trials, std::uint64_t seed);

/// Horizontal projection of Gaussian leading columns, scaled to the given right-invariant norm.
HorizontalTangent random_horizontal(const QuotientStructure& q, std::span<const ModeBlocks> modes, Rng& rng,
                                    double norm = 1.0);

}  // namespace hmt
