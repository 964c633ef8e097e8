#include "hmt/manifold.hpp"

#include <stdexcept>

namespace hmt {

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Cp:
      return "cp";
    case ManifoldKind::Tucker:
      return "tucker";
    case ManifoldKind::Tt:
      return "tt";
  }
  return "unknown";
}

ManifoldKind parse_manifold(std::string_view name) {
  if (name == "cp") return ManifoldKind::Cp;
  if (name == "tucker") return ManifoldKind::Tucker;
  if (name == "tt") return ManifoldKind::Tt;
  throw std::invalid_argument("unknown manifold '" + std::string(name) + "' (expected cp, tucker or tt)");
}

void ManifoldShape::validate() const { (void)structure(); }

std::vector<Index> ManifoldShape::ks() const { return structure().ks; }

QuotientStructure ManifoldShape::structure() const {
  switch (kind) {
    case ManifoldKind::Cp:
      if (ranks.size() != 1) throw DimensionError("CP shape takes a single rank");
      return cp_structure(CpShape{dims, ranks[0]});
    case ManifoldKind::Tucker:
      return tucker_structure(TuckerShape{dims, ranks});
    case ManifoldKind::Tt:
      return tt_structure(TtShape{dims, ranks});
  }
  throw std::logic_error("unreachable manifold kind");
}

Rational ManifoldShape::flop_formula(std::span<const int> z) const {
  switch (kind) {
    case ManifoldKind::Cp:
      if (ranks.size() != 1) throw DimensionError("CP shape takes a single rank");
      return cp_flop_formula(CpShape{dims, ranks[0]}, z);
    case ManifoldKind::Tucker:
      return tucker_flop_formula(TuckerShape{dims, ranks}, z);
    case ManifoldKind::Tt:
      return tt_flop_formula(TtShape{dims, ranks}, z);
  }
  throw std::logic_error("unreachable manifold kind");
}

CpPoint random_cp_point(const CpShape& shape, Rng& rng) {
  shape.validate();
  std::vector<Matrix> factors;
  for (Index n : shape.dims) factors.push_back(random_full_rank(rng, n, shape.r, 50.0));
  return cp_point_from_factors(factors);
}

TuckerPoint random_tucker_point(const TuckerShape& shape, Rng& rng) {
  shape.validate();
  const Index t1 = shape.ranks[0];
  const DenseTensor core = fold(random_invertible(rng, t1, 50.0), shape.ranks, 0);
  std::vector<Matrix> factors;
  for (size_t i = 0; i < shape.dims.size(); ++i) factors.push_back(random_full_rank(rng, shape.dims[i], shape.ranks[i], 50.0));
  return tucker_point_from_decomposition(core, factors);
}

TtPoint random_tt_point(const TtShape& shape, Rng& rng) {
  shape.validate();
  const auto k = shape.ks();
  std::vector<Matrix> cores;
  for (size_t i = 0; i < shape.dims.size(); ++i) cores.push_back(random_full_rank(rng, shape.dims[i], k[i], 50.0));
  return tt_point_from_cores(cores);
}

std::vector<ModeBlocks> random_point(const ManifoldShape& shape, Rng& rng) {
  switch (shape.kind) {
    case ManifoldKind::Cp:
      if (shape.ranks.size() != 1) throw DimensionError("CP shape takes a single rank");
      return random_cp_point(CpShape{shape.dims, shape.ranks[0]}, rng).modes;
    case ManifoldKind::Tucker:
      return random_tucker_point(TuckerShape{shape.dims, shape.ranks}, rng).modes;
    case ManifoldKind::Tt:
      return random_tt_point(TtShape{shape.dims, shape.ranks}, rng).modes;
  }
  throw std::logic_error("unreachable manifold kind");
}

GroupElement stabilizer_sample(const ManifoldShape& shape, std::uint64_t seed) {
  switch (shape.kind) {
    case ManifoldKind::Cp:
      if (shape.ranks.size() != 1) throw DimensionError("CP shape takes a single rank");
      return cp_stabilizer_sample(CpShape{shape.dims, shape.ranks[0]}, seed).assemble();
    case ManifoldKind::Tucker:
      return tucker_stabilizer_sample(TuckerShape{shape.dims, shape.ranks}, seed).assemble();
    case ManifoldKind::Tt:
      return tt_stabilizer_sample(TtShape{shape.dims, shape.ranks}, seed).assemble();
  }
  throw std::logic_error("unreachable manifold kind");
}

ReductiveReport reductive_check(const ManifoldShape& shape, int trials, std::uint64_t seed) {
  switch (shape.kind) {
    case ManifoldKind::Cp:
      if (shape.ranks.size() != 1) throw DimensionError("CP shape takes a single rank");
      return cp_reductive_check(CpShape{shape.dims, shape.ranks[0]}, trials, seed);
    case ManifoldKind::Tucker:
      return tucker_reductive_check(TuckerShape{shape.dims, shape.ranks}, trials, seed);
    case ManifoldKind::Tt:
      return tt_reductive_check(TtShape{shape.dims, shape.ranks}, trials, seed);
  }
  throw std::logic_error("unreachable manifold kind");
}

HorizontalTangent random_horizontal(const QuotientStructure& q, std::span<const ModeBlocks> modes, Rng& rng,
                                    double norm) {
  std::vector<Matrix> leading;
  for (size_t i = 0; i < modes.size(); ++i) leading.push_back(random_normal(rng, q.dims[i], q.ks[i]));
  HorizontalTangent x = project_leading_columns(q, modes, leading);
  const double current = tangent_norm(modes, x);
  if (current > 0)
    for (auto& m : x.modes) {
      m.x11 *= norm / current;
      m.x21 *= norm / current;
    }
  return x;
}

}  // namespace hmt
