#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hmt/manifold.hpp"

namespace hmt {

/// Malformed input file. The message names the offending location, e.g. "modes[1].g21.data".
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointFile {
  ManifoldShape shape;
  std::vector<ModeBlocks> modes;
};

struct TangentFile {
  ManifoldKind kind = ManifoldKind::Cp;
  HorizontalTangent tangent;
};

/// {"shape":[rows,cols],"data":[...]} with 17 significant digits, row-major.
std::string write_matrix(const Matrix& m);
Matrix read_matrix(std::string_view text);
std::string write_tensor(const DenseTensor& t);
DenseTensor read_tensor(std::string_view text);

std::string write_point(const PointFile& p);
PointFile read_point(std::string_view text);
std::string write_tangent(const TangentFile& x);
/// Γ₁₂ blocks are recomputed from the point when the file omits them.
TangentFile read_tangent(std::string_view text, const PointFile& point);

}  // namespace hmt
