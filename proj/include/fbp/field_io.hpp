#pragma once

#include <iosfwd>
#include <string>

#include "fbp/grid.hpp"

namespace fbp {

/// CSV grid format:
///   nx,ny,h,origin_x,origin_y
///   <nx>,<ny>,<h>,<ox>,<oy>
///   then ny lines of nx comma-separated values, row j = 0 first.
/// Numbers are written with %.17g so a round trip is exact. Tags are not
/// stored; reading tags edge nodes DIRICHLET and the rest INTERIOR.
void write_field_csv(std::ostream& out, const ScalarField& u);
ScalarField read_field_csv(std::istream& in);

void save_field_csv(const std::string& path, const ScalarField& u);
ScalarField load_field_csv(const std::string& path);

/// Binary 8-bit PGM (P5), linear map [min, max] -> [0, 255], top row = max y.
void save_field_pgm(const std::string& path, const ScalarField& u);

/// %.17g formatting shared by every text writer.
std::string format_double(double v);

}  // namespace fbp
