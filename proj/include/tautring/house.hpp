#pragma once

#include <string>
#include <vector>

#include "tautring/quotient.hpp"

namespace tautring {

// Legal bidegrees 0 <= i <= 2g, 0 <= j <= min(i, 2g - i) + 2d, i + j even.
struct HouseSpec {
  int genus = 0;
  int d = 0;
  std::vector<Bidegree> blocks;  // by j, then i

  static HouseSpec make(int genus, int d);
  // Base dimension for the universal Jacobian over M_{g,1}.
  static int default_dim(int genus) { return 3 * genus - 2; }
  bool contains(Bidegree b) const;
  int max_j() const { return 2 * d + genus; }
};

enum class HouseFormat { Text, Svg };

// Grid of blocks; with dims, each computed block shows its dimension and
// uncomputed ones show "?".
std::string house_render(const HouseSpec& spec, const DimensionTable* dims, HouseFormat format);

}  // namespace tautring
