#pragma once

#include <algorithm>
#include <ostream>
#include <random>
#include <vector>

#include "conley/cubical.hpp"
#include "conley/grid.hpp"

namespace conley::testing {

inline cubical::Grid square_grid(int dim, int resolution, double half = 1.0) {
  std::vector<cubical::Axis> axes(static_cast<std::size_t>(dim), cubical::Axis{-half, half, resolution});
  return cubical::Grid(functional::TruncationLevel{dim, 0}, axes);
}

/// Random cube set grown from a seed cube so that it tends to be connected
/// with holes, which exercises more than trivial cohomology.
inline cubical::CubeSet random_blob(const cubical::Grid& grid, std::size_t target, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> any(0, grid.cube_count() - 1);
  std::vector<std::uint64_t> cubes{any(rng)};
  std::vector<char> in(grid.cube_count(), 0);
  in[cubes[0]] = 1;
  std::uniform_int_distribution<std::size_t> axis_pick(0, grid.dim() - 1);
  std::bernoulli_distribution up(0.5);
  std::size_t attempts = 0;
  while (cubes.size() < target && attempts++ < 50 * target) {
    std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
    std::vector<int> idx = grid.decode_cube(cubes[pick(rng)]);
    const std::size_t a = axis_pick(rng);
    idx[a] += up(rng) ? 1 : -1;
    if (idx[a] < 0 || idx[a] >= grid.axis(a).resolution) continue;
    const std::uint64_t code = grid.cube_code(idx);
    if (in[code]) continue;
    in[code] = 1;
    cubes.push_back(code);
  }
  std::sort(cubes.begin(), cubes.end());
  return cubical::CubeSet(grid, cubes);
}

/// Random subset keeping each cube with probability p.
inline cubical::CubeSet random_subset(const cubical::CubeSet& set, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  std::vector<std::uint64_t> out;
  for (auto c : set.cubes())
    if (keep(rng)) out.push_back(c);
  return cubical::CubeSet(set.grid(), out);
}

}  // namespace conley::testing

namespace conley::cubical {
inline void PrintTo(const GradedZ2Space& space, std::ostream* os) { *os << to_string(space); }
}  // namespace conley::cubical

namespace conley::functional {
inline void PrintTo(const TruncationLevel& level, std::ostream* os) { *os << to_string(level); }
}  // namespace conley::functional
