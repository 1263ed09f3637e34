#include "conley/conley_index.hpp"

#include "conley/errors.hpp"

namespace conley::index {

ecoh::Tower conley_tower(const IndexPair& pair, const std::vector<TruncationLevel>& ladder,
                         const ProductDiscs& discs) {
  if (ladder.empty()) throw ConfigError("ladder is empty");
  if (!ladder.front().covers(pair.level))
    throw PreconditionViolation("ladder starts at " + to_string(ladder.front()) + ", below the pair level " +
                                to_string(pair.level));
  return ecoh::build_tower(ecoh::TowerKind::middle, ecoh::expand_ladder(ladder), [&](const TruncationLevel& level) {
    return product_index_pair(pair, level, discs).as_pair();
  });
}

ConleyIndexResult conley_index(const IndexPair& pair, const std::vector<TruncationLevel>& ladder,
                               const ConleyOptions& options) {
  if (!pair.regular) throw PreconditionViolation("index pair is not regular");
  ConleyIndexResult out;
  out.tower = conley_tower(pair, ladder, options.discs);
  out.limit = ecoh::stabilized_limit(out.tower, options.window);
  return out;
}

IndependenceReport verify_independence(const IndexPair& a, const IndexPair& b,
                                       const std::vector<TruncationLevel>& ladder, const ConleyOptions& options) {
  IndependenceReport rep;
  rep.first = conley_index(a, ladder, options).limit;
  rep.second = conley_index(b, ladder, options).limit;
  rep.equal = rep.first.stabilized && rep.second.stabilized && rep.first.ranks == rep.second.ranks;
  return rep;
}

Grid region_grid(const functional::Box& region, const TruncationLevel& level, int resolution) {
  if (region.dim() != static_cast<std::size_t>(level.dim()) || region.hi.size() != region.lo.size())
    throw DimensionMismatch("region has " + std::to_string(region.dim()) + " axes, level " + to_string(level) +
                            " needs " + std::to_string(level.dim()));
  if (resolution < 1) throw ConfigError("resolution must be positive");
  std::vector<cubical::Axis> axes;
  for (std::size_t i = 0; i < region.dim(); ++i) {
    if (!(region.lo[i] < region.hi[i])) throw ConfigError("region axis " + std::to_string(i) + " is empty");
    axes.push_back({region.lo[i], region.hi[i], resolution});
  }
  return Grid(level, std::move(axes));
}

RegionPair index_pair_for_region(const FunctionalSpec& spec, const TruncationLevel& level,
                                 const functional::Box& region, int resolution, const FlowParams& params) {
  const Grid grid = region_grid(region, level, resolution);
  RegionPair out;
  out.map = outer_map(spec, grid, level, params);
  out.pair = build_index_pair(CubeSet::full(grid), out.map);
  return out;
}

}  // namespace conley::index
