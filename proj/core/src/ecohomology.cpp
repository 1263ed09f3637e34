#include "conley/ecohomology.hpp"

#include <Eigen/SVD>

#include <algorithm>

#include "conley/errors.hpp"

namespace conley::ecoh {

std::string to_string(TowerKind kind) {
  switch (kind) {
    case TowerKind::negative: return "negative";
    case TowerKind::positive: return "positive";
    case TowerKind::middle: return "middle";
  }
  return "?";
}

std::vector<TruncationLevel> expand_ladder(const std::vector<TruncationLevel>& ladder) {
  std::vector<TruncationLevel> out;
  for (const TruncationLevel& l : ladder) {
    if (l.m < 0 || l.n < 0) throw ConfigError("ladder level " + to_string(l) + " is negative");
    if (out.empty()) {
      out.push_back(l);
      continue;
    }
    TruncationLevel cur = out.back();
    if (!l.covers(cur) || l == cur) throw ConfigError("ladder must increase strictly: " + to_string(cur) + " then " + to_string(l));
    while (cur.m < l.m || cur.n < l.n) {
      if (cur.m < l.m) {
        ++cur.m;
        out.push_back(cur);
      }
      if (cur.n < l.n) {
        ++cur.n;
        out.push_back(cur);
      }
    }
  }
  return out;
}

namespace {

int degree_offset(TowerKind kind, const TruncationLevel& level) { return kind == TowerKind::positive ? 0 : level.n; }

void require_nested(const CubicalPair& big, std::size_t axis, const CubicalPair& small) {
  const cubical::Grid& lower = small.total.grid();
  if (!(collapse_axis(big.total, axis, lower) == small.total) || !(collapse_axis(big.sub, axis, lower) == small.sub))
    throw ShapeError("slices at " + to_string(small.total.grid().level()) + " and " +
                     to_string(big.total.grid().level()) + " are not nested");
}

}  // namespace

Tower build_tower(TowerKind kind, const std::vector<TruncationLevel>& unit_ladder, const PairSlicer& slicer) {
  Tower tower;
  tower.kind = kind;
  CubicalPair prev_pair;
  cubical::PairCohomology prev;
  for (std::size_t i = 0; i < unit_ladder.size(); ++i) {
    const TruncationLevel level = unit_ladder[i];
    if (kind == TowerKind::negative && level.m != 0) throw ConfigError("negative tower needs levels with m = 0");
    if (kind == TowerKind::positive && level.n != 0) throw ConfigError("positive tower needs levels with n = 0");
    CubicalPair pair = slicer(level);
    pair.validate();
    if (!(pair.total.grid().level() == level)) throw IncompatibleGrids("slicer returned a pair at the wrong level");
    if (pair.total.size() > kMaxTowerCubes)
      throw ResolutionError("slice at " + to_string(level) + " has " + std::to_string(pair.total.size()) +
                            " cubes, more than the limit of " + std::to_string(kMaxTowerCubes) +
                            "; lower the resolution or the ladder");
    cubical::PairCohomology cur = cubical::PairCohomology::from_pair(pair);

    TowerLevel tl;
    tl.level = level;
    tl.raw = cur.space();
    tl.offset = degree_offset(kind, level);
    tl.normalized = tl.raw.shifted(tl.offset);
    tl.cubes = pair.total.size();
    tl.relative_cells = cur.engine().size();

    if (i > 0) {
      const TruncationLevel a = unit_ladder[i - 1];
      const int off_a = tower.levels.back().offset;
      TowerStep step;
      if (level.m == a.m && level.n == a.n + 1) {
        if (kind == TowerKind::positive) throw ConfigError("positive tower cannot add negative coordinates");
        const std::size_t axis = static_cast<std::size_t>(level.dim()) - 1;
        require_nested(pair, axis, prev_pair);
        const HalfSlices halves = half_slices(pair.total, axis);
        const cubical::AxisProjection proj(pair.total.grid(), axis, prev_pair.total.grid());
        const GradedZ2Map raw = cubical::connecting_map(
            cur, [&](std::uint64_t c) { return halves.hat.closure_contains_cell(c); },
            [&](std::uint64_t c) { return pair.sub.closure_contains_cell(c); }, prev,
            [&](std::uint64_t c) { return proj.project(c); }, false);
        step.kind = StepKind::mayer_vietoris;
        step.map = raw.renormalized(-off_a, -tl.offset);
      } else if (level.m == a.m + 1 && level.n == a.n) {
        if (kind == TowerKind::negative) throw ConfigError("negative tower cannot add positive coordinates");
        require_nested(pair, static_cast<std::size_t>(a.m), prev_pair);
        const auto emb = cubical::Embedding::between(prev_pair.total.grid(), pair.total.grid());
        const GradedZ2Map restriction =
            cubical::restriction_map(prev, cur, [&](std::uint64_t c) { return emb.map_cell(c); });
        step.kind = StepKind::inclusion;
        if (restriction.is_isomorphism()) {
          step.map = cubical::inverse(restriction).renormalized(-off_a, -tl.offset);
        } else {
          step.invertible = false;
          step.map = GradedZ2Map(tower.levels.back().normalized, tl.normalized, 0);
        }
      } else {
        throw ConfigError("ladder step " + to_string(a) + " -> " + to_string(level) + " is not a unit step");
      }
      tower.steps.push_back(std::move(step));
    }
    tower.levels.push_back(std::move(tl));
    prev_pair = std::move(pair);
    prev = std::move(cur);
  }
  return tower;
}

namespace {

PairSlicer shape_slicer(const ShapeSpec& shape, const LadderGrid& grid) {
  return [shape, grid](const TruncationLevel& level) {
    const cubical::Grid g = grid.at(level);
    return CubicalPair{slice(shape, level, g), CubeSet(g)};
  };
}

}  // namespace

Tower tower_negative(const ShapeSpec& shape, const std::vector<int>& ladder, const LadderGrid& grid) {
  std::vector<TruncationLevel> levels;
  for (int n : ladder) levels.push_back({0, n});
  return build_tower(TowerKind::negative, expand_ladder(levels), shape_slicer(shape, grid));
}

Tower tower_positive(const ShapeSpec& shape, const std::vector<int>& ladder, const LadderGrid& grid) {
  std::vector<TruncationLevel> levels;
  for (int m : ladder) levels.push_back({m, 0});
  return build_tower(TowerKind::positive, expand_ladder(levels), shape_slicer(shape, grid));
}

Tower tower_middle(const ShapeSpec& shape, const std::vector<TruncationLevel>& ladder, const LadderGrid& grid) {
  return build_tower(TowerKind::middle, expand_ladder(ladder), shape_slicer(shape, grid));
}

ELimit stabilized_limit(const Tower& tower, int window) {
  if (window < 2) throw PreconditionViolation("stabilization window must be at least 2");
  ELimit out;
  out.window = window;
  const std::size_t maps = tower.steps.size();
  if (maps < static_cast<std::size_t>(window)) {
    out.reason = "ladder has " + std::to_string(maps) + " maps, fewer than the window of " + std::to_string(window);
    if (!tower.levels.empty()) out.ranks = tower.levels.back().normalized;
    out.window_end = tower.levels.empty() ? 0 : tower.levels.size() - 1;
    return out;
  }
  out.window_end = maps;
  out.window_begin = maps - static_cast<std::size_t>(window);
  for (std::size_t i = out.window_begin; i < maps; ++i)
    if (!tower.steps[i].invertible) {
      out.reason = "inclusion step " + std::to_string(i) + " does not restrict isomorphically";
      out.ranks = tower.levels.back().normalized;
      return out;
    }

  // Composites into the final level, longest last.
  auto rank_profile = [](const GradedZ2Map& m) {
    std::map<int, int> r;
    for (int d : m.degrees()) r[d] = m.rank(d);
    return GradedZ2Space(std::move(r));
  };
  GradedZ2Map composite = tower.steps[maps - 1].map;
  const GradedZ2Space reference = rank_profile(composite);
  for (std::size_t i = maps - 1; i-- > out.window_begin;) {
    composite = cubical::compose(composite, tower.steps[i].map);
    if (!(rank_profile(composite) == reference)) {
      out.reason = "surviving ranks change inside the window (from ladder position " + std::to_string(i) + ")";
      out.ranks = reference;
      return out;
    }
  }
  out.ranks = reference;
  out.stabilized = true;
  out.reason = "surviving ranks constant over the window";
  return out;
}

EMorphismReport e_morphism_validate(const EMorphismSpec& map) {
  EMorphismReport rep;
  const int d = map.level.dim();
  const int m = map.level.m;
  const auto n = static_cast<Eigen::Index>(d);
  auto violate = [&](bool& flag, const std::string& msg) {
    flag = false;
    rep.ok = false;
    rep.violations.push_back(msg);
  };
  if (map.linear.rows() != n || map.linear.cols() != n) throw DimensionMismatch("linear part has the wrong shape");
  functional::Matrix pert = map.perturbation.size() == 0 ? functional::Matrix::Zero(n, n) : map.perturbation;
  if (pert.rows() != n || pert.cols() != n) throw DimensionMismatch("perturbation has the wrong shape");
  if (map.translation.size() != 0 && map.translation.size() != n)
    throw DimensionMismatch("translation has the wrong length");

  const double scale = std::max(1.0, map.linear.cwiseAbs().maxCoeff());
  const double tol = map.tolerance * scale;
  Eigen::JacobiSVD<functional::Matrix> svd_l(map.linear);
  if (d > 0 && svd_l.singularValues()(n - 1) <= tol) violate(rep.linear_invertible, "linear part is not invertible");

  // L E+ = E+: the negative rows of the positive columns vanish and the
  // positive block is invertible.
  if (m > 0 && d > m) {
    if (map.linear.block(m, 0, n - m, m).cwiseAbs().maxCoeff() > tol)
      violate(rep.preserves_positive, "linear part moves positive coordinates into negative ones");
  }
  if (m > 0 && rep.preserves_positive) {
    Eigen::JacobiSVD<functional::Matrix> svd_p(map.linear.topLeftCorner(m, m));
    if (svd_p.singularValues()(m - 1) <= tol)
      violate(rep.preserves_positive, "linear part does not map the positive space onto itself");
  }

  Eigen::JacobiSVD<functional::Matrix> svd_k(pert);
  for (Eigen::Index i = 0; i < svd_k.singularValues().size(); ++i)
    if (svd_k.singularValues()(i) > tol) ++rep.perturbation_rank;
  if (map.perturbation_support >= 0) {
    const int s = map.perturbation_support;
    auto inside = [&](Eigen::Index i) {
      return (i < m && i < s) || (i >= m && i - m < s);
    };
    bool leaks = false;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if ((!inside(i) || !inside(j)) && std::abs(pert(i, j)) > tol) leaks = true;
    if (leaks) violate(rep.finite_rank, "perturbation acts outside its declared finite support");
  }

  Eigen::JacobiSVD<functional::Matrix> svd_a(map.linear + pert);
  const double smin = d > 0 ? svd_a.singularValues()(n - 1) : 1.0;
  if (smin <= tol) {
    violate(rep.bounded_preimages, "affine part is singular, preimages of bounded sets are unbounded");
    rep.preimage_bound = std::numeric_limits<double>::infinity();
  } else {
    rep.preimage_bound = 1.0 / smin;
  }
  return rep;
}

}  // namespace conley::ecoh
