#include "conley/cubeset_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "conley/errors.hpp"

namespace conley::cubical {

std::string next_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    return line.substr(start, end - start + 1);
  }
  throw ConfigError("unexpected end of cube-set input");
}

namespace {

std::istringstream expect(std::istream& is, const std::string& keyword) {
  std::istringstream ls(next_line(is));
  std::string word;
  ls >> word;
  if (word != keyword) throw ConfigError("expected '" + keyword + "' but found '" + word + "'");
  return ls;
}

void require_clean(std::istringstream& ls, const std::string& what) {
  if (ls.fail()) throw ConfigError("malformed " + what + " line");
  std::string rest;
  if (ls >> rest) throw ConfigError("trailing data on " + what + " line");
}

}  // namespace

void write_grid(std::ostream& os, const Grid& grid) {
  os << "grid " << grid.level().m << ' ' << grid.level().n << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Axis& a : grid.axes()) os << "axis " << a.lo << ' ' << a.hi << ' ' << a.resolution << '\n';
}

Grid read_grid(std::istream& is) {
  auto ls = expect(is, "grid");
  TruncationLevel level;
  ls >> level.m >> level.n;
  require_clean(ls, "grid");
  if (level.m < 0 || level.n < 0) throw ConfigError("negative truncation level in grid header");
  std::vector<Axis> axes;
  for (int i = 0; i < level.dim(); ++i) {
    auto as = expect(is, "axis");
    Axis a;
    as >> a.lo >> a.hi >> a.resolution;
    require_clean(as, "axis");
    axes.push_back(a);
  }
  return Grid(level, std::move(axes));
}

void write_cube_section(std::ostream& os, const std::string& label, const CubeSet& set) {
  os << label << ' ' << set.size() << '\n';
  std::vector<int> idx(set.grid().dim());
  for (std::uint64_t q : set.cubes()) {
    set.grid().decode_cube(q, idx);
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
    os << '\n';
  }
}

CubeSet read_cube_section(std::istream& is, const std::string& label, const Grid& grid) {
  auto ls = expect(is, label);
  long long count = -1;
  ls >> count;
  require_clean(ls, label);
  if (count < 0) throw ConfigError("negative cube count");
  std::vector<std::vector<int>> indices;
  indices.reserve(static_cast<std::size_t>(count));
  for (long long c = 0; c < count; ++c) {
    std::istringstream cs(next_line(is));
    std::vector<int> idx(grid.dim());
    for (int& v : idx) cs >> v;
    require_clean(cs, "cube");
    indices.push_back(std::move(idx));
  }
  try {
    return CubeSet::from_indices(grid, indices);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid cube: ") + e.what());
  }
}

void write_cubeset(std::ostream& os, const CubeSet& set) {
  os << "cubeset v1\n";
  write_grid(os, set.grid());
  write_cube_section(os, "cubes", set);
}

CubeSet read_cubeset(std::istream& is) {
  if (next_line(is) != "cubeset v1") throw ConfigError("missing 'cubeset v1' header");
  const Grid grid = read_grid(is);
  return read_cube_section(is, "cubes", grid);
}

void save_cubeset(const std::string& path, const CubeSet& set) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  write_cubeset(os, set);
}

CubeSet load_cubeset(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  return read_cubeset(is);
}

}  // namespace conley::cubical
