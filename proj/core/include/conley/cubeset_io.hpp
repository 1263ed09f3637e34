#pragma once

// Line-based text format for cube sets:
//
//   cubeset v1
//   grid <m> <n>
//   axis <lo> <hi> <resolution>      (one line per axis, positive axes first)
//   cubes <count>
//   <i_1> <i_2> ... <i_d>            (one line per cube)
//
// Blank lines and lines starting with '#' are ignored.

#include <iosfwd>
#include <string>

#include "conley/grid.hpp"

namespace conley::cubical {

void write_grid(std::ostream& os, const Grid& grid);
Grid read_grid(std::istream& is);

/// Writes "<label> <count>" followed by one cube per line.
void write_cube_section(std::ostream& os, const std::string& label, const CubeSet& set);
CubeSet read_cube_section(std::istream& is, const std::string& label, const Grid& grid);

void write_cubeset(std::ostream& os, const CubeSet& set);
CubeSet read_cubeset(std::istream& is);

void save_cubeset(const std::string& path, const CubeSet& set);
CubeSet load_cubeset(const std::string& path);

/// Next non-empty, non-comment line; throws ConfigError at end of input.
std::string next_line(std::istream& is);

}  // namespace conley::cubical
