#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/grid_set.hpp"

namespace minkperi {

// Binary PGM (P5). Header comment: `# minkperi h=<h> origin=<x> <y> [<z>]`,
// plus ` dims=<nx> <ny> <nz>` for volumes, which are stored as nz slices of
// ny rows stacked vertically. Row j of a slice holds cells (0..nx-1, j).
// Occupied cells are 255, empty cells 0. Doubles are printed in shortest
// round-trip form, so write followed by read reproduces the grid exactly.
void write_pgm(std::ostream& out, const GridSet& set);
GridSet read_pgm(std::istream& in);

// Float variant for potentials and distance fields: same layout and header,
// an extra `# minkperi float32` comment line, maxval 255 and a payload of
// little-endian IEEE-754 single precision values (4 bytes per cell).
void write_pgm_float32(std::ostream& out, const ScalarField& field);
ScalarField read_pgm_float32(std::istream& in);

// {"n": 2, "vertices": [[x, y], ...]} (3 coordinates per vertex when n = 3).
// Vertex order is kept and doubles round-trip exactly.
std::string polytope_to_json(const ConvexPolytope& p);
// Planar input is validated (strictly convex, counter-clockwise); clockwise
// input is accepted and reversed. 3D input is re-hulled.
ConvexPolytope polytope_from_json(const std::string& text);

using Shape = std::variant<GridSet, ConvexPolytope>;

// Reads a PGM grid or a polytope JSON document, chosen by content.
// Throws ParseError on malformed input.
Shape read_shape(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

// Lower-case hex SHA-256 of the file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace minkperi
