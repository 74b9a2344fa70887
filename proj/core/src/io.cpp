#include "minkperi/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "minkperi/errors.hpp"

namespace minkperi {
namespace {

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  bool float32 = false;
  bool has_meta = false;
  double spacing = 0.0;
  Vec3 origin{};
  int origin_count = 0;
  GridDims dims{0, 0, 1};
  bool has_dims = false;
};

double parse_double(const std::string& token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("bad number '" + token + "' in PGM header");
  }
  return v;
}

int parse_int(const std::string& token) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("bad integer '" + token + "' in PGM header");
  }
  return v;
}

void parse_comment(const std::string& line, PgmHeader& header) {
  std::istringstream ss(line);
  std::string hash, tag;
  ss >> hash >> tag;
  if (tag != "minkperi") return;
  // Groups of the form key=v0 [v1 [v2]].
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
  for (std::string t; ss >> t;) {
    if (const auto eq = t.find('='); eq != std::string::npos) {
      groups.push_back({t.substr(0, eq), {}});
      if (eq + 1 < t.size()) groups.back().second.push_back(t.substr(eq + 1));
    } else if (groups.empty()) {
      if (t != "float32") throw ParseError("unknown minkperi comment token '" + t + "'");
      header.float32 = true;
    } else {
      groups.back().second.push_back(t);
    }
  }
  for (const auto& [key, values] : groups) {
    if (key == "h") {
      if (values.size() != 1) throw ParseError("h takes one value");
      header.spacing = parse_double(values[0]);
      header.has_meta = true;
    } else if (key == "origin") {
      if (values.size() < 2 || values.size() > 3) throw ParseError("origin takes 2 or 3 values");
      header.origin_count = static_cast<int>(values.size());
      for (std::size_t a = 0; a < values.size(); ++a) {
        header.origin[static_cast<int>(a)] = parse_double(values[a]);
      }
    } else if (key == "dims") {
      if (values.size() != 3) throw ParseError("dims takes 3 values");
      header.has_dims = true;
      for (int a = 0; a < 3; ++a) header.dims[a] = parse_int(values[a]);
    } else {
      throw ParseError("unknown minkperi header key '" + key + "'");
    }
  }
}

std::string next_token(std::istream& in, PgmHeader& header) {
  std::string token;
  while (true) {
    const int c = in.peek();
    if (c == EOF) throw ParseError("truncated PGM header");
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      parse_comment(line, header);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(in.get()));
  }
}

PgmHeader read_header(std::istream& in) {
  PgmHeader header;
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') throw ParseError("not a binary PGM (P5) file");
  header.width = parse_int(next_token(in, header));
  header.height = parse_int(next_token(in, header));
  header.maxval = parse_int(next_token(in, header));
  // Exactly one whitespace byte separates the header from the payload; it
  // was consumed by next_token.
  if (header.width <= 0 || header.height <= 0) throw ParseError("PGM dimensions must be positive");
  if (header.maxval != 255) throw ParseError("PGM maxval must be 255");
  if (!header.has_meta) throw ParseError("PGM lacks the '# minkperi h=... origin=...' comment");
  if (!(header.spacing > 0.0)) throw ParseError("PGM spacing must be positive");
  return header;
}

GridGeometry geometry_from_header(const PgmHeader& header) {
  if (header.has_dims) {
    const auto& d = header.dims;
    if (d[0] <= 0 || d[1] <= 0 || d[2] <= 0) throw ParseError("dims must be three positive integers");
    if (d[0] != header.width || static_cast<long long>(d[1]) * d[2] != header.height) {
      throw ParseError("dims do not match the PGM raster size");
    }
    if (header.origin_count != 3) throw ParseError("volume PGM needs a 3D origin");
    return GridGeometry(3, header.spacing, header.origin, d);
  }
  if (header.origin_count != 2) throw ParseError("planar PGM needs a 2D origin");
  return GridGeometry(2, header.spacing, header.origin, {header.width, header.height, 1});
}

void write_header(std::ostream& out, const GridGeometry& g, bool float32) {
  out << "P5\n";
  if (float32) out << "# minkperi float32\n";
  out << "# minkperi h=" << format_double(g.spacing()) << " origin=" << format_double(g.origin().x)
      << ' ' << format_double(g.origin().y);
  if (g.dim() == 3) {
    out << ' ' << format_double(g.origin().z) << " dims=" << g.dims()[0] << ' ' << g.dims()[1]
        << ' ' << g.dims()[2];
  }
  out << '\n' << g.dims()[0] << ' ' << g.dims()[1] * g.dims()[2] << "\n255\n";
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw InvalidArgument("cannot format number");
  return std::string(buf.data(), ptr);
}

void write_pgm(std::ostream& out, const GridSet& set) {
  write_header(out, set.geometry(), false);
  std::vector<char> payload(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) payload[i] = set.occupied(i) ? char(255) : char(0);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw ResourceLimit("failed to write PGM payload");
}

GridSet read_pgm(std::istream& in) {
  const PgmHeader header = read_header(in);
  if (header.float32) throw ParseError("float32 PGM given where a binary grid was expected");
  const GridGeometry g = geometry_from_header(header);
  std::vector<char> payload(g.size());
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (in.gcount() != static_cast<std::streamsize>(payload.size())) {
    throw ParseError("truncated PGM payload");
  }
  std::vector<std::uint8_t> cells(g.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto v = static_cast<unsigned char>(payload[i]);
    if (v != 0 && v != 255) throw ParseError("PGM values must be 0 or 255");
    cells[i] = v == 255 ? 1 : 0;
  }
  return GridSet(g, std::move(cells));
}

void write_pgm_float32(std::ostream& out, const ScalarField& field) {
  write_header(out, field.geometry, true);
  std::vector<char> payload(4 * field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(field.values[i]));
    for (int b = 0; b < 4; ++b) payload[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw ResourceLimit("failed to write PGM payload");
}

ScalarField read_pgm_float32(std::istream& in) {
  const PgmHeader header = read_header(in);
  if (!header.float32) throw ParseError("missing '# minkperi float32' comment");
  ScalarField field;
  field.geometry = geometry_from_header(header);
  std::vector<char> payload(4 * field.geometry.size());
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (in.gcount() != static_cast<std::streamsize>(payload.size())) {
    throw ParseError("truncated float32 payload");
  }
  field.values.resize(field.geometry.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(payload[4 * i + b])) << (8 * b);
    }
    field.values[i] = std::bit_cast<float>(bits);
  }
  return field;
}

std::string polytope_to_json(const ConvexPolytope& p) {
  nlohmann::json doc;
  doc["n"] = p.dim();
  auto& verts = doc["vertices"] = nlohmann::json::array();
  for (const auto& v : p.vertices()) {
    if (p.dim() == 2) {
      verts.push_back({v.x, v.y});
    } else {
      verts.push_back({v.x, v.y, v.z});
    }
  }
  return doc.dump() + "\n";
}

ConvexPolytope polytope_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polytope JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("vertices")) {
    throw ParseError("polytope JSON needs fields 'n' and 'vertices'");
  }
  if (!doc["n"].is_number_integer()) throw ParseError("'n' must be an integer");
  const int n = doc["n"].get<int>();
  if (n != 2 && n != 3) throw ParseError("'n' must be 2 or 3");
  const auto& verts = doc["vertices"];
  if (!verts.is_array()) throw ParseError("'vertices' must be an array");
  std::vector<Vec3> pts;
  for (const auto& v : verts) {
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
      throw ParseError("each vertex must have exactly n coordinates");
    }
    Vec3 x{};
    for (int a = 0; a < n; ++a) {
      if (!v[a].is_number()) throw ParseError("vertex coordinates must be numbers");
      x[a] = v[a].get<double>();
    }
    pts.push_back(x);
  }
  try {
    if (n == 3) return convex_hull(pts, 3);
    double signed_area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      signed_area += cross2(pts[i], pts[(i + 1) % pts.size()]);
    }
    if (signed_area < 0.0) std::reverse(pts.begin(), pts.end());
    return ConvexPolytope::polygon(std::move(pts));
  } catch (const DegenerateInput& e) {
    throw ParseError(std::string("polytope JSON: ") + e.what());
  }
}

Shape read_shape(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  if (in.peek() == 'P') return read_pgm(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return polytope_from_json(ss.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ResourceLimit("cannot write " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr);
  }
  void update(const char* data, std::size_t size) { EVP_DigestUpdate(ctx_.get(), data, size); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
      out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return out.str();
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  Sha256 hash;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    hash.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return hash.hex();
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 hash;
  hash.update(bytes.data(), bytes.size());
  return hash.hex();
}

}  // namespace minkperi
