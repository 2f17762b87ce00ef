/*
 * 4-connected grid map, parser for the community map format, adjacency graph
 */
#pragma once
#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctspll {

using Vertex = int;  // row-major cell index
constexpr Vertex NO_VERTEX = -1;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> blocked;  // row-major, 1 = impassable

  int size() const { return width * height; }
  bool in_bounds(int r, int c) const
  {
    return r >= 0 && r < height && c >= 0 && c < width;
  }
  Vertex id(int r, int c) const { return r * width + c; }
  int row(Vertex v) const { return v / width; }
  int col(Vertex v) const { return v % width; }
  bool passable(Vertex v) const
  {
    return v >= 0 && v < size() && !blocked[v];
  }
  int passable_count() const
  {
    int n = 0;
    for (auto b : blocked) n += (b == 0);
    return n;
  }
};

namespace detail {
inline std::string strip_cr(std::string s)
{
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}
}  // namespace detail

// format: `type octile` / `height H` / `width W` / `map` / H rows of W chars;
// '.' and 'G' passable, '@' and 'T' blocked
inline GridMap parse_map(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw ParseError("line " + std::to_string(lineno + 1) +
                       ": unexpected end of input, expected " + what);
    ++lineno;
    line = detail::strip_cr(line);
  };

  next_line("'type octile'");
  if (line != "type octile")
    throw ParseError("line 1: expected 'type octile', got '" + line + "'");

  GridMap m;
  next_line("'height H'");
  {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> m.height) || key != "height" || m.height < 1)
      throw ParseError("line 2: expected 'height H' with H >= 1");
  }
  next_line("'width W'");
  {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> m.width) || key != "width" || m.width < 1)
      throw ParseError("line 3: expected 'width W' with W >= 1");
  }
  next_line("'map'");
  if (line != "map")
    throw ParseError("line 4: expected 'map', got '" + line + "'");

  m.blocked.assign(static_cast<size_t>(m.width) * m.height, 0);
  for (int r = 0; r < m.height; ++r) {
    next_line("a map row");
    if (static_cast<int>(line.size()) != m.width)
      throw ParseError("line " + std::to_string(lineno) + ": row width " +
                       std::to_string(line.size()) + " != width " +
                       std::to_string(m.width));
    for (int c = 0; c < m.width; ++c) {
      const char ch = line[c];
      if (ch == '@' || ch == 'T')
        m.blocked[m.id(r, c)] = 1;
      else if (ch != '.' && ch != 'G')
        throw ParseError("line " + std::to_string(lineno) +
                         ": illegal character '" + std::string(1, ch) + "'");
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (!line.empty())
      throw ParseError("line " + std::to_string(lineno) +
                       ": unexpected content after map rows");
  }
  if (m.passable_count() == 0) throw ParseError("map has no passable cells");
  return m;
}

inline std::string serialize_map(const GridMap& m)
{
  std::string out = "type octile\nheight " + std::to_string(m.height) +
                    "\nwidth " + std::to_string(m.width) + "\nmap\n";
  for (int r = 0; r < m.height; ++r) {
    for (int c = 0; c < m.width; ++c)
      out += m.blocked[m.id(r, c)] ? '@' : '.';
    out += '\n';
  }
  return out;
}

// adjacency over a map; neighbor order is up, down, left, right
struct GridGraph {
  GridMap map;
  std::vector<std::array<Vertex, 4>> nbr;
  std::vector<uint8_t> nbr_cnt;
  std::vector<Vertex> passable_cells;

  GridGraph() = default;
  explicit GridGraph(GridMap m_) : map(std::move(m_))
  {
    const int n = map.size();
    nbr.resize(n);
    nbr_cnt.assign(n, 0);
    passable_cells.reserve(map.passable_count());
    constexpr int dr[4] = {-1, 1, 0, 0};
    constexpr int dc[4] = {0, 0, -1, 1};
    for (int r = 0; r < map.height; ++r) {
      for (int c = 0; c < map.width; ++c) {
        const Vertex v = map.id(r, c);
        if (!map.passable(v)) continue;
        passable_cells.push_back(v);
        for (int k = 0; k < 4; ++k) {
          const int rr = r + dr[k], cc = c + dc[k];
          if (map.in_bounds(rr, cc) && map.passable(map.id(rr, cc)))
            nbr[v][nbr_cnt[v]++] = map.id(rr, cc);
        }
      }
    }
  }

  int size() const { return map.size(); }
  int width() const { return map.width; }
  int height() const { return map.height; }
  bool passable(Vertex v) const { return map.passable(v); }
  const Vertex* neighbors(Vertex v) const { return nbr[v].data(); }
  int degree(Vertex v) const { return nbr_cnt[v]; }
};

}  // namespace ctspll
