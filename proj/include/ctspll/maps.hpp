/*
 * procedural benchmark maps: empty, random, room, maze
 *
 * The named 32x32 variants are canonical: fixed internal seeds, byte-stable
 * across runs and platforms.
 */
#pragma once
#include <deque>
#include <string>

#include "grid.hpp"
#include "rng.hpp"

namespace ctspll {

inline GridMap make_empty_map(int width, int height)
{
  GridMap m;
  m.width = width;
  m.height = height;
  m.blocked.assign(static_cast<size_t>(width) * height, 0);
  return m;
}

namespace detail {

// labels the passable component of each cell; returns component count
inline int component_labels(const GridMap& m, std::vector<int>& label)
{
  label.assign(m.size(), -1);
  int comps = 0;
  std::deque<Vertex> queue;
  constexpr int dr[4] = {-1, 1, 0, 0};
  constexpr int dc[4] = {0, 0, -1, 1};
  for (Vertex s = 0; s < m.size(); ++s) {
    if (!m.passable(s) || label[s] >= 0) continue;
    label[s] = comps;
    queue.push_back(s);
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      const int r = m.row(v), c = m.col(v);
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        if (!m.in_bounds(rr, cc)) continue;
        const Vertex u = m.id(rr, cc);
        if (m.passable(u) && label[u] < 0) {
          label[u] = comps;
          queue.push_back(u);
        }
      }
    }
    ++comps;
  }
  return comps;
}

// carves blocked cells until the passable region is a single component:
// repeatedly runs a grid BFS (through walls) from the largest component and
// unblocks the shortest connecting corridor
inline void repair_connectivity(GridMap& m)
{
  constexpr int dr[4] = {-1, 1, 0, 0};
  constexpr int dc[4] = {0, 0, -1, 1};
  std::vector<int> label;
  while (component_labels(m, label) > 1) {
    std::vector<int> comp_size;
    for (int l : label)
      if (l >= 0) {
        if (l >= static_cast<int>(comp_size.size())) comp_size.resize(l + 1, 0);
        ++comp_size[l];
      }
    int main_comp = 0;
    for (size_t i = 1; i < comp_size.size(); ++i)
      if (comp_size[i] > comp_size[main_comp]) main_comp = static_cast<int>(i);

    std::vector<Vertex> parent(m.size(), NO_VERTEX);
    std::vector<uint8_t> seen(m.size(), 0);
    std::deque<Vertex> queue;
    for (Vertex v = 0; v < m.size(); ++v)
      if (label[v] == main_comp) {
        seen[v] = 1;
        queue.push_back(v);
      }
    Vertex hit = NO_VERTEX;
    while (!queue.empty() && hit == NO_VERTEX) {
      const Vertex v = queue.front();
      queue.pop_front();
      const int r = m.row(v), c = m.col(v);
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        if (!m.in_bounds(rr, cc)) continue;
        const Vertex u = m.id(rr, cc);
        if (seen[u]) continue;
        seen[u] = 1;
        parent[u] = v;
        if (m.passable(u) && label[u] != main_comp) {
          hit = u;
          break;
        }
        queue.push_back(u);
      }
    }
    for (Vertex v = hit; v != NO_VERTEX; v = parent[v])
      if (!m.passable(v)) m.blocked[v] = 0;
  }
}

}  // namespace detail

inline GridMap make_random_map(int width, int height, double blocked_frac,
                               uint64_t seed)
{
  GridMap m = make_empty_map(width, height);
  Rng rng(derive_seed(seed, "random-map"));
  for (Vertex v = 0; v < m.size(); ++v)
    if (rng.unit() < blocked_frac) m.blocked[v] = 1;
  if (m.passable_count() == 0) m.blocked[0] = 0;
  detail::repair_connectivity(m);
  return m;
}

// open rooms of room_size x room_size separated by one-cell walls, one door
// in the middle of every shared wall segment
inline GridMap make_room_map(int width, int height, int room_size)
{
  GridMap m = make_empty_map(width, height);
  const int period = room_size + 1;
  auto is_wall = [&](int x) { return x % period == room_size; };
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (is_wall(r) || is_wall(c)) m.blocked[m.id(r, c)] = 1;
  // doors through horizontal walls
  for (int r = 0; r < height; ++r) {
    if (!is_wall(r) || r + 1 >= height) continue;
    for (int c0 = 0; c0 < width; c0 += period) {
      const int c1 = std::min(c0 + room_size, width) - 1;
      if (c1 < c0) continue;
      m.blocked[m.id(r, (c0 + c1) / 2)] = 0;
    }
  }
  // doors through vertical walls
  for (int c = 0; c < width; ++c) {
    if (!is_wall(c) || c + 1 >= width) continue;
    for (int r0 = 0; r0 < height; r0 += period) {
      const int r1 = std::min(r0 + room_size, height) - 1;
      if (r1 < r0) continue;
      m.blocked[m.id((r0 + r1) / 2, c)] = 0;
    }
  }
  detail::repair_connectivity(m);
  return m;
}

namespace detail {

// recursive division: walls on odd offsets, doors on even offsets, so a
// later perpendicular wall can never seal an existing door; regions smaller
// than `grain` stay open
inline void divide(GridMap& m, Rng& rng, int r0, int r1, int c0, int c1,
                   int grain)
{
  const int h = r1 - r0, w = c1 - c0;
  if (h < grain && w < grain) return;
  const bool horizontal = (h > w) || (h == w && rng.below(2) == 0);
  if (horizontal && h >= 3) {
    std::vector<int> wall_rows;
    for (int r = r0 + 1; r <= r1 - 2; ++r)
      if ((r - r0) % 2 == 1) wall_rows.push_back(r);
    if (wall_rows.empty()) return;
    const int rw = wall_rows[rng.below(static_cast<int>(wall_rows.size()))];
    std::vector<int> door_cols;
    for (int c = c0; c < c1; ++c)
      if ((c - c0) % 2 == 0) door_cols.push_back(c);
    const int dc = door_cols[rng.below(static_cast<int>(door_cols.size()))];
    for (int c = c0; c < c1; ++c)
      if (c != dc) m.blocked[m.id(rw, c)] = 1;
    divide(m, rng, r0, rw, c0, c1, grain);
    divide(m, rng, rw + 1, r1, c0, c1, grain);
  } else if (w >= 3) {
    std::vector<int> wall_cols;
    for (int c = c0 + 1; c <= c1 - 2; ++c)
      if ((c - c0) % 2 == 1) wall_cols.push_back(c);
    if (wall_cols.empty()) return;
    const int cw = wall_cols[rng.below(static_cast<int>(wall_cols.size()))];
    std::vector<int> door_rows;
    for (int r = r0; r < r1; ++r)
      if ((r - r0) % 2 == 0) door_rows.push_back(r);
    const int dr = door_rows[rng.below(static_cast<int>(door_rows.size()))];
    for (int r = r0; r < r1; ++r)
      if (r != dr) m.blocked[m.id(r, cw)] = 1;
    divide(m, rng, r0, r1, c0, cw, grain);
    divide(m, rng, r0, r1, cw + 1, c1, grain);
  }
}

}  // namespace detail

inline GridMap make_maze_map(int width, int height, uint64_t seed,
                             double loop_frac, int grain = 3)
{
  GridMap m = make_empty_map(width, height);
  Rng rng(derive_seed(seed, "maze-map"));
  detail::divide(m, rng, 0, height, 0, width, grain);
  // loop-adding: reopen a fraction of wall cells that join two open cells
  for (Vertex v = 0; v < m.size(); ++v) {
    if (!m.blocked[v]) continue;
    const int r = m.row(v), c = m.col(v);
    const bool lr = m.in_bounds(r, c - 1) && m.in_bounds(r, c + 1) &&
                    m.passable(m.id(r, c - 1)) && m.passable(m.id(r, c + 1));
    const bool ud = m.in_bounds(r - 1, c) && m.in_bounds(r + 1, c) &&
                    m.passable(m.id(r - 1, c)) && m.passable(m.id(r + 1, c));
    if ((lr || ud) && rng.unit() < loop_frac) m.blocked[v] = 0;
  }
  detail::repair_connectivity(m);
  return m;
}

// canonical 32x32 benchmark maps
inline const GridMap& builtin_map(const std::string& name)
{
  static const GridMap empty = make_empty_map(32, 32);
  static const GridMap random = make_random_map(32, 32, 0.20, 0xC75u);
  static const GridMap room = make_room_map(32, 32, 4);
  static const GridMap maze = make_maze_map(32, 32, 0xC75u, 0.30, 10);
  if (name == "empty") return empty;
  if (name == "random") return random;
  if (name == "room") return room;
  if (name == "maze") return maze;
  throw ParseError("unknown builtin map '" + name + "'");
}

inline bool is_builtin_map(const std::string& name)
{
  return name == "empty" || name == "random" || name == "room" ||
         name == "maze";
}

}  // namespace ctspll
