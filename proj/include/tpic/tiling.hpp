#pragma once

#include <cstdint>
#include <vector>

#include "tpic/particle.hpp"

namespace tpic {

/// Regular decomposition of the grid into tiles. Tile sizes must divide the
/// grid extents.
struct TileGeometry {
    int nx = 0;
    int ny = 0;
    int tile_nx = 0;
    int tile_ny = 0;

    int tiles_x() const { return nx / tile_nx; }
    int tiles_y() const { return ny / tile_ny; }
    int n_tiles() const { return tiles_x() * tiles_y(); }
    int tile_of(int ix, int iy) const { return (iy / tile_ny) * tiles_x() + ix / tile_nx; }
    int tile_x0(int t) const { return (t % tiles_x()) * tile_nx; }
    int tile_y0(int t) const { return (t / tiles_x()) * tile_ny; }
};

/// All particles of one species, stored in a single array grouped by tile.
/// tile_offset[t] .. tile_offset[t+1] is tile t's section; the array is
/// "sorted" when every particle sits inside the section of the tile its cell
/// belongs to.
struct TileMap {
    TileGeometry geom;
    std::vector<Particle> particles;
    std::vector<std::int64_t> tile_offset;

    bool sorted() const;
};

/// Scratch lists for one sort: `source` holds the indices of particles that
/// must enter each tile, `target` the slots inside each tile's new section
/// that they will fill, both grouped by tile with prefix offsets. A particle
/// is registered exactly when the tile owning its slot under the new offsets
/// differs from the tile its position maps to; that single rule covers both
/// tile changers and particles displaced by a shifting section boundary, and
/// it guarantees each tile registers equally many entries in both lists.
struct MoveBuffers {
    std::vector<std::int64_t> source;
    std::vector<std::int64_t> source_off;
    std::vector<std::int64_t> target;
    std::vector<std::int64_t> target_off;
};

/// Step 1: count particles per destination tile and return the exclusive
/// prefix sum, i.e. the section offsets the array will have once sorted.
std::vector<std::int64_t> count_and_prefix(const TileMap& map);

/// Step 2: record, per tile, the slots of its new section whose occupant
/// belongs elsewhere. Slot order within a tile is ascending.
void register_leaving(const TileMap& map, const std::vector<std::int64_t>& new_offset,
                      MoveBuffers& mv, bool parallel);

/// Step 3: record, per tile, the indices of particles that belong to it but
/// sit outside its new section. With `parallel` the order within a tile is
/// unspecified; serial registration is ascending.
void register_entering(const TileMap& map, const std::vector<std::int64_t>& new_offset,
                       MoveBuffers& mv, bool parallel);

/// Steps 4 and 5: pair each tile's entrants with its vacated slots, move them
/// through a scratch buffer (every mover is taken out before any slot is
/// overwritten), and install the new offsets. Returns the number of particles
/// moved, which is exactly the number whose slot and position disagreed.
std::int64_t apply_moves(TileMap& map, std::vector<std::int64_t> new_offset,
                         const MoveBuffers& mv, bool parallel);

/// Re-establish the sorted invariant after a step of motion. Returns the
/// number of particles moved.
std::int64_t sort_tiles(TileMap& map, bool parallel);

}  // namespace tpic
