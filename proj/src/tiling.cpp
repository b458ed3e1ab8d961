#include "tpic/tiling.hpp"

#include <atomic>
#include <cassert>
#include <stdexcept>

namespace tpic {

bool TileMap::sorted() const {
    const int nt = geom.n_tiles();
    if (tile_offset.size() != static_cast<std::size_t>(nt) + 1) return false;
    if (tile_offset.front() != 0 ||
        tile_offset.back() != static_cast<std::int64_t>(particles.size()))
        return false;
    for (int t = 0; t < nt; ++t) {
        for (std::int64_t k = tile_offset[t]; k < tile_offset[t + 1]; ++k) {
            const Particle& p = particles[static_cast<std::size_t>(k)];
            if (geom.tile_of(p.ix, p.iy) != t) return false;
        }
    }
    return true;
}

std::vector<std::int64_t> count_and_prefix(const TileMap& map) {
    const int nt = map.geom.n_tiles();
    std::vector<std::int64_t> count(static_cast<std::size_t>(nt), 0);
    const std::int64_t n = static_cast<std::int64_t>(map.particles.size());
#pragma omp parallel
    {
        std::vector<std::int64_t> local(static_cast<std::size_t>(nt), 0);
#pragma omp for schedule(static) nowait
        for (std::int64_t k = 0; k < n; ++k) {
            const Particle& p = map.particles[static_cast<std::size_t>(k)];
            ++local[static_cast<std::size_t>(map.geom.tile_of(p.ix, p.iy))];
        }
#pragma omp critical
        for (int t = 0; t < nt; ++t) count[static_cast<std::size_t>(t)] += local[t];
    }

    std::vector<std::int64_t> offset(static_cast<std::size_t>(nt) + 1, 0);
    for (int t = 0; t < nt; ++t) offset[t + 1] = offset[t] + count[t];
    return offset;
}

void register_leaving(const TileMap& map, const std::vector<std::int64_t>& new_offset,
                      MoveBuffers& mv, bool parallel) {
    const int nt = map.geom.n_tiles();
    mv.target_off.assign(static_cast<std::size_t>(nt) + 1, 0);

    // Hole counts per owning tile, then a fill pass; both scan only the
    // owner's own section, so the parallel version stays ascending too.
    std::vector<std::int64_t> holes(static_cast<std::size_t>(nt), 0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int t = 0; t < nt; ++t) {
        std::int64_t h = 0;
        for (std::int64_t k = new_offset[t]; k < new_offset[t + 1]; ++k) {
            const Particle& p = map.particles[static_cast<std::size_t>(k)];
            if (map.geom.tile_of(p.ix, p.iy) != t) ++h;
        }
        holes[static_cast<std::size_t>(t)] = h;
    }
    for (int t = 0; t < nt; ++t) mv.target_off[t + 1] = mv.target_off[t] + holes[t];
    mv.target.resize(static_cast<std::size_t>(mv.target_off[nt]));

#pragma omp parallel for schedule(static) if (parallel)
    for (int t = 0; t < nt; ++t) {
        std::int64_t w = mv.target_off[t];
        for (std::int64_t k = new_offset[t]; k < new_offset[t + 1]; ++k) {
            const Particle& p = map.particles[static_cast<std::size_t>(k)];
            if (map.geom.tile_of(p.ix, p.iy) != t) mv.target[static_cast<std::size_t>(w++)] = k;
        }
    }
}

void register_entering(const TileMap& map, const std::vector<std::int64_t>& new_offset,
                       MoveBuffers& mv, bool parallel) {
    const int nt = map.geom.n_tiles();
    mv.source_off.assign(static_cast<std::size_t>(nt) + 1, 0);

    std::vector<std::int64_t> incoming(static_cast<std::size_t>(nt), 0);
    if (parallel) {
        std::vector<std::atomic<std::int64_t>> cnt(static_cast<std::size_t>(nt));
        for (auto& c : cnt) c.store(0, std::memory_order_relaxed);
#pragma omp parallel for schedule(static)
        for (int t = 0; t < nt; ++t) {
            for (std::int64_t k = new_offset[t]; k < new_offset[t + 1]; ++k) {
                const Particle& p = map.particles[static_cast<std::size_t>(k)];
                const int d = map.geom.tile_of(p.ix, p.iy);
                if (d != t) cnt[static_cast<std::size_t>(d)].fetch_add(1, std::memory_order_relaxed);
            }
        }
        for (int t = 0; t < nt; ++t) incoming[t] = cnt[static_cast<std::size_t>(t)].load();
    } else {
        int owner = 0;
        const std::int64_t n = static_cast<std::int64_t>(map.particles.size());
        for (std::int64_t k = 0; k < n; ++k) {
            while (k >= new_offset[owner + 1]) ++owner;
            const Particle& p = map.particles[static_cast<std::size_t>(k)];
            const int d = map.geom.tile_of(p.ix, p.iy);
            if (d != owner) ++incoming[static_cast<std::size_t>(d)];
        }
    }
    for (int t = 0; t < nt; ++t) mv.source_off[t + 1] = mv.source_off[t] + incoming[t];
    mv.source.resize(static_cast<std::size_t>(mv.source_off[nt]));

    if (parallel) {
        std::vector<std::atomic<std::int64_t>> cur(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) cur[static_cast<std::size_t>(t)].store(mv.source_off[t]);
#pragma omp parallel for schedule(static)
        for (int t = 0; t < nt; ++t) {
            for (std::int64_t k = new_offset[t]; k < new_offset[t + 1]; ++k) {
                const Particle& p = map.particles[static_cast<std::size_t>(k)];
                const int d = map.geom.tile_of(p.ix, p.iy);
                if (d != t) {
                    const std::int64_t w =
                        cur[static_cast<std::size_t>(d)].fetch_add(1, std::memory_order_relaxed);
                    mv.source[static_cast<std::size_t>(w)] = k;
                }
            }
        }
    } else {
        std::vector<std::int64_t> cur(mv.source_off.begin(), mv.source_off.end() - 1);
        int owner = 0;
        const std::int64_t n = static_cast<std::int64_t>(map.particles.size());
        for (std::int64_t k = 0; k < n; ++k) {
            while (k >= new_offset[owner + 1]) ++owner;
            const Particle& p = map.particles[static_cast<std::size_t>(k)];
            const int d = map.geom.tile_of(p.ix, p.iy);
            if (d != owner) mv.source[static_cast<std::size_t>(cur[d]++)] = k;
        }
    }
}

std::int64_t apply_moves(TileMap& map, std::vector<std::int64_t> new_offset,
                         const MoveBuffers& mv, bool parallel) {
    const int nt = map.geom.n_tiles();
    const std::int64_t total = mv.source_off[static_cast<std::size_t>(nt)];
    if (total != mv.target_off[static_cast<std::size_t>(nt)]) {
        throw std::logic_error("apply_moves: source/target totals differ");
    }
    for (int t = 0; t < nt; ++t) {
        if (mv.source_off[t + 1] - mv.source_off[t] != mv.target_off[t + 1] - mv.target_off[t]) {
            throw std::logic_error("apply_moves: tile entrant/hole counts differ");
        }
    }

    // Every mover leaves the array before any slot is overwritten; a mover's
    // own slot may be some other tile's hole.
    std::vector<Particle> scratch(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t m = 0; m < total; ++m) {
        scratch[static_cast<std::size_t>(m)] =
            map.particles[static_cast<std::size_t>(mv.source[static_cast<std::size_t>(m)])];
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t m = 0; m < total; ++m) {
        map.particles[static_cast<std::size_t>(mv.target[static_cast<std::size_t>(m)])] =
            scratch[static_cast<std::size_t>(m)];
    }

    map.tile_offset = std::move(new_offset);
    return total;
}

std::int64_t sort_tiles(TileMap& map, bool parallel) {
    auto new_offset = count_and_prefix(map);
    MoveBuffers mv;
    register_leaving(map, new_offset, mv, parallel);
    register_entering(map, new_offset, mv, parallel);
    const std::int64_t moved = apply_moves(map, std::move(new_offset), mv, parallel);
    assert(map.sorted());
    return moved;
}

}  // namespace tpic
