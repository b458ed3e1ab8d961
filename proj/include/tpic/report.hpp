#pragma once

#include <iosfwd>
#include <string>

#include "tpic/engine.hpp"

namespace tpic {

// Grid report container file, extension .tpic. Layout, all little-endian:
//   "TPIC"  4 bytes magic
//   u32     format version (1)
//   u32     name length, then that many bytes of UTF-8 name
//   u64     step index
//   u32 nx, u32 ny
//   f64 dx, f64 dy, f64 time
//   nx * ny f64 values, row-major (index j * nx + i)

/// File name a payload is stored under: <name>-<step, 6 digits>.tpic
std::string report_filename(const GridPayload& p);

/// Serialize to the container layout. Throws std::runtime_error on I/O
/// failure.
void write_report(const std::string& path, const GridPayload& p);

/// Parse a container file; value bits round-trip exactly. Throws
/// std::runtime_error on I/O failure or malformed content.
GridPayload read_report(const std::string& path);

/// Text form: `# key = value` metadata lines, then `i,j,value` rows with
/// shortest round-trip number formatting.
void dump_csv(const GridPayload& p, std::ostream& os);

}  // namespace tpic
