#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tpic/config.hpp"

namespace tpic {

/// Deck syntax or semantics problem, carrying the 1-based line number.
class DeckError : public std::runtime_error {
public:
    DeckError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parse a run deck.
///
/// The format is INI-like: [simulation], [tiles], [diagnostics], [features]
/// sections plus one [species "<name>"] section per species, `key = value`
/// entries, `#` comments. Unknown sections and keys are errors, reported with
/// their line number. Structural validity (positive sizes and so on) is the
/// job of validate_config, not the parser.
SimConfig parse_deck(std::string_view text);

/// Read and parse a deck file. File problems raise std::runtime_error.
SimConfig load_deck(const std::string& path);

/// Canonical text form: fixed section and key order, shortest round-trip
/// number formatting. parse_deck(serialize_deck(c)) reproduces c exactly, and
/// serializing again reproduces the same text.
std::string serialize_deck(const SimConfig& cfg);

/// Built-in decks: "cold" (one species at rest), "warm" (unit thermal
/// spread), "weibel" (counter-streaming electron and positron populations).
/// `scale` multiplies the 500x500 base grid extent; particles per cell stay
/// fixed, and the tile edge is the largest divisor of the grid edge not above
/// 25. Throws std::invalid_argument for unknown names or a scale that shrinks
/// the grid below two cells.
SimConfig preset(std::string_view name, double scale = 1.0);

std::vector<std::string> preset_names();

}  // namespace tpic
