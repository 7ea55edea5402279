#pragma once

#include <iosfwd>
#include <string>

#include "arat/game.hpp"
#include "arat/tracer.hpp"

namespace arat {

/// Parses a game document. Shape errors inside the document are parse
/// errors (kParse); numeric invariants are left to validate().
AratGame parse_game_json(const std::string& text);

/// Reads and parses a file. Throws kParse on I/O or syntax problems.
AratGame load_game(const std::string& path);

/// Serializes in the same layout parse_game_json reads, numbers round-trip.
std::string game_to_json(const AratGame& game, int indent = 2);

/// "a,b,c" -> vector. Throws kParse.
Vector parse_csv_vector(const std::string& text);

/// Header then one row per path point, scientific notation with 17
/// significant digits.
void write_trace_csv(std::ostream& out, const TraceResult& result);

}  // namespace arat
