#pragma once

#include <string>

#include "spb/macchannel.hpp"

namespace spb {

// Structured-text channel file: fields X, Y, Z (label arrays) and W (nested
// array indexed [x][y][z]). Entries may be decimal strings for bit-exact
// ingestion. Throws ValidationError naming the offending row.
Mac load_channel(const std::string& path);
Mac parse_channel(const std::string& text);

// Code files carry n, both codebooks as label sequences, and either "ML" or
// an explicit partition of z-sequence ranks.
MultiUserCode load_code(const std::string& path, const Mac& w);
void save_code(const std::string& path, const MultiUserCode& code, const Mac& w);
std::string code_to_text(const MultiUserCode& code, const Mac& w);

}  // namespace spb
