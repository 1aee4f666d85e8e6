#pragma once

#include <string_view>

// Default data compiled into the library from core/data/ at build time.
namespace ccwb::embedded {

// Cost table text for an architecture id, or empty view if unknown.
std::string_view cost_tables(std::string_view arch);

// The shipped default corpus text.
std::string_view default_corpus_text();

// Default search space text for an architecture id (family-mapped:
// z180/z80n share z80's, the Rabbit group shares r3ka's), or empty
// view if unknown.
std::string_view default_space_text(std::string_view arch);

}  // namespace ccwb::embedded
