#pragma once

// Internal helpers for the convention / search-space document format:
// '#' comments, [section] headers, 'key = value' lines.  Not installed.

#include <string>
#include <vector>

#include "ccwb/convention.hpp"

namespace ccwb::doc {

struct Line {
  std::string section;
  std::string key;
  std::string value;
  int lineno = 0;
};

std::string trim(const std::string& s);
std::vector<Line> scan(const std::string& text, const std::string& origin);
std::vector<std::string> split(const std::string& s, char sep);
bool parse_bool(const std::string& v, const std::string& ctx);
int parse_int(const std::string& v, const std::string& ctx);

// "hl" or "hl:de", with an optional "@first" suffix.
ArgPrefEntry parse_entry(const std::string& text, const std::string& ctx);
std::vector<ArgPrefEntry> parse_pref_list(const std::string& value,
                                          const std::string& ctx);

}  // namespace ccwb::doc
