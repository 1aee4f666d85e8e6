#include "doc_format.hpp"

#include <sstream>
#include <stdexcept>

#include "ccwb/error.hpp"

namespace ccwb::doc {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Line> scan(const std::string& text, const std::string& origin) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw error(origin + ":" + std::to_string(lineno) +
                    ": unterminated section header");
      }
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw error(origin + ":" + std::to_string(lineno) +
                  ": expected 'key = value'");
    }
    Line l;
    l.section = section;
    l.key = trim(s.substr(0, eq));
    l.value = trim(s.substr(eq + 1));
    l.lineno = lineno;
    if (l.key.empty()) {
      throw error(origin + ":" + std::to_string(lineno) + ": missing key");
    }
    lines.push_back(std::move(l));
  }
  return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

bool parse_bool(const std::string& v, const std::string& ctx) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw error(ctx + ": expected true or false, got '" + v + "'");
}

int parse_int(const std::string& v, const std::string& ctx) {
  try {
    size_t pos = 0;
    int n = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw error(ctx + ": expected an integer, got '" + v + "'");
  }
}

ArgPrefEntry parse_entry(const std::string& text, const std::string& ctx) {
  ArgPrefEntry entry;
  std::string body = text;
  if (body.size() > 6 && body.substr(body.size() - 6) == "@first") {
    entry.first_only = true;
    body = trim(body.substr(0, body.size() - 6));
  }
  for (const auto& reg : split(body, ':')) {
    if (reg.empty()) throw error(ctx + ": empty register name");
    entry.regs.push_back(reg);
  }
  if (entry.regs.size() > 2) {
    throw error(ctx + ": at most two registers per entry");
  }
  return entry;
}

std::vector<ArgPrefEntry> parse_pref_list(const std::string& value,
                                          const std::string& ctx) {
  std::vector<ArgPrefEntry> prefs;
  if (value == "-") return prefs;
  for (const auto& part : split(value, ',')) {
    if (part.empty()) throw error(ctx + ": empty preference entry");
    prefs.push_back(parse_entry(part, ctx));
  }
  return prefs;
}

}  // namespace ccwb::doc
