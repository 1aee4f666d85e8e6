#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ccwb/arch.hpp"
#include "ccwb/error.hpp"

namespace ccwb {

namespace {

[[noreturn]] void fail(const std::string& origin, int lineno,
                       const std::string& msg) {
  throw error(origin + ":" + std::to_string(lineno) + ": " + msg);
}

std::int64_t parse_count(const std::string& tok, const std::string& origin,
                         int lineno, const char* what) {
  try {
    size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(origin, lineno, std::string("bad ") + what + " '" + tok + "'");
  }
}

}  // namespace

CostTables parse_cost_tables(const std::string& text,
                             const std::string& origin) {
  CostTables t;
  bool saw_version = false;
  bool saw_call = false;
  bool saw_ret = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto want = [&](size_t n) {
      if (tok.size() != n) {
        fail(origin, lineno, "'" + kw + "' expects " + std::to_string(n - 1) +
                                 " fields");
      }
    };
    auto cost_at = [&](size_t i) {
      return Cost{parse_count(tok[i], origin, lineno, "byte count"),
                  parse_count(tok[i + 1], origin, lineno, "cycle count")};
    };
    if (kw == "version") {
      want(2);
      t.version = static_cast<int>(parse_count(tok[1], origin, lineno,
                                               "version"));
      saw_version = true;
    } else if (kw == "arch") {
      want(2);
      t.arch = tok[1];
    } else if (kw == "load") {
      want(5);
      int width = static_cast<int>(parse_count(tok[2], origin, lineno,
                                               "value width"));
      auto key = std::make_pair(tok[1], width);
      if (!t.reg_load.emplace(key, cost_at(3)).second) {
        fail(origin, lineno, "duplicate load entry for " + tok[1]);
      }
    } else if (kw == "push") {
      want(5);
      int slot = static_cast<int>(parse_count(tok[1], origin, lineno,
                                              "slot width"));
      int vw = static_cast<int>(parse_count(tok[2], origin, lineno,
                                            "value width"));
      if (!t.push.emplace(std::make_pair(slot, vw), cost_at(3)).second) {
        fail(origin, lineno, "duplicate push entry");
      }
    } else if (kw == "spadj") {
      want(6);
      CleanupSide side;
      if (tok[1] == "caller") {
        side = CleanupSide::caller;
      } else if (tok[1] == "callee") {
        side = CleanupSide::callee;
      } else {
        fail(origin, lineno, "spadj side must be caller or callee");
      }
      int n = static_cast<int>(parse_count(tok[2], origin, lineno,
                                           "stack byte count"));
      int f = static_cast<int>(parse_count(tok[3], origin, lineno,
                                           "free register count"));
      auto key = std::make_tuple(side, n, f);
      if (!t.sp_adjust.emplace(key, cost_at(4)).second) {
        fail(origin, lineno, "duplicate spadj entry");
      }
    } else if (kw == "call") {
      want(3);
      t.call = cost_at(1);
      saw_call = true;
    } else if (kw == "ret") {
      want(3);
      t.ret = cost_at(1);
      saw_ret = true;
    } else {
      fail(origin, lineno, "unknown keyword '" + kw + "'");
    }
  }
  if (!saw_version) throw error(origin + ": missing version line");
  if (t.version != 1) {
    throw error(origin + ": unsupported cost table version " +
                std::to_string(t.version));
  }
  if (t.arch.empty()) throw error(origin + ": missing arch line");
  if (!saw_call || !saw_ret) {
    throw error(origin + ": missing call or ret entry");
  }
  return t;
}

CostTables load_cost_tables_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open cost table file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cost_tables(buf.str(), path);
}

Cost CostTables::load_cost(std::string_view reg, int value_width) const {
  auto it = reg_load.find(std::make_pair(std::string(reg), value_width));
  if (it == reg_load.end()) {
    throw error("no " + arch + " table entry: load " + std::string(reg) + " " +
                std::to_string(value_width));
  }
  return it->second;
}

bool CostTables::has_push(int slot_width, int value_width) const {
  return push.count(std::make_pair(slot_width, value_width)) != 0;
}

Cost CostTables::push_cost(int slot_width, int value_width) const {
  auto it = push.find(std::make_pair(slot_width, value_width));
  if (it == push.end()) {
    throw error("no " + arch + " table entry: push " +
                std::to_string(slot_width) + " " + std::to_string(value_width));
  }
  return it->second;
}

Cost CostTables::sp_adjust_cost(CleanupSide side, int stack_bytes,
                                int free16) const {
  // Rows exist per (side, bytes) for a contiguous free16 range; clamp
  // the request into that range.  bytes has no fallback.
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& [key, cost] : sp_adjust) {
    if (std::get<0>(key) == side && std::get<1>(key) == stack_bytes) {
      lo = std::min(lo, std::get<2>(key));
      hi = std::max(hi, std::get<2>(key));
    }
  }
  if (lo > hi) {
    throw error("no " + arch + " table entry: spadj " +
                std::string(to_string(side)) + " " +
                std::to_string(stack_bytes));
  }
  int f = std::min(std::max(free16, lo), hi);
  return sp_adjust.at(std::make_tuple(side, stack_bytes, f));
}

}  // namespace ccwb
