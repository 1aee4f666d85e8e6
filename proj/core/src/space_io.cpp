#include <fstream>
#include <sstream>

#include "ccwb/embedded.hpp"
#include "ccwb/error.hpp"
#include "ccwb/search.hpp"
#include "doc_format.hpp"

namespace ccwb {

namespace {

// A set-valued field is "{ alt | alt | ... }"; anything else is a
// single fixed alternative.
std::vector<std::string> alternatives(const std::string& value,
                                      const std::string& ctx) {
  if (value.empty()) throw error(ctx + ": empty value");
  if (value.front() != '{') return {value};
  if (value.back() != '}') throw error(ctx + ": unterminated '{'");
  std::string body = value.substr(1, value.size() - 2);
  std::vector<std::string> alts;
  for (const auto& alt : doc::split(body, '|')) {
    if (alt.empty()) throw error(ctx + ": empty alternative");
    alts.push_back(alt);
  }
  return alts;
}

template <typename T>
void push_unique(std::vector<T>& out, T value) {
  for (const auto& v : out) {
    if (v == value) return;
  }
  out.push_back(std::move(value));
}

std::string single_reg(const std::string& alt, const std::string& ctx) {
  ArgPrefEntry e = doc::parse_entry(alt, ctx);
  if (e.first_only || e.regs.size() != 1) {
    throw error(ctx + ": expected a single register, got '" + alt + "'");
  }
  return e.regs[0];
}

std::vector<std::string> reg_pair(const std::string& alt,
                                  const std::string& ctx) {
  ArgPrefEntry e = doc::parse_entry(alt, ctx);
  if (e.first_only || e.regs.size() != 2) {
    throw error(ctx + ": expected a register pair, got '" + alt + "'");
  }
  return e.regs;
}

}  // namespace

SearchSpace parse_space(const std::string& text, const std::string& origin) {
  SearchSpace space;
  space.arg_pref_choices = {{8, {}}, {16, {}}, {32, {}}};
  std::vector<CleanupMode> modes;
  std::vector<int> cleanup_widths;
  std::vector<bool> ffs;

  for (const auto& l : doc::scan(text, origin)) {
    std::string ctx = origin + ":" + std::to_string(l.lineno);
    if (l.section.empty()) {
      if (l.key == "arch") {
        space.arch = l.value;
      } else {
        throw error(ctx + ": unknown key '" + l.key + "'");
      }
    } else if (l.section == "return") {
      int w = doc::parse_int(l.key, ctx);
      for (const auto& alt : alternatives(l.value, ctx)) {
        if (w == 8) {
          push_unique(space.ret8_choices, single_reg(alt, ctx));
        } else if (w == 16) {
          push_unique(space.ret16_choices, single_reg(alt, ctx));
        } else if (w == 32) {
          push_unique(space.ret32_choices, reg_pair(alt, ctx));
        } else {
          throw error(ctx + ": return width must be 8, 16 or 32");
        }
      }
    } else if (l.section == "args") {
      if (l.key == "max_register_params") {
        space.max_register_params = doc::parse_int(l.value, ctx);
      } else if (l.key == "stop_on_stack") {
        space.stop_on_stack = doc::parse_bool(l.value, ctx);
      } else if (l.key == "first_of_each_width") {
        space.first_of_each_width = doc::parse_bool(l.value, ctx);
      } else {
        int w = doc::parse_int(l.key, ctx);
        if (w != 8 && w != 16 && w != 32) {
          throw error(ctx + ": argument width must be 8, 16 or 32");
        }
        for (const auto& alt : alternatives(l.value, ctx)) {
          push_unique(space.arg_pref_choices[w],
                      doc::parse_pref_list(alt, ctx));
        }
      }
    } else if (l.section == "cleanup") {
      if (l.key == "mode") {
        for (const auto& alt : alternatives(l.value, ctx)) {
          if (alt == "caller_always") {
            push_unique(modes, CleanupMode::caller_always);
          } else if (alt == "callee_always") {
            push_unique(modes, CleanupMode::callee_always);
          } else if (alt == "conditional") {
            push_unique(modes, CleanupMode::conditional);
          } else {
            throw error(ctx + ": unknown cleanup mode '" + alt + "'");
          }
        }
      } else if (l.key == "callee_if_return_width_in") {
        std::istringstream vs(l.value);
        cleanup_widths.clear();
        for (std::string w; vs >> w;) {
          push_unique(cleanup_widths, doc::parse_int(w, ctx));
        }
      } else if (l.key == "callee_if_float_float") {
        for (const auto& alt : alternatives(l.value, ctx)) {
          push_unique(ffs, doc::parse_bool(alt, ctx));
        }
      } else {
        throw error(ctx + ": unknown key '" + l.key + "'");
      }
    } else if (l.section == "stack") {
      if (l.key == "slot_width_8bit") {
        for (const auto& alt : alternatives(l.value, ctx)) {
          push_unique(space.stack_width_choices, doc::parse_int(alt, ctx));
        }
      } else {
        throw error(ctx + ": unknown key '" + l.key + "'");
      }
    } else {
      throw error(ctx + ": unknown section [" + l.section + "]");
    }
  }

  if (space.arch.empty()) throw error(origin + ": missing 'arch ='");
  if (space.ret8_choices.empty() || space.ret16_choices.empty() ||
      space.ret32_choices.empty()) {
    throw error(origin + ": [return] must offer choices for 8, 16 and 32");
  }
  for (int w : {8, 16, 32}) {
    if (space.arg_pref_choices[w].empty()) {
      space.arg_pref_choices[w].push_back({});  // fixed: no registers
    }
  }
  if (modes.empty()) modes.push_back(CleanupMode::caller_always);
  if (ffs.empty()) ffs.push_back(false);
  std::sort(cleanup_widths.begin(), cleanup_widths.end());
  for (CleanupMode m : modes) {
    for (bool ff : ffs) {
      CleanupPolicy p;
      p.mode = m;
      if (m == CleanupMode::conditional) {
        p.callee_if_return_width_in = cleanup_widths;
        p.callee_if_float_float = ff;
      }
      push_unique(space.cleanup_choices, p);
    }
  }
  if (space.stack_width_choices.empty()) space.stack_width_choices = {8};
  return space;
}

SearchSpace load_space_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open search space file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_space(buf.str(), path);
}

SearchSpace default_space(const Architecture& arch) {
  auto text = embedded::default_space_text(arch.id);
  if (text.empty()) {
    throw error("no default search space for architecture '" + arch.id + "'");
  }
  SearchSpace space = parse_space(std::string(text), "embedded:" + arch.id);
  // The shipped files are per family; apply to the concrete sibling.
  space.arch = arch.id;
  return space;
}

}  // namespace ccwb
