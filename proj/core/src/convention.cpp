#include "ccwb/convention.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "ccwb/error.hpp"
#include "doc_format.hpp"

namespace ccwb {

namespace {

const char* mode_name(CleanupMode m) {
  switch (m) {
    case CleanupMode::caller_always:
      return "caller_always";
    case CleanupMode::callee_always:
      return "callee_always";
    case CleanupMode::conditional:
      return "conditional";
  }
  return "?";
}

std::string join_regs(const std::vector<std::string>& regs) {
  std::string out;
  for (size_t i = 0; i < regs.size(); ++i) {
    if (i > 0) out += ":";
    out += regs[i];
  }
  return out;
}

void check_reg(const CallingConvention& conv, const Architecture& arch,
               const std::string& name, int want_width,
               const std::string& where) {
  const Register* r = arch.find(name);
  if (r == nullptr) {
    throw error("convention '" + conv.name + "': unknown register '" + name +
                "' in " + where + " on " + arch.id);
  }
  if (!arch.allocatable(name)) {
    throw error("convention '" + conv.name + "': register '" + name +
                "' in " + where + " is reserved on " + arch.id);
  }
  if (r->width != want_width) {
    throw error("convention '" + conv.name + "': register '" + name +
                "' in " + where + " is not " + std::to_string(want_width) +
                "-bit");
  }
}

}  // namespace

void validate_convention(const CallingConvention& conv,
                         const Architecture& arch) {
  if (conv.arch != arch.id) {
    throw error("convention '" + conv.name + "' targets " + conv.arch +
                ", not " + arch.id);
  }
  for (int w : {8, 16, 32}) {
    auto it = conv.ret_reg.find(w);
    if (it == conv.ret_reg.end()) {
      throw error("convention '" + conv.name + "': missing return entry for " +
                  std::to_string(w) + "-bit values");
    }
    const auto& regs = it->second;
    std::string where = "return " + std::to_string(w);
    if (w == 32) {
      if (regs.empty()) continue;  // memory-class ("pseudo") return
      if (regs.size() != 2) {
        throw error("convention '" + conv.name +
                    "': 32-bit return needs a register pair or pseudo");
      }
      check_reg(conv, arch, regs[0], 16, where);
      check_reg(conv, arch, regs[1], 16, where);
      if (conflicts(arch, regs[0], regs[1])) {
        throw error("convention '" + conv.name + "': 32-bit return pair " +
                    join_regs(regs) + " overlaps itself");
      }
    } else {
      if (regs.size() != 1) {
        throw error("convention '" + conv.name + "': " + std::to_string(w) +
                    "-bit return needs exactly one register");
      }
      check_reg(conv, arch, regs[0], w, where);
    }
  }
  for (const auto& [w, prefs] : conv.arg_prefs) {
    if (w != 8 && w != 16 && w != 32) {
      throw error("convention '" + conv.name +
                  "': argument preference width must be 8, 16 or 32");
    }
    std::string where = "args " + std::to_string(w);
    for (const auto& entry : prefs) {
      if (w == 32) {
        if (entry.regs.size() != 2) {
          throw error("convention '" + conv.name +
                      "': 32-bit argument entries need a register pair");
        }
        check_reg(conv, arch, entry.regs[0], 16, where);
        check_reg(conv, arch, entry.regs[1], 16, where);
        if (conflicts(arch, entry.regs[0], entry.regs[1])) {
          throw error("convention '" + conv.name + "': 32-bit argument pair " +
                      join_regs(entry.regs) + " overlaps itself");
        }
      } else {
        if (entry.regs.size() != 1) {
          throw error("convention '" + conv.name + "': " + std::to_string(w) +
                      "-bit argument entries need exactly one register");
        }
        check_reg(conv, arch, entry.regs[0], w, where);
      }
    }
  }
  if (conv.max_register_params < 0) {
    throw error("convention '" + conv.name + "': negative register limit");
  }
  if (conv.stack_slot_width_for_8bit != 8 &&
      conv.stack_slot_width_for_8bit != 16) {
    throw error("convention '" + conv.name + "': slot width must be 8 or 16");
  }
  if (conv.stack_slot_width_for_8bit == 16 && arch.push_granularity != 16) {
    throw error("convention '" + conv.name +
                "': 16-bit stack slots need 16-bit pushes, which " + arch.id +
                " does not have");
  }
  if (conv.cleanup.mode == CleanupMode::conditional) {
    for (int w : conv.cleanup.callee_if_return_width_in) {
      if (w != 0 && w != 8 && w != 16 && w != 32) {
        throw error("convention '" + conv.name +
                    "': cleanup widths must be from {0, 8, 16, 32}");
      }
    }
  }
}

CleanupSide resolve_cleanup(const CallingConvention& conv,
                            const FunctionSignature& sig) {
  if (sig.varargs) return CleanupSide::caller;
  switch (conv.cleanup.mode) {
    case CleanupMode::caller_always:
      return CleanupSide::caller;
    case CleanupMode::callee_always:
      return CleanupSide::callee;
    case CleanupMode::conditional:
      break;
  }
  int w = sig.return_type.width;
  const auto& widths = conv.cleanup.callee_if_return_width_in;
  if (std::find(widths.begin(), widths.end(), w) != widths.end()) {
    return CleanupSide::callee;
  }
  if (conv.cleanup.callee_if_float_float &&
      sig.return_type.kind == TypeKind::float_t && !sig.params.empty() &&
      sig.params[0].kind == TypeKind::float_t) {
    return CleanupSide::callee;
  }
  return CleanupSide::caller;
}

AssignmentPlan assign(const CallingConvention& conv,
                      const FunctionSignature& sig, const Architecture& arch) {
  AssignmentPlan plan;
  plan.cleanup_side = resolve_cleanup(conv, sig);
  if (int w = sig.return_type.width; w != 0) {
    auto it = conv.ret_reg.find(w);
    if (it == conv.ret_reg.end()) {
      throw error("unsupported return width " + std::to_string(w));
    }
    plan.return_loc = it->second;
  }

  static const std::vector<ArgPrefEntry> no_prefs;
  auto prefs_for = [&](int w) -> const std::vector<ArgPrefEntry>& {
    auto it = conv.arg_prefs.find(w);
    return it == conv.arg_prefs.end() ? no_prefs : it->second;
  };
  auto width_index = [](int w) { return w == 8 ? 0 : w == 16 ? 1 : 2; };

  std::vector<std::string> used;
  int reg_params = 0;
  bool stack_hit = false;
  std::array<bool, 3> width_seen{};

  for (size_t i = 0; i < sig.params.size(); ++i) {
    int pw = sig.params[i].width;
    if (pw != 8 && pw != 16 && pw != 32) {
      throw error("unsupported parameter width " + std::to_string(pw));
    }
    bool eligible = !sig.varargs && reg_params < conv.max_register_params &&
                    !(conv.stop_on_stack && stack_hit);
    if (conv.first_of_each_width && width_seen[width_index(pw)]) {
      eligible = false;
    }
    ParamLoc loc;
    loc.value_width = pw;
    if (eligible) {
      for (const auto& entry : prefs_for(pw)) {
        if (entry.first_only && i != 0) continue;
        bool clash = false;
        for (const auto& r : entry.regs) {
          for (const auto& u : used) {
            if (conflicts(arch, r, u)) {
              clash = true;
              break;
            }
          }
          if (clash) break;
        }
        if (!clash) {
          loc.regs = entry.regs;
          break;
        }
      }
    }
    if (loc.in_registers()) {
      used.insert(used.end(), loc.regs.begin(), loc.regs.end());
      ++reg_params;
    } else {
      loc.slot_bytes = pw == 8 ? conv.stack_slot_width_for_8bit / 8 : pw / 8;
      loc.offset = plan.stack_arg_bytes;
      plan.stack_arg_bytes += loc.slot_bytes;
      stack_hit = true;
    }
    width_seen[width_index(pw)] = true;
    plan.param_locs.push_back(std::move(loc));
  }
  return plan;
}

std::string print_convention(const CallingConvention& conv) {
  std::ostringstream out;
  out << "arch = " << conv.arch << "\n";
  if (!conv.name.empty()) out << "name = " << conv.name << "\n";
  out << "\n[return]\n";
  for (int w : {8, 16, 32}) {
    out << w << " = ";
    auto it = conv.ret_reg.find(w);
    const auto* regs = it == conv.ret_reg.end() ? nullptr : &it->second;
    if (regs == nullptr || regs->empty()) {
      out << "pseudo";
    } else {
      out << join_regs(*regs);
    }
    out << "\n";
  }
  out << "\n[args]\n";
  for (int w : {8, 16, 32}) {
    out << w << " = ";
    auto it = conv.arg_prefs.find(w);
    if (it == conv.arg_prefs.end() || it->second.empty()) {
      out << "-";
    } else {
      for (size_t i = 0; i < it->second.size(); ++i) {
        if (i > 0) out << ", ";
        out << join_regs(it->second[i].regs);
        if (it->second[i].first_only) out << "@first";
      }
    }
    out << "\n";
  }
  out << "max_register_params = " << conv.max_register_params << "\n";
  out << "stop_on_stack = " << (conv.stop_on_stack ? "true" : "false") << "\n";
  out << "first_of_each_width = "
      << (conv.first_of_each_width ? "true" : "false") << "\n";
  out << "\n[cleanup]\n";
  out << "mode = " << mode_name(conv.cleanup.mode) << "\n";
  if (conv.cleanup.mode == CleanupMode::conditional) {
    out << "callee_if_return_width_in =";
    for (int w : conv.cleanup.callee_if_return_width_in) out << " " << w;
    out << "\n";
    out << "callee_if_float_float = "
        << (conv.cleanup.callee_if_float_float ? "true" : "false") << "\n";
  }
  out << "\n[stack]\n";
  out << "slot_width_8bit = " << conv.stack_slot_width_for_8bit << "\n";
  return out.str();
}

CallingConvention parse_convention(const std::string& text,
                                   const std::string& origin) {
  CallingConvention conv;
  conv.arg_prefs = {{8, {}}, {16, {}}, {32, {}}};
  bool saw_return_width[3] = {false, false, false};
  for (const auto& l : doc::scan(text, origin)) {
    std::string ctx = origin + ":" + std::to_string(l.lineno);
    if (l.section.empty()) {
      if (l.key == "arch") {
        conv.arch = l.value;
      } else if (l.key == "name") {
        conv.name = l.value;
      } else {
        throw error(ctx + ": unknown key '" + l.key + "'");
      }
    } else if (l.section == "return") {
      int w = doc::parse_int(l.key, ctx);
      if (w != 8 && w != 16 && w != 32) {
        throw error(ctx + ": return width must be 8, 16 or 32");
      }
      saw_return_width[w == 8 ? 0 : w == 16 ? 1 : 2] = true;
      if (l.value == "pseudo") {
        if (w != 32) {
          throw error(ctx + ": only 32-bit returns can be pseudo");
        }
        conv.ret_reg[w] = {};
      } else {
        conv.ret_reg[w] = doc::parse_entry(l.value, ctx).regs;
      }
    } else if (l.section == "args") {
      if (l.key == "max_register_params") {
        conv.max_register_params = doc::parse_int(l.value, ctx);
      } else if (l.key == "stop_on_stack") {
        conv.stop_on_stack = doc::parse_bool(l.value, ctx);
      } else if (l.key == "first_of_each_width") {
        conv.first_of_each_width = doc::parse_bool(l.value, ctx);
      } else {
        int w = doc::parse_int(l.key, ctx);
        if (w != 8 && w != 16 && w != 32) {
          throw error(ctx + ": argument width must be 8, 16 or 32");
        }
        conv.arg_prefs[w] = doc::parse_pref_list(l.value, ctx);
      }
    } else if (l.section == "cleanup") {
      if (l.key == "mode") {
        if (l.value == "caller_always") {
          conv.cleanup.mode = CleanupMode::caller_always;
        } else if (l.value == "callee_always") {
          conv.cleanup.mode = CleanupMode::callee_always;
        } else if (l.value == "conditional") {
          conv.cleanup.mode = CleanupMode::conditional;
        } else {
          throw error(ctx + ": unknown cleanup mode '" + l.value + "'");
        }
      } else if (l.key == "callee_if_return_width_in") {
        std::set<int> widths;
        std::istringstream vs(l.value);
        for (std::string w; vs >> w;) {
          widths.insert(doc::parse_int(w, ctx));
        }
        conv.cleanup.callee_if_return_width_in.assign(widths.begin(),
                                                      widths.end());
      } else if (l.key == "callee_if_float_float") {
        conv.cleanup.callee_if_float_float = doc::parse_bool(l.value, ctx);
      } else {
        throw error(ctx + ": unknown key '" + l.key + "'");
      }
    } else if (l.section == "stack") {
      if (l.key == "slot_width_8bit") {
        conv.stack_slot_width_for_8bit = doc::parse_int(l.value, ctx);
      } else {
        throw error(ctx + ": unknown key '" + l.key + "'");
      }
    } else {
      throw error(ctx + ": unknown section [" + l.section + "]");
    }
  }
  if (conv.arch.empty()) throw error(origin + ": missing 'arch ='");
  if (!saw_return_width[0] || !saw_return_width[1] || !saw_return_width[2]) {
    throw error(origin + ": [return] must cover widths 8, 16 and 32");
  }
  // Existence is checked here so a bad document fails early even without
  // the reserved-register profile; validate_convention adds the rest.
  const Architecture& arch = get_architecture(conv.arch, false);
  for (const auto& [w, regs] : conv.ret_reg) {
    for (const auto& r : regs) {
      if (!arch.has(r)) {
        throw error(origin + ": unknown register '" + r + "' on " + conv.arch);
      }
    }
  }
  for (const auto& [w, prefs] : conv.arg_prefs) {
    for (const auto& entry : prefs) {
      for (const auto& r : entry.regs) {
        if (!arch.has(r)) {
          throw error(origin + ": unknown register '" + r + "' on " +
                      conv.arch);
        }
      }
    }
  }
  // Outside conditional mode the refinement fields carry no meaning;
  // normalize them away so round-trips are exact.
  if (conv.cleanup.mode != CleanupMode::conditional) {
    conv.cleanup.callee_if_return_width_in.clear();
    conv.cleanup.callee_if_float_float = false;
  }
  return conv;
}

CallingConvention load_convention_file(const std::string& path,
                                       bool exclude_reserved) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open convention file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  CallingConvention conv = parse_convention(buf.str(), path);
  validate_convention(conv, get_architecture(conv.arch, exclude_reserved));
  return conv;
}

CallingConvention retarget(const CallingConvention& conv,
                           const std::string& arch_id) {
  CallingConvention out = conv;
  out.arch = arch_id;
  validate_convention(out, get_architecture(arch_id, true));
  return out;
}

std::string summarize_convention(const CallingConvention& conv) {
  std::ostringstream out;
  auto list = [&](const std::vector<ArgPrefEntry>& prefs) {
    if (prefs.empty()) return std::string("-");
    std::string s;
    for (size_t i = 0; i < prefs.size(); ++i) {
      if (i > 0) s += "+";
      s += join_regs(prefs[i].regs);
      if (prefs[i].first_only) s += "@first";
    }
    return s;
  };
  for (int w : {8, 16, 32}) {
    auto it = conv.ret_reg.find(w);
    out << "ret" << w << "=";
    if (it == conv.ret_reg.end() || it->second.empty()) {
      out << (w == 32 ? "pseudo" : "-");
    } else {
      out << join_regs(it->second);
    }
    out << " ";
  }
  for (int w : {8, 16, 32}) {
    auto it = conv.arg_prefs.find(w);
    out << "args" << w << "="
        << (it == conv.arg_prefs.end() ? "-" : list(it->second)) << " ";
  }
  out << "cleanup=";
  switch (conv.cleanup.mode) {
    case CleanupMode::caller_always:
      out << "caller";
      break;
    case CleanupMode::callee_always:
      out << "callee";
      break;
    case CleanupMode::conditional: {
      out << "callee_if(";
      for (size_t i = 0; i < conv.cleanup.callee_if_return_width_in.size();
           ++i) {
        if (i > 0) out << "/";
        out << conv.cleanup.callee_if_return_width_in[i];
      }
      if (conv.cleanup.callee_if_float_float) out << "+ff";
      out << ")";
      break;
    }
  }
  out << " slot8=" << conv.stack_slot_width_for_8bit;
  return out.str();
}

}  // namespace ccwb
