#include <map>

#include "ccwb/convention.hpp"
#include "ccwb/error.hpp"

namespace ccwb {

namespace {

ArgPrefEntry one(const char* reg) { return {{reg}, false}; }
ArgPrefEntry one_first(const char* reg) { return {{reg}, true}; }
ArgPrefEntry pair(const char* msw, const char* lsw) {
  return {{msw, lsw}, false};
}

CleanupPolicy caller_always() { return {CleanupMode::caller_always, {}, false}; }
CleanupPolicy callee_always() { return {CleanupMode::callee_always, {}, false}; }

// Callee cleanup for void and up-to-16-bit returns (one 16-bit register
// stays free) and for float(float, ...) shapes.
CleanupPolicy small_or_float_float() {
  return {CleanupMode::conditional, {0, 8, 16}, true};
}

CallingConvention base(const char* arch, const char* name) {
  CallingConvention c;
  c.arch = arch;
  c.name = name;
  c.arg_prefs = {{8, {}}, {16, {}}, {32, {}}};
  return c;
}

std::map<std::string, CallingConvention> make_builtins() {
  std::map<std::string, CallingConvention> all;
  auto add = [&](CallingConvention c) {
    validate_convention(c, get_architecture(c.arch, true));
    all.emplace(c.name, std::move(c));
  };

  // The long-standing stm8 convention: everything on the stack, caller
  // cleanup, return values in a / x / x:y.
  {
    CallingConvention c = base("stm8", "stm8-old");
    c.ret_reg = {{8, {"a"}}, {16, {"x"}}, {32, {"x", "y"}}};
    c.cleanup = caller_always();
    add(c);
  }
  // The replacement: first argument in a or x, an a/x pair across the
  // first two arguments, callee cleanup for small returns and
  // float(float...) helpers.
  {
    CallingConvention c = base("stm8", "stm8-new");
    c.ret_reg = {{8, {"a"}}, {16, {"x"}}, {32, {"x", "y"}}};
    c.arg_prefs[8] = {one("a")};
    c.arg_prefs[16] = {one("x")};
    c.cleanup = small_or_float_float();
    add(c);
  }
  // The competing compilers share the a/x argument scheme but return
  // 32-bit values in pseudoregisters and always have the caller clean
  // up.
  {
    CallingConvention c = base("stm8", "stm8-raisonance");
    c.ret_reg = {{8, {"a"}}, {16, {"x"}}, {32, {}}};
    c.arg_prefs[8] = {one("a")};
    c.arg_prefs[16] = {one("x")};
    c.cleanup = caller_always();
    add(c);
  }
  {
    CallingConvention c = base("stm8", "stm8-cosmic");
    c.ret_reg = {{8, {"a"}}, {16, {"x"}}, {32, {}}};
    c.arg_prefs[8] = {one("a")};
    c.arg_prefs[16] = {one("x")};
    c.max_register_params = 1;  // only the first argument
    c.cleanup = caller_always();
    add(c);
  }
  // iar scans by width: the first 8-bit argument goes to a and the
  // first 16-bit one to x wherever they sit, so assignment must not
  // stop at the first stack parameter.
  {
    CallingConvention c = base("stm8", "stm8-iar");
    c.ret_reg = {{8, {"a"}}, {16, {"x"}}, {32, {}}};
    c.arg_prefs[8] = {one("a")};
    c.arg_prefs[16] = {one("x")};
    c.first_of_each_width = true;
    c.stop_on_stack = false;
    c.cleanup = caller_always();
    add(c);
  }

  // z80 and relatives, as inherited from two decades of releases: all
  // parameters on the stack in 16-bit slots, returns in l / hl / de:hl.
  {
    CallingConvention c = base("z80", "z80-old");
    c.ret_reg = {{8, {"l"}}, {16, {"hl"}}, {32, {"de", "hl"}}};
    c.cleanup = caller_always();
    c.stack_slot_width_for_8bit = 16;
    add(c);
  }
  // The replacement: hl serves only the first parameter (a second
  // 16-bit argument lands in de even when hl is free), 8-bit stack
  // slots, small-return/float callee cleanup.
  {
    CallingConvention c = base("z80", "z80-new");
    c.ret_reg = {{8, {"a"}}, {16, {"de"}}, {32, {"hl", "de"}}};
    c.arg_prefs[8] = {one("a"), one("l")};
    c.arg_prefs[16] = {one_first("hl"), one("de")};
    c.arg_prefs[32] = {pair("hl", "de")};
    c.cleanup = small_or_float_float();
    add(c);
  }

  {
    CallingConvention c = base("sm83", "sm83-old");
    c.ret_reg = {{8, {"e"}}, {16, {"de"}}, {32, {"hl", "de"}}};
    c.cleanup = caller_always();
    c.stack_slot_width_for_8bit = 16;
    add(c);
  }
  // sm83 keeps hl free at function end, so callee cleanup pays off for
  // every function.
  {
    CallingConvention c = base("sm83", "sm83-new");
    c.ret_reg = {{8, {"a"}}, {16, {"bc"}}, {32, {"de", "bc"}}};
    c.arg_prefs[8] = {one("a"), one("e")};
    c.arg_prefs[16] = {one("de"), one("bc")};
    c.arg_prefs[32] = {pair("de", "bc")};
    c.cleanup = callee_always();
    add(c);
  }

  // Proposed convention for the Rabbit group (and ez80/tlcs90): hl
  // carries 16-bit values in both argument slots, nothing falls back to
  // de for arguments.
  {
    CallingConvention c = base("r3ka", "rabbit-new");
    c.ret_reg = {{8, {"a"}}, {16, {"hl"}}, {32, {"hl", "de"}}};
    c.arg_prefs[8] = {one("a"), one("l")};
    c.arg_prefs[16] = {one("hl")};
    c.arg_prefs[32] = {pair("hl", "de")};
    c.cleanup = small_or_float_float();
    add(c);
  }
  return all;
}

const std::map<std::string, CallingConvention>& builtins() {
  static const std::map<std::string, CallingConvention> all = make_builtins();
  return all;
}

}  // namespace

const CallingConvention& builtin_convention(const std::string& name) {
  const auto& all = builtins();
  auto it = all.find(name);
  if (it == all.end()) {
    throw error("unknown convention '" + name + "'");
  }
  return it->second;
}

const std::vector<std::string>& builtin_convention_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, conv] : builtins()) out.push_back(name);
    return out;
  }();
  return names;
}

}  // namespace ccwb
