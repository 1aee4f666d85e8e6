#include "ccwb/arch.hpp"

#include <algorithm>
#include <mutex>

#include "ccwb/embedded.hpp"
#include "ccwb/error.hpp"

namespace ccwb {

std::string_view to_string(CleanupSide side) {
  return side == CleanupSide::caller ? "caller" : "callee";
}

const Register* Architecture::find(std::string_view name) const {
  for (const auto& r : registers) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

bool Architecture::allocatable(std::string_view name) const {
  if (!has(name)) return false;
  if (!reserved_excluded) return true;
  return std::find(reserved.begin(), reserved.end(), name) == reserved.end();
}

std::vector<std::string> Architecture::allocatable_16bit() const {
  std::vector<std::string> out;
  for (const auto& r : registers) {
    if (r.width == 16 && allocatable(r.name)) out.push_back(r.name);
  }
  return out;
}

namespace {

Register r8(std::string name) { return {std::move(name), 8, {}}; }

Register r16(std::string name, std::string hi, std::string lo) {
  return {std::move(name), 16, {std::move(hi), std::move(lo)}};
}

Register r16_atomic(std::string name) { return {std::move(name), 16, {}}; }

// stm8: accumulator a plus the 16-bit index registers x and y, whose
// halves are individually addressable.
std::vector<Register> stm8_registers() {
  return {r8("a"),  r8("xh"), r8("xl"),          r8("yh"), r8("yl"),
          r16("x", "xh", "xl"), r16("y", "yh", "yl")};
}

// z80 and derivatives: a plus b/c/d/e/h/l pairable into bc/de/hl, and
// (except sm83) the index registers ix and iy.
std::vector<Register> z80_registers(bool with_index) {
  std::vector<Register> regs = {r8("a"),
                                r8("b"),
                                r8("c"),
                                r8("d"),
                                r8("e"),
                                r8("h"),
                                r8("l"),
                                r16("bc", "b", "c"),
                                r16("de", "d", "e"),
                                r16("hl", "h", "l")};
  if (with_index) {
    regs.push_back(r16_atomic("ix"));
    regs.push_back(r16_atomic("iy"));
  }
  return regs;
}

Architecture make_architecture(const std::string& id, bool exclude_reserved) {
  Architecture arch;
  arch.id = id;
  arch.reserved_excluded = exclude_reserved;
  if (id == "stm8") {
    arch.registers = stm8_registers();
    arch.push_granularity = 8;
  } else if (id == "sm83") {
    arch.registers = z80_registers(false);
    arch.push_granularity = 16;
  } else if (id == "z80" || id == "z180" || id == "z80n" || id == "r2k" ||
             id == "r2ka" || id == "r3ka" || id == "ez80" || id == "tlcs90") {
    arch.registers = z80_registers(true);
    arch.reserved = {"ix", "iy"};
    arch.push_granularity = 16;
  } else {
    throw error("unknown architecture '" + id + "'");
  }
  auto text = embedded::cost_tables(id);
  arch.tables = parse_cost_tables(std::string(text), "embedded:" + id);
  return arch;
}

}  // namespace

const Architecture& get_architecture(const std::string& id,
                                     bool exclude_reserved) {
  static std::mutex mu;
  static std::map<std::pair<std::string, bool>, Architecture> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(id, exclude_reserved);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, make_architecture(id, exclude_reserved)).first;
  }
  return it->second;
}

const std::vector<std::string>& architecture_ids() {
  static const std::vector<std::string> ids = {
      "stm8", "z80",  "z180", "z80n", "sm83",
      "r2k",  "r2ka", "r3ka", "ez80", "tlcs90"};
  return ids;
}

bool conflicts(const Architecture& arch, std::string_view r1,
               std::string_view r2) {
  const Register* a = arch.find(r1);
  const Register* b = arch.find(r2);
  if (a == nullptr) {
    throw error("unknown register '" + std::string(r1) + "' on " + arch.id);
  }
  if (b == nullptr) {
    throw error("unknown register '" + std::string(r2) + "' on " + arch.id);
  }
  if (a->name == b->name) return true;
  auto is_part = [](const Register& whole, const Register& part) {
    return std::find(whole.parts.begin(), whole.parts.end(), part.name) !=
           whole.parts.end();
  };
  if (is_part(*a, *b) || is_part(*b, *a)) return true;
  for (const auto& pa : a->parts) {
    for (const auto& pb : b->parts) {
      if (pa == pb) return true;
    }
  }
  return false;
}

}  // namespace ccwb
