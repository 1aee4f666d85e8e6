#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace ccwb {

// Code size and execution time of a marshalling primitive or a whole
// plan.  Cycles are counted in each architecture's nominal unit (clocks,
// states or T-states, whatever the vendor documents).
struct Cost {
  std::int64_t bytes = 0;
  std::int64_t cycles = 0;

  Cost& operator+=(const Cost& o) {
    bytes += o.bytes;
    cycles += o.cycles;
    return *this;
  }
  friend Cost operator+(Cost a, const Cost& b) { return a += b; }
  friend Cost operator*(std::int64_t k, const Cost& c) {
    return {k * c.bytes, k * c.cycles};
  }
  friend bool operator==(const Cost&, const Cost&) = default;
};

// Which side of a call removes the stack arguments.
enum class CleanupSide { caller, callee };

std::string_view to_string(CleanupSide side);

struct Register {
  std::string name;
  int width = 8;                   // 8 or 16
  std::vector<std::string> parts;  // two 8-bit halves (msb first), or empty
};

// Per-architecture (bytes, cycles) entries for the marshalling
// primitives.  Each entry is the cost of a fixed canonical instruction
// sequence; the shipped defaults document those sequences in the data
// files under core/data/.
struct CostTables {
  std::string arch;
  int version = 0;

  // (register name, value width) -> cost of materializing an argument
  // into that register from a stack-resident local.
  std::map<std::pair<std::string, int>, Cost> reg_load;
  // (slot width, value width) -> cost of pushing one stack argument.
  // The (8, 16) entry is the paired push of two adjacent 8-bit slots.
  std::map<std::pair<int, int>, Cost> push;
  // (side, stack bytes, free 16-bit registers) -> cleanup cost.  Callee
  // entries are net of the ret instruction, which is costed separately.
  std::map<std::tuple<CleanupSide, int, int>, Cost> sp_adjust;
  Cost call;
  Cost ret;

  // Lookups throw ccwb::error naming the missing entry.  free16 is
  // clamped into the tabled range for the (side, bytes) row group;
  // bytes must match a row exactly.
  Cost load_cost(std::string_view reg, int value_width) const;
  Cost push_cost(int slot_width, int value_width) const;
  bool has_push(int slot_width, int value_width) const;
  Cost sp_adjust_cost(CleanupSide side, int stack_bytes, int free16) const;
};

CostTables parse_cost_tables(const std::string& text, const std::string& origin);
CostTables load_cost_tables_file(const std::string& path);

struct Architecture {
  std::string id;
  std::vector<Register> registers;
  std::vector<std::string> reserved;  // excludable from allocation (ix, iy)
  int push_granularity = 16;          // narrowest push, in bits
  bool reserved_excluded = true;      // exclusion profile in effect?
  CostTables tables;                  // shipped defaults for this id

  const Register* find(std::string_view name) const;  // nullptr if absent
  bool has(std::string_view name) const { return find(name) != nullptr; }
  bool allocatable(std::string_view name) const;
  std::vector<std::string> allocatable_16bit() const;
};

// Immutable, cached architecture descriptions.  With exclude_reserved
// set (the default), ix and iy drop out of the allocatable set on the
// Z80 family; stm8 and sm83 are unaffected.
const Architecture& get_architecture(const std::string& id,
                                     bool exclude_reserved = true);
const std::vector<std::string>& architecture_ids();

// True iff the two registers overlap: same register, one a part of the
// other, or sharing a part.  Throws for names not declared in arch.
bool conflicts(const Architecture& arch, std::string_view r1,
               std::string_view r2);

}  // namespace ccwb
