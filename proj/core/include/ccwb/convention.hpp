#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccwb/arch.hpp"
#include "ccwb/sig.hpp"

namespace ccwb {

// One entry of an argument preference list: a single register for 8/16
// bit values, or a most-significant-first register pair for 32-bit
// values.  first_only restricts the entry to the first parameter (the
// z80 convention passes a second 16-bit argument in de even when hl is
// still free).
struct ArgPrefEntry {
  std::vector<std::string> regs;
  bool first_only = false;

  friend bool operator==(const ArgPrefEntry&, const ArgPrefEntry&) = default;
};

enum class CleanupMode { caller_always, callee_always, conditional };

struct CleanupPolicy {
  CleanupMode mode = CleanupMode::caller_always;
  // Conditional mode only: callee cleans up when the return width is in
  // this set (0 = void), or when both the return type and the first
  // parameter are float.
  std::vector<int> callee_if_return_width_in;
  bool callee_if_float_float = false;

  // Conditional fields are irrelevant outside conditional mode.
  friend bool operator==(const CleanupPolicy& a, const CleanupPolicy& b) {
    if (a.mode != b.mode) return false;
    if (a.mode != CleanupMode::conditional) return true;
    return a.callee_if_return_width_in == b.callee_if_return_width_in &&
           a.callee_if_float_float == b.callee_if_float_float;
  }
};

struct CallingConvention {
  std::string arch;
  std::string name;  // optional label; builtins carry theirs

  // width (8, 16, 32) -> return registers, most significant first for
  // 32.  An empty list is a memory-class return ("pseudo"), costed like
  // no register being occupied.
  std::map<int, std::vector<std::string>> ret_reg;
  // width -> ordered preference list for arguments; may be empty.
  std::map<int, std::vector<ArgPrefEntry>> arg_prefs;
  int max_register_params = 2;
  bool stop_on_stack = true;         // first stack parameter forces the rest
  bool first_of_each_width = false;  // assign by width, not position
  CleanupPolicy cleanup;
  int stack_slot_width_for_8bit = 8;  // 8 or 16

  // Callee cleanup can block tail-call optimization; reported, never
  // scored.
  bool hinders_tail_calls() const {
    return cleanup.mode != CleanupMode::caller_always;
  }

  friend bool operator==(const CallingConvention&,
                         const CallingConvention&) = default;
};

// Where one parameter lives: registers (non-empty regs) or a stack slot
// (offset in bytes from the lowest-addressed stack argument).
// value_width is the parameter's own width; an 8-bit value can sit in a
// 2-byte slot, and the lowering needs to tell the two apart.
struct ParamLoc {
  std::vector<std::string> regs;
  int value_width = 0;
  int offset = 0;
  int slot_bytes = 0;

  bool in_registers() const { return !regs.empty(); }
  friend bool operator==(const ParamLoc&, const ParamLoc&) = default;
};

struct AssignmentPlan {
  std::vector<ParamLoc> param_locs;
  std::vector<std::string> return_loc;  // empty = none (void or pseudo)
  CleanupSide cleanup_side = CleanupSide::caller;
  int stack_arg_bytes = 0;

  friend bool operator==(const AssignmentPlan&,
                         const AssignmentPlan&) = default;
};

// Builtins: stm8-old, stm8-new, stm8-raisonance, stm8-cosmic, stm8-iar,
// z80-old, z80-new (also serves z180/z80n), sm83-old, sm83-new,
// rabbit-new (serves r2k/r2ka/r3ka/ez80/tlcs90).
const CallingConvention& builtin_convention(const std::string& name);
const std::vector<std::string>& builtin_convention_names();

// Clone a convention onto a sibling architecture with the same register
// file (z80-new onto z180, rabbit-new onto ez80, ...).  Errors if the
// target lacks any referenced register.
CallingConvention retarget(const CallingConvention& conv,
                           const std::string& arch_id);

// Deterministic greedy assignment of parameter and return locations.
AssignmentPlan assign(const CallingConvention& conv,
                      const FunctionSignature& sig, const Architecture& arch);
CleanupSide resolve_cleanup(const CallingConvention& conv,
                            const FunctionSignature& sig);

// Key-value document with [return], [args], [cleanup], [stack]
// sections; lossless round-trip.  parse_convention checks syntax and
// register existence; validate_convention enforces the full invariant
// set against a concrete architecture (allocatability under the
// reserved-register profile, aliasing, widths).
std::string print_convention(const CallingConvention& conv);
CallingConvention parse_convention(const std::string& text,
                                   const std::string& origin);
CallingConvention load_convention_file(const std::string& path,
                                       bool exclude_reserved = true);
void validate_convention(const CallingConvention& conv,
                         const Architecture& arch);

// One-line summary used by search reports and CSV output.
std::string summarize_convention(const CallingConvention& conv);

}  // namespace ccwb
