#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccwb/arch.hpp"
#include "ccwb/convention.hpp"
#include "ccwb/sig.hpp"

namespace ccwb {

// One abstract instruction of the marshalling code a compiler would
// emit around a call.  Only the fields of the active kind are
// meaningful.
struct MarshalStep {
  enum class Kind { load_reg, push_stack, call, sp_adjust, ret };
  Kind kind = Kind::call;

  std::string reg;      // load_reg
  int value_width = 0;  // load_reg, push_stack
  int slot_width = 0;   // push_stack

  int adjust_bytes = 0;  // sp_adjust
  CleanupSide side = CleanupSide::caller;
  int free16 = 0;

  static MarshalStep load(std::string reg, int width);
  static MarshalStep push(int slot_width, int value_width);
  static MarshalStep call_step();
  static MarshalStep adjust(int bytes, CleanupSide side, int free16);
  static MarshalStep ret_step();

  friend bool operator==(const MarshalStep&, const MarshalStep&) = default;
};

struct ScoreWeights {
  // The default optimization goal leans toward code size.
  std::int64_t alpha_bytes = 4;
  std::int64_t beta_cycles = 1;
};

struct SignatureCost {
  Cost call_site;
  Cost definition;

  friend bool operator==(const SignatureCost&, const SignatureCost&) = default;
};

// Count of allocatable 16-bit registers not overlapping the return
// location; indexes the sp_adjust table rows.
int free_16bit_regs(const Architecture& arch,
                    const std::vector<std::string>& return_loc);

// Caller-side marshalling: register loads, right-to-left stack pushes
// (with the pair-push peephole folding two adjacent 8-bit slots into
// one 16-bit push), the call itself, and the caller's cleanup when the
// plan says so.
std::vector<MarshalStep> lower_call_site(const AssignmentPlan& plan,
                                         const Architecture& arch);

// Definition-side steps: the callee's cleanup when the plan says so,
// then ret.  The per-parameter access adjustment is not a step; see
// signature_cost.
std::vector<MarshalStep> lower_definition(const AssignmentPlan& plan,
                                          const Architecture& arch);

// Pure table lookup and summation; throws on a missing entry, naming
// the step.
Cost cost_of(const std::vector<MarshalStep>& steps, const CostTables& tables);

// call_site = lowered call-site cost.  definition = one-time callee
// cost: cleanup (callee side) + ret + one representative access per
// stack parameter (register parameters are already in place and add
// nothing).
SignatureCost signature_cost(const CallingConvention& conv,
                             const FunctionSignature& sig,
                             const Architecture& arch,
                             const CostTables& tables);

// Sum over entries of call_weight * call_site + def_weight * definition.
Cost corpus_cost(const CallingConvention& conv, const Corpus& corpus,
                 const Architecture& arch, const CostTables& tables);

inline std::int64_t score(const Cost& cost, const ScoreWeights& w) {
  return w.alpha_bytes * cost.bytes + w.beta_cycles * cost.cycles;
}

}  // namespace ccwb
