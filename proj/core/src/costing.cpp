#include "ccwb/costing.hpp"

#include <algorithm>

#include "ccwb/error.hpp"

namespace ccwb {

MarshalStep MarshalStep::load(std::string reg, int width) {
  MarshalStep s;
  s.kind = Kind::load_reg;
  s.reg = std::move(reg);
  s.value_width = width;
  return s;
}

MarshalStep MarshalStep::push(int slot_width, int value_width) {
  MarshalStep s;
  s.kind = Kind::push_stack;
  s.slot_width = slot_width;
  s.value_width = value_width;
  return s;
}

MarshalStep MarshalStep::call_step() { return MarshalStep{}; }

MarshalStep MarshalStep::adjust(int bytes, CleanupSide side, int free16) {
  MarshalStep s;
  s.kind = Kind::sp_adjust;
  s.adjust_bytes = bytes;
  s.side = side;
  s.free16 = free16;
  return s;
}

MarshalStep MarshalStep::ret_step() {
  MarshalStep s;
  s.kind = Kind::ret;
  return s;
}

int free_16bit_regs(const Architecture& arch,
                    const std::vector<std::string>& return_loc) {
  int free16 = 0;
  for (const auto& r : arch.allocatable_16bit()) {
    bool taken = false;
    for (const auto& ret : return_loc) {
      if (conflicts(arch, r, ret)) {
        taken = true;
        break;
      }
    }
    if (!taken) ++free16;
  }
  return free16;
}

std::vector<MarshalStep> lower_call_site(const AssignmentPlan& plan,
                                         const Architecture& arch) {
  std::vector<MarshalStep> steps;
  for (const auto& loc : plan.param_locs) {
    if (!loc.in_registers()) continue;
    if (loc.regs.size() == 2) {
      steps.push_back(MarshalStep::load(loc.regs[0], 16));
      steps.push_back(MarshalStep::load(loc.regs[1], 16));
    } else {
      steps.push_back(MarshalStep::load(loc.regs[0], loc.value_width));
    }
  }

  // Stack arguments are pushed right to left.  Two adjacent 8-bit slots
  // fold into one 16-bit push (the pair-push peephole).
  std::vector<const ParamLoc*> stack;
  for (const auto& loc : plan.param_locs) {
    if (!loc.in_registers()) stack.push_back(&loc);
  }
  for (size_t k = stack.size(); k-- > 0;) {
    const ParamLoc& cur = *stack[k];
    if (cur.slot_bytes == 1 && k > 0 && stack[k - 1]->slot_bytes == 1 &&
        stack[k - 1]->offset + 1 == cur.offset) {
      steps.push_back(MarshalStep::push(8, 16));
      --k;
    } else if (cur.slot_bytes == 1) {
      steps.push_back(MarshalStep::push(8, 8));
    } else if (cur.slot_bytes == 2) {
      steps.push_back(MarshalStep::push(16, cur.value_width));
    } else {
      steps.push_back(MarshalStep::push(16, 16));
      steps.push_back(MarshalStep::push(16, 16));
    }
  }

  steps.push_back(MarshalStep::call_step());
  if (plan.cleanup_side == CleanupSide::caller && plan.stack_arg_bytes > 0) {
    steps.push_back(MarshalStep::adjust(plan.stack_arg_bytes,
                                        CleanupSide::caller,
                                        free_16bit_regs(arch,
                                                        plan.return_loc)));
  }
  return steps;
}

std::vector<MarshalStep> lower_definition(const AssignmentPlan& plan,
                                          const Architecture& arch) {
  std::vector<MarshalStep> steps;
  if (plan.cleanup_side == CleanupSide::callee && plan.stack_arg_bytes > 0) {
    steps.push_back(MarshalStep::adjust(plan.stack_arg_bytes,
                                        CleanupSide::callee,
                                        free_16bit_regs(arch,
                                                        plan.return_loc)));
  }
  steps.push_back(MarshalStep::ret_step());
  return steps;
}

Cost cost_of(const std::vector<MarshalStep>& steps, const CostTables& tables) {
  Cost total;
  for (const auto& s : steps) {
    switch (s.kind) {
      case MarshalStep::Kind::load_reg:
        total += tables.load_cost(s.reg, s.value_width);
        break;
      case MarshalStep::Kind::push_stack:
        total += tables.push_cost(s.slot_width, s.value_width);
        break;
      case MarshalStep::Kind::call:
        total += tables.call;
        break;
      case MarshalStep::Kind::sp_adjust:
        total += tables.sp_adjust_cost(s.side, s.adjust_bytes, s.free16);
        break;
      case MarshalStep::Kind::ret:
        total += tables.ret;
        break;
    }
  }
  return total;
}

namespace {

bool cheaper(const Cost& a, const Cost& b) {
  return a.bytes != b.bytes ? a.bytes < b.bytes : a.cycles < b.cycles;
}

// One representative access to a stack parameter in the callee body:
// the cheapest load of the parameter's width into an allocatable
// register (a disjoint register pair for 32-bit values).
Cost stack_access_cost(int value_width, const Architecture& arch,
                       const CostTables& tables) {
  if (value_width == 32) {
    const Register* first = nullptr;
    Cost first_cost;
    for (const auto& r : arch.registers) {
      if (r.width != 16 || !arch.allocatable(r.name)) continue;
      auto it = tables.reg_load.find(std::make_pair(r.name, 16));
      if (it == tables.reg_load.end()) continue;
      if (first == nullptr || cheaper(it->second, first_cost)) {
        first = &r;
        first_cost = it->second;
      }
    }
    if (first == nullptr) {
      throw error("no " + arch.id + " table entry for a 16-bit load");
    }
    const Register* second = nullptr;
    Cost second_cost;
    for (const auto& r : arch.registers) {
      if (r.width != 16 || !arch.allocatable(r.name)) continue;
      if (conflicts(arch, r.name, first->name)) continue;
      auto it = tables.reg_load.find(std::make_pair(r.name, 16));
      if (it == tables.reg_load.end()) continue;
      if (second == nullptr || cheaper(it->second, second_cost)) {
        second = &r;
        second_cost = it->second;
      }
    }
    if (second == nullptr) {
      throw error("no second 16-bit register with a load entry on " + arch.id);
    }
    return first_cost + second_cost;
  }
  bool found = false;
  Cost best;
  for (const auto& r : arch.registers) {
    if (r.width != value_width || !arch.allocatable(r.name)) continue;
    auto it = tables.reg_load.find(std::make_pair(r.name, value_width));
    if (it == tables.reg_load.end()) continue;
    if (!found || cheaper(it->second, best)) {
      found = true;
      best = it->second;
    }
  }
  if (!found) {
    throw error("no " + arch.id + " table entry for a " +
                std::to_string(value_width) + "-bit load");
  }
  return best;
}

}  // namespace

SignatureCost signature_cost(const CallingConvention& conv,
                             const FunctionSignature& sig,
                             const Architecture& arch,
                             const CostTables& tables) {
  AssignmentPlan plan = assign(conv, sig, arch);
  SignatureCost out;
  out.call_site = cost_of(lower_call_site(plan, arch), tables);
  out.definition = cost_of(lower_definition(plan, arch), tables);
  // Register parameters are already where the callee wants them; stack
  // parameters each pay one representative access.
  for (const auto& loc : plan.param_locs) {
    if (!loc.in_registers()) {
      out.definition += stack_access_cost(loc.value_width, arch, tables);
    }
  }
  return out;
}

Cost corpus_cost(const CallingConvention& conv, const Corpus& corpus,
                 const Architecture& arch, const CostTables& tables) {
  Cost total;
  for (const auto& e : corpus.entries) {
    SignatureCost sc = signature_cost(conv, e.sig, arch, tables);
    total += e.call_weight * sc.call_site + e.def_weight * sc.definition;
  }
  return total;
}

}  // namespace ccwb
