#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "ccwb/convention.hpp"
#include "ccwb/error.hpp"

using namespace ccwb;

namespace {

// Compact plan rendering for fixture tables: one token per parameter
// ("a", "hl:de", "s0/2" for stack offset 0 in a 2-byte slot), then
// return registers or "mem"/"void", cleanup side, stack byte total.
std::string plan_string(const AssignmentPlan& plan,
                        const FunctionSignature& sig) {
  std::ostringstream out;
  for (const auto& loc : plan.param_locs) {
    if (loc.in_registers()) {
      for (size_t i = 0; i < loc.regs.size(); ++i) {
        out << (i ? ":" : "") << loc.regs[i];
      }
    } else {
      out << "s" << loc.offset << "/" << loc.slot_bytes;
    }
    out << " ";
  }
  if (sig.return_type.width == 0) {
    out << "void";
  } else if (plan.return_loc.empty()) {
    out << "mem";
  } else {
    for (size_t i = 0; i < plan.return_loc.size(); ++i) {
      out << (i ? ":" : "") << plan.return_loc[i];
    }
  }
  out << " " << to_string(plan.cleanup_side) << " " << plan.stack_arg_bytes;
  return out.str();
}

std::string plan_for(const std::string& conv_name, const std::string& sig) {
  const CallingConvention& conv = builtin_convention(conv_name);
  FunctionSignature s = parse_signature(sig);
  return plan_string(assign(conv, s, get_architecture(conv.arch)), s);
}

}  // namespace

TEST_CASE("builtin conventions exist and validate") {
  const auto& names = builtin_convention_names();
  std::vector<std::string> want = {
      "rabbit-new", "sm83-new",  "sm83-old",       "stm8-cosmic",
      "stm8-iar",   "stm8-new",  "stm8-old",       "stm8-raisonance",
      "z80-new",    "z80-old"};
  CHECK(names == want);
  for (const auto& name : names) {
    const CallingConvention& conv = builtin_convention(name);
    CHECK(conv.name == name);
    CHECK_NOTHROW(validate_convention(conv, get_architecture(conv.arch)));
  }
  CHECK_THROWS_AS(builtin_convention("m68k-fast"), error);
}

TEST_CASE("register assignment fixtures") {
  // stm8-new: a then x, stop on first stack spill, conditional cleanup.
  CHECK(plan_for("stm8-new", "i16 f(u8, i16)") == "a x x callee 0");
  CHECK(plan_for("stm8-new", "i16 f(i16, i16)") == "x s0/2 x callee 2");
  CHECK(plan_for("stm8-new", "i16 f(i32, i8)") == "s0/4 s4/1 x callee 5");
  CHECK(plan_for("stm8-new", "i32 f(i16)") == "x x:y caller 0");
  CHECK(plan_for("stm8-new", "f32 f(f32, f32)") == "s0/4 s4/4 x:y callee 8");
  CHECK(plan_for("stm8-new", "f32 f(i16, f32)") == "x s0/4 x:y caller 4");
  CHECK(plan_for("stm8-new", "void f(i8, ...)") == "s0/1 void caller 1");
  CHECK(plan_for("stm8-new", "void f(void)") == "void callee 0");

  // stm8-old: everything on the stack, 8-bit slots, caller cleans up.
  CHECK(plan_for("stm8-old", "i16 f(u8, i16)") == "s0/1 s1/2 x caller 3");
  CHECK(plan_for("stm8-old", "i8 f(i8)") == "s0/1 a caller 1");
  CHECK(plan_for("stm8-old", "i32 f(i32)") == "s0/4 x:y caller 4");

  // stm8-cosmic: the register scheme with only the first parameter in
  // registers, and the caller always cleaning up.
  CHECK(plan_for("stm8-cosmic", "i16 f(u8, i16)") == "a s0/2 x caller 2");
  CHECK(plan_for("stm8-cosmic", "i16 f(i16, i8)") == "x s0/1 x caller 1");

  // stm8-iar: first value of each width, no stop-on-stack.
  CHECK(plan_for("stm8-iar", "i16 f(i32, i8)") == "s0/4 a x caller 4");
  CHECK(plan_for("stm8-iar", "i16 f(u8, u8)") == "a s0/1 x caller 1");
  CHECK(plan_for("stm8-iar", "i16 f(u8, i16)") == "a x x caller 0");

  // z80-old: 16-bit stack slots even for 8-bit values.
  CHECK(plan_for("z80-old", "i16 f(i8, i8)") == "s0/2 s2/2 hl caller 4");
  CHECK(plan_for("z80-old", "i32 f(i32)") == "s0/4 de:hl caller 4");

  // z80-new: hl only for a first 16-bit parameter, de otherwise.
  CHECK(plan_for("z80-new", "i16 f(i8, i16)") == "a de de callee 0");
  CHECK(plan_for("z80-new", "i16 f(i16, i16)") == "hl de de callee 0");
  CHECK(plan_for("z80-new", "i16 f(i16, i32)") == "hl s0/4 de callee 4");
  CHECK(plan_for("z80-new", "i16 f(i32, i16)") == "hl:de s0/2 de callee 2");
  CHECK(plan_for("z80-new", "i16 f(i32, i8)") == "hl:de a de callee 0");
  CHECK(plan_for("z80-new", "f32 f(f32, f32)") ==
        "hl:de s0/4 hl:de callee 4");

  // sm83-new: de/bc pairs, callee always cleans up (except varargs).
  CHECK(plan_for("sm83-new", "i16 f(i16, i16)") == "de bc bc callee 0");
  CHECK(plan_for("sm83-new", "i16 f(i32, i16)") == "de:bc s0/2 bc callee 2");
  CHECK(plan_for("sm83-new", "void f(i8, ...)") == "s0/1 void caller 1");

  // sm83-old: 16-bit slots, caller cleanup.
  CHECK(plan_for("sm83-old", "i16 f(i8, i8)") == "s0/2 s2/2 de caller 4");

  // rabbit-new: a and hl, hl:de for 32-bit.
  CHECK(plan_for("rabbit-new", "i16 f(i8, i16)") == "a hl hl callee 0");
  CHECK(plan_for("rabbit-new", "i16 f(i16, i16)") == "hl s0/2 hl callee 2");
  CHECK(plan_for("rabbit-new", "i16 f(i32, i8)") == "hl:de a hl callee 0");

  // stm8-raisonance: stm8-new's argument rules, but 32-bit returns go
  // through memory and the caller always cleans up.
  CHECK(plan_for("stm8-raisonance", "i16 f(u8, i16)") == "a x x caller 0");
  CHECK(plan_for("stm8-raisonance", "i32 f(i16)") == "x mem caller 0");
  CHECK(plan_for("stm8-raisonance", "f32 f(f32)") == "s0/4 mem caller 4");
}

TEST_CASE("raisonance argument placement matches stm8-new") {
  const CallingConvention& rai = builtin_convention("stm8-raisonance");
  const CallingConvention& neu = builtin_convention("stm8-new");
  const Architecture& stm8 = get_architecture("stm8");
  const TypeClass pool[] = {
      {8, TypeKind::integer}, {16, TypeKind::integer},
      {16, TypeKind::pointer}, {32, TypeKind::integer},
  };
  for (const auto& p1 : pool) {
    for (const auto& p2 : pool) {
      FunctionSignature sig;
      sig.return_type = {16, TypeKind::integer};
      sig.params = {p1, p2};
      AssignmentPlan a = assign(rai, sig, stm8);
      AssignmentPlan b = assign(neu, sig, stm8);
      CHECK(a.param_locs == b.param_locs);
      CHECK(a.stack_arg_bytes == b.stack_arg_bytes);
    }
  }
}

TEST_CASE("assignment is deterministic and total over the corpus") {
  const Architecture* archs[] = {&get_architecture("stm8"),
                                 &get_architecture("z80"),
                                 &get_architecture("sm83"),
                                 &get_architecture("r3ka")};
  for (const auto& name : builtin_convention_names()) {
    const CallingConvention& conv = builtin_convention(name);
    for (const Architecture* arch : archs) {
      if (arch->id != conv.arch) continue;
      for (const auto& e : default_corpus().entries) {
        AssignmentPlan p1 = assign(conv, e.sig, *arch);
        AssignmentPlan p2 = assign(conv, e.sig, *arch);
        CHECK(p1 == p2);
      }
    }
  }
}

TEST_CASE("plan invariants hold for every builtin and corpus signature") {
  for (const auto& name : builtin_convention_names()) {
    const CallingConvention& conv = builtin_convention(name);
    const Architecture& arch = get_architecture(conv.arch);
    for (const auto& e : default_corpus().entries) {
      INFO(name, " on ", print_signature(e.sig));
      AssignmentPlan plan = assign(conv, e.sig, arch);
      REQUIRE(plan.param_locs.size() == e.sig.params.size());

      // Register parameters never overlap each other.
      std::vector<std::string> used;
      int expected_offset = 0;
      for (const auto& loc : plan.param_locs) {
        if (loc.in_registers()) {
          for (const auto& r : loc.regs) {
            CHECK(arch.allocatable(r));
            for (const auto& u : used) CHECK_FALSE(conflicts(arch, r, u));
            used.push_back(r);
          }
        } else {
          // Stack slots are contiguous, low offsets first.
          CHECK(loc.offset == expected_offset);
          CHECK(loc.slot_bytes >= loc.value_width / 8);
          expected_offset += loc.slot_bytes;
        }
      }
      CHECK(plan.stack_arg_bytes == expected_offset);

      if (e.sig.varargs) {
        for (const auto& loc : plan.param_locs) {
          CHECK_FALSE(loc.in_registers());
        }
        CHECK(plan.cleanup_side == CleanupSide::caller);
      }
    }
  }
}

TEST_CASE("appending a parameter never moves earlier parameters") {
  const TypeClass pool[] = {
      {8, TypeKind::integer}, {16, TypeKind::integer},
      {32, TypeKind::integer},
  };
  for (const auto& name : builtin_convention_names()) {
    const CallingConvention& conv = builtin_convention(name);
    if (conv.first_of_each_width) continue;  // width scan is positional
    const Architecture& arch = get_architecture(conv.arch);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      FunctionSignature sig;
      sig.return_type = {16, TypeKind::integer};
      int n = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < n; ++i) {
        sig.params.push_back(pool[rng() % std::size(pool)]);
      }
      AssignmentPlan before = assign(conv, sig, arch);
      FunctionSignature longer = sig;
      longer.params.push_back(pool[rng() % std::size(pool)]);
      AssignmentPlan after = assign(conv, longer, arch);
      for (size_t i = 0; i < sig.params.size(); ++i) {
        CHECK(before.param_locs[i] == after.param_locs[i]);
      }
    }
  }
}

TEST_CASE("cleanup resolution") {
  const CallingConvention& neu = builtin_convention("stm8-new");
  CHECK(resolve_cleanup(neu, parse_signature("void f(i16)")) ==
        CleanupSide::callee);
  CHECK(resolve_cleanup(neu, parse_signature("i8 f(i16)")) ==
        CleanupSide::callee);
  CHECK(resolve_cleanup(neu, parse_signature("i16 f(i16)")) ==
        CleanupSide::callee);
  CHECK(resolve_cleanup(neu, parse_signature("i32 f(i16)")) ==
        CleanupSide::caller);
  CHECK(resolve_cleanup(neu, parse_signature("f32 f(f32)")) ==
        CleanupSide::callee);
  CHECK(resolve_cleanup(neu, parse_signature("f32 f(i16, f32)")) ==
        CleanupSide::caller);
  CHECK(resolve_cleanup(neu, parse_signature("f32 f(f32, i16)")) ==
        CleanupSide::callee);
  CHECK(resolve_cleanup(neu, parse_signature("i16 f(i8, ...)")) ==
        CleanupSide::caller);
  CHECK(resolve_cleanup(builtin_convention("sm83-new"),
                        parse_signature("i16 f(i8, ...)")) ==
        CleanupSide::caller);
  CHECK(resolve_cleanup(builtin_convention("stm8-old"),
                        parse_signature("void f(i16)")) ==
        CleanupSide::caller);
}

TEST_CASE("document round-trip is lossless for every builtin") {
  for (const auto& name : builtin_convention_names()) {
    const CallingConvention& conv = builtin_convention(name);
    std::string doc = print_convention(conv);
    CallingConvention back = parse_convention(doc, "mem");
    CHECK(back == conv);
    CHECK(print_convention(back) == doc);
  }
}

TEST_CASE("parse_convention rejects malformed documents") {
  auto doc_of = [](const std::string& name) {
    return print_convention(builtin_convention(name));
  };
  CHECK_THROWS_AS(parse_convention("", "mem"), error);  // missing arch
  CHECK_THROWS_AS(parse_convention("arch = stm8\n", "mem"),
                  error);  // missing [return]
  CHECK_THROWS_AS(
      parse_convention("arch = stm8\n[return]\n8 = a\n16 = x\n", "mem"),
      error);  // width 32 uncovered
  std::string good = doc_of("stm8-new");
  {
    std::string bad = good;
    bad.replace(bad.find("8 = a"), 5, "8 = zz");
    CHECK_THROWS_AS(parse_convention(bad, "mem"), error);
  }
  {
    std::string bad = good;
    bad.replace(bad.find("[stack]"), 7, "[misc]");
    CHECK_THROWS_AS(parse_convention(bad, "mem"), error);
  }
  {
    std::string bad = good;
    bad.replace(bad.find("mode = conditional"), 18, "mode = sometimes");
    CHECK_THROWS_AS(parse_convention(bad, "mem"), error);
  }
  // Pseudo is a 32-bit-only spelling.
  CHECK_THROWS_AS(
      parse_convention(
          "arch = stm8\n[return]\n8 = pseudo\n16 = x\n32 = x:y\n", "mem"),
      error);
  CHECK_THROWS_AS(load_convention_file("/nonexistent/conv.txt"), error);
}

TEST_CASE("validation enforces widths, aliasing and allocatability") {
  const Architecture& stm8 = get_architecture("stm8");
  CallingConvention conv = builtin_convention("stm8-new");

  CallingConvention bad = conv;
  bad.ret_reg[8] = {"x"};  // 16-bit register for an 8-bit return
  CHECK_THROWS_AS(validate_convention(bad, stm8), error);

  bad = conv;
  bad.ret_reg[32] = {"x", "x"};  // pair overlaps itself
  CHECK_THROWS_AS(validate_convention(bad, stm8), error);

  bad = conv;
  bad.ret_reg[16] = {"x", "y"};  // not a single register
  CHECK_THROWS_AS(validate_convention(bad, stm8), error);

  bad = conv;
  bad.stack_slot_width_for_8bit = 16;  // stm8 has no 16-bit push
  CHECK_THROWS_AS(validate_convention(bad, stm8), error);

  bad = conv;
  bad.max_register_params = -1;
  CHECK_THROWS_AS(validate_convention(bad, stm8), error);

  bad = conv;
  bad.cleanup.callee_if_return_width_in = {24};
  CHECK_THROWS_AS(validate_convention(bad, stm8), error);

  // Wrong architecture altogether.
  CHECK_THROWS_AS(validate_convention(conv, get_architecture("z80")), error);

  // 16-bit slots are fine where 16-bit pushes exist.
  CHECK_NOTHROW(validate_convention(builtin_convention("z80-old"),
                                    get_architecture("z80")));
}

TEST_CASE("reserved registers are rejected unless the profile allows them") {
  CallingConvention conv = builtin_convention("z80-new");
  conv.arg_prefs[16].push_back({{"iy"}, false});
  CHECK_THROWS_AS(validate_convention(conv, get_architecture("z80")), error);
  CHECK_NOTHROW(validate_convention(conv, get_architecture("z80", false)));
}

TEST_CASE("retarget moves a convention across table variants") {
  CallingConvention z180 = retarget(builtin_convention("z80-new"), "z180");
  CHECK(z180.arch == "z180");
  CHECK(z180.ret_reg == builtin_convention("z80-new").ret_reg);

  CallingConvention ez80 = retarget(builtin_convention("rabbit-new"), "ez80");
  CHECK(ez80.arch == "ez80");

  // stm8 has none of the z80 registers.
  CHECK_THROWS_AS(retarget(builtin_convention("z80-new"), "stm8"), error);
  CHECK_THROWS_AS(retarget(builtin_convention("z80-new"), "no-such"), error);
}

TEST_CASE("tail call interference is a property of the cleanup mode") {
  CHECK_FALSE(builtin_convention("stm8-old").hinders_tail_calls());
  CHECK_FALSE(builtin_convention("z80-old").hinders_tail_calls());
  CHECK(builtin_convention("stm8-new").hinders_tail_calls());
  CHECK(builtin_convention("sm83-new").hinders_tail_calls());
  CHECK(builtin_convention("rabbit-new").hinders_tail_calls());
}

TEST_CASE("summaries") {
  CHECK(summarize_convention(builtin_convention("stm8-new")) ==
        "ret8=a ret16=x ret32=x:y args8=a args16=x args32=- "
        "cleanup=callee_if(0/8/16+ff) slot8=8");
  CHECK(summarize_convention(builtin_convention("stm8-old")) ==
        "ret8=a ret16=x ret32=x:y args8=- args16=- args32=- "
        "cleanup=caller slot8=8");
  CHECK(summarize_convention(builtin_convention("stm8-raisonance")) ==
        "ret8=a ret16=x ret32=pseudo args8=a args16=x args32=- "
        "cleanup=caller slot8=8");
  CHECK(summarize_convention(builtin_convention("z80-new")) ==
        "ret8=a ret16=de ret32=hl:de args8=a+l args16=hl@first+de "
        "args32=hl:de cleanup=callee_if(0/8/16+ff) slot8=8");
  CHECK(summarize_convention(builtin_convention("z80-old")) ==
        "ret8=l ret16=hl ret32=de:hl args8=- args16=- args32=- "
        "cleanup=caller slot8=16");
  CHECK(summarize_convention(builtin_convention("sm83-new")) ==
        "ret8=a ret16=bc ret32=de:bc args8=a+e args16=de+bc args32=de:bc "
        "cleanup=callee slot8=8");
}

TEST_CASE("cleanup policy equality ignores dormant conditional fields") {
  CleanupPolicy a{CleanupMode::caller_always, {0, 8}, true};
  CleanupPolicy b{CleanupMode::caller_always, {}, false};
  CHECK(a == b);
  CleanupPolicy c{CleanupMode::conditional, {0, 8}, true};
  CleanupPolicy d{CleanupMode::conditional, {0, 16}, true};
  CHECK_FALSE(c == d);
  CHECK_FALSE(a == c);
}
