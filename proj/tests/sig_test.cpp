#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "ccwb/error.hpp"
#include "ccwb/sig.hpp"

using namespace ccwb;

TEST_CASE("basic signature parsing") {
  FunctionSignature s = parse_signature("i16 f(u8, i16)");
  CHECK(s.return_type == TypeClass{16, TypeKind::integer});
  REQUIRE(s.params.size() == 2);
  CHECK(s.params[0] == TypeClass{8, TypeKind::integer});
  CHECK(s.params[1] == TypeClass{16, TypeKind::integer});
  CHECK_FALSE(s.varargs);
  CHECK(print_signature(s) == "i16 f(i8, i16)");

  FunctionSignature v = parse_signature("void f(void)");
  CHECK(v.return_type == TypeClass{0, TypeKind::void_t});
  CHECK(v.params.empty());
  CHECK(print_signature(v) == "void f(void)");
}

TEST_CASE("every accepted type spelling") {
  struct Row {
    const char* text;
    TypeClass cls;
    const char* canon;
  };
  const Row rows[] = {
      {"bool", {8, TypeKind::bool_t}, "bool"},
      {"char", {8, TypeKind::integer}, "i8"},
      {"i8", {8, TypeKind::integer}, "i8"},
      {"u8", {8, TypeKind::integer}, "i8"},
      {"signed char", {8, TypeKind::integer}, "i8"},
      {"unsigned char", {8, TypeKind::integer}, "i8"},
      {"i16", {16, TypeKind::integer}, "i16"},
      {"u16", {16, TypeKind::integer}, "i16"},
      {"ptr", {16, TypeKind::pointer}, "ptr"},
      {"i32", {32, TypeKind::integer}, "i32"},
      {"u32", {32, TypeKind::integer}, "i32"},
      {"f32", {32, TypeKind::float_t}, "f32"},
  };
  for (const auto& row : rows) {
    INFO("type ", row.text);
    FunctionSignature s =
        parse_signature(std::string("void f(") + row.text + ")");
    REQUIRE(s.params.size() == 1);
    CHECK(s.params[0] == row.cls);
    CHECK(print_signature(s) ==
          std::string("void f(") + row.canon + ")");
    // Same spellings accepted in return position (void aside).
    FunctionSignature r =
        parse_signature(std::string(row.text) + " f(void)");
    CHECK(r.return_type == row.cls);
  }
}

TEST_CASE("char spellings collapse to one class") {
  FunctionSignature a = parse_signature("char f(char)");
  FunctionSignature b = parse_signature("signed char f(signed char)");
  FunctionSignature c = parse_signature("unsigned char f(unsigned char)");
  FunctionSignature d = parse_signature("i8 f(u8)");
  CHECK(a == b);
  CHECK(b == c);
  CHECK(c == d);
  CHECK(print_signature(a) == "i8 f(i8)");
}

TEST_CASE("names are canonicalized away") {
  CHECK(print_signature(parse_signature("i16 strlen(ptr)")) ==
        "i16 f(ptr)");
  CHECK(parse_signature("u32 my_func2(i8, i8)") ==
        parse_signature("i32 f(u8, char)"));
}

TEST_CASE("varargs") {
  FunctionSignature s = parse_signature("i16 printf(ptr, ...)");
  CHECK(s.varargs);
  REQUIRE(s.params.size() == 1);
  CHECK(print_signature(s) == "i16 f(ptr, ...)");
  CHECK_THROWS_AS(parse_signature("i16 f(...)"), error);
}

TEST_CASE("parse rejects malformed signatures") {
  CHECK_THROWS_AS(parse_signature(""), error);
  CHECK_THROWS_AS(parse_signature("i16"), error);
  CHECK_THROWS_AS(parse_signature("i16 f"), error);
  CHECK_THROWS_AS(parse_signature("i16 f("), error);
  CHECK_THROWS_AS(parse_signature("i16 f()"), error);        // C90 spelling
  CHECK_THROWS_AS(parse_signature("i16 f(i8,)"), error);
  CHECK_THROWS_AS(parse_signature("i16 f(i8) x"), error);
  CHECK_THROWS_AS(parse_signature("i16 f(void, i8)"), error);
  CHECK_THROWS_AS(parse_signature("void f(i64)"), error);    // too wide
  CHECK_THROWS_AS(parse_signature("i64 f(void)"), error);
  CHECK_THROWS_AS(parse_signature("f64 f(void)"), error);
  CHECK_THROWS_AS(parse_signature("struct f(void)"), error);
  CHECK_THROWS_AS(parse_signature("signed f(void)"), error);
  CHECK_THROWS_AS(parse_signature("signed int f(void)"), error);
  CHECK_THROWS_AS(parse_signature("i16 f(i8 ...)"), error);
}

TEST_CASE("print then parse is the identity on parsed signatures") {
  const char* samples[] = {
      "void f(void)",
      "bool f(bool)",
      "i8 f(u8, u16, u32)",
      "f32 f(f32, f32)",
      "ptr f(ptr, i16, ...)",
      "u32 g(char, signed char, unsigned char)",
  };
  for (const char* text : samples) {
    FunctionSignature s = parse_signature(text);
    std::string printed = print_signature(s);
    CHECK(parse_signature(printed) == s);
    CHECK(print_signature(parse_signature(printed)) == printed);
  }
}

TEST_CASE("randomized signature round-trip") {
  std::mt19937 rng(20231112);
  const TypeClass pool[] = {
      {8, TypeKind::bool_t},   {8, TypeKind::integer},
      {16, TypeKind::integer}, {16, TypeKind::pointer},
      {32, TypeKind::integer}, {32, TypeKind::float_t},
  };
  const TypeClass rets[] = {
      {0, TypeKind::void_t},   {8, TypeKind::bool_t},
      {8, TypeKind::integer},  {16, TypeKind::integer},
      {16, TypeKind::pointer}, {32, TypeKind::integer},
      {32, TypeKind::float_t},
  };
  for (int i = 0; i < 500; ++i) {
    FunctionSignature s;
    s.return_type = rets[rng() % std::size(rets)];
    int nparams = static_cast<int>(rng() % 7);
    for (int p = 0; p < nparams; ++p) {
      s.params.push_back(pool[rng() % std::size(pool)]);
    }
    if (nparams > 0 && rng() % 4 == 0) s.varargs = true;
    std::string printed = print_signature(s);
    CHECK(parse_signature(printed) == s);
  }
}

TEST_CASE("corpus parsing merges duplicates and skips comments") {
  Corpus c = parse_corpus(
      "# header comment\n"
      "10 2 i16 f(i16, i16)\n"
      "\n"
      "5 0 void f(ptr)   # trailing comment\n"
      "3 1 i16 g(u16, u16)\n",
      "mem");
  REQUIRE(c.entries.size() == 2);
  CHECK(print_signature(c.entries[0].sig) == "i16 f(i16, i16)");
  CHECK(c.entries[0].call_weight == 13);  // u16 spelling merges in
  CHECK(c.entries[0].def_weight == 3);
  CHECK(c.entries[1].call_weight == 5);
  CHECK(c.entries[1].def_weight == 0);
}

TEST_CASE("corpus totals do not depend on record order") {
  Corpus a = parse_corpus("1 1 i8 f(i8)\n2 3 i16 f(i16)\n", "mem");
  Corpus b = parse_corpus("2 3 i16 f(i16)\n1 1 i8 f(i8)\n", "mem");
  REQUIRE(a.entries.size() == 2);
  REQUIRE(b.entries.size() == 2);
  // First-seen order is preserved, but the merged multiset is equal.
  std::int64_t wa = 0, wb = 0;
  for (const auto& e : a.entries) wa += e.call_weight * 100 + e.def_weight;
  for (const auto& e : b.entries) wb += e.call_weight * 100 + e.def_weight;
  CHECK(wa == wb);
}

TEST_CASE("corpus validation errors") {
  CHECK_THROWS_AS(parse_corpus("1 i16 f(void)\n", "mem"), error);
  CHECK_THROWS_AS(parse_corpus("-1 1 i16 f(void)\n", "mem"), error);
  CHECK_THROWS_AS(parse_corpus("x 1 i16 f(void)\n", "mem"), error);
  CHECK_THROWS_AS(parse_corpus("1 2 i16 oops(\n", "mem"), error);
  // At least one record must be called.
  CHECK_THROWS_AS(parse_corpus("0 1 i16 f(void)\n", "mem"), error);
  CHECK_THROWS_AS(parse_corpus("", "mem"), error);
  CHECK_NOTHROW(parse_corpus("0 1 i16 f(void)\n1 0 u8 g(void)\n", "mem"));
  CHECK_THROWS_AS(load_corpus_file("/nonexistent/x.corpus"), error);
}

TEST_CASE("corpus print round-trip") {
  Corpus c = parse_corpus("7 2 i16 f(ptr, u16)\n1 0 void f(void)\n", "mem");
  std::string printed = print_corpus(c);
  Corpus back = parse_corpus(printed, "mem");
  REQUIRE(back.entries.size() == c.entries.size());
  for (size_t i = 0; i < c.entries.size(); ++i) {
    CHECK(back.entries[i].sig == c.entries[i].sig);
    CHECK(back.entries[i].call_weight == c.entries[i].call_weight);
    CHECK(back.entries[i].def_weight == c.entries[i].def_weight);
  }
}

TEST_CASE("default corpus is well-formed and cached") {
  const Corpus& c = default_corpus();
  CHECK(&c == &default_corpus());
  // Six commonly called types plus three commonly defined ones.
  CHECK(c.entries.size() == 9);
  CHECK(print_signature(c.entries.front().sig) == "f32 f(f32, f32)");
  CHECK(print_signature(c.entries.back().sig) == "f32 f(f32)");
  bool any_called = false;
  for (const auto& e : c.entries) {
    CHECK(e.call_weight >= 0);
    CHECK(e.def_weight >= 0);
    if (e.call_weight > 0) any_called = true;
    // Entries arrive canonicalized and unique.
    CHECK(parse_signature(print_signature(e.sig)) == e.sig);
    for (const auto& other : c.entries) {
      if (&other != &e) CHECK_FALSE(other.sig == e.sig);
    }
  }
  CHECK(any_called);
}
