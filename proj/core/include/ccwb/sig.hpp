#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ccwb {

enum class TypeKind { void_t, integer, pointer, float_t, bool_t };

// A C type at the granularity calling conventions distinguish: width in
// bits and broad kind.  Signedness is erased (i8 and u8 parse equal);
// char is an 8-bit integer; pointers are 16-bit on all supported
// targets; bool is kept distinct for display but assigns like an 8-bit
// integer.
struct TypeClass {
  int width = 0;  // 0, 8, 16 or 32
  TypeKind kind = TypeKind::void_t;

  friend bool operator==(const TypeClass&, const TypeClass&) = default;
};

struct FunctionSignature {
  TypeClass return_type;
  std::vector<TypeClass> params;
  bool varargs = false;

  friend bool operator==(const FunctionSignature&,
                         const FunctionSignature&) = default;
};

struct CorpusEntry {
  FunctionSignature sig;
  std::int64_t call_weight = 0;
  std::int64_t def_weight = 0;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
};

// Signature text form: `ret name(params)` with types from
// {void bool i8 u8 i16 u16 i32 u32 f32 ptr char}; an empty parameter
// list is written `(void)`; `...` after at least one named parameter
// marks varargs.  Printing canonicalizes: the name becomes `f`,
// integers print signed (i8/i16/i32), char prints as i8.
FunctionSignature parse_signature(std::string_view text);
std::string print_signature(const FunctionSignature& sig);

// Corpus text form: one `<call_weight> <def_weight> <signature>` record
// per line, '#' comments.  Duplicate signatures (after
// canonicalization) merge by weight summation.
Corpus parse_corpus(const std::string& text, const std::string& origin);
Corpus load_corpus_file(const std::string& path);
std::string print_corpus(const Corpus& corpus);

// The shipped corpus of commonly called / commonly defined function
// types with rank-based placeholder weights.
const Corpus& default_corpus();

}  // namespace ccwb
