#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccwb/arch.hpp"
#include "ccwb/convention.hpp"
#include "ccwb/costing.hpp"
#include "ccwb/sig.hpp"

namespace ccwb {

// The cartesian design space of a convention family: register choices
// per return width, candidate preference lists per argument width,
// cleanup policies and stack slot widths.  The greedy-assignment knobs
// are fixed, not searched.
struct SearchSpace {
  std::string arch;
  std::vector<std::string> ret8_choices;
  std::vector<std::string> ret16_choices;
  std::vector<std::vector<std::string>> ret32_choices;  // msw:lsw pairs
  std::map<int, std::vector<std::vector<ArgPrefEntry>>> arg_pref_choices;
  std::vector<CleanupPolicy> cleanup_choices;
  std::vector<int> stack_width_choices;
  int max_register_params = 2;
  bool stop_on_stack = true;
  bool first_of_each_width = false;
};

struct RankedCandidate {
  CallingConvention conv;
  Cost cost;
  std::int64_t score = 0;
  std::size_t order = 0;  // canonical enumeration index
};

struct SearchResult {
  // Ascending by (score, bytes, cycles, enumeration order).
  std::vector<RankedCandidate> ranked;
  // Indices into ranked, undominated in (bytes, cycles), by ascending
  // bytes.
  std::vector<std::size_t> pareto;
  std::size_t evaluated_count = 0;
};

struct OverrideChoice {
  FunctionSignature sig;
  CallingConvention conv;
  std::int64_t base_entry_score = 0;
  std::int64_t best_entry_score = 0;
};

struct OverrideResult {
  SearchResult base;
  std::vector<OverrideChoice> overrides;  // in hot-type argument order
  std::int64_t base_total_score = 0;
  std::int64_t total_score_with_overrides = 0;
};

// Space documents mirror the convention document format with
// set-valued fields: { alt | alt | ... }.
SearchSpace parse_space(const std::string& text, const std::string& origin);
SearchSpace load_space_file(const std::string& path);
// The shipped per-family default space, retargeted to arch's id.
SearchSpace default_space(const Architecture& arch);

// All valid candidates in canonical order: the cartesian product with
// invariant-violating combinations skipped and duplicates removed.
// Throws if the space yields no valid candidate.
std::vector<CallingConvention> enumerate(const SearchSpace& space,
                                         const Architecture& arch);

// Exhaustive evaluation of every candidate over the corpus; ranking,
// Pareto front.  jobs > 1 partitions evaluation across threads; results
// are byte-identical for any job count.
SearchResult search(const SearchSpace& space, const Corpus& corpus,
                    const Architecture& arch, const CostTables& tables,
                    const ScoreWeights& weights, unsigned jobs = 1);

// Base search plus an independent per-hot-type optimum, holding the
// base convention for everything else.
OverrideResult search_with_overrides(const SearchSpace& space,
                                     const Corpus& corpus,
                                     const std::vector<FunctionSignature>& hot,
                                     const Architecture& arch,
                                     const CostTables& tables,
                                     const ScoreWeights& weights,
                                     unsigned jobs = 1);

bool dominates(const Cost& a, const Cost& b);

}  // namespace ccwb
