#include <algorithm>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "ccwb/error.hpp"
#include "ccwb/search.hpp"

namespace ccwb {

bool dominates(const Cost& a, const Cost& b) {
  return a.bytes <= b.bytes && a.cycles <= b.cycles &&
         (a.bytes < b.bytes || a.cycles < b.cycles);
}

std::vector<CallingConvention> enumerate(const SearchSpace& space,
                                         const Architecture& arch) {
  if (space.arch != arch.id) {
    throw error("search space targets '" + space.arch + "', not '" + arch.id +
                "'");
  }
  std::vector<CallingConvention> out;
  std::set<std::string> seen;

  CallingConvention base;
  base.arch = arch.id;
  base.max_register_params = space.max_register_params;
  base.stop_on_stack = space.stop_on_stack;
  base.first_of_each_width = space.first_of_each_width;

  auto arg_choices = [&](int w) -> const std::vector<std::vector<ArgPrefEntry>>& {
    static const std::vector<std::vector<ArgPrefEntry>> none = {{}};
    auto it = space.arg_pref_choices.find(w);
    return it == space.arg_pref_choices.end() || it->second.empty()
               ? none
               : it->second;
  };

  for (const auto& r8 : space.ret8_choices) {
    for (const auto& r16 : space.ret16_choices) {
      for (const auto& r32 : space.ret32_choices) {
        for (const auto& a8 : arg_choices(8)) {
          for (const auto& a16 : arg_choices(16)) {
            for (const auto& a32 : arg_choices(32)) {
              for (const auto& cleanup : space.cleanup_choices) {
                for (int slot : space.stack_width_choices) {
                  CallingConvention c = base;
                  c.ret_reg = {{8, {r8}}, {16, {r16}}, {32, r32}};
                  c.arg_prefs = {{8, a8}, {16, a16}, {32, a32}};
                  c.cleanup = cleanup;
                  c.stack_slot_width_for_8bit = slot;
                  try {
                    validate_convention(c, arch);
                  } catch (const error&) {
                    continue;  // conflict or width violation, not an error
                  }
                  if (seen.insert(print_convention(c)).second) {
                    out.push_back(std::move(c));
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  if (out.empty()) {
    throw error("search space for '" + arch.id +
                "' contains no valid candidate");
  }
  return out;
}

SearchResult search(const SearchSpace& space, const Corpus& corpus,
                    const Architecture& arch, const CostTables& tables,
                    const ScoreWeights& weights, unsigned jobs) {
  std::vector<CallingConvention> candidates = enumerate(space, arch);
  const std::size_t n = candidates.size();

  SearchResult result;
  result.evaluated_count = n;
  result.ranked.resize(n);

  auto evaluate = [&](std::size_t i) {
    RankedCandidate& r = result.ranked[i];
    r.cost = corpus_cost(candidates[i], corpus, arch, tables);
    r.score = score(r.cost, weights);
    r.order = i;
    r.conv = std::move(candidates[i]);
  };

  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) evaluate(i);
  } else {
    // Static index partition: each worker owns a fixed stride, writes
    // only its own slots, and reads only immutable inputs, so the
    // merged result does not depend on scheduling.
    unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(jobs, n));
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += workers) evaluate(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.score != b.score) return a.score < b.score;
              if (a.cost.bytes != b.cost.bytes)
                return a.cost.bytes < b.cost.bytes;
              if (a.cost.cycles != b.cost.cycles)
                return a.cost.cycles < b.cost.cycles;
              return a.order < b.order;
            });

  // Pareto sweep over (bytes, cycles).  Within an equal-bytes group only
  // the minimum-cycles entries survive, and only if no smaller-bytes
  // entry already reached that cycle count; cost ties all survive.
  std::vector<std::size_t> by_bytes(n);
  for (std::size_t i = 0; i < n; ++i) by_bytes[i] = i;
  std::sort(by_bytes.begin(), by_bytes.end(),
            [&](std::size_t a, std::size_t b) {
              const Cost& ca = result.ranked[a].cost;
              const Cost& cb = result.ranked[b].cost;
              if (ca.bytes != cb.bytes) return ca.bytes < cb.bytes;
              if (ca.cycles != cb.cycles) return ca.cycles < cb.cycles;
              return a < b;
            });
  std::int64_t best_cycles = std::numeric_limits<std::int64_t>::max();
  std::size_t g = 0;
  while (g < n) {
    std::size_t end = g;
    const std::int64_t bytes = result.ranked[by_bytes[g]].cost.bytes;
    while (end < n && result.ranked[by_bytes[end]].cost.bytes == bytes) ++end;
    const std::int64_t group_min = result.ranked[by_bytes[g]].cost.cycles;
    if (group_min < best_cycles) {
      for (std::size_t k = g; k < end; ++k) {
        std::size_t idx = by_bytes[k];
        if (result.ranked[idx].cost.cycles != group_min) break;
        result.pareto.push_back(idx);
      }
      best_cycles = group_min;
    }
    g = end;
  }
  return result;
}

OverrideResult search_with_overrides(const SearchSpace& space,
                                     const Corpus& corpus,
                                     const std::vector<FunctionSignature>& hot,
                                     const Architecture& arch,
                                     const CostTables& tables,
                                     const ScoreWeights& weights,
                                     unsigned jobs) {
  OverrideResult result;
  result.base = search(space, corpus, arch, tables, weights, jobs);
  const CallingConvention& base_conv = result.base.ranked.front().conv;
  result.base_total_score = result.base.ranked.front().score;
  result.total_score_with_overrides = result.base_total_score;

  std::set<std::string> seen;
  for (const auto& sig : hot) {
    const std::string key = print_signature(sig);
    if (!seen.insert(key).second) continue;  // each hot type counted once
    const CorpusEntry* entry = nullptr;
    for (const auto& e : corpus.entries) {
      if (print_signature(e.sig) == key) {
        entry = &e;
        break;
      }
    }
    if (!entry) {
      throw error("hot type '" + key + "' is not in the corpus");
    }

    auto entry_score = [&](const CallingConvention& conv) {
      SignatureCost sc = signature_cost(conv, entry->sig, arch, tables);
      return score(static_cast<std::int64_t>(entry->call_weight) *
                           sc.call_site +
                       static_cast<std::int64_t>(entry->def_weight) *
                           sc.definition,
                   weights);
    };

    OverrideChoice choice;
    choice.sig = entry->sig;
    choice.base_entry_score = entry_score(base_conv);
    choice.conv = base_conv;
    choice.best_entry_score = choice.base_entry_score;
    std::size_t best_order = result.base.ranked.front().order;
    for (const auto& r : result.base.ranked) {
      std::int64_t s = entry_score(r.conv);
      if (s < choice.best_entry_score ||
          (s == choice.best_entry_score && r.order < best_order)) {
        choice.best_entry_score = s;
        choice.conv = r.conv;
        best_order = r.order;
      }
    }
    if (choice.best_entry_score == choice.base_entry_score) {
      choice.conv = base_conv;  // no gain: keep the base convention
    }
    result.total_score_with_overrides -=
        choice.base_entry_score - choice.best_entry_score;
    result.overrides.push_back(std::move(choice));
  }
  return result;
}

}  // namespace ccwb
