#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccwb/cli.hpp"
#include "ccwb/embedded.hpp"
#include "ccwb/error.hpp"
#include "ccwb/search.hpp"

namespace ccwb {
namespace {

using ordered_json = nlohmann::ordered_json;

// Bad flag values detected after CLI11 parsing; reported as usage, not
// domain, errors.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::string arch;
  std::string format = "table";
  std::string cost_tables;
  bool allow_reserved = false;
};

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += sep;
    s += v[i];
  }
  return s;
}

std::string pct_delta(std::int64_t value, std::int64_t base) {
  if (base == 0) return value == 0 ? "0.0" : "inf";
  return format_pct(100.0 * static_cast<double>(value - base) /
                    static_cast<double>(base));
}

// Aligned two-space-separated columns; columns in left_cols are
// left-justified, the rest right-justified; no trailing padding.
void print_table(std::ostream& out,
                 const std::vector<std::vector<std::string>>& rows,
                 const std::vector<std::size_t>& left_cols) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  }
  auto is_left = [&](std::size_t i) {
    return std::find(left_cols.begin(), left_cols.end(), i) != left_cols.end();
  };
  for (const auto& r : rows) {
    std::string line = " ";
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += " ";
      std::string pad(width[i] - r[i].size(), ' ');
      if (is_left(i)) {
        line += r[i];
        if (i + 1 < r.size()) line += pad;
      } else {
        line += pad + r[i];
      }
    }
    out << line << "\n";
  }
}

ScoreWeights parse_weights(const std::string& text) {
  auto comma = text.find(',');
  ScoreWeights w;
  try {
    if (comma == std::string::npos) throw std::invalid_argument("comma");
    w.alpha_bytes = std::stoll(text.substr(0, comma));
    w.beta_cycles = std::stoll(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw usage_error("--weights expects 'alpha,beta' (two integers)");
  }
  if (w.alpha_bytes < 0 || w.beta_cycles < 0 ||
      (w.alpha_bytes == 0 && w.beta_cycles == 0)) {
    throw usage_error("--weights must be nonnegative and not both zero");
  }
  return w;
}

CostTables resolve_tables(const Architecture& arch,
                          const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv("CCWB_COST_TABLES")) path = env;
  }
  if (path.empty()) return arch.tables;
  CostTables t = load_cost_tables_file(path);
  if (t.arch != arch.id) {
    throw error("cost tables '" + path + "' are for '" + t.arch +
                "', not '" + arch.id + "'");
  }
  return t;
}

bool is_builtin(const std::string& name) {
  const auto& names = builtin_convention_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

// A convention argument is a builtin name first, a file path second.
CallingConvention resolve_convention(const std::string& name_or_path,
                                     const std::string& arch_id,
                                     bool allow_reserved) {
  CallingConvention conv;
  if (is_builtin(name_or_path)) {
    conv = builtin_convention(name_or_path);
  } else {
    conv = load_convention_file(name_or_path, !allow_reserved);
  }
  if (!arch_id.empty() && conv.arch != arch_id) {
    conv = retarget(conv, arch_id);
  }
  return conv;
}

Corpus resolve_corpus(const std::string& spec) {
  if (spec.empty() || spec == "default") return default_corpus();
  return load_corpus_file(spec);
}

std::string corpus_label(const std::string& spec) {
  return spec.empty() || spec == "default" ? "default" : spec;
}

const Architecture& resolve_arch(const CommonOpts& opts,
                                 const std::string& fallback = "") {
  const std::string& id = opts.arch.empty() ? fallback : opts.arch;
  if (id.empty()) throw usage_error("--arch is required");
  return get_architecture(id, !opts.allow_reserved);
}

std::string reg_display(const Register& r) {
  if (r.parts.empty()) return r.name;
  return r.name + "(" + join(r.parts, ":") + ")";
}

int cmd_arch_list(const std::string& format, std::ostream& out) {
  if (format == "json") {
    ordered_json docs = ordered_json::array();
    for (const auto& id : architecture_ids()) {
      const Architecture& arch = get_architecture(id);
      ordered_json j;
      j["id"] = arch.id;
      j["push_granularity"] = arch.push_granularity;
      ordered_json regs = ordered_json::array();
      for (const auto& r : arch.registers) {
        regs.push_back({{"name", r.name}, {"width", r.width},
                        {"parts", r.parts}});
      }
      j["registers"] = regs;
      j["reserved"] = arch.reserved;
      docs.push_back(j);
    }
    out << docs.dump(2) << "\n";
    return 0;
  }
  std::vector<std::vector<std::string>> rows;
  if (format == "csv") {
    out << "arch,push_granularity,registers,reserved\n";
    for (const auto& id : architecture_ids()) {
      const Architecture& arch = get_architecture(id);
      std::vector<std::string> regs;
      for (const auto& r : arch.registers) regs.push_back(reg_display(r));
      out << arch.id << "," << arch.push_granularity << ","
          << join(regs, " ") << "," << join(arch.reserved, " ") << "\n";
    }
    return 0;
  }
  rows.push_back({"arch", "push", "registers", "reserved"});
  for (const auto& id : architecture_ids()) {
    const Architecture& arch = get_architecture(id);
    std::vector<std::string> regs;
    for (const auto& r : arch.registers) regs.push_back(reg_display(r));
    rows.push_back({arch.id, std::to_string(arch.push_granularity),
                    join(regs, " "),
                    arch.reserved.empty() ? "-" : join(arch.reserved, " ")});
  }
  print_table(out, rows, {0, 2, 3});
  return 0;
}

int cmd_conv_show(const CommonOpts& opts, const std::string& name,
                  std::ostream& out) {
  CallingConvention conv =
      resolve_convention(name, opts.arch, opts.allow_reserved);
  validate_convention(conv,
                      get_architecture(conv.arch, !opts.allow_reserved));
  if (opts.format == "json") {
    ordered_json j;
    j["name"] = conv.name;
    j["arch"] = conv.arch;
    j["summary"] = summarize_convention(conv);
    j["hinders_tail_calls"] = conv.hinders_tail_calls();
    j["document"] = print_convention(conv);
    out << j.dump(2) << "\n";
  } else if (opts.format == "csv") {
    throw usage_error("conv-show emits a document; use table or json");
  } else {
    out << print_convention(conv);
  }
  return 0;
}

std::string loc_string(const ParamLoc& loc) {
  if (loc.in_registers()) return join(loc.regs, ":");
  return "stack+" + std::to_string(loc.offset);
}

std::string ret_string(const FunctionSignature& sig,
                       const AssignmentPlan& plan) {
  if (sig.return_type.width == 0) return "void";
  if (plan.return_loc.empty()) return "mem";
  return join(plan.return_loc, ":");
}

int cmd_assign(const CommonOpts& opts, const std::string& conv_name,
               const std::string& sig_text, std::ostream& out) {
  CallingConvention conv =
      resolve_convention(conv_name, opts.arch, opts.allow_reserved);
  const Architecture& arch = resolve_arch(opts, conv.arch);
  validate_convention(conv, arch);
  FunctionSignature sig = parse_signature(sig_text);
  AssignmentPlan plan = assign(conv, sig, arch);

  if (opts.format == "json") {
    ordered_json j;
    j["arch"] = arch.id;
    j["convention"] = conv_name;
    j["signature"] = print_signature(sig);
    ordered_json params = ordered_json::array();
    for (std::size_t i = 0; i < plan.param_locs.size(); ++i) {
      const ParamLoc& loc = plan.param_locs[i];
      ordered_json p;
      p["index"] = i + 1;
      p["width"] = loc.value_width;
      p["location"] = loc_string(loc);
      if (!loc.in_registers()) {
        p["offset"] = loc.offset;
        p["slot_bytes"] = loc.slot_bytes;
      }
      params.push_back(p);
    }
    j["params"] = params;
    j["return"] = ret_string(sig, plan);
    j["cleanup"] = std::string(to_string(plan.cleanup_side));
    j["stack_arg_bytes"] = plan.stack_arg_bytes;
    out << j.dump(2) << "\n";
    return 0;
  }
  std::vector<std::pair<std::string, std::string>> fields;
  for (std::size_t i = 0; i < plan.param_locs.size(); ++i) {
    fields.emplace_back("p" + std::to_string(i + 1),
                        loc_string(plan.param_locs[i]));
  }
  fields.emplace_back("ret", ret_string(sig, plan));
  fields.emplace_back("cleanup", std::string(to_string(plan.cleanup_side)));
  if (plan.stack_arg_bytes > 0) {
    fields.emplace_back("stack_bytes", std::to_string(plan.stack_arg_bytes));
  }
  if (opts.format == "csv") {
    out << "field,value\n";
    for (const auto& [key, value] : fields) out << key << "," << value << "\n";
  } else {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ", ";
      out << fields[i].first << "=" << fields[i].second;
    }
    out << "\n";
  }
  return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& conv_name,
             const std::string& corpus_spec, const ScoreWeights& weights,
             const std::vector<std::string>& sig_args, std::ostream& out) {
  CallingConvention conv =
      resolve_convention(conv_name, opts.arch, opts.allow_reserved);
  const Architecture& arch = resolve_arch(opts, conv.arch);
  validate_convention(conv, arch);
  CostTables tables = resolve_tables(arch, opts.cost_tables);

  Corpus corpus;
  std::string label;
  if (!sig_args.empty()) {
    for (const auto& text : sig_args) {
      corpus.entries.push_back({parse_signature(text), 1, 1});
    }
    label = "(args)";
  } else {
    corpus = resolve_corpus(corpus_spec);
    label = corpus_label(corpus_spec);
  }

  struct Row {
    std::string sig;
    std::int64_t cw, dw;
    SignatureCost cost;
    std::int64_t entry_score;
  };
  std::vector<Row> rows;
  for (const auto& e : corpus.entries) {
    SignatureCost sc = signature_cost(conv, e.sig, arch, tables);
    Cost weighted = e.call_weight * sc.call_site + e.def_weight * sc.definition;
    rows.push_back({print_signature(e.sig), e.call_weight, e.def_weight, sc,
                    score(weighted, weights)});
  }
  Cost total = corpus_cost(conv, corpus, arch, tables);

  if (opts.format == "json") {
    ordered_json j;
    j["arch"] = arch.id;
    j["convention"] = conv_name;
    j["corpus"] = label;
    j["weights"] = {{"alpha_bytes", weights.alpha_bytes},
                    {"beta_cycles", weights.beta_cycles}};
    ordered_json entries = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e;
      e["signature"] = r.sig;
      e["call_weight"] = r.cw;
      e["def_weight"] = r.dw;
      e["call_bytes"] = r.cost.call_site.bytes;
      e["call_cycles"] = r.cost.call_site.cycles;
      e["def_bytes"] = r.cost.definition.bytes;
      e["def_cycles"] = r.cost.definition.cycles;
      e["score"] = r.entry_score;
      entries.push_back(e);
    }
    j["entries"] = entries;
    j["total"] = {{"bytes", total.bytes},
                  {"cycles", total.cycles},
                  {"score", score(total, weights)}};
    out << j.dump(2) << "\n";
    return 0;
  }
  if (opts.format == "csv") {
    out << "signature,call_weight,def_weight,call_bytes,call_cycles,"
           "def_bytes,def_cycles,score\n";
    for (const auto& r : rows) {
      out << r.sig << "," << r.cw << "," << r.dw << ","
          << r.cost.call_site.bytes << "," << r.cost.call_site.cycles << ","
          << r.cost.definition.bytes << "," << r.cost.definition.cycles << ","
          << r.entry_score << "\n";
    }
    return 0;
  }
  out << "convention " << conv_name << " on " << arch.id << ", corpus "
      << label << "\n";
  std::vector<std::vector<std::string>> table;
  table.push_back({"signature", "cw", "dw", "call_bytes", "call_cycles",
                   "def_bytes", "def_cycles", "score"});
  for (const auto& r : rows) {
    table.push_back({r.sig, std::to_string(r.cw), std::to_string(r.dw),
                     std::to_string(r.cost.call_site.bytes),
                     std::to_string(r.cost.call_site.cycles),
                     std::to_string(r.cost.definition.bytes),
                     std::to_string(r.cost.definition.cycles),
                     std::to_string(r.entry_score)});
  }
  print_table(out, table, {0});
  out << "total: bytes=" << total.bytes << " cycles=" << total.cycles
      << " score=" << score(total, weights) << "\n";
  return 0;
}

int cmd_search(const CommonOpts& opts, const std::string& corpus_spec,
               const std::string& space_path, const ScoreWeights& weights,
               long top, const std::string& pareto_csv,
               const std::vector<std::string>& override_sigs, unsigned jobs,
               std::ostream& out) {
  const Architecture& arch = resolve_arch(opts);
  CostTables tables = resolve_tables(arch, opts.cost_tables);
  Corpus corpus = resolve_corpus(corpus_spec);
  SearchSpace space;
  if (space_path.empty()) {
    space = default_space(arch);
  } else {
    space = load_space_file(space_path);
    if (space.arch != arch.id) {
      throw error("space '" + space_path + "' targets '" + space.arch +
                  "', not '" + arch.id + "'");
    }
  }

  std::vector<FunctionSignature> hot;
  for (const auto& text : override_sigs) hot.push_back(parse_signature(text));

  OverrideResult result = search_with_overrides(space, corpus, hot, arch,
                                                tables, weights, jobs);
  const SearchResult& base = result.base;
  std::size_t shown = base.ranked.size();
  if (top > 0) shown = std::min<std::size_t>(shown, static_cast<std::size_t>(top));

  if (!pareto_csv.empty()) {
    std::ofstream f(pareto_csv, std::ios::binary);
    if (!f) throw error("cannot write '" + pareto_csv + "'");
    f << "bytes,cycles,score,convention\n";
    for (std::size_t idx : base.pareto) {
      const RankedCandidate& r = base.ranked[idx];
      f << r.cost.bytes << "," << r.cost.cycles << "," << r.score << ","
        << summarize_convention(r.conv) << "\n";
    }
  }

  auto in_pareto = [&](std::size_t rank_idx) {
    return std::find(base.pareto.begin(), base.pareto.end(), rank_idx) !=
           base.pareto.end();
  };

  if (opts.format == "json") {
    ordered_json j;
    j["arch"] = arch.id;
    j["corpus"] = corpus_label(corpus_spec);
    j["space"] = space_path.empty() ? "default" : space_path;
    j["weights"] = {{"alpha_bytes", weights.alpha_bytes},
                    {"beta_cycles", weights.beta_cycles}};
    j["evaluated"] = base.evaluated_count;
    ordered_json ranked = ordered_json::array();
    for (std::size_t i = 0; i < shown; ++i) {
      const RankedCandidate& r = base.ranked[i];
      ranked.push_back({{"rank", i + 1},
                        {"score", r.score},
                        {"bytes", r.cost.bytes},
                        {"cycles", r.cost.cycles},
                        {"pareto", in_pareto(i)},
                        {"convention", summarize_convention(r.conv)}});
    }
    j["top"] = ranked;
    ordered_json front = ordered_json::array();
    for (std::size_t idx : base.pareto) {
      const RankedCandidate& r = base.ranked[idx];
      front.push_back({{"bytes", r.cost.bytes},
                       {"cycles", r.cost.cycles},
                       {"score", r.score},
                       {"convention", summarize_convention(r.conv)}});
    }
    j["pareto"] = front;
    j["best_document"] = print_convention(base.ranked.front().conv);
    if (!hot.empty()) {
      ordered_json ov;
      ov["base_total_score"] = result.base_total_score;
      ov["total_score_with_overrides"] = result.total_score_with_overrides;
      ordered_json choices = ordered_json::array();
      for (const auto& c : result.overrides) {
        choices.push_back({{"signature", print_signature(c.sig)},
                           {"base_score", c.base_entry_score},
                           {"best_score", c.best_entry_score},
                           {"convention", summarize_convention(c.conv)}});
      }
      ov["choices"] = choices;
      j["overrides"] = ov;
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  if (opts.format == "csv") {
    out << "rank,score,bytes,cycles,pareto,convention\n";
    for (std::size_t i = 0; i < shown; ++i) {
      const RankedCandidate& r = base.ranked[i];
      out << i + 1 << "," << r.score << "," << r.cost.bytes << ","
          << r.cost.cycles << "," << (in_pareto(i) ? 1 : 0) << ","
          << summarize_convention(r.conv) << "\n";
    }
    return 0;
  }
  out << "evaluated " << base.evaluated_count << " candidates on " << arch.id
      << ", corpus " << corpus_label(corpus_spec) << "\n";
  std::vector<std::vector<std::string>> table;
  table.push_back({"rank", "score", "bytes", "cycles", "convention"});
  for (std::size_t i = 0; i < shown; ++i) {
    const RankedCandidate& r = base.ranked[i];
    table.push_back({std::to_string(i + 1), std::to_string(r.score),
                     std::to_string(r.cost.bytes),
                     std::to_string(r.cost.cycles),
                     summarize_convention(r.conv)});
  }
  print_table(out, table, {4});
  out << "pareto front (" << base.pareto.size() << "):\n";
  table.clear();
  table.push_back({"bytes", "cycles", "score", "convention"});
  for (std::size_t idx : base.pareto) {
    const RankedCandidate& r = base.ranked[idx];
    table.push_back({std::to_string(r.cost.bytes),
                     std::to_string(r.cost.cycles), std::to_string(r.score),
                     summarize_convention(r.conv)});
  }
  print_table(out, table, {3});
  if (!hot.empty()) {
    out << "overrides:\n";
    table.clear();
    table.push_back({"signature", "base_score", "best_score", "convention"});
    for (const auto& c : result.overrides) {
      table.push_back({print_signature(c.sig),
                       std::to_string(c.base_entry_score),
                       std::to_string(c.best_entry_score),
                       summarize_convention(c.conv)});
    }
    print_table(out, table, {0, 3});
    out << "total score: base " << result.base_total_score
        << ", with overrides " << result.total_score_with_overrides << "\n";
  }
  out << "best:\n" << print_convention(base.ranked.front().conv);
  return 0;
}

struct Comparison {
  std::string label;
  Cost total;
};

// Totals plus percentage deltas against the first label.
void emit_comparison(const std::vector<Comparison>& results,
                     const std::string& format, std::ostream& out) {
  if (results.size() < 2) {
    throw error("compare needs at least two conventions");
  }
  const Cost& base = results.front().total;
  if (format == "csv") {
    out << "label,bytes,cycles,bytes_delta_pct,cycles_delta_pct\n";
    for (const auto& r : results) {
      out << r.label << "," << r.total.bytes << "," << r.total.cycles << ","
          << pct_delta(r.total.bytes, base.bytes) << ","
          << pct_delta(r.total.cycles, base.cycles) << "\n";
    }
    return;
  }
  std::vector<std::vector<std::string>> table;
  table.push_back(
      {"label", "bytes", "cycles", "bytes_delta_pct", "cycles_delta_pct"});
  for (const auto& r : results) {
    table.push_back({r.label, std::to_string(r.total.bytes),
                     std::to_string(r.total.cycles),
                     pct_delta(r.total.bytes, base.bytes),
                     pct_delta(r.total.cycles, base.cycles)});
  }
  print_table(out, table, {0});
}

int cmd_compare(const CommonOpts& opts, const std::vector<std::string>& names,
                const std::string& corpus_spec, std::ostream& out) {
  std::vector<CallingConvention> convs;
  for (const auto& name : names) {
    convs.push_back(resolve_convention(name, opts.arch, opts.allow_reserved));
  }
  const Architecture& arch = resolve_arch(opts, convs.front().arch);
  for (std::size_t i = 0; i < convs.size(); ++i) {
    if (convs[i].arch != arch.id) convs[i] = retarget(convs[i], arch.id);
    validate_convention(convs[i], arch);
  }
  CostTables tables = resolve_tables(arch, opts.cost_tables);
  Corpus corpus = resolve_corpus(corpus_spec);

  std::vector<Comparison> totals;
  for (std::size_t i = 0; i < convs.size(); ++i) {
    totals.push_back({names[i], corpus_cost(convs[i], corpus, arch, tables)});
  }

  // Per-signature weighted costs, one row per (signature, convention).
  struct SigRow {
    std::string sig;
    std::vector<Cost> weighted;
  };
  std::vector<SigRow> sig_rows;
  for (const auto& e : corpus.entries) {
    SigRow row;
    row.sig = print_signature(e.sig);
    for (const auto& conv : convs) {
      SignatureCost sc = signature_cost(conv, e.sig, arch, tables);
      row.weighted.push_back(e.call_weight * sc.call_site +
                             e.def_weight * sc.definition);
    }
    sig_rows.push_back(std::move(row));
  }

  if (opts.format == "json") {
    const Cost& base = totals.front().total;
    ordered_json j;
    j["arch"] = arch.id;
    j["corpus"] = corpus_label(corpus_spec);
    ordered_json res = ordered_json::array();
    for (const auto& t : totals) {
      res.push_back({{"label", t.label},
                     {"bytes", t.total.bytes},
                     {"cycles", t.total.cycles},
                     {"bytes_delta_pct", pct_delta(t.total.bytes, base.bytes)},
                     {"cycles_delta_pct",
                      pct_delta(t.total.cycles, base.cycles)}});
    }
    j["results"] = res;
    ordered_json sigs = ordered_json::array();
    for (const auto& row : sig_rows) {
      ordered_json costs = ordered_json::array();
      for (std::size_t i = 0; i < totals.size(); ++i) {
        costs.push_back({{"label", totals[i].label},
                         {"bytes", row.weighted[i].bytes},
                         {"cycles", row.weighted[i].cycles}});
      }
      sigs.push_back({{"signature", row.sig}, {"costs", costs}});
    }
    j["per_signature"] = sigs;
    out << j.dump(2) << "\n";
    return 0;
  }
  if (opts.format == "csv") {
    emit_comparison(totals, "csv", out);
    return 0;
  }
  out << "comparison on " << arch.id << ", corpus "
      << corpus_label(corpus_spec) << " (weighted per-signature cost)\n";
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> head = {"signature"};
  for (const auto& t : totals) {
    head.push_back(t.label + " bytes");
    head.push_back(t.label + " cycles");
  }
  table.push_back(head);
  for (const auto& row : sig_rows) {
    std::vector<std::string> r = {row.sig};
    for (const auto& c : row.weighted) {
      r.push_back(std::to_string(c.bytes));
      r.push_back(std::to_string(c.cycles));
    }
    table.push_back(r);
  }
  print_table(out, table, {0});
  out << "totals (deltas vs " << totals.front().label << "):\n";
  emit_comparison(totals, "table", out);
  return 0;
}

}  // namespace

std::string format_pct(double pct) {
  auto v = static_cast<long long>(std::nearbyint(pct * 10.0));
  if (v == 0) return "0.0";
  long long a = v < 0 ? -v : v;
  std::string s = v < 0 ? "-" : "";
  s += std::to_string(a / 10) + "." + std::to_string(a % 10);
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"calling-convention workbench for 8-bit targets"};
  app.name("ccwb");
  app.require_subcommand(1);

  CommonOpts opts;
  std::string conv_name;
  std::string sig_text;
  std::string corpus_spec;
  std::string space_path;
  std::string weights_text;
  std::string pareto_csv;
  std::vector<std::string> sig_args;
  std::vector<std::string> override_sigs;
  std::vector<std::string> compare_names;
  long top = 10;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
  };
  auto add_common = [&](CLI::App* sub, bool arch_required) {
    auto* a = sub->add_option("--arch", opts.arch, "Target architecture id");
    if (arch_required) a->required();
    add_format(sub);
    sub->add_flag("--allow-reserved", opts.allow_reserved,
                  "Treat ix/iy as allocatable");
  };
  auto add_tables = [&](CLI::App* sub) {
    sub->add_option("--cost-tables", opts.cost_tables,
                    "Cost table file (overrides CCWB_COST_TABLES and the "
                    "embedded defaults)");
  };

  CLI::App* arch_list = app.add_subcommand("arch-list",
                                           "List supported architectures");
  add_format(arch_list);

  CLI::App* conv_show =
      app.add_subcommand("conv-show", "Print a convention document");
  conv_show->add_option("convention", conv_name, "Builtin name or file path")
      ->required();
  add_common(conv_show, false);

  CLI::App* cmd_assign_app =
      app.add_subcommand("assign", "Assign parameter and return locations");
  cmd_assign_app->add_option("signature", sig_text, "Function signature")
      ->required();
  cmd_assign_app->add_option("--conv", conv_name, "Builtin name or file path")
      ->required();
  add_common(cmd_assign_app, false);

  CLI::App* cmd_eval_app =
      app.add_subcommand("eval", "Cost a convention over signatures");
  cmd_eval_app->add_option("signatures", sig_args,
                           "Signatures to evaluate with weight 1,1");
  cmd_eval_app->add_option("--conv", conv_name, "Builtin name or file path")
      ->required();
  cmd_eval_app->add_option("--corpus", corpus_spec,
                           "Corpus file, or 'default'");
  cmd_eval_app->add_option("--weights", weights_text,
                           "Score weights alpha,beta (default 4,1)");
  add_common(cmd_eval_app, false);
  add_tables(cmd_eval_app);

  CLI::App* cmd_search_app =
      app.add_subcommand("search", "Exhaustively evaluate a design space");
  cmd_search_app->add_option("--corpus", corpus_spec,
                             "Corpus file, or 'default'")
      ->required();
  cmd_search_app->add_option("--space", space_path,
                             "Space file (default: embedded space for arch)");
  cmd_search_app->add_option("--weights", weights_text,
                             "Score weights alpha,beta (default 4,1)");
  cmd_search_app->add_option("--top", top, "Candidates to report (0 = all)");
  cmd_search_app->add_option("--pareto", pareto_csv,
                             "Write the Pareto front to this CSV file");
  cmd_search_app->add_option("--overrides", override_sigs,
                             "Hot signatures to optimize independently");
  cmd_search_app->add_option("--jobs", jobs, "Worker threads");
  add_common(cmd_search_app, true);
  add_tables(cmd_search_app);

  CLI::App* cmd_compare_app =
      app.add_subcommand("compare", "Compare conventions over a corpus");
  cmd_compare_app
      ->add_option("conventions", compare_names, "Builtin names or file paths")
      ->expected(2, -1)
      ->required();
  cmd_compare_app->add_option("--corpus", corpus_spec,
                              "Corpus file, or 'default'");
  add_common(cmd_compare_app, false);
  add_tables(cmd_compare_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    ScoreWeights weights;
    if (!weights_text.empty()) weights = parse_weights(weights_text);
    if (arch_list->parsed()) return cmd_arch_list(opts.format, out);
    if (conv_show->parsed()) return cmd_conv_show(opts, conv_name, out);
    if (cmd_assign_app->parsed()) {
      return cmd_assign(opts, conv_name, sig_text, out);
    }
    if (cmd_eval_app->parsed()) {
      return cmd_eval(opts, conv_name, corpus_spec, weights, sig_args, out);
    }
    if (cmd_search_app->parsed()) {
      return cmd_search(opts, corpus_spec, space_path, weights, top,
                        pareto_csv, override_sigs, std::max(1u, jobs), out);
    }
    if (cmd_compare_app->parsed()) {
      return cmd_compare(opts, compare_names, corpus_spec, out);
    }
    err << "ccwb: no command\n";
    return 2;
  } catch (const usage_error& e) {
    err << "ccwb: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    err << "ccwb: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "ccwb: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ccwb
