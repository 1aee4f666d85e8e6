#include "ccwb/sig.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "ccwb/embedded.hpp"
#include "ccwb/error.hpp"

namespace ccwb {

namespace {

struct Lexer {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(
                                    text[pos]))) {
      ++pos;
    }
  }

  // Returns an identifier, one of "(" ")" ",", "...", or "" at end.
  std::string next() {
    skip_ws();
    if (pos >= text.size()) return "";
    char c = text[pos];
    if (c == '(' || c == ')' || c == ',') {
      ++pos;
      return std::string(1, c);
    }
    if (c == '.') {
      if (text.substr(pos, 3) != "...") {
        throw error("bad token in signature '" + std::string(text) + "'");
      }
      pos += 3;
      return "...";
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_')) {
        ++pos;
      }
      return std::string(text.substr(start, pos - start));
    }
    throw error("bad character '" + std::string(1, c) + "' in signature '" +
                std::string(text) + "'");
  }
};

bool lookup_type(const std::string& name, TypeClass& out) {
  if (name == "void") {
    out = {0, TypeKind::void_t};
  } else if (name == "bool") {
    out = {8, TypeKind::bool_t};
  } else if (name == "i8" || name == "u8" || name == "char") {
    out = {8, TypeKind::integer};
  } else if (name == "i16" || name == "u16") {
    out = {16, TypeKind::integer};
  } else if (name == "i32" || name == "u32") {
    out = {32, TypeKind::integer};
  } else if (name == "f32") {
    out = {32, TypeKind::float_t};
  } else if (name == "ptr") {
    out = {16, TypeKind::pointer};
  } else {
    return false;
  }
  return true;
}

// Reads one type, consuming a second token for the two-word spellings
// "signed char" and "unsigned char".
bool lookup_type(Lexer& lex, const std::string& first, TypeClass& out) {
  if (first == "signed" || first == "unsigned") {
    if (lex.next() != "char") {
      throw error("bad signature '" + std::string(lex.text) + "': '" + first +
                  "' must be followed by 'char'");
    }
    out = {8, TypeKind::integer};
    return true;
  }
  return lookup_type(first, out);
}

std::string type_to_string(const TypeClass& t) {
  switch (t.kind) {
    case TypeKind::void_t:
      return "void";
    case TypeKind::bool_t:
      return "bool";
    case TypeKind::pointer:
      return "ptr";
    case TypeKind::float_t:
      return "f32";
    case TypeKind::integer:
      break;
  }
  switch (t.width) {
    case 8:
      return "i8";
    case 16:
      return "i16";
    case 32:
      return "i32";
  }
  throw error("integer type with unsupported width " +
              std::to_string(t.width));
}

bool is_ident(const std::string& tok) {
  if (tok.empty()) return false;
  char c = tok[0];
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

FunctionSignature parse_signature(std::string_view text) {
  Lexer lex{text};
  auto bad = [&](const std::string& why) -> error {
    return error("bad signature '" + std::string(text) + "': " + why);
  };
  FunctionSignature sig;
  std::string tok = lex.next();
  if (!lookup_type(lex, tok, sig.return_type)) {
    throw bad("expected return type, got '" + tok + "'");
  }
  tok = lex.next();
  if (!is_ident(tok)) throw bad("expected function name, got '" + tok + "'");
  if (lex.next() != "(") throw bad("expected '('");
  tok = lex.next();
  if (tok == "void") {
    tok = lex.next();
  } else if (tok == ")") {
    throw bad("empty parameter list must be written (void)");
  } else {
    for (;;) {
      TypeClass p;
      if (tok == "...") {
        if (sig.params.empty()) {
          throw bad("varargs need at least one named parameter");
        }
        sig.varargs = true;
        tok = lex.next();
        break;
      }
      if (!lookup_type(lex, tok, p)) {
        throw bad("expected parameter type, got '" + tok + "'");
      }
      if (p.kind == TypeKind::void_t) {
        throw bad("void is not a parameter type");
      }
      sig.params.push_back(p);
      tok = lex.next();
      if (tok == ",") {
        tok = lex.next();
        continue;
      }
      break;
    }
  }
  if (tok != ")") throw bad("expected ')'");
  if (!lex.next().empty()) throw bad("trailing text after ')'");
  return sig;
}

std::string print_signature(const FunctionSignature& sig) {
  std::string out = type_to_string(sig.return_type) + " f(";
  if (sig.params.empty()) {
    out += "void";
  } else {
    for (size_t i = 0; i < sig.params.size(); ++i) {
      if (i > 0) out += ", ";
      out += type_to_string(sig.params[i]);
    }
    if (sig.varargs) out += ", ...";
  }
  out += ")";
  return out;
}

Corpus parse_corpus(const std::string& text, const std::string& origin) {
  Corpus corpus;
  std::map<std::string, size_t> seen;  // canonical signature -> entry index
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string cw, dw;
    if (!(ls >> cw)) continue;  // blank line
    auto ctx = origin + ":" + std::to_string(lineno);
    if (!(ls >> dw)) throw error(ctx + ": expected two weights");
    std::int64_t call_w, def_w;
    try {
      size_t p1 = 0, p2 = 0;
      call_w = std::stoll(cw, &p1);
      def_w = std::stoll(dw, &p2);
      if (p1 != cw.size() || p2 != dw.size() || call_w < 0 || def_w < 0) {
        throw std::invalid_argument("");
      }
    } catch (const std::exception&) {
      throw error(ctx + ": weights must be non-negative integers");
    }
    std::string rest;
    std::getline(ls, rest);
    FunctionSignature sig;
    try {
      sig = parse_signature(rest);
    } catch (const error& e) {
      throw error(ctx + ": " + e.what());
    }
    std::string key = print_signature(sig);
    if (auto it = seen.find(key); it != seen.end()) {
      corpus.entries[it->second].call_weight += call_w;
      corpus.entries[it->second].def_weight += def_w;
    } else {
      seen.emplace(key, corpus.entries.size());
      corpus.entries.push_back({sig, call_w, def_w});
    }
  }
  bool any_called = false;
  for (const auto& e : corpus.entries) any_called |= e.call_weight > 0;
  if (!any_called) {
    throw error(origin + ": corpus needs at least one entry with call weight "
                         "> 0");
  }
  return corpus;
}

Corpus load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open corpus file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path);
}

std::string print_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& e : corpus.entries) {
    out += std::to_string(e.call_weight) + " " + std::to_string(e.def_weight) +
           " " + print_signature(e.sig) + "\n";
  }
  return out;
}

const Corpus& default_corpus() {
  static const Corpus corpus = parse_corpus(
      std::string(embedded::default_corpus_text()), "embedded:corpus");
  return corpus;
}

}  // namespace ccwb
