#include "effint/scheme_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "effint/errors.hpp"

namespace effint {

namespace {

std::vector<std::string_view> words(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t number(std::string_view w, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc{} || ptr != w.data() + w.size()) {
    throw ParseError("expected a natural number, got '" + std::string(w) + "'", line);
  }
  return v;
}

std::string shape_text(const ExistentialCondition& c) {
  if (c.wildcard) return "*";
  std::string s;
  for (std::size_t i = 0; i < c.shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c.shape[i]);
  }
  return s;
}

std::string arities_text(const Signature& sig) {
  std::string s;
  for (auto a : sig.arities()) s += " " + std::to_string(a);
  return s;
}

void emit_side(std::ostringstream& os, const std::string& part, const char* side,
               const SigmaScheme& s) {
  if (!s.is_listed()) throw ArgumentError("generated schemes have no text form");
  for (const auto& c : s.conditions()) {
    os << part << ' ' << side << ' ' << condition_to_text(c) << '\n';
  }
}

Literal parse_literal(std::string_view text, std::size_t line) {
  auto w = words(text);
  if (w.size() < 2) throw ParseError("empty literal", line);
  Literal l;
  if (w[0] == "+") {
    l.positive = true;
  } else if (w[0] == "-") {
    l.positive = false;
  } else {
    throw ParseError("literal must start with + or -", line);
  }
  std::size_t first_arg = 2;
  if (w[1] == "eq") {
    l.is_eq = true;
  } else if (w[1] == "rel") {
    if (w.size() < 3) throw ParseError("relation literal needs an index", line);
    l.rel = number(w[2], line);
    first_arg = 3;
  } else {
    throw ParseError("unknown literal kind '" + std::string(w[1]) + "'", line);
  }
  for (std::size_t i = first_arg; i < w.size(); ++i) l.args.push_back(number(w[i], line));
  if (l.is_eq && l.args.size() != 2) throw ParseError("equality literal needs two positions", line);
  if (!l.is_eq && l.args.empty()) throw ParseError("relation literal needs positions", line);
  return l;
}

std::vector<std::size_t> parse_arities(const std::vector<std::string_view>& w, std::size_t line) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto a = number(w[i], line);
    if (a == 0) throw ParseError("arity must be positive", line);
    out.push_back(a);
  }
  return out;
}

}  // namespace

std::string condition_to_text(const ExistentialCondition& c) {
  std::ostringstream os;
  os << shape_text(c) << ' ' << c.witness_count;
  for (const auto& l : c.literals) {
    os << " | " << (l.positive ? '+' : '-');
    if (l.is_eq) {
      os << " eq";
    } else {
      os << " rel " << l.rel;
    }
    for (auto a : l.args) os << ' ' << a;
  }
  return os.str();
}

std::string scheme_to_text(const InterpScheme& scheme) {
  std::ostringstream os;
  os << "interp-scheme v1\n";
  if (!scheme.name.empty()) os << "name " << scheme.name << '\n';
  os << "source-arities" << arities_text(scheme.source) << '\n';
  os << "target-arities" << arities_text(scheme.target) << '\n';
  emit_side(os, "dom", "pos", scheme.dom.positive);
  emit_side(os, "dom", "neg", scheme.dom.negative);
  emit_side(os, "equiv", "pos", scheme.equiv.positive);
  emit_side(os, "equiv", "neg", scheme.equiv.negative);
  for (std::size_t i = 0; i < scheme.relations.size(); ++i) {
    const std::string part = "rel " + std::to_string(i);
    emit_side(os, part, "pos", scheme.relations[i].positive);
    emit_side(os, part, "neg", scheme.relations[i].negative);
  }
  return os.str();
}

InterpScheme scheme_from_text(std::string_view text) {
  InterpScheme s;
  std::vector<ExistentialCondition> dom_pos, dom_neg, eq_pos, eq_neg;
  std::vector<std::vector<ExistentialCondition>> rel_pos, rel_neg;
  bool header = false, have_source = false, have_target = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    auto w = words(line);
    if (w.empty() || w[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!header) {
      if (w.size() != 2 || w[0] != "interp-scheme" || w[1] != "v1") {
        throw ParseError("expected header 'interp-scheme v1'", line_no);
      }
      header = true;
    } else if (w[0] == "name") {
      if (w.size() != 2) throw ParseError("name takes one identifier", line_no);
      s.name = std::string(w[1]);
    } else if (w[0] == "source-arities") {
      s.source = Signature(parse_arities(w, line_no));
      have_source = true;
    } else if (w[0] == "target-arities") {
      auto ar = parse_arities(w, line_no);
      rel_pos.assign(ar.size(), {});
      rel_neg.assign(ar.size(), {});
      s.target = Signature(std::move(ar));
      have_target = true;
    } else {
      if (!have_source || !have_target) {
        throw ParseError("conditions must follow the arity declarations", line_no);
      }
      // Split off the literal list.
      std::vector<std::string_view> pieces;
      std::size_t p = 0;
      while (true) {
        std::size_t bar = line.find('|', p);
        pieces.push_back(line.substr(p, bar == std::string_view::npos ? line.size() - p : bar - p));
        if (bar == std::string_view::npos) break;
        p = bar + 1;
      }
      auto head = words(pieces[0]);
      std::size_t i = 0;
      std::vector<ExistentialCondition>* pos = nullptr;
      std::vector<ExistentialCondition>* neg = nullptr;
      if (head[0] == "dom") {
        pos = &dom_pos;
        neg = &dom_neg;
        i = 1;
      } else if (head[0] == "equiv") {
        pos = &eq_pos;
        neg = &eq_neg;
        i = 1;
      } else if (head[0] == "rel") {
        if (head.size() < 2) throw ParseError("rel needs an index", line_no);
        auto r = number(head[1], line_no);
        if (r >= rel_pos.size()) throw ParseError("relation index out of range", line_no);
        pos = &rel_pos[r];
        neg = &rel_neg[r];
        i = 2;
      } else {
        throw ParseError("unknown record '" + std::string(head[0]) + "'", line_no);
      }
      if (head.size() != i + 3) throw ParseError("expected <side> <shape> <witnesses>", line_no);
      std::vector<ExistentialCondition>* target = nullptr;
      if (head[i] == "pos") {
        target = pos;
      } else if (head[i] == "neg") {
        target = neg;
      } else {
        throw ParseError("side must be pos or neg", line_no);
      }
      ExistentialCondition c;
      if (head[i + 1] == "*") {
        c.wildcard = true;
      } else {
        std::string_view sh = head[i + 1];
        std::size_t q = 0;
        while (true) {
          std::size_t comma = sh.find(',', q);
          c.shape.push_back(number(sh.substr(q, comma == std::string_view::npos ? sh.size() - q : comma - q), line_no));
          if (comma == std::string_view::npos) break;
          q = comma + 1;
        }
      }
      c.witness_count = number(head[i + 2], line_no);
      for (std::size_t k = 1; k < pieces.size(); ++k) c.literals.push_back(parse_literal(pieces[k], line_no));
      try {
        c.validate(s.source);
      } catch (const ArgumentError& e) {
        throw ParseError(e.what(), line_no);
      }
      target->push_back(std::move(c));
    }
    if (end == text.size()) break;
  }
  if (!header) throw ParseError("missing header 'interp-scheme v1'", line_no == 0 ? 1 : line_no);
  if (!have_source || !have_target) throw ParseError("missing arity declarations", line_no);

  s.dom = {SigmaScheme::listed(std::move(dom_pos)), SigmaScheme::listed(std::move(dom_neg))};
  s.equiv = {SigmaScheme::listed(std::move(eq_pos)), SigmaScheme::listed(std::move(eq_neg))};
  for (std::size_t r = 0; r < rel_pos.size(); ++r) {
    s.relations.push_back({SigmaScheme::listed(std::move(rel_pos[r])),
                           SigmaScheme::listed(std::move(rel_neg[r]))});
  }
  try {
    s.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), line_no);
  }
  return s;
}

void save_scheme(const InterpScheme& scheme, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << scheme_to_text(scheme);
  if (!out) throw Error("failed writing " + path);
}

InterpScheme load_scheme(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scheme_from_text(ss.str());
}

}  // namespace effint
