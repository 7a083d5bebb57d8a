#include "effint/text_io.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "effint/errors.hpp"

namespace effint {

namespace {

std::vector<std::string_view> split_words(std::string_view text) {
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

std::uint64_t parse_number(std::string_view word, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ParseError("expected a natural number, got '" + std::string(word) + "'", line);
  }
  return v;
}

void expect_tag(const std::vector<std::string_view>& w, std::string_view tag,
                std::size_t line) {
  if (w.empty() || w[0] != tag) {
    throw ParseError("expected record '" + std::string(tag) + "'", line);
  }
}

}  // namespace

std::string to_text(const Signature& sig) {
  if (!sig.bounded()) throw ArgumentError("unbounded signatures have no text form");
  std::ostringstream os;
  os << "signature " << sig.arities().size();
  for (auto a : sig.arities()) os << ' ' << a;
  return os.str();
}

std::string to_text(const DiagramFragment& frag) {
  std::string bits = frag.bit_string();
  return "fragment " + std::to_string(frag.length()) + " " + (bits.empty() ? "-" : bits);
}

std::string to_text(const FinMap& map) {
  std::string s = "finmap";
  for (const auto& [k, v] : map.pairs()) s += " " + std::to_string(k) + ":" + std::to_string(v);
  return s;
}

Signature parse_signature(std::string_view text, std::size_t line) {
  auto w = split_words(text);
  expect_tag(w, "signature", line);
  if (w.size() < 2) throw ParseError("missing relation count", line);
  auto count = parse_number(w[1], line);
  if (w.size() != 2 + count) throw ParseError("arity list does not match count", line);
  std::vector<std::size_t> arities;
  for (std::size_t i = 0; i < count; ++i) {
    auto a = parse_number(w[2 + i], line);
    if (a == 0) throw ParseError("arity must be positive", line);
    arities.push_back(a);
  }
  return Signature(std::move(arities));
}

DiagramFragment parse_fragment(std::string_view text, std::size_t line) {
  auto w = split_words(text);
  expect_tag(w, "fragment", line);
  if (w.size() != 3) throw ParseError("fragment needs a length and a bit string", line);
  auto k = parse_number(w[1], line);
  std::vector<bool> bits;
  if (w[2] != "-") {
    for (char c : w[2]) {
      if (c != '0' && c != '1') throw ParseError("bit string must be 0/1", line);
      bits.push_back(c == '1');
    }
  }
  return DiagramFragment(k, std::move(bits));
}

FinMap parse_finmap(std::string_view text, std::size_t line) {
  auto w = split_words(text);
  expect_tag(w, "finmap", line);
  std::map<Elem, Elem> pairs;
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto colon = w[i].find(':');
    if (colon == std::string_view::npos) throw ParseError("expected from:to", line);
    auto from = parse_number(w[i].substr(0, colon), line);
    auto to = parse_number(w[i].substr(colon + 1), line);
    if (!pairs.emplace(from, to).second) throw ParseError("duplicate key", line);
  }
  try {
    return FinMap(std::move(pairs));
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), line);
  }
}

}  // namespace effint
