#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "weakiso/bigint.hpp"
#include "weakiso/classify.hpp"
#include "weakiso/cubemap.hpp"
#include "weakiso/families.hpp"

namespace weakiso::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Map files
// ---------------------------------------------------------------------------

inline void write_map_text(std::ostream& out, const CubeMap& f) {
  const Dimension n = f.dim();
  out << "n=" << n.value() << '\n';
  for (std::uint32_t x = 0; x < n.size(); ++x) out << Word(n, x).str() << ' ' << Word(n, f[x]).str() << '\n';
}

inline std::string map_text(const CubeMap& f) {
  std::ostringstream s;
  write_map_text(s, f);
  return s.str();
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline int parse_header(const std::string& line) {
  const std::string t = trim(line);
  if (t.rfind("n=", 0) != 0) throw Error(ErrorKind::Parse, "expected header n=<k>, got '" + t + "'");
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(t.substr(2), &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad header '" + t + "'");
  }
  if (used != t.size() - 2) throw Error(ErrorKind::Parse, "bad header '" + t + "'");
  return n;
}

}  // namespace detail

/// Reads maps from a stream holding one or more text blocks back to back.
/// Blank lines between blocks are ignored.
inline std::vector<CubeMap> read_map_text_all(std::istream& in) {
  std::vector<CubeMap> maps;
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      out = detail::trim(out);
      if (!out.empty()) return true;
    }
    return false;
  };
  while (next_line(line)) {
    const Dimension n(detail::parse_header(line));
    std::vector<std::uint32_t> table(n.size());
    for (std::uint32_t x = 0; x < n.size(); ++x) {
      if (!next_line(line)) throw Error(ErrorKind::Parse, "file ends after " + std::to_string(x) + " of " + std::to_string(n.size()) + " lines");
      std::istringstream ls(line);
      std::string a, b, extra;
      if (!(ls >> a >> b) || (ls >> extra)) throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected '<in> <out>'");
      const Word in_w = Word::parse(n, a);
      const Word out_w = Word::parse(n, b);
      if (in_w.bits() != x) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": inputs must appear once each in increasing order");
      }
      table[x] = out_w.bits();
    }
    maps.emplace_back(n, std::move(table));
  }
  return maps;
}

inline CubeMap read_map_text(std::istream& in) {
  auto maps = read_map_text_all(in);
  if (maps.size() != 1) throw Error(ErrorKind::Parse, "expected exactly one map, found " + std::to_string(maps.size()));
  return std::move(maps.front());
}

inline json map_to_json(const CubeMap& f) {
  json table = json::array();
  for (std::uint32_t x = 0; x < f.dim().size(); ++x) table.push_back(Word(f.dim(), f[x]).str());
  return json{{"n", f.dim().value()}, {"table", std::move(table)}};
}

inline CubeMap map_from_json(const json& j) {
  try {
    const Dimension n(j.at("n").get<int>());
    const auto& t = j.at("table");
    if (!t.is_array() || t.size() != n.size()) throw Error(ErrorKind::Parse, "table must list 2^n output words");
    std::vector<std::uint32_t> table;
    table.reserve(n.size());
    for (const auto& w : t) table.push_back(Word::parse(n, w.get<std::string>()).bits());
    return CubeMap(n, std::move(table));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

inline json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

/// Text or JSON, decided by the first non-space character.
inline CubeMap read_map(std::istream& in) {
  in >> std::ws;
  if (in.peek() == '{') return map_from_json(parse_json(in));
  return read_map_text(in);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  return in;
}

inline CubeMap read_map_file(const std::string& path) {
  auto in = open_input(path);
  return read_map(in);
}

// ---------------------------------------------------------------------------
// Parameter records
// ---------------------------------------------------------------------------

namespace detail {

inline json perm_json(const CoordPermutation& p) { return json(p.images()); }

inline json words_json(const std::vector<Word>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(w.str());
  return out;
}

inline json sigma_json(const SigmaIJParams& p) {
  json s = json::array();
  for (int u = 1; u <= p.n; ++u) {
    if (u == p.i) {
      s.push_back(nullptr);
    } else {
      s.push_back(p.sigma[static_cast<std::size_t>(u - 1)]);
    }
  }
  return json{{"i", p.i}, {"j", p.j}, {"sigma", std::move(s)}};
}

inline json part_json(const MidPlusPart& part) {
  if (const auto* e = std::get_if<EvenRestriction>(&part)) return json{{"kind", "even"}, {"a", e->a.str()}, {"pi", perm_json(e->pi)}};
  const auto& s = std::get<SigmaRestriction>(part);
  return json{{"kind", "sigma"}, {"tau", sigma_json(s.tau)}, {"shift", s.shift.str()}};
}

inline Word word_at(Dimension n, const json& j, const char* key) { return Word::parse(n, j.at(key).get<std::string>()); }

inline CoordPermutation perm_at(Dimension n, const json& j, const char* key) {
  return CoordPermutation(n, j.at(key).get<std::vector<int>>());
}

inline std::vector<Word> words_at(Dimension n, const json& j, const char* key) {
  std::vector<Word> out;
  for (const auto& w : j.at(key)) out.push_back(Word::parse(n, w.get<std::string>()));
  return out;
}

inline SigmaIJParams sigma_from(Dimension n, const json& j) {
  SigmaIJParams p{n, j.at("i").get<int>(), j.at("j").get<int>(), {}};
  const auto& s = j.at("sigma");
  if (!s.is_array() || s.size() != static_cast<std::size_t>(n.value())) {
    throw Error(ErrorKind::InvalidParams, "sigma must list n entries");
  }
  for (const auto& v : s) p.sigma.push_back(v.is_null() ? 0 : v.get<int>());
  if (p.i >= 1 && p.i <= n && p.sigma[static_cast<std::size_t>(p.i - 1)] != 0) {
    throw Error(ErrorKind::InvalidParams, "sigma entry at coordinate i must be null");
  }
  validate(p);
  return p;
}

inline MidPlusPart part_from(Dimension n, const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "even") return EvenRestriction{word_at(n, j, "a"), perm_at(n, j, "pi")};
  if (kind == "sigma") return SigmaRestriction{sigma_from(n, j.at("tau")), word_at(n, j, "shift")};
  throw Error(ErrorKind::InvalidParams, "part kind must be 'even' or 'sigma'");
}

}  // namespace detail

inline json params_to_json(const FamilyParams& params) {
  using namespace detail;
  json j = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsometryParams>) {
          return {{"n", p.a.dim().value()}, {"a", p.a.str()}, {"pi", perm_json(p.pi)}};
        } else if constexpr (std::is_same_v<T, NIsometryParams>) {
          json reps = json::array();
          for (auto r : p.pair_perm) reps.push_back(Word(p.n, r).str());
          json flips = json::array();
          for (bool b : p.flips) flips.push_back(b);
          return {{"n", p.n.value()}, {"pair_perm", std::move(reps)}, {"flips", std::move(flips)}};
        } else if constexpr (std::is_same_v<T, EvenIsometryParams>) {
          return {{"n", p.a.dim().value()}, {"a", p.a.str()}, {"pi", perm_json(p.pi)}, {"b", p.b.str()}, {"sigma", perm_json(p.sigma)}};
        } else if constexpr (std::is_same_v<T, SigmaIJParams>) {
          json s = sigma_json(p);
          s["n"] = p.n.value();
          return s;
        } else if constexpr (std::is_same_v<T, HalfCaseIParams>) {
          return {{"n", p.shift.dim().value()}, {"pi", perm_json(p.pi)}, {"S", words_json(p.S)}, {"shift", p.shift.str()}};
        } else if constexpr (std::is_same_v<T, HalfCaseIIParams>) {
          return {{"n", p.shift.dim().value()}, {"pi1", perm_json(p.pi1)}, {"pi2", perm_json(p.pi2)},
                  {"S1", words_json(p.S1)},      {"S2", words_json(p.S2)},    {"a", p.a.str()},
                  {"b", p.b.str()},              {"shift", p.shift.str()}};
        } else if constexpr (std::is_same_v<T, MidPlusParams>) {
          return {{"n", p.outer_shift.dim().value()},
                  {"even_part", part_json(p.even_part)},
                  {"odd_part", part_json(p.odd_part)},
                  {"outer_shift", p.outer_shift.str()}};
        } else {
          return {{"n", p.outer_shift.dim().value()}, {"tau", sigma_json(p.tau)}, {"outer_shift", p.outer_shift.str()}};
        }
      },
      params);
  j["family"] = std::string(family_tag(family_of(params)));
  return j;
}

/// Parses a parameter file. Besides the family tags, "krasin" with fields n, i
/// names the diagonal σ_{i,i} example.
inline FamilyParams params_from_json(const json& j) {
  using namespace detail;
  try {
    const auto tag = j.at("family").get<std::string>();
    const Dimension n(j.at("n").get<int>());
    if (tag == "krasin") {
      const int i = j.at("i").get<int>();
      Word::check_coord(n, i);
      if (n % 2 == 0) throw Error(ErrorKind::WrongResidue, "the example needs odd n");
      return SigmaIJParams::diagonal(n, i);
    }
    const auto fam = family_from_tag(tag);
    if (!fam) throw Error(ErrorKind::InvalidParams, "unknown family '" + tag + "'");
    switch (*fam) {
      case Family::Isometry: return IsometryParams{word_at(n, j, "a"), perm_at(n, j, "pi")};
      case Family::NIsometry: {
        NIsometryParams p{n, {}, j.at("flips").get<std::vector<bool>>()};
        for (const auto& w : j.at("pair_perm")) p.pair_perm.push_back(Word::parse(n, w.get<std::string>()).bits());
        return p;
      }
      case Family::EvenIsometry:
        return EvenIsometryParams{word_at(n, j, "a"), perm_at(n, j, "pi"), word_at(n, j, "b"), perm_at(n, j, "sigma")};
      case Family::SigmaIJ: return sigma_from(n, j);
      case Family::HalfCaseI: return HalfCaseIParams{perm_at(n, j, "pi"), words_at(n, j, "S"), word_at(n, j, "shift")};
      case Family::HalfCaseII:
        return HalfCaseIIParams{perm_at(n, j, "pi1"), perm_at(n, j, "pi2"), words_at(n, j, "S1"), words_at(n, j, "S2"),
                                word_at(n, j, "a"),   word_at(n, j, "b"),   word_at(n, j, "shift")};
      case Family::MidPlus:
        return MidPlusParams{part_from(n, j.at("even_part")), part_from(n, j.at("odd_part")), word_at(n, j, "outer_shift")};
      case Family::Triple: return TripleParams{sigma_from(n, j.at("tau")), word_at(n, j, "outer_shift")};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParams, e.what());
  }
  throw Error(ErrorKind::InvalidParams, "unknown family");
}

inline FamilyParams read_params_file(const std::string& path) {
  auto in = open_input(path);
  return params_from_json(parse_json(in));
}

// ---------------------------------------------------------------------------
// Small JSON helpers
// ---------------------------------------------------------------------------

inline json spectrum_json(const PreservedSet& D) { return json(D.members()); }

inline json label_json(const ClassLabel& label) {
  return json{{"tag", std::string(class_tag_name(label.tag))},
              {"spectrum", spectrum_json(label.spectrum)},
              {"params", label.recovered ? params_to_json(*label.recovered) : json(nullptr)}};
}

/// Distances as "3,6" or "{3,6}".
inline std::vector<int> parse_distance_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cur, &used));
      if (used != cur.size()) throw Error(ErrorKind::Parse, "bad distance '" + cur + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "bad distance '" + cur + "'");
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '{' || ch == '}') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  if (out.empty()) throw Error(ErrorKind::EmptyP, "P must contain at least one distance");
  return out;
}

}  // namespace weakiso::io
