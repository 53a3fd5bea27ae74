#pragma once

// Text formats: matrix input, move rows, binomial strings, JSON and DOT.

#include "toric/fibergraph.hpp"
#include "toric/markov.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

namespace toric {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline RawMatrix matrix_from_json(const nlohmann::json& j) {
  const nlohmann::json* rows = &j;
  if (j.is_object()) {
    if (j.contains("rows"))
      rows = &j["rows"];
    else if (j.contains("matrix"))
      rows = &j["matrix"];
    else
      throw ParseError("JSON matrix needs a \"rows\" or \"matrix\" member", 1, 1);
  }
  if (!rows->is_array()) throw ParseError("JSON matrix rows must be an array", 1, 1);
  RawMatrix out;
  for (const auto& r : *rows) {
    if (!r.is_array()) throw ParseError("JSON matrix row must be an array", 1, 1);
    IntVector row;
    for (const auto& v : r) {
      if (!v.is_number_integer()) throw ParseError("JSON matrix entry must be an integer", 1, 1);
      row.push_back(v.get<std::int64_t>());
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

// Rows separated by ';' or newlines, entries by commas or whitespace; or a
// JSON object {"rows": [[...], ...]} (also {"matrix": ...}).
inline RawMatrix parse_matrix(std::string_view text) {
  auto body = detail::trim(text);
  if (!body.empty() && (body.front() == '{' || body.front() == '[')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), 1, e.byte);
    }
    auto m = detail::matrix_from_json(j);
    if (m.empty() || m[0].empty()) throw EmptyMatrixError();
    for (const auto& r : m)
      if (r.size() != m[0].size()) throw RaggedMatrixError();
    return m;
  }

  RawMatrix out;
  IntVector row;
  std::size_t line = 1, col = 1;
  bool expect_entry = false;  // after a comma
  auto end_row = [&](std::size_t l, std::size_t c) {
    if (expect_entry) throw ParseError("missing entry after ','", l, c);
    if (!row.empty()) out.push_back(std::move(row));
    row.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (ch == '\n') {
      end_row(line, col);
      ++line;
      col = 1;
      ++i;
    } else if (ch == ';') {
      if (row.empty() && !expect_entry) throw ParseError("empty row", line, col);
      end_row(line, col);
      ++col;
      ++i;
    } else if (ch == ',') {
      if (row.empty() || expect_entry) throw ParseError("unexpected ','", line, col);
      expect_entry = true;
      ++col;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++col;
      ++i;
    } else if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = i, start_col = col;
      if (ch == '-' || ch == '+') ++i;
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw ParseError("expected digits", line, start_col);
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      col += i - start;
      std::string tok(text.substr(start, i - start));
      try {
        row.push_back(std::stoll(tok));
      } catch (const std::out_of_range&) {
        throw ParseError("entry " + tok + " out of 64-bit range", line, start_col);
      }
      expect_entry = false;
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
  }
  end_row(line, col);
  if (out.empty()) throw EmptyMatrixError();
  for (const auto& r : out)
    if (r.size() != out[0].size()) throw RaggedMatrixError();
  return out;
}

// "x1^a*x2^b - x3^c": positive part first, exponent 1 and zero exponents
// omitted, "1" for an empty side.
inline std::string render_monomial(std::span<const std::int64_t> u) {
  std::string s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += 'x' + std::to_string(i + 1);
    if (u[i] != 1) s += '^' + std::to_string(u[i]);
  }
  return s.empty() ? "1" : s;
}

inline std::string render_binomial(std::span<const std::int64_t> z) {
  IntVector v(z.begin(), z.end());
  return render_monomial(positive_part(v)) + " - " + render_monomial(negative_part(v));
}

inline std::string render_binomial(const Move& m) { return render_binomial(m.vector); }

namespace detail {

inline IntVector parse_monomial(std::string_view s, std::size_t n) {
  IntVector u(n, 0);
  s = trim(s);
  if (s == "1") return u;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(msg, 1, i + 1); };
  while (i < s.size()) {
    if (s[i] != 'x') fail("expected variable");
    ++i;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) fail("expected variable index");
    auto var = std::stoull(std::string(s.substr(start, i - start)));
    if (var < 1 || var > n) fail("variable index out of range");
    std::int64_t e = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) fail("expected exponent");
      e = std::stoll(std::string(s.substr(start, i - start)));
    }
    u[var - 1] += e;
    if (i < s.size()) {
      if (s[i] != '*') fail("expected '*'");
      ++i;
    }
  }
  return u;
}

}  // namespace detail

// Inverse of render_binomial: the exponent vector u+ - u-.
inline IntVector parse_binomial(std::string_view text, std::size_t n) {
  auto pos = text.find(" - ");
  if (pos == std::string_view::npos) throw ParseError("binomial needs ' - '", 1, 1);
  auto plus = detail::parse_monomial(text.substr(0, pos), n);
  auto minus = detail::parse_monomial(text.substr(pos + 3), n);
  IntVector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = plus[i] - minus[i];
  return z;
}

enum class OutputFormat { rows, json, binomials };

inline std::string render_rows(const MarkovBasis& b) {
  std::string s;
  for (const auto& m : b.moves) s += to_string(m.vector, " ") + '\n';
  return s;
}

inline nlohmann::json moves_json(const MarkovBasis& b) {
  auto arr = nlohmann::json::array();
  for (const auto& m : b.moves) arr.push_back(m.vector);
  return arr;
}

inline std::string render_basis(const ConfigMatrix& A, const MarkovBasis& b, OutputFormat f) {
  switch (f) {
    case OutputFormat::rows: return render_rows(b);
    case OutputFormat::binomials: {
      std::string s;
      for (const auto& m : b.moves) s += render_binomial(m) + '\n';
      return s;
    }
    case OutputFormat::json: {
      nlohmann::json j;
      j["matrix"] = A.to_rows();
      j["kind"] = to_string(b.kind);
      j["moves"] = moves_json(b);
      return j.dump() + '\n';
    }
  }
  return {};
}

// Several bases: rows blocks separated by blank lines, one braced line per
// basis for binomials, or a JSON "bases" array.
inline std::string render_bases(const ConfigMatrix& A, const std::vector<MarkovBasis>& bases,
                                BasisKind kind, OutputFormat f) {
  std::string s;
  switch (f) {
    case OutputFormat::rows:
      for (std::size_t i = 0; i < bases.size(); ++i) {
        if (i) s += '\n';
        s += render_rows(bases[i]);
      }
      return s;
    case OutputFormat::binomials:
      for (const auto& b : bases) {
        s += '{';
        for (std::size_t i = 0; i < b.moves.size(); ++i) {
          if (i) s += ", ";
          s += render_binomial(b.moves[i]);
        }
        s += "}\n";
      }
      return s;
    case OutputFormat::json: {
      nlohmann::json j;
      j["matrix"] = A.to_rows();
      j["kind"] = to_string(kind);
      auto arr = nlohmann::json::array();
      for (const auto& b : bases) arr.push_back({{"moves", moves_json(b)}});
      j["bases"] = std::move(arr);
      j["count"] = std::to_string(bases.size());
      return j.dump() + '\n';
    }
  }
  return s;
}

inline std::string render_count(const ConfigMatrix& A, const BigCount& c, OutputFormat f) {
  if (f == OutputFormat::json) {
    nlohmann::json j;
    j["matrix"] = A.to_rows();
    j["kind"] = "count";
    j["count"] = c.str();
    return j.dump() + '\n';
  }
  return c.str() + '\n';
}

// Move sets from any of the output formats above. Each returned block is one
// basis.
inline std::vector<std::vector<IntVector>> parse_move_blocks(std::string_view text, std::size_t n) {
  auto body = detail::trim(text);
  std::vector<std::vector<IntVector>> blocks;
  auto check_len = [&](const IntVector& z, std::size_t line) {
    if (z.size() != n)
      throw ParseError("move has " + std::to_string(z.size()) + " entries, expected " +
                       std::to_string(n),
                       line, 1);
  };
  if (!body.empty() && body.front() == '{' && detail::trim(body.substr(1)).starts_with('"')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), 1, e.byte);
    }
    auto read = [&](const nlohmann::json& arr) {
      std::vector<IntVector> block;
      for (const auto& m : arr) {
        block.push_back(m.get<IntVector>());
        check_len(block.back(), 1);
      }
      return block;
    };
    if (j.contains("moves")) blocks.push_back(read(j["moves"]));
    if (j.contains("bases"))
      for (const auto& b : j["bases"]) blocks.push_back(read(b["moves"]));
    if (!j.contains("moves") && !j.contains("bases"))
      throw ParseError("JSON moves need a \"moves\" or \"bases\" member", 1, 1);
    return blocks;
  }

  std::vector<IntVector> current;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  auto flush = [&] {
    if (!current.empty()) blocks.push_back(std::move(current));
    current.clear();
  };
  while (std::getline(in, raw)) {
    ++line;
    auto l = detail::trim(raw);
    if (l.empty()) {
      flush();
      continue;
    }
    if (l.front() == '{') {
      flush();
      if (l.back() != '}') throw ParseError("unterminated '{'", line, 1);
      auto inner = detail::trim(l.substr(1, l.size() - 2));
      std::vector<IntVector> block;
      while (!inner.empty()) {
        auto comma = inner.find(',');
        block.push_back(parse_binomial(detail::trim(inner.substr(0, comma)), n));
        if (comma == std::string_view::npos) break;
        inner = detail::trim(inner.substr(comma + 1));
      }
      blocks.push_back(std::move(block));
    } else if (l.find('x') != std::string_view::npos) {
      current.push_back(parse_binomial(l, n));
    } else {
      auto m = parse_matrix(l);
      current.push_back(m[0]);
      check_len(current.back(), line);
    }
  }
  flush();
  return blocks;
}

inline std::string render_dot(const FiberGraph& g) {
  std::ostringstream os;
  os << "graph fiber_" << to_string(g.fiber.key, "_") << " {\n";
  for (std::size_t i = 0; i < g.fiber.elements.size(); ++i)
    os << "  n" << i << " [label=\"{" << to_string(g.fiber.elements[i], ", ") << "}\"];\n";
  for (auto [a, b] : explicit_edges(g)) os << "  n" << a << " -- n" << b << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string render_fiber_graphs(const ConfigMatrix& A, const std::vector<FiberGraph>& gs,
                                       OutputFormat f) {
  if (f == OutputFormat::json) {
    nlohmann::json j;
    j["matrix"] = A.to_rows();
    j["kind"] = "fiber-graph";
    auto arr = nlohmann::json::array();
    for (const auto& g : gs)
      arr.push_back({{"key", g.fiber.key},
                     {"degree", g.degree},
                     {"elements", g.fiber.elements},
                     {"components", g.components}});
    j["fibers"] = std::move(arr);
    return j.dump() + '\n';
  }
  std::string s;
  for (const auto& g : gs) {
    s += "fiber " + to_string(g.fiber.key, " ") + " degree " + std::to_string(g.degree) +
         " size " + std::to_string(g.size()) + " components " +
         std::to_string(g.component_count()) + '\n';
    for (const auto& c : g.components) {
      s += " ";
      for (std::size_t k = 0; k < c.size(); ++k)
        s += (k ? " | " : " ") + to_string(g.fiber.elements[c[k]], " ");
      s += '\n';
    }
  }
  return s;
}

}  // namespace toric
