#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "orrforge/errors.hpp"
#include "orrforge/group.hpp"
#include "orrforge/morphisms.hpp"

namespace orrforge {

// .grp format: line 1 "group <name> order <n>", then n rows of n
// space-separated 0-based indices (row g holds the products g*h).  The
// loader revalidates every structural invariant.
inline std::string group_to_text(const FiniteGroup& g) {
  std::ostringstream os;
  os << "group " << (g.name().empty() ? "unnamed" : g.name()) << " order " << g.order() << '\n';
  for (int a = 0; a < g.order(); ++a) {
    for (int b = 0; b < g.order(); ++b) {
      if (b) os << ' ';
      os << g.mul(a, b);
    }
    os << '\n';
  }
  return os.str();
}

inline FiniteGroup group_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string kw, name, orderkw;
  long long n = -1;
  if (!(is >> kw >> name >> orderkw >> n) || kw != "group" || orderkw != "order")
    throw parse_error("bad .grp header; expected 'group <name> order <n>'", 0);
  if (n < 1 || n > kMaxGroupOrder) throw parse_error("group order out of range", 0);
  std::vector<std::uint16_t> table(std::size_t(n) * n);
  for (long long a = 0; a < n; ++a)
    for (long long b = 0; b < n; ++b) {
      long long v;
      if (!(is >> v)) throw parse_error("truncated multiplication table", std::size_t(a));
      if (v < 0 || v >= n) throw parse_error("table entry out of range", std::size_t(a));
      table[std::size_t(a) * n + b] = std::uint16_t(v);
    }
  return FiniteGroup(name, int(n), std::move(table));
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw argument_error("cannot write file: " + path);
  out << content;
}

// Shortest word expressions over an irredundant generating tuple, labelled
// a, b, c, ...; used when printing connection sets.
inline std::vector<std::string> element_words(const FiniteGroup& g) {
  auto tuple = irredundant_generating_tuple(g);
  std::vector<std::string> label(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) label[i] = std::string(1, char('a' + (i % 26)));
  std::vector<std::string> word(g.order());
  std::vector<int> dist(g.order(), -1);
  std::vector<Elt> queue{0};
  dist[0] = 0;
  word[0] = "1";
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elt x = queue[head];
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      Elt y = g.mul(x, tuple[i]);
      if (dist[y] == -1) {
        dist[y] = dist[x] + 1;
        word[y] = (x == 0 ? "" : word[x]) + label[i];
        queue.push_back(y);
      }
    }
  }
  return word;
}

inline std::string perm_cycles(const std::vector<int>& p) {
  std::ostringstream os;
  std::vector<char> seen(p.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == int(i)) continue;
    os << '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = 1;
      if (!first) os << ' ';
      os << j;
      first = false;
      j = std::size_t(p[j]);
    }
    os << ')';
    any = true;
  }
  return any ? os.str() : "()";
}

}  // namespace orrforge
