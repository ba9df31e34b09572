#pragma once

#include <cctype>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orrforge/errors.hpp"
#include "orrforge/group.hpp"

namespace orrforge {

// A word in the free group: syllables (generator index, non-zero exponent),
// adjacent syllables on distinct generators after normalisation.
struct Word {
  std::vector<std::pair<int, int>> syllables;

  void append(int gen, int exp) {
    if (exp == 0) return;
    if (!syllables.empty() && syllables.back().first == gen) {
      syllables.back().second += exp;
      if (syllables.back().second == 0) syllables.pop_back();
    } else {
      syllables.push_back({gen, exp});
    }
  }

  void append(const Word& w) {
    for (auto [g, e] : w.syllables) append(g, e);
  }

  Word inverse() const {
    Word out;
    for (auto it = syllables.rbegin(); it != syllables.rend(); ++it)
      out.append(it->first, -it->second);
    return out;
  }

  bool empty() const { return syllables.empty(); }

  int length() const {
    int n = 0;
    for (auto [g, e] : syllables) n += std::abs(e);
    return n;
  }

  // Letters over the alphabet {2*gen, 2*gen+1} (generator, its inverse).
  std::vector<int> letters() const {
    std::vector<int> out;
    for (auto [g, e] : syllables)
      for (int i = 0; i < std::abs(e); ++i) out.push_back(2 * g + (e < 0 ? 1 : 0));
    return out;
  }
};

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
};

// ---------------------------------------------------------------------------
// Parser
//
// Grammar:   gens: <name>+
//            rels: <relator>+
// A relator is a chain u1=u2=...=uk (plain u means u=1); words multiply by
// juxtaposition; factor = atom | atom^int; atom = name | "1" | ( word ).
// Relator boundaries are whitespace at parenthesis depth 0.
// ---------------------------------------------------------------------------

namespace detail {

struct WordParser {
  std::string_view text;
  std::size_t base;  // offset of `text` in the original input, for messages
  const std::vector<std::string>* names;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, base + pos); }

  int match_name() {
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < names->size(); ++i) {
      const std::string& nm = (*names)[i];
      if (nm.size() > best_len && text.compare(pos, nm.size(), nm) == 0) {
        best = int(i);
        best_len = nm.size();
      }
    }
    if (best >= 0) pos += best_len;
    return best;
  }

  long parse_int() {
    std::size_t start = pos;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      neg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected integer exponent");
    long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1 << 20) fail("exponent too large");
      ++pos;
    }
    if (v == 0) {
      pos = start;
      fail("zero exponent");
    }
    return neg ? -v : v;
  }

  // word := factor+   (stops at ')' or end)
  Word parse_word() {
    Word w;
    skip_ws();
    bool any = false;
    while (pos < text.size() && text[pos] != ')') {
      w.append(parse_factor());
      any = true;
      skip_ws();
    }
    if (!any) fail("empty word");
    return w;
  }

  Word parse_factor() {
    Word atom = parse_atom();
    skip_ws();
    long exp = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skip_ws();
      exp = parse_int();
    }
    Word out;
    Word base_word = exp < 0 ? atom.inverse() : atom;
    for (long i = 0; i < std::abs(exp); ++i) out.append(base_word);
    return out;
  }

  Word parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("expected atom");
    if (text[pos] == '(') {
      ++pos;
      Word w = parse_word();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') fail("unbalanced parenthesis");
      ++pos;
      return w;
    }
    if (text[pos] == '1') {
      ++pos;
      return Word{};
    }
    int g = match_name();
    if (g < 0) {
      // name the offending token in the message
      std::size_t end = pos;
      while (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
        ++end;
      std::string tok(text.substr(pos, std::max<std::size_t>(1, end - pos)));
      fail("unknown generator '" + tok + "'");
    }
    Word w;
    w.append(g, 1);
    return w;
  }
};

inline Word parse_word_text(std::string_view text, std::size_t base,
                            const std::vector<std::string>& names) {
  WordParser p{text, base, &names};
  Word w = p.parse_word();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("unexpected trailing input");
  return w;
}

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  Presentation pres;
  // locate "gens:" and "rels:"
  std::size_t g = text.find("gens:");
  std::size_t r = text.find("rels:");
  if (g == std::string_view::npos) throw parse_error("missing 'gens:' header", 0);
  if (r == std::string_view::npos || r < g) throw parse_error("missing 'rels:' header", text.size());
  std::string_view gens_part = text.substr(g + 5, r - (g + 5));
  std::string_view rels_part = text.substr(r + 5);
  // generator names
  std::size_t i = 0;
  while (i < gens_part.size()) {
    while (i < gens_part.size() && std::isspace(static_cast<unsigned char>(gens_part[i]))) ++i;
    std::size_t start = i;
    while (i < gens_part.size() && !std::isspace(static_cast<unsigned char>(gens_part[i]))) ++i;
    if (i > start) {
      std::string name(gens_part.substr(start, i - start));
      if (!std::isalpha(static_cast<unsigned char>(name[0])))
        throw parse_error("generator name must start with a letter: '" + name + "'", g + 5 + start);
      for (const auto& existing : pres.generators)
        if (existing == name)
          throw parse_error("duplicate generator '" + name + "'", g + 5 + start);
      pres.generators.push_back(name);
    }
  }
  if (pres.generators.empty()) throw parse_error("no generators declared", g + 5);

  // split the relator text at depth-0 whitespace
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // [start, end) in rels_part
  int depth = 0;
  std::size_t start = std::string_view::npos;
  for (std::size_t k = 0; k <= rels_part.size(); ++k) {
    bool ws = k == rels_part.size() || std::isspace(static_cast<unsigned char>(rels_part[k]));
    if (!ws) {
      if (start == std::string_view::npos) start = k;
      if (rels_part[k] == '(') ++depth;
      if (rels_part[k] == ')') --depth;
    } else if (depth == 0 && start != std::string_view::npos) {
      spans.push_back({start, k});
      start = std::string_view::npos;
    }
  }
  if (depth != 0) throw parse_error("unbalanced parenthesis", r + 5 + rels_part.size());

  const std::size_t rels_base = r + 5;
  for (auto [s, e] : spans) {
    std::string_view chain = rels_part.substr(s, e - s);
    // split at depth-0 '='
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    int d = 0;
    std::size_t p0 = 0;
    for (std::size_t k = 0; k <= chain.size(); ++k) {
      if (k < chain.size() && chain[k] == '(') ++d;
      if (k < chain.size() && chain[k] == ')') --d;
      if (k == chain.size() || (chain[k] == '=' && d == 0)) {
        parts.push_back({p0, k});
        p0 = k + 1;
      }
    }
    std::vector<Word> words;
    for (auto [ps, pe] : parts) {
      if (ps == pe) throw parse_error("empty side of '='", rels_base + s + ps);
      std::string_view wtext = chain.substr(ps, pe - ps);
      if (wtext == "1") {
        words.push_back(Word{});
      } else {
        words.push_back(detail::parse_word_text(wtext, rels_base + s + ps, pres.generators));
      }
    }
    if (words.size() == 1) {
      if (!words[0].empty()) pres.relators.push_back(words[0]);
    } else if (words.back().empty()) {
      // u1=...=uk=1: one relator per chain member
      for (std::size_t k = 0; k + 1 < words.size(); ++k)
        if (!words[k].empty()) pres.relators.push_back(words[k]);
    } else {
      // u1=u2=...=uk: relators u_i * u_{i+1}^-1
      for (std::size_t k = 0; k + 1 < words.size(); ++k) {
        Word rel = words[k];
        rel.append(words[k + 1].inverse());
        if (!rel.empty()) pres.relators.push_back(rel);
      }
    }
  }
  return pres;
}

// ---------------------------------------------------------------------------
// Todd-Coxeter coset enumeration (HLT with immediate row filling) over the
// trivial subgroup.  Coincidences go through a union-find with path
// compression and a FIFO queue; the surviving cosets are renumbered in
// ascending order, so the numbering is reproducible.
// ---------------------------------------------------------------------------

struct CompiledPresentation {
  FiniteGroup group;
  std::vector<Elt> generator_images;  // element of `group` for each generator
};

namespace detail {

class CosetTable {
public:
  CosetTable(int ngens, int max_cosets) : ngens_(ngens), cols_(2 * ngens), max_(max_cosets) {
    rep_.push_back(0);
    tab_.assign(cols_, -1);
    live_ = 1;
  }

  int cols() const { return cols_; }
  static int inv_col(int c) { return c ^ 1; }

  int find(int c) {
    while (rep_[c] != c) {
      rep_[c] = rep_[rep_[c]];
      c = rep_[c];
    }
    return c;
  }

  int entry(int c, int col) const { return tab_[std::size_t(c) * cols_ + col]; }

  int define(int c, int col) {
    if (int(rep_.size()) >= max_)
      throw resource_error("coset enumeration exceeded max cosets (" + std::to_string(max_) +
                           "); presentation may be infinite or too large");
    int d = int(rep_.size());
    rep_.push_back(d);
    tab_.resize(tab_.size() + cols_, -1);
    set(c, col, d);
    ++live_;
    ++mutations_;
    return d;
  }

  void set(int c, int col, int d) {
    tab_[std::size_t(c) * cols_ + col] = d;
    tab_[std::size_t(d) * cols_ + inv_col(col)] = c;
    ++mutations_;
  }

  // merge the classes of a and b, processing induced coincidences FIFO.
  // Entries may go stale (point at dead cosets) but always stay correct up
  // to the equivalence; readers chase representatives via image().
  void coincide(int a, int b) {
    std::deque<std::pair<int, int>> q{{a, b}};
    while (!q.empty()) {
      auto [x, y] = q.front();
      q.pop_front();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      rep_[y] = x;
      --live_;
      ++mutations_;
      for (int col = 0; col < cols_; ++col) {
        int t = entry(y, col);
        if (t < 0) continue;
        int tr = find(t);
        // y --col--> t, so x --col--> t and t --col^-1--> x must hold
        int s = entry(x, col);
        if (s < 0) {
          tab_[std::size_t(x) * cols_ + col] = tr;
        } else if (find(s) != tr) {
          q.push_back({find(s), tr});
        }
        int w = entry(tr, inv_col(col));
        if (w < 0) {
          tab_[std::size_t(tr) * cols_ + inv_col(col)] = x;
        } else if (find(w) != x) {
          q.push_back({find(w), x});
        }
      }
    }
  }

  // image of coset c under column col, following representatives
  int image(int c, int col) {
    int t = entry(find(c), col);
    return t < 0 ? -1 : find(t);
  }

  bool alive(int c) { return find(c) == c; }
  int live() const { return live_; }
  int total() const { return int(rep_.size()); }
  std::uint64_t mutations() const { return mutations_; }

private:
  int ngens_, cols_, max_;
  std::vector<int> rep_;
  std::vector<int> tab_;
  int live_ = 0;
  std::uint64_t mutations_ = 0;
};

}  // namespace detail

inline CompiledPresentation compile_presentation(const Presentation& pres, int max_cosets = 65536,
                                                 const std::string& name = "") {
  if (pres.relators.empty())
    throw resource_error("presentation with no relators defines an infinite group");
  int ngens = int(pres.generators.size());
  std::vector<std::vector<int>> rel_letters;
  for (const Word& w : pres.relators)
    if (!w.empty()) rel_letters.push_back(w.letters());

  detail::CosetTable T(ngens, max_cosets);

  // scan relator `rel` at coset c, defining cosets to fill the gap (HLT)
  auto scan_and_fill = [&](int c, const std::vector<int>& rel) {
    while (true) {
      c = T.find(c);
      int f = c;
      std::size_t fi = 0;
      while (fi < rel.size()) {
        int t = T.image(f, rel[fi]);
        if (t < 0) break;
        f = t;
        ++fi;
      }
      if (fi == rel.size()) {
        if (f != c) T.coincide(f, c);
        return;
      }
      int b = c;
      std::size_t bi = rel.size();
      while (bi > fi) {
        int t = T.image(b, detail::CosetTable::inv_col(rel[bi - 1]));
        if (t < 0) break;
        b = t;
        --bi;
      }
      if (bi == fi) {
        // the scans meet: f and b name the same coset
        if (T.find(f) != T.find(b)) T.coincide(f, b);
        return;
      }
      if (bi == fi + 1) {
        // gap of length one: deduction (both directions are undefined here,
        // since that is exactly where the two scans stopped)
        T.set(T.find(f), rel[fi], T.find(b));
        return;
      }
      T.define(T.find(f), rel[fi]);
      // loop and rescan from the (possibly merged) coset
    }
  };

  for (int c = 0; c < T.total(); ++c) {
    if (!T.alive(c)) continue;
    for (const auto& rel : rel_letters) {
      if (!T.alive(c)) break;
      scan_and_fill(T.find(c), rel);
    }
    if (!T.alive(c)) continue;
    for (int col = 0; col < T.cols(); ++col) {
      if (!T.alive(c)) break;
      if (T.image(c, col) < 0) T.define(c, col);
    }
  }

  // Coincidences can merge new information into cosets whose relator scans
  // already ran, so rescan until a pass completes without merging.
  while (true) {
    std::uint64_t before = T.mutations();
    for (int c = 0; c < T.total(); ++c) {
      if (!T.alive(c)) continue;
      for (const auto& rel : rel_letters) {
        if (!T.alive(c)) break;
        scan_and_fill(T.find(c), rel);
      }
    }
    if (T.mutations() == before) break;
  }

  // collect live cosets in ascending order
  std::vector<int> live;
  std::vector<int> index(T.total(), -1);
  for (int c = 0; c < T.total(); ++c)
    if (T.alive(c)) {
      index[c] = int(live.size());
      live.push_back(c);
    }
  int n = int(live.size());
  if (n > kMaxGroupOrder)
    throw resource_error("enumerated group order " + std::to_string(n) +
                         " exceeds the supported maximum");
  // closed table check
  for (int c : live)
    for (int col = 0; col < T.cols(); ++col)
      if (T.image(c, col) < 0) throw validation_error("coset table failed to close");

  // definition spanning tree by BFS from coset 0 (ascending column order)
  std::vector<int> parent(n, -1), pletter(n, -1), order_bfs;
  order_bfs.push_back(0);
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order_bfs.size(); ++i) {
    int c = order_bfs[i];
    for (int col = 0; col < T.cols(); ++col) {
      int t = index[T.image(live[c], col)];
      if (!seen[t]) {
        seen[t] = 1;
        parent[t] = c;
        pletter[t] = col;
        order_bfs.push_back(t);
      }
    }
  }

  // multiplication: row i holds i * w_j where w_j is the definition word of j
  std::vector<std::uint16_t> table(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    table[std::size_t(i) * n + 0] = std::uint16_t(i);
    for (std::size_t bi = 1; bi < order_bfs.size(); ++bi) {
      int j = order_bfs[bi];
      int via = table[std::size_t(i) * n + parent[j]];
      table[std::size_t(i) * n + j] = std::uint16_t(index[T.image(live[via], pletter[j])]);
    }
  }

  CompiledPresentation out{FiniteGroup(name.empty() ? "presented" : name, n, std::move(table)), {}};
  for (int gi = 0; gi < ngens; ++gi)
    out.generator_images.push_back(index[T.image(0, 2 * gi)]);

  // every relator must evaluate to the identity at the generator images
  for (const Word& w : pres.relators) {
    Elt x = 0;
    for (int letter : w.letters()) {
      Elt img = out.generator_images[letter / 2];
      x = out.group.mul(x, letter % 2 ? out.group.inv(img) : img);
    }
    if (x != 0) throw validation_error("compiled group does not satisfy a relator");
  }
  return out;
}

inline FiniteGroup coset_enumerate(const Presentation& pres, int max_cosets = 65536,
                                   const std::string& name = "") {
  return compile_presentation(pres, max_cosets, name).group;
}

}  // namespace orrforge
