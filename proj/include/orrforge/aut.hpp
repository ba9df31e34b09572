#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "orrforge/digraph.hpp"
#include "orrforge/errors.hpp"

namespace orrforge {

using Perm = std::vector<int>;

inline bool is_identity_perm(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != int(i)) return false;
  return true;
}

// Dumb arc-preservation check; every witness is revalidated through this
// before it is reported.
inline bool is_digraph_automorphism(const Digraph& g, const Perm& p) {
  if (int(p.size()) != g.n()) return false;
  std::vector<char> seen(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) {
    if (unsigned(p[v]) >= unsigned(g.n()) || seen[p[v]]) return false;
    seen[p[v]] = 1;
  }
  DynBitset img(g.n());
  for (int v = 0; v < g.n(); ++v) {
    img.clear();
    g.for_out(v, [&](int w) { img.set(p[w]); });
    if (!(img == g.out(p[v]))) return false;
  }
  return true;
}

// Group order that may exceed 64 bits (vertex stabilisers of sparse test
// graphs can be symmetric groups); saturates instead of overflowing.
struct BigCount {
  unsigned __int128 value = 1;
  bool saturated = false;

  void mul(std::uint64_t k) {
    if (saturated) return;
    unsigned __int128 limit = ~(unsigned __int128)0;
    if (k != 0 && value > limit / k) {
      saturated = true;
      return;
    }
    value *= k;
  }

  bool equals(std::uint64_t k) const { return !saturated && value == k; }

  std::string str() const {
    if (saturated) return ">=2^128";
    unsigned __int128 v = value;
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
      s.push_back(char('0' + int(v % 10)));
      v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
  }
};

// ---------------------------------------------------------------------------
// Ordered partitions
//
// Cells are contiguous runs of `lab`.  A cell is identified by its start
// position, which is stable under splits of other cells, so no global
// renumbering happens.
// ---------------------------------------------------------------------------

class OrderedPartition {
public:
  OrderedPartition() = default;

  explicit OrderedPartition(int n) : lab_(n), pos_(n), cstart_(n, 0), cend_(n, 0), ncells_(1) {
    for (int i = 0; i < n; ++i) lab_[i] = pos_[i] = i;
    if (n > 0) cend_[0] = n;
  }

  OrderedPartition(int n, const std::vector<std::vector<int>>& cells) : OrderedPartition(n) {
    int at = 0;
    std::vector<char> seen(n, 0);
    ncells_ = int(cells.size());
    for (const auto& cell : cells) {
      if (cell.empty()) throw argument_error("empty cell");
      int s = at;
      for (int v : cell) {
        if (unsigned(v) >= unsigned(n) || seen[v]) throw argument_error("bad cell contents");
        seen[v] = 1;
        lab_[at] = v;
        pos_[v] = at;
        ++at;
      }
      for (int p = s; p < at; ++p) cstart_[p] = s;
      cend_[s] = at;
    }
    if (at != n) throw argument_error("cells do not cover the vertex set");
  }

  int n() const { return int(lab_.size()); }
  int num_cells() const { return ncells_; }
  bool discrete() const { return ncells_ == n(); }

  int vertex_at(int position) const { return lab_[position]; }
  int position_of(int v) const { return pos_[v]; }
  int cell_start(int v) const { return cstart_[pos_[v]]; }
  int cell_end_at(int start) const { return cend_[start]; }
  int cell_size_at(int start) const { return cend_[start] - start; }

  // visit cell start positions in order
  template <class F>
  void for_cells(F&& f) const {
    int s = 0;
    while (s < n()) {
      f(s, cend_[s]);
      s = cend_[s];
    }
  }

  std::vector<int> cell_members(int start) const {
    return std::vector<int>(lab_.begin() + start, lab_.begin() + cend_[start]);
  }

  // Start position of the smallest non-singleton cell (ties: lowest
  // position); -1 when discrete.
  int target_cell() const {
    int best = -1, best_size = 0;
    int s = 0;
    while (s < n()) {
      int size = cend_[s] - s;
      if (size > 1 && (best == -1 || size < best_size)) {
        best = s;
        best_size = size;
      }
      s = cend_[s];
    }
    return best;
  }

  // Split off {v} at the front of its cell.  Returns the start of the
  // remainder cell.
  int individualize(int v) {
    int s = cstart_[pos_[v]];
    int e = cend_[s];
    if (e - s < 2) throw argument_error("individualize: cell is a singleton");
    int pv = pos_[v];
    int other = lab_[s];
    lab_[s] = v;
    lab_[pv] = other;
    pos_[v] = s;
    pos_[other] = pv;
    cend_[s] = s + 1;
    cstart_[s] = s;
    cend_[s + 1] = e;
    for (int p = s + 1; p < e; ++p) cstart_[p] = s + 1;
    ++ncells_;
    return s + 1;
  }

  // Replace the cell at [s, e) by fragments given as consecutive runs of
  // `sorted_members`; sizes must sum to e - s.
  void split_cell(int s, const std::vector<int>& sorted_members, const std::vector<int>& frag_sizes) {
    int at = s;
    for (int v : sorted_members) {
      lab_[at] = v;
      pos_[v] = at;
      ++at;
    }
    int fs = s;
    for (int size : frag_sizes) {
      for (int p = fs; p < fs + size; ++p) cstart_[p] = fs;
      cend_[fs] = fs + size;
      fs += size;
    }
    ncells_ += int(frag_sizes.size()) - 1;
  }

private:
  std::vector<int> lab_, pos_, cstart_, cend_;
  int ncells_ = 0;
};

// ---------------------------------------------------------------------------
// Equitable refinement
// ---------------------------------------------------------------------------

namespace detail {

inline void hash_mix(std::uint64_t& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

}  // namespace detail

// Refines `p` to the coarsest equitable partition w.r.t. (out, in) arc
// counts, starting from the given splitter snapshots (FIFO).  Cells split by
// signature sort with the lowest signature keeping the cell's position.
// Returns a node invariant accumulated from positions, sizes and signatures;
// it is equal for partitions that correspond under an automorphism.
inline std::uint64_t refine(const Digraph& g, OrderedPartition& p,
                            std::deque<std::vector<int>> queue) {
  const int n = g.n();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::vector<int> cnt_out(n, 0), cnt_in(n, 0);
  std::vector<int> touched;
  std::vector<char> cell_seen(n, 0);

  while (!queue.empty()) {
    std::vector<int> splitter = std::move(queue.front());
    queue.pop_front();
    touched.clear();
    for (int u : splitter) {
      g.for_in(u, [&](int w) {
        if (cnt_out[w] == 0 && cnt_in[w] == 0) touched.push_back(w);
        ++cnt_out[w];
      });
      g.for_out(u, [&](int w) {
        if (cnt_out[w] == 0 && cnt_in[w] == 0) touched.push_back(w);
        ++cnt_in[w];
      });
    }
    // affected cells, ordered by start position
    std::vector<int> affected;
    for (int w : touched) {
      int s = p.cell_start(w);
      if (!cell_seen[s]) {
        cell_seen[s] = 1;
        affected.push_back(s);
      }
    }
    std::sort(affected.begin(), affected.end());
    for (int s : affected) {
      cell_seen[s] = 0;
      int e = p.cell_end_at(s);
      if (e - s == 1) {
        int v = p.vertex_at(s);
        detail::hash_mix(h, std::uint64_t(s));
        detail::hash_mix(h, (std::uint64_t(cnt_out[v]) << 21) | std::uint64_t(cnt_in[v]));
        continue;
      }
      auto members = p.cell_members(s);
      bool uniform = true;
      auto sig = [&](int v) {
        return (std::uint64_t(cnt_out[v]) << 21) | std::uint64_t(cnt_in[v]);
      };
      for (std::size_t i = 1; i < members.size(); ++i)
        if (sig(members[i]) != sig(members[0])) {
          uniform = false;
          break;
        }
      if (uniform) {
        detail::hash_mix(h, std::uint64_t(s));
        detail::hash_mix(h, sig(members[0]));
        continue;
      }
      std::stable_sort(members.begin(), members.end(),
                       [&](int a, int b) { return sig(a) < sig(b); });
      std::vector<int> frag_sizes;
      detail::hash_mix(h, std::uint64_t(s) | (1ULL << 40));
      std::size_t i = 0;
      while (i < members.size()) {
        std::size_t j = i;
        while (j < members.size() && sig(members[j]) == sig(members[i])) ++j;
        frag_sizes.push_back(int(j - i));
        detail::hash_mix(h, sig(members[i]));
        detail::hash_mix(h, std::uint64_t(j - i));
        queue.emplace_back(members.begin() + i, members.begin() + j);
        i = j;
      }
      p.split_cell(s, members, frag_sizes);
    }
    for (int w : touched) cnt_out[w] = cnt_in[w] = 0;
  }
  return h;
}

// Full refinement of the current partition (every cell is a splitter).
inline std::uint64_t refine_all(const Digraph& g, OrderedPartition& p) {
  std::deque<std::vector<int>> q;
  p.for_cells([&](int s, int) { q.push_back(p.cell_members(s)); });
  return refine(g, p, std::move(q));
}

// Individualize v and re-equitate incrementally.
inline std::uint64_t individualize_refine(const Digraph& g, OrderedPartition& p, int v) {
  int rest = p.individualize(v);
  std::deque<std::vector<int>> q;
  q.push_back({v});
  if (rest < p.n() && p.cell_end_at(rest) > rest) q.push_back(p.cell_members(rest));
  std::uint64_t h = refine(g, p, std::move(q));
  detail::hash_mix(h, std::uint64_t(p.num_cells()));
  return h;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

struct SearchLimits {
  // Spec default: one hour, overridable; a timeout is reported via
  // timeout_error, never treated as a verdict.
  std::chrono::duration<double> timeout = std::chrono::hours(1);
  std::uint64_t node_limit = 0;  // 0 = unlimited
};

struct StabiliserReport {
  bool trivial = false;
  std::optional<Perm> witness;
  std::uint64_t nodes_explored = 0;
  std::chrono::duration<double> elapsed{0};
};

namespace detail {

struct SearchCtx {
  const Digraph* g;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline;
  std::uint64_t node_limit;
  std::uint64_t nodes = 0;

  SearchCtx(const Digraph& graph, const SearchLimits& lim)
      : g(&graph),
        deadline(std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(lim.timeout)),
        has_deadline(lim.timeout.count() > 0),
        node_limit(lim.node_limit) {}

  void tick() {
    ++nodes;
    if (node_limit && nodes > node_limit)
      throw timeout_error("search node limit exceeded", nodes);
    if (has_deadline && (nodes & 0x3f) == 0 && std::chrono::steady_clock::now() > deadline)
      throw timeout_error("search timed out", nodes);
  }
};

// Candidate automorphism read off a pair of discrete partitions.
inline std::optional<Perm> leaf_candidate(const SearchCtx& ctx, const OrderedPartition& L,
                                          const OrderedPartition& R) {
  Perm sigma(L.n());
  for (int i = 0; i < L.n(); ++i) sigma[L.vertex_at(i)] = R.vertex_at(i);
  if (is_digraph_automorphism(*ctx.g, sigma)) return sigma;
  return std::nullopt;
}

// DFS over pairs of equitable partitions with equal invariants; finds an
// automorphism mapping the left labelling to the right one, if any exists.
inline std::optional<Perm> pair_dfs(SearchCtx& ctx, const OrderedPartition& L,
                                    const OrderedPartition& R) {
  ctx.tick();
  if (L.discrete()) {
    if (!R.discrete()) return std::nullopt;
    return leaf_candidate(ctx, L, R);
  }
  int cell = L.target_cell();
  if (R.cell_size_at(cell) != L.cell_size_at(cell)) return std::nullopt;
  auto lmem = L.cell_members(cell);
  int u = *std::min_element(lmem.begin(), lmem.end());
  OrderedPartition L2 = L;
  std::uint64_t hl = individualize_refine(*ctx.g, L2, u);
  auto rmem = R.cell_members(cell);
  std::sort(rmem.begin(), rmem.end());
  for (int w : rmem) {
    OrderedPartition R2 = R;
    std::uint64_t hr = individualize_refine(*ctx.g, R2, w);
    if (hr != hl) continue;
    if (auto found = pair_dfs(ctx, L2, R2)) return found;
  }
  return std::nullopt;
}

// One automorphism refining the implicit prefix of `base` and mapping b to
// v, or nothing.  `left_pre` is base with b individualized and refined.
inline std::optional<Perm> mapping_search(SearchCtx& ctx, const OrderedPartition& base,
                                          const OrderedPartition& left_pre, std::uint64_t hl,
                                          int v) {
  OrderedPartition right = base;
  std::uint64_t hr = individualize_refine(*ctx.g, right, v);
  if (hr != hl) return std::nullopt;
  return pair_dfs(ctx, left_pre, right);
}

}  // namespace detail

// Decides whether any non-identity automorphism of `g` fixes `base`.
// Individualization-refinement over a stabiliser chain: at each level the
// orbit of the lowest vertex b of the target cell is probed; a successful
// probe is a witness, and after all probes fail b is fixed and the chain
// descends.  The first witness found is returned (deterministic order) and
// revalidated by a plain arc-preservation check.
inline StabiliserReport stabiliser_is_trivial(const Digraph& g, int base,
                                              const SearchLimits& limits = {}) {
  if (g.n() == 0) throw argument_error("stabiliser_is_trivial: empty graph");
  if (unsigned(base) >= unsigned(g.n())) throw argument_error("base vertex out of range");
  auto t0 = std::chrono::steady_clock::now();
  detail::SearchCtx ctx(g, limits);
  StabiliserReport rep;

  OrderedPartition P(g.n());
  if (g.n() > 1) {
    P.individualize(base);
    refine_all(g, P);
  }
  while (!P.discrete()) {
    int cell = P.target_cell();
    auto members = P.cell_members(cell);
    std::sort(members.begin(), members.end());
    int b = members[0];
    OrderedPartition left = P;
    std::uint64_t hl = individualize_refine(g, left, b);
    for (std::size_t i = 1; i < members.size(); ++i) {
      auto w = detail::mapping_search(ctx, P, left, hl, members[i]);
      if (w) {
        if (!is_digraph_automorphism(g, *w) || is_identity_perm(*w) || (*w)[base] != base)
          throw validation_error("internal: witness failed revalidation");
        rep.trivial = false;
        rep.witness = std::move(*w);
        rep.nodes_explored = ctx.nodes;
        rep.elapsed = std::chrono::steady_clock::now() - t0;
        return rep;
      }
    }
    P = std::move(left);
  }
  rep.trivial = true;
  rep.nodes_explored = ctx.nodes;
  rep.elapsed = std::chrono::steady_clock::now() - t0;
  return rep;
}

struct GraphAutomorphisms {
  std::vector<Perm> generators;
  BigCount order;
  std::uint64_t nodes_explored = 0;
};

namespace detail {

// Stabiliser chain: prefix vertices already individualized into P.  At each
// level the full orbit of the branch vertex is accumulated (failed probes
// prove non-membership), the order multiplies by the orbit size, and the
// found maps generate the group.
inline GraphAutomorphisms aut_chain(const Digraph& g, OrderedPartition P, SearchCtx& ctx) {
  GraphAutomorphisms out;
  refine_all(g, P);
  while (!P.discrete()) {
    int cell = P.target_cell();
    auto members = P.cell_members(cell);
    std::sort(members.begin(), members.end());
    int b = members[0];
    OrderedPartition left = P;
    std::uint64_t hl = individualize_refine(g, left, b);
    DynBitset orbit(g.n());
    orbit.set(b);
    std::vector<std::size_t> level_gens;  // indices into out.generators
    for (std::size_t i = 1; i < members.size(); ++i) {
      int v = members[i];
      if (orbit.test(v)) continue;
      auto w = mapping_search(ctx, P, left, hl, v);
      if (!w) continue;
      if (!is_digraph_automorphism(g, *w)) throw validation_error("internal: bad generator");
      level_gens.push_back(out.generators.size());
      out.generators.push_back(std::move(*w));
      // close the orbit under the generators found at this level
      std::vector<int> stack = orbit.to_vector();
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (std::size_t gi : level_gens) {
          int y = out.generators[gi][x];
          if (!orbit.test(y)) {
            orbit.set(y);
            stack.push_back(y);
          }
        }
      }
    }
    out.order.mul(std::uint64_t(orbit.count()));
    P = std::move(left);
  }
  out.nodes_explored = ctx.nodes;
  return out;
}

}  // namespace detail

inline constexpr int kAutOracleLimit = 512;

// Full automorphism group: generators and exact order via an orbit chain on
// vertices.  Oracle-scale only.
inline GraphAutomorphisms automorphism_group(const Digraph& g, const SearchLimits& limits = {}) {
  if (g.n() > kAutOracleLimit)
    throw resource_error("automorphism_group: graph exceeds the oracle bound of 512 vertices");
  detail::SearchCtx ctx(g, limits);
  return detail::aut_chain(g, OrderedPartition(g.n()), ctx);
}

// Generators of the stabiliser of `base` (oracle-scale).
inline GraphAutomorphisms stabiliser_generators(const Digraph& g, int base,
                                                const SearchLimits& limits = {}) {
  if (g.n() > kAutOracleLimit)
    throw resource_error("stabiliser_generators: graph exceeds the oracle bound of 512 vertices");
  detail::SearchCtx ctx(g, limits);
  OrderedPartition P(g.n());
  if (g.n() > 1) P.individualize(base);
  return detail::aut_chain(g, std::move(P), ctx);
}

// Vertices fixed by every automorphism fixing `base`.
inline DynBitset fixed_points_of_stabiliser(const Digraph& g, int base,
                                            const SearchLimits& limits = {}) {
  GraphAutomorphisms stab = stabiliser_generators(g, base, limits);
  DynBitset fixed(g.n());
  fixed.set_all();
  for (const Perm& p : stab.generators)
    for (int v = 0; v < g.n(); ++v)
      if (p[v] != v) fixed.reset(v);
  return fixed;
}

// Orbits of the stabiliser of `base`; vertex -> orbit id (numbered by
// smallest member).
inline std::vector<int> stabiliser_orbits(const Digraph& g, int base,
                                          const SearchLimits& limits = {}) {
  GraphAutomorphisms stab = stabiliser_generators(g, base, limits);
  std::vector<int> orbit(g.n(), -1);
  int next = 0;
  for (int v = 0; v < g.n(); ++v) {
    if (orbit[v] != -1) continue;
    orbit[v] = next;
    std::vector<int> stack{v};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const Perm& p : stab.generators) {
        if (orbit[p[x]] == -1) {
          orbit[p[x]] = next;
          stack.push_back(p[x]);
        }
      }
    }
    ++next;
  }
  return orbit;
}

}  // namespace orrforge
