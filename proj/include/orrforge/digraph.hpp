#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "orrforge/bitset.hpp"
#include "orrforge/errors.hpp"
#include "orrforge/group.hpp"

namespace orrforge {

// Directed graph with bitset adjacency both ways plus CSR neighbour lists
// (sorted ascending).  Immutable once built.
class Digraph {
public:
  Digraph() = default;
  explicit Digraph(int n) : n_(n), out_(n, DynBitset(n)), in_(n, DynBitset(n)) {}

  static Digraph from_arcs(int n, const std::vector<std::pair<int, int>>& arcs) {
    Digraph g(n);
    for (auto [u, v] : arcs) g.add_arc(u, v);
    g.finalize();
    return g;
  }

  void add_arc(int u, int v) {
    if (unsigned(u) >= unsigned(n_) || unsigned(v) >= unsigned(n_))
      throw argument_error("arc endpoint out of range");
    out_[u].set(v);
    in_[v].set(u);
  }

  void finalize() {
    out_off_.assign(n_ + 1, 0);
    in_off_.assign(n_ + 1, 0);
    out_list_.clear();
    in_list_.clear();
    for (int v = 0; v < n_; ++v) {
      out_off_[v] = int(out_list_.size());
      out_[v].for_each([&](int w) { out_list_.push_back(w); });
    }
    out_off_[n_] = int(out_list_.size());
    for (int v = 0; v < n_; ++v) {
      in_off_[v] = int(in_list_.size());
      in_[v].for_each([&](int w) { in_list_.push_back(w); });
    }
    in_off_[n_] = int(in_list_.size());
  }

  int n() const { return n_; }
  long long m() const { return (long long)out_list_.size(); }
  bool arc(int u, int v) const { return out_[u].test(v); }
  const DynBitset& out(int v) const { return out_[v]; }
  const DynBitset& in(int v) const { return in_[v]; }
  int out_degree(int v) const { return out_off_[v + 1] - out_off_[v]; }
  int in_degree(int v) const { return in_off_[v + 1] - in_off_[v]; }

  template <class F>
  void for_out(int v, F&& f) const {
    for (int i = out_off_[v]; i < out_off_[v + 1]; ++i) f(out_list_[i]);
  }
  template <class F>
  void for_in(int v, F&& f) const {
    for (int i = in_off_[v]; i < in_off_[v + 1]; ++i) f(in_list_[i]);
  }

private:
  int n_ = 0;
  std::vector<DynBitset> out_, in_;
  std::vector<int> out_list_, out_off_, in_list_, in_off_;
};

// Connection set: a subset of group elements.  Flags are recomputed from the
// members on every query; nothing is cached.
struct ConnectionSet {
  const FiniteGroup* group = nullptr;
  DynBitset members;

  ConnectionSet() = default;
  ConnectionSet(const FiniteGroup& g) : group(&g), members(g.order()) {}
  ConnectionSet(const FiniteGroup& g, const std::vector<Elt>& elems)
      : group(&g), members(DynBitset::from(g.order(), elems)) {}
  ConnectionSet(const FiniteGroup& g, DynBitset bits) : group(&g), members(std::move(bits)) {}

  int size() const { return members.count(); }
  std::vector<Elt> elements() const { return members.to_vector(); }

  bool contains_identity() const { return members.test(0); }

  // S ∩ S^-1 = ∅: excludes the identity and every involution.
  bool antisymmetric() const {
    bool ok = true;
    members.for_each([&](int s) {
      if (members.test(group->inv(s))) ok = false;
    });
    return ok;
  }

  bool inverse_closed() const {
    bool ok = true;
    members.for_each([&](int s) {
      if (!members.test(group->inv(s))) ok = false;
    });
    return ok;
  }

  bool generates() const {
    return closure(*group, Subset(*group, members)).size() == group->order();
  }
};

inline bool is_oriented(const ConnectionSet& s) { return s.antisymmetric(); }
inline bool is_connected_as_cayley(const ConnectionSet& s) { return s.generates(); }

// Cay(G, S): vertex set G, arc (x, y) iff y x^-1 in S; equivalently
// out(x) = { s x : s in S }.
struct CayleyDigraph {
  const FiniteGroup* group = nullptr;
  ConnectionSet conn;
  Digraph graph;
};

inline CayleyDigraph cayley(const FiniteGroup& G, const ConnectionSet& S) {
  if (S.group != &G) throw argument_error("cayley: connection set belongs to another group");
  CayleyDigraph out;
  out.group = &G;
  out.conn = S;
  Digraph g(G.order());
  auto elems = S.elements();
  for (int x = 0; x < G.order(); ++x)
    for (Elt s : elems) g.add_arc(x, G.mul(s, x));
  g.finalize();
  out.graph = std::move(g);
  return out;
}

inline CayleyDigraph cayley(const FiniteGroup& G, const std::vector<Elt>& S) {
  return cayley(G, ConnectionSet(G, S));
}

// ---------------------------------------------------------------------------
// Induced subgraphs, connectivity
// ---------------------------------------------------------------------------

struct InducedSubdigraph {
  Digraph graph;
  std::vector<int> to_parent;  // new vertex -> parent vertex (ascending)
};

inline InducedSubdigraph induced_subdigraph(const Digraph& g, const DynBitset& verts) {
  InducedSubdigraph out;
  out.to_parent = verts.to_vector();
  std::vector<int> from_parent(g.n(), -1);
  for (std::size_t i = 0; i < out.to_parent.size(); ++i) from_parent[out.to_parent[i]] = int(i);
  Digraph sub(int(out.to_parent.size()));
  for (std::size_t i = 0; i < out.to_parent.size(); ++i) {
    g.for_out(out.to_parent[i], [&](int w) {
      if (from_parent[w] != -1) sub.add_arc(int(i), from_parent[w]);
    });
  }
  sub.finalize();
  out.graph = std::move(sub);
  return out;
}

// Vertex -> component id, components numbered by their smallest vertex.
inline std::vector<int> components(const Digraph& g) {
  std::vector<int> comp(g.n(), -1);
  int c = 0;
  for (int v = 0; v < g.n(); ++v) {
    if (comp[v] != -1) continue;
    std::vector<int> stack{v};
    comp[v] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      auto visit = [&](int w) {
        if (comp[w] == -1) {
          comp[w] = c;
          stack.push_back(w);
        }
      };
      g.for_out(u, visit);
      g.for_in(u, visit);
    }
    ++c;
  }
  return comp;
}

inline int component_count(const Digraph& g) {
  auto c = components(g);
  return c.empty() ? 0 : 1 + *std::max_element(c.begin(), c.end());
}

inline bool weakly_connected(const Digraph& g) { return component_count(g) <= 1; }

// ---------------------------------------------------------------------------
// Mutual inneighbours
// ---------------------------------------------------------------------------

// All w such that u w^-1 and v w^-1 both lie in `via`; these are the common
// inneighbours of u and v along via-labelled arcs.
inline Subset mutual_inneighbours(const FiniteGroup& G, Elt u, Elt v, const Subset& via) {
  if (u == v) throw argument_error("mutual_inneighbours: vertices must be distinct");
  Subset out(G);
  via.bits.for_each([&](int s) {
    Elt w = G.mul(G.inv(s), u);
    // u w^-1 = s by construction; check the v side
    if (via.bits.test(G.mul(v, G.inv(w)))) out.bits.set(w);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

inline std::string to_dot(const Digraph& g) {
  std::ostringstream os;
  os << "digraph {\n";
  for (int u = 0; u < g.n(); ++u) g.for_out(u, [&](int v) { os << "  " << u << " -> " << v << ";\n"; });
  os << "}\n";
  return os.str();
}

// "n m" header, then one "u v" line per arc, 0-based.
inline std::string to_edge_list(const Digraph& g) {
  std::ostringstream os;
  os << g.n() << ' ' << g.m() << '\n';
  for (int u = 0; u < g.n(); ++u) g.for_out(u, [&](int v) { os << u << ' ' << v << '\n'; });
  return os.str();
}

inline Digraph parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  long long n = -1, m = -1;
  if (!(is >> n >> m) || n < 0 || m < 0) throw parse_error("bad edge-list header", 0);
  if (n > 1 << 20) throw parse_error("vertex count too large", 0);
  Digraph g{static_cast<int>(n)};
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    if (!(is >> u >> v)) throw parse_error("truncated edge list", std::size_t(i));
    if (u < 0 || u >= n || v < 0 || v >= n) throw parse_error("arc endpoint out of range", std::size_t(i));
    g.add_arc(int(u), int(v));
  }
  g.finalize();
  return g;
}

}  // namespace orrforge
