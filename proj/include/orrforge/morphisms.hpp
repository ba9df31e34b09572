#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orrforge/group.hpp"

namespace orrforge {

using ElementMap = std::vector<Elt>;  // domain element -> image element

// Generating tuple with no redundant member: greedy ascending closure
// extension followed by removal of members that later picks made redundant.
inline std::vector<Elt> irredundant_generating_tuple(const FiniteGroup& G) {
  std::vector<Elt> tuple;
  Subset span(G);
  span.bits.set(0);
  while (span.size() < G.order()) {
    int next = -1;
    for (int x = 1; x < G.order(); ++x)
      if (!span.bits.test(x)) {
        next = x;
        break;
      }
    tuple.push_back(next);
    span = closure(G, Subset(G, tuple));
  }
  // prune: drop the lowest removable member until none is removable
  bool changed = true;
  while (changed && tuple.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      std::vector<Elt> rest;
      for (std::size_t j = 0; j < tuple.size(); ++j)
        if (j != i) rest.push_back(tuple[j]);
      if (closure(G, Subset(G, rest)).size() == G.order()) {
        tuple = rest;
        changed = true;
        break;
      }
    }
  }
  return tuple;
}

inline bool is_irredundant_generating_set(const FiniteGroup& G, const std::vector<Elt>& t) {
  if (closure(G, Subset(G, t)).size() != G.order()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<Elt> rest;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (j != i) rest.push_back(t[j]);
    if (closure(G, Subset(G, rest)).size() == G.order()) return false;
  }
  return true;
}

namespace detail {

// Partial homomorphism G -> H, defined on the subgroup generated by the
// assigned tuple prefix.  Definitions are extended by closure and every
// product of defined elements is checked against the tables, so a complete
// map is a verified isomorphism.
struct PartialIso {
  const FiniteGroup* G;
  const FiniteGroup* H;
  std::vector<std::int16_t> img, pre;
  std::vector<Elt> defined;

  PartialIso(const FiniteGroup& g, const FiniteGroup& h)
      : G(&g), H(&h), img(g.order(), -1), pre(h.order(), -1) {
    bind(0, 0);
  }

  std::size_t checkpoint() const { return defined.size(); }

  void rollback(std::size_t cp) {
    while (defined.size() > cp) {
      Elt x = defined.back();
      defined.pop_back();
      pre[img[x]] = -1;
      img[x] = -1;
    }
  }

  bool bind(Elt g, Elt h) {
    if (img[g] != -1) return img[g] == h;
    if (pre[h] != -1) return false;
    img[g] = std::int16_t(h);
    pre[h] = std::int16_t(g);
    defined.push_back(g);
    return true;
  }

  // Assign g -> h and propagate closure.  On conflict the caller must
  // rollback to its checkpoint.
  bool extend(Elt g, Elt h) {
    if (G->elt_order(g) != H->elt_order(h)) return false;
    std::size_t head = defined.size();
    if (!bind(g, h)) return false;
    while (head < defined.size()) {
      Elt x = defined[head++];
      for (std::size_t i = 0; i < head; ++i) {
        Elt y = defined[i];
        if (!bind(G->mul(x, y), H->mul(img[x], img[y]))) return false;
        if (!bind(G->mul(y, x), H->mul(img[y], img[x]))) return false;
      }
    }
    return true;
  }

  bool complete() const { return defined.size() == std::size_t(G->order()); }

  ElementMap to_map() const {
    ElementMap m(G->order());
    for (int i = 0; i < G->order(); ++i) m[i] = img[i];
    return m;
  }
};

// DFS over images of tuple[from..], prefix already assigned in `p`.
inline bool extend_tuple_search(PartialIso& p, const std::vector<Elt>& tuple, std::size_t from) {
  if (from == tuple.size()) return p.complete();
  Elt g = tuple[from];
  if (p.img[g] != -1) return extend_tuple_search(p, tuple, from + 1);
  int ord = p.G->elt_order(g);
  for (int h = 0; h < p.H->order(); ++h) {
    if (p.H->elt_order(h) != ord || p.pre[h] != -1) continue;
    std::size_t cp = p.checkpoint();
    if (p.extend(g, h) && extend_tuple_search(p, tuple, from + 1)) return true;
    p.rollback(cp);
  }
  return false;
}

}  // namespace detail

// Backtracking isomorphism search: maps an irredundant generating tuple of G
// to order-matched images in H, extending by closure and verifying the
// multiplication table.  Returns the element map when isomorphic.
inline std::optional<ElementMap> is_isomorphic(const FiniteGroup& G, const FiniteGroup& H) {
  if (G.order() != H.order()) return std::nullopt;
  if (G.order_profile() != H.order_profile()) return std::nullopt;
  auto tuple = irredundant_generating_tuple(G);
  detail::PartialIso p(G, H);
  if (detail::extend_tuple_search(p, tuple, 0)) return p.to_map();
  return std::nullopt;
}

struct AutomorphismGroup {
  std::vector<ElementMap> generators;
  std::uint64_t order = 1;
};

namespace detail {

// One automorphism with prescribed images on tuple[0..fixed) (identity) and
// tuple[fixed] -> target, or nothing.
inline std::optional<ElementMap> automorphism_with(const FiniteGroup& G,
                                                   const std::vector<Elt>& tuple,
                                                   std::size_t fixed, Elt target) {
  PartialIso p(G, G);
  for (std::size_t i = 0; i < fixed; ++i)
    if (!p.extend(tuple[i], tuple[i])) return std::nullopt;
  std::size_t cp = p.checkpoint();
  if (p.extend(tuple[fixed], target) && extend_tuple_search(p, tuple, fixed + 1))
    return p.to_map();
  p.rollback(cp);
  return std::nullopt;
}

// Stabiliser-chain computation over the base tuple.  At level i the orbit of
// tuple[i] under automorphisms fixing the earlier entries is accumulated;
// |Aut| is the product of the orbit sizes and the found maps generate.
inline AutomorphismGroup automorphism_group_unbounded(const FiniteGroup& G) {
  auto tuple = irredundant_generating_tuple(G);
  AutomorphismGroup out;
  for (std::size_t level = 0; level < tuple.size(); ++level) {
    Elt b = tuple[level];
    DynBitset orbit(G.order());
    orbit.set(b);
    std::vector<ElementMap> level_gens;
    auto grow_orbit = [&]() {
      std::vector<Elt> stack = orbit.to_vector();
      while (!stack.empty()) {
        Elt x = stack.back();
        stack.pop_back();
        for (const auto& g : level_gens) {
          if (!orbit.test(g[x])) {
            orbit.set(g[x]);
            stack.push_back(g[x]);
          }
        }
      }
    };
    int ord = G.elt_order(b);
    for (int h = 0; h < G.order(); ++h) {
      if (h == b || G.elt_order(h) != ord || orbit.test(h)) continue;
      if (auto a = automorphism_with(G, tuple, level, h)) {
        level_gens.push_back(*a);
        out.generators.push_back(*a);
        grow_orbit();
      }
    }
    out.order *= std::uint64_t(orbit.count());
  }
  return out;
}

}  // namespace detail

// Automorphism group of G (generators and order).  Oracle-scale: |G| <= 64.
inline AutomorphismGroup group_automorphisms(const FiniteGroup& G) {
  if (G.order() > 64)
    throw resource_error("group_automorphisms: order " + std::to_string(G.order()) +
                         " exceeds the oracle bound 64");
  return detail::automorphism_group_unbounded(G);
}

}  // namespace orrforge
