#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orrforge/abelian.hpp"
#include "orrforge/group.hpp"

namespace orrforge {

// ---------------------------------------------------------------------------
// Case II: A < N < G, both indices 2, g inverting A, n inverted by g.
// ---------------------------------------------------------------------------

struct CaseIIWitness {
  const FiniteGroup* group = nullptr;
  Subset A, N;
  Elt g = 0, n = 0;
};

inline void validate_caseii_witness(const CaseIIWitness& w) {
  const FiniteGroup& G = *w.group;
  auto fail = [](const std::string& m) { throw validation_error("case-ii witness: " + m); };
  if (!is_subgroup(G, w.A) || !is_subgroup(G, w.N)) fail("A and N must be subgroups");
  if (!w.A.bits.subset_of(w.N.bits)) fail("A must lie in N");
  if (2 * w.N.size() != G.order()) fail("|G:N| must be 2");
  if (2 * w.A.size() != w.N.size()) fail("|N:A| must be 2");
  if (!is_normal(G, w.N)) fail("N must be normal");
  auto as = w.A.elements();
  for (Elt a : as)
    for (Elt b : as)
      if (G.mul(a, b) != G.mul(b, a)) fail("A must be abelian");
  if (w.N.contains(w.g)) fail("g must lie outside N");
  if (G.elt_order(w.g) != 2) fail("g must be an involution");
  if (!w.N.contains(w.n) || w.A.contains(w.n)) fail("n must lie in N \\ A");
  if (G.conj(w.n, w.g) != G.inv(w.n)) fail("g must invert n");
  for (Elt a : as)
    if (G.conj(a, w.g) != G.inv(a)) fail("g must invert every element of A");
}

// Exhaustive recovery of a case-ii witness from a bare table; only attempted
// for |G| <= 64 (index-2 subgroups of index-2 subgroups, scanned in order).
inline std::optional<CaseIIWitness> find_caseii_witness(const FiniteGroup& G) {
  if (G.order() > 64)
    throw resource_error("find_caseii_witness: structure recovery is limited to order 64");
  if (G.order() % 4 != 0) return std::nullopt;
  for (const Subset& N : index2_subgroups(G)) {
    if (!is_normal(G, N)) continue;
    auto nview = subgroup_group(G, N);
    for (const Subset& A0 : index2_subgroups(nview.group)) {
      Subset A(G);
      A0.bits.for_each([&](int i) { A.bits.set(nview.to_parent[i]); });
      auto as = A.elements();
      bool ab = true;
      for (Elt a : as)
        for (Elt b : as)
          if (G.mul(a, b) != G.mul(b, a)) ab = false;
      if (!ab) continue;
      for (int g = 0; g < G.order(); ++g) {
        if (N.contains(g) || G.elt_order(g) != 2) continue;
        bool inv_a = true;
        for (Elt a : as)
          if (G.conj(a, g) != G.inv(a)) inv_a = false;
        if (!inv_a) continue;
        for (int n = 0; n < G.order(); ++n) {
          if (!N.contains(n) || A.contains(n)) continue;
          if (G.conj(n, g) != G.inv(n)) continue;
          CaseIIWitness w{&G, A, N, g, n};
          validate_caseii_witness(w);
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Case III: index-2 N with g inverting exactly half of it.
// ---------------------------------------------------------------------------

struct CaseIIIWitness {
  const FiniteGroup* group = nullptr;
  Subset N;      // index-2 normal subgroup, a 2-group
  Elt g = 0;     // involution outside N
  Elt n0 = 0;    // N = H u n0 H
  Subset H;      // { n in N : n^g = n^-1 } (a set, not a subgroup)
  Subset A;      // abelian, |N:A| = 4, normal in G
  Elt x2 = 0, x3 = 0, x4 = 0;  // coset representatives, x2 = n0
  Elt d = 0;     // commutator x4^-1 x3^-1 x4 x3
};

inline void validate_caseiii_witness(const CaseIIIWitness& w) {
  const FiniteGroup& G = *w.group;
  auto fail = [](const std::string& m) { throw validation_error("case-iii witness: " + m); };
  int n = G.order();
  if ((n & (n - 1)) != 0) fail("G must be a 2-group");
  if (!is_subgroup(G, w.N)) fail("N must be a subgroup");
  if (2 * w.N.size() != n) fail("|G:N| must be 2");
  if (w.N.contains(w.g)) fail("g must lie outside N");
  if (G.elt_order(w.g) != 2) fail("g must be an involution");
  // H and the half-inversion property
  Subset H(G);
  w.N.bits.for_each([&](int x) {
    if (G.conj(x, w.g) == G.inv(x)) H.bits.set(x);
  });
  if (!(H.bits == w.H.bits)) fail("H must equal { n in N : n^g = n^-1 }");
  if (2 * H.size() != w.N.size()) fail("g must invert precisely half of N");
  // N = H u n0 H, disjoint
  if (!w.N.contains(w.n0)) fail("n0 must lie in N");
  Subset n0H(G);
  H.bits.for_each([&](int x) { n0H.bits.set(G.mul(w.n0, x)); });
  if (n0H.bits.intersects(H.bits)) fail("H and n0 H must be disjoint");
  Subset uni(G);
  uni.bits = H.bits;
  uni.bits |= n0H.bits;
  if (!(uni.bits == w.N.bits)) fail("N must equal H u n0 H");
  // A
  if (!is_subgroup(G, w.A) || !w.A.bits.subset_of(w.N.bits)) fail("A must be a subgroup of N");
  if (4 * w.A.size() != w.N.size()) fail("|N:A| must be 4");
  if (!is_normal(G, w.A)) fail("A must be normal in G");
  auto as = w.A.elements();
  for (Elt a : as)
    for (Elt b : as)
      if (G.mul(a, b) != G.mul(b, a)) fail("A must be abelian");
  if (!w.A.bits.subset_of(H.bits)) fail("g must invert every element of A");
  // coset representatives and the quotient structures
  if (w.x2 != w.n0) fail("x2 must equal n0");
  auto coset = [&](Elt x) {
    Subset c(G);
    w.A.bits.for_each([&](int a) { c.bits.set(G.mul(x, a)); });
    return c;
  };
  Subset c2 = coset(w.x2), c3 = coset(w.x3), c4c = coset(w.x4);
  if (w.A.contains(w.x2) || w.A.contains(w.x3) || w.A.contains(w.x4))
    fail("coset representatives must lie outside A");
  if (c2.bits.intersects(c3.bits) || c2.bits.intersects(c4c.bits) || c3.bits.intersects(c4c.bits))
    fail("x2, x3, x4 must represent distinct cosets");
  if (!H.contains(w.x3) || !H.contains(w.x4)) fail("g must invert x3 and x4");
  // N/A and G/A elementary abelian
  for (Elt x : {w.x2, w.x3, w.x4})
    if (!w.A.contains(G.mul(x, x))) fail("N/A must be elementary abelian of order 4");
  if (!w.A.contains(G.mul(G.mul(w.g, w.x3), G.mul(w.g, w.x3))) ||
      !w.A.contains(G.mul(G.mul(w.g, w.x4), G.mul(w.g, w.x4))))
    fail("G/A must be elementary abelian of order 8");
  // centralisers and the centre of N
  auto nview = subgroup_group(G, w.N);
  Subset zn_in_n = center(nview.group);
  Subset ZN(G);
  zn_in_n.bits.for_each([&](int i) { ZN.bits.set(nview.to_parent[i]); });
  Subset c_x3 = centralizer_in(G, w.A, w.x3);
  Subset c_x4 = centralizer_in(G, w.A, w.x4);
  if (!(c_x3.bits == c_x4.bits)) fail("C_A(x3) must equal C_A(x4)");
  if (!(c_x3.bits == ZN.bits)) fail("C_A(x3) must equal Z(N)");
  if (2 * ZN.size() != w.A.size()) fail("|A : Z(N)| must be 2");
  // the commutator d
  Elt d = G.mul(G.mul(G.inv(w.x4), G.inv(w.x3)), G.mul(w.x4, w.x3));
  if (d != w.d) fail("d must be the commutator of x4 and x3");
  if (d == 0) fail("x3 and x4 must not commute");
}

}  // namespace orrforge
