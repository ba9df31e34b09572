#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "orrforge/group.hpp"

namespace orrforge {

struct InvariantFactor {
  Elt generator;
  int order;
};

namespace detail {

// Greedy complement: the largest subgroup C (built by a single ascending
// scan) with C ∩ <a> = 1.  Rejection is monotone in C, so one pass reaches a
// maximal such subgroup, and maximality against a maximal-order cyclic
// factor forces <a> x C = W.
inline Subset complement_of_cyclic(const FiniteGroup& A, const Subset& W, Elt a) {
  Subset cyc(A);
  {
    Elt x = 0;
    do {
      cyc.bits.set(x);
      x = A.mul(x, a);
    } while (x != 0);
  }
  Subset C(A);
  C.bits.set(0);
  int target = W.size() / cyc.size();
  for (int x = W.bits.find_first(); x != -1 && C.size() < target; x = W.bits.find_next(x)) {
    if (C.bits.test(x)) continue;
    Subset trial(A);
    trial.bits = C.bits;
    trial.bits.set(x);
    trial = closure(A, trial);
    bool meets = false;
    trial.bits.for_each([&](int t) {
      if (t != 0 && cyc.bits.test(t)) meets = true;
    });
    if (!meets && trial.bits.subset_of(W.bits)) C = trial;
  }
  return C;
}

}  // namespace detail

// Decomposition A = <a_1> x ... x <a_m> with o(a_{i+1}) | o(a_i).
// Deterministic: each factor is the lowest-index element of maximal order in
// the remaining complement.
inline std::vector<InvariantFactor> invariant_factor_decomposition(const FiniteGroup& A) {
  if (!is_abelian(A)) throw argument_error("invariant_factor_decomposition: group is not abelian");
  std::vector<InvariantFactor> out;
  Subset W = whole_group(A);
  while (W.size() > 1) {
    int best = -1, besto = 0;
    W.bits.for_each([&](int x) {
      if (A.elt_order(x) > besto) {
        besto = A.elt_order(x);
        best = x;
      }
    });
    out.push_back({best, besto});
    W = detail::complement_of_cyclic(A, W, best);
  }
  return out;
}

inline bool is_elementary_abelian_2(const FiniteGroup& G) {
  return is_abelian(G) && G.exponent() <= 2 && G.order() >= 1;
}

// True iff A ≅ C4 x C2^k for some k >= 0 (including C4 itself).
inline bool is_c4_times_elementary(const FiniteGroup& A) {
  if (!is_abelian(A)) return false;
  auto f = invariant_factor_decomposition(A);
  if (f.empty() || f[0].order != 4) return false;
  for (std::size_t i = 1; i < f.size(); ++i)
    if (f[i].order != 2) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Modules over an involutory action
// ---------------------------------------------------------------------------

struct InvolutionDecomposition {
  std::vector<std::pair<Elt, Elt>> pairs;  // (v_i, w_i) with act(v_i) = w_i
  std::vector<Elt> fixed;                  // e_1..e_kappa
};

// Basis of an elementary abelian 2-group V adapted to an involutory
// automorphism: swapped pairs plus fixed vectors.  Greedy, lowest index
// first: v is taken as a new pair when v * act(v) leaves the span of the
// differences collected so far.
inline InvolutionDecomposition decompose_involution_module(
    const FiniteGroup& G, const Subset& V, const std::function<Elt(Elt)>& act) {
  auto velems = V.elements();
  // V elementary abelian
  if (!is_subgroup(G, V)) throw validation_error("decompose_involution_module: V is not a subgroup");
  for (Elt v : velems)
    if (G.elt_order(v) > 2)
      throw validation_error("decompose_involution_module: V is not elementary abelian");
  // act: involutory automorphism of V
  for (Elt v : velems) {
    Elt iv = act(v);
    if (!V.bits.test(iv)) throw validation_error("decompose_involution_module: act leaves V");
    if (act(iv) != v) throw validation_error("decompose_involution_module: act is not involutory");
  }
  for (Elt a : velems)
    for (Elt b : velems)
      if (act(G.mul(a, b)) != G.mul(act(a), act(b)))
        throw validation_error("decompose_involution_module: act is not an automorphism");

  InvolutionDecomposition out;
  Subset diff_span(G);
  diff_span.bits.set(0);
  for (Elt v : velems) {
    Elt d = G.mul(v, act(v));
    if (d != 0 && !diff_span.bits.test(d)) {
      out.pairs.push_back({v, act(v)});
      Subset g(G);
      g.bits = diff_span.bits;
      g.bits.set(d);
      diff_span = closure(G, g);
    }
  }
  // fixed part: extend diff_span to the full fixed space
  Subset espan(G);
  espan.bits = diff_span.bits;
  for (Elt v : velems) {
    if (act(v) != v) continue;
    if (espan.bits.test(v)) continue;
    out.fixed.push_back(v);
    Subset g(G);
    g.bits = espan.bits;
    g.bits.set(v);
    espan = closure(G, g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Half-inversion
// ---------------------------------------------------------------------------

struct HalfInversion {
  Subset inverted;  // H = { n : act(n) = n^-1 }
  int numerator;    // |H| / |N| in lowest terms
  int denominator;
};

// H for a validated automorphism of N, plus the inverted fraction.
inline HalfInversion half_inversion_set(const FiniteGroup& N, const std::function<Elt(Elt)>& act) {
  int n = N.order();
  for (int a = 0; a < n; ++a)
    if (act(a) < 0 || act(a) >= n)
      throw validation_error("half_inversion_set: map leaves the group");
  {
    std::vector<char> seen(n, 0);
    for (int a = 0; a < n; ++a) {
      if (seen[act(a)]) throw validation_error("half_inversion_set: map is not a bijection");
      seen[act(a)] = 1;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (act(N.mul(a, b)) != N.mul(act(a), act(b)))
        throw validation_error("half_inversion_set: map is not an automorphism");
  HalfInversion out{Subset(N), 0, 1};
  for (int a = 0; a < n; ++a)
    if (act(a) == N.inv(a)) out.inverted.bits.set(a);
  int h = out.inverted.size();
  int g = std::gcd(h, n);
  out.numerator = h / g;
  out.denominator = n / g;
  return out;
}

}  // namespace orrforge
