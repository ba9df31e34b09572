#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "orrforge/constructions.hpp"
#include "orrforge/group.hpp"
#include "orrforge/witness.hpp"

namespace orrforge {

// ---------------------------------------------------------------------------
// V x <x> with x swapping ell coordinate pairs and fixing kappa coordinates;
// x^2 = 1 (split) or x^2 = e_1.
//
// Encoding: element = (mask << 1) | xbit, with v_i at mask bit i, w_i at bit
// ell+i, e_j at bit 2*ell+j.
// ---------------------------------------------------------------------------

// Instances carry the group behind a stable pointer so the witness's
// back-reference survives moves of the instance.
struct BiInstance {
  std::shared_ptr<const FiniteGroup> group;
  BiWitness witness;
};

inline BiInstance bi_family_group(int ell, int kappa, bool x_squared_is_e1) {
  int rank = 2 * ell + kappa;
  if (rank < 0 || rank > 11) throw argument_error("bi_family_group: rank out of range");
  if (x_squared_is_e1 && kappa < 1)
    throw argument_error("bi_family_group: x^2 = e_1 needs kappa >= 1");
  unsigned low = (1u << ell) - 1;
  auto phi = [ell, low](unsigned m) {
    unsigned a = m & low, b = (m >> ell) & low;
    return (m & ~((low << ell) | low)) | (a << ell) | b;
  };
  unsigned xsq = x_squared_is_e1 ? (1u << (2 * ell)) : 0u;
  std::string name = (x_squared_is_e1 ? std::string("V(2:") : std::string("V(1:")) +
                     std::to_string(ell) + "," + std::to_string(kappa) + ")";
  auto g = std::make_shared<const FiniteGroup>(FiniteGroup::from_op(name, 2 << rank, [=](int a, int b) {
    unsigned ma = unsigned(a) >> 1, mb = unsigned(b) >> 1;
    int xa = a & 1, xb = b & 1;
    unsigned m = ma ^ (xa ? phi(mb) : mb) ^ ((xa & xb) ? xsq : 0u);
    return int((m << 1) | unsigned(xa ^ xb));
  }));
  BiWitness w;
  w.group = g.get();
  w.ell = ell;
  w.kappa = kappa;
  w.x = 1;
  for (int i = 0; i < ell; ++i) {
    w.v.push_back(int((1u << i) << 1));
    w.w.push_back(int((1u << (ell + i)) << 1));
  }
  for (int j = 0; j < kappa; ++j) w.e.push_back(int((1u << (2 * ell + j)) << 1));
  w.x_squared_is_e1 = x_squared_is_e1;
  validate_bi_witness(w);
  return BiInstance{std::move(g), std::move(w)};
}

// ---------------------------------------------------------------------------
// Case-ii instances: G = <A, n, g> with A abelian, g inverting A, n acting
// on A through an involutory automorphism phi with n^2 = z in A and
// n^g = n^-1.
//
// Group element: (a * 2 + nbit) * 2 + gbit, with a an element index of A.
// ---------------------------------------------------------------------------

struct CaseIIInstance {
  std::shared_ptr<const FiniteGroup> base;   // A
  std::shared_ptr<const FiniteGroup> group;  // G
  CaseIIWitness witness;
};

// phi acts on A-element indices; z = n^2 must be fixed by phi.
inline CaseIIInstance caseii_family_group(FiniteGroup A, const std::function<int(int)>& phi,
                                          int z, const std::string& name) {
  if (!is_abelian(A)) throw argument_error("caseii_family_group: A must be abelian");
  if (phi(z) != z) throw argument_error("caseii_family_group: n^2 must be fixed by the action");
  for (int a = 0; a < A.order(); ++a) {
    if (phi(a) < 0 || phi(a) >= A.order() || phi(phi(a)) != a)
      throw argument_error("caseii_family_group: action must be an involutory permutation");
    for (int b = 0; b < A.order(); ++b)
      if (phi(A.mul(a, b)) != A.mul(phi(a), phi(b)))
        throw argument_error("caseii_family_group: action must be an automorphism");
  }
  auto base = std::make_shared<const FiniteGroup>(std::move(A));
  const FiniteGroup& R = *base;
  auto g = std::make_shared<const FiniteGroup>(FiniteGroup::from_op(name, R.order() * 4, [=, &R](int x, int y) {
    int a = x >> 2, i = (x >> 1) & 1, j = x & 1;
    int b = y >> 2, p = (y >> 1) & 1, q = y & 1;
    int bb = j ? R.inv(b) : b;
    if (i) bb = phi(bb);
    int m = i + (j ? -p : p);  // n-exponent in {-1, 0, 1, 2}
    int acc = R.mul(a, bb);
    if (m == 2) acc = R.mul(acc, z);
    if (m == -1) acc = R.mul(acc, R.inv(z));
    return (acc * 2 + (m & 1)) * 2 + (j ^ q);
  }));
  CaseIIWitness w;
  w.group = g.get();
  w.A = Subset(*g);
  for (int a = 0; a < R.order(); ++a) w.A.bits.set(a * 4);
  w.N = Subset(*g);
  for (int a = 0; a < R.order(); ++a) {
    w.N.bits.set(a * 4);
    w.N.bits.set(a * 4 + 2);
  }
  w.g = 1;
  w.n = 2;
  validate_caseii_witness(w);
  return CaseIIInstance{std::move(base), std::move(g), std::move(w)};
}

// Ready-made actions on A-element indices of C4 x C2^k packed as t*2^k + m.
namespace c_actions {

// swap the two lowest involution coordinates
inline std::function<int(int)> swap_b1_b2(int k) {
  return [k](int a) {
    int t = a >> k, m = a & ((1 << k) - 1);
    int lo = m & 3;
    if (lo == 1)
      lo = 2;
    else if (lo == 2)
      lo = 1;
    return (t << k) | ((m & ~3) | lo);
  };
}

// multiply every odd-t element by the involution with mask `twist`
inline std::function<int(int)> odd_twist(int k, int twist) {
  return [k, twist](int a) {
    int t = a >> k, m = a & ((1 << k) - 1);
    if (t & 1) m ^= twist;
    return (t << k) | m;
  };
}

// invert and twist the odd-t half: a -> a^-1 (mask-twisted) on t odd
inline std::function<int(int)> inverted_twist(int k, int twist) {
  return [k, twist](int a) {
    int t = a >> k, m = a & ((1 << k) - 1);
    int ti = (4 - t) & 3;
    if (t & 1) m ^= twist;
    return (ti << k) | m;
  };
}

// twist by `twist` exactly on elements hitting `selector` oddly (t included
// through selector bit k)
inline std::function<int(int)> masked_twist(int k, int selector, int twist) {
  return [k, selector, twist](int a) {
    if (__builtin_parity(unsigned(a & selector))) a ^= twist;
    return a;
  };
}

}  // namespace c_actions

// ---------------------------------------------------------------------------
// The case-iii family.
//
// N = <A, x3, x4>, G = <N, g>: x3, x4 act on A fixing a designated index-2
// subgroup pointwise (kernel of lambda) and translating the complement by u3
// resp. u4; x3^2 = c, x4^2 = e, x4 x3 = x3 x4 d, g^2 = 1, g inverts A and
// both x3 and x4.
//
// Base A is either C2^rank (lambda = the top bit) or C4 x C2^(rank-?) with
// lambda = parity of the C4 exponent.
// ---------------------------------------------------------------------------

struct CaseIIIParams {
  bool c4_base = false;  // false: A = C2^rank; true: A = C4 x C2^(rank)
  int rank = 8;          // rank of the elementary part
  int u3 = 1, u4 = 1;    // translation masks (in ker lambda)
  int c = 0, e = 0;      // squares of x3, x4 (packed A-elements in ker lambda)
  int d = 2;             // commutator (non-identity, in ker lambda, != u3^u4)
};

struct CaseIIIInstance {
  std::shared_ptr<const FiniteGroup> group;
  CaseIIIWitness witness;
};

inline CaseIIIInstance caseiii_family_group(const CaseIIIParams& P, const std::string& name) {
  // A-element packing: elementary base: the mask itself, with lambda = top
  // bit (bit rank-1 reserved as the non-kernel coordinate would be wrong:
  // instead bit 0.. are kernel basis b_1..b_{rank-1} and bit rank-1 is the
  // lambda coordinate).  C4 base: t * 2^rank + m with lambda = t & 1.
  const int kerbits = P.c4_base ? P.rank : P.rank - 1;
  const int an = P.c4_base ? 4 << P.rank : 1 << P.rank;
  if (an * 8 > kMaxGroupOrder) throw argument_error("caseiii_family_group: order too large");
  const int km = (1 << kerbits) - 1;
  auto lam = [&](int a) {
    return P.c4_base ? (a >> P.rank) & 1 : (a >> kerbits) & 1;
  };
  auto amul = [&](int a, int b) {
    if (!P.c4_base) return a ^ b;
    int t = ((a >> P.rank) + (b >> P.rank)) & 3;
    return (t << P.rank) | ((a ^ b) & ((1 << P.rank) - 1));
  };
  auto ainv = [&](int a) {
    if (!P.c4_base) return a;
    int t = (4 - (a >> P.rank)) & 3;
    return (t << P.rank) | (a & ((1 << P.rank) - 1));
  };
  for (int param : {P.u3, P.u4, P.c, P.e, P.d})
    if (param & ~km) throw argument_error("caseiii_family_group: parameters must lie in ker lambda");
  if (P.u3 == 0 || P.u4 == 0 || P.d == 0 || P.d == (P.u3 ^ P.u4))
    throw argument_error("caseiii_family_group: need u3, u4, d nonzero and d != u3 u4");
  auto phi3 = [=](int a) { return lam(a) ? amul(a, P.u3) : a; };
  auto phi4 = [=](int a) { return lam(a) ? amul(a, P.u4) : a; };
  auto gsp = std::make_shared<const FiniteGroup>(FiniteGroup::from_op(name, an * 8, [=](int x, int y) {
    int a = x >> 3, i = (x >> 2) & 1, j = (x >> 1) & 1, kk = x & 1;
    int b = y >> 3, p = (y >> 2) & 1, q = (y >> 1) & 1, r = y & 1;
    int bb = kk ? ainv(b) : b;
    if (j) bb = phi4(bb);
    if (i) bb = phi3(bb);
    int acc = amul(a, bb);
    if ((i & p) ^ (kk & p)) acc = amul(acc, P.c);  // x3^2 and the g x3 move
    if ((j & q) ^ (kk & q)) acc = amul(acc, P.e);
    if (j & p) acc = amul(acc, P.d);
    return ((acc * 4 + ((i ^ p) << 1) + (j ^ q)) << 1) | (kk ^ r);
  }));
  CaseIIIInstance out{gsp, CaseIIIWitness{}};
  const FiniteGroup& G = *out.group;
  CaseIIIWitness& w = out.witness;
  w.group = &G;
  w.N = Subset(G);
  for (int a = 0; a < an; ++a)
    for (int ij = 0; ij < 4; ++ij) w.N.bits.set(((a * 4 + ij) << 1));
  w.g = 1;
  w.x3 = (0 * 4 + 2) << 1;  // x3-bit set
  w.x4 = (0 * 4 + 1) << 1;  // x4-bit set
  w.A = Subset(G);
  for (int a = 0; a < an; ++a) w.A.bits.set(a << 3);
  // H and n0
  w.H = Subset(G);
  w.N.bits.for_each([&](int x) {
    if (G.conj(x, w.g) == G.inv(x)) w.H.bits.set(x);
  });
  w.n0 = -1;
  for (int x = w.N.bits.find_first(); x != -1; x = w.N.bits.find_next(x)) {
    if (w.H.contains(x)) continue;
    // candidate n0: check N = H u x H disjointly
    DynBitset n0H(G.order());
    bool disjoint = true;
    w.H.bits.for_each([&](int h) {
      int y = G.mul(x, h);
      n0H.set(y);
      if (w.H.contains(y)) disjoint = false;
    });
    DynBitset uni = n0H;
    uni |= w.H.bits;
    if (disjoint && uni == w.N.bits) {
      w.n0 = x;
      break;
    }
  }
  if (w.n0 < 0) throw validation_error("caseiii_family_group: no complementing n0 exists");
  w.x2 = w.n0;
  w.d = G.mul(G.mul(G.inv(w.x4), G.inv(w.x3)), G.mul(w.x4, w.x3));
  validate_caseiii_witness(w);
  return out;
}

}  // namespace orrforge
