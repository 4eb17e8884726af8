// extended.hpp --- extended PO systems (P, L, f) and the refinement quasi-order

#pragma once

#include "postone/congruence.hpp"

namespace postone {

// (P, L, f): L a lower subset marking the relatively compact partition
// elements, f the sizes of the finite ones (domain exactly L_min ∩ P^d).
// For finite P every singleton has a finite foundation, so L may be any
// lower subset of P.
struct ExtendedPoSystem {
  PoSystem poset;
  Mask lower = 0;                // L
  std::map<int, int> finite_sizes;  // f on L_min^d, values ≥ 1

  Mask l_min() const { return poset.minimal(lower); }
  Mask l_min_d() const { return l_min() & poset.discrete(); }
  Mask unbounded() const { return poset.all() & ~lower; }  // P − L
};

inline Diagnostics validate(const ExtendedPoSystem& e) {
  Diagnostics d;
  const PoSystem& p = e.poset;
  if ((e.lower & ~p.all()) != 0) d.issues.push_back("L mentions elements outside P");
  if (!p.is_lower(e.lower)) d.issues.push_back("L is not a lower subset of P");
  Mask dom = 0;
  for (const auto& [k, v] : e.finite_sizes) {
    if (k < 0 || k >= p.size()) {
      d.issues.push_back("f defined on an element outside P");
      continue;
    }
    dom |= bit(k);
    if (v < 1) d.issues.push_back("f(" + p.name(k) + ") = " + std::to_string(v) + " < 1");
  }
  Mask want = e.l_min_d();
  for_each_bit(want & ~dom, [&](int i) { d.issues.push_back("f missing on " + p.name(i)); });
  for_each_bit(dom & ~want, [&](int i) {
    d.issues.push_back("f defined on " + p.name(i) + " which is not minimal discrete in L");
  });
  return d;
}

inline void require_valid(const ExtendedPoSystem& e) {
  auto d = validate(e);
  if (!d.ok()) {
    std::string msg;
    for (const auto& s : d.issues) msg += (msg.empty() ? "" : "; ") + s;
    fail("InvalidExtendedPoSystem", msg);
  }
}

// Isomorphism of extended systems: PO-system isomorphism carrying L onto M
// and matching f on the minimal discrete part.
inline std::optional<std::vector<int>> iso_extended(const ExtendedPoSystem& a,
                                                    const ExtendedPoSystem& b) {
  if (popcount(a.lower) != popcount(b.lower)) return std::nullopt;
  Mask amind = a.l_min_d(), bmind = b.l_min_d();
  auto compat = [&](int i, int j) {
    if (has_bit(a.lower, i) != has_bit(b.lower, j)) return false;
    bool ia = has_bit(amind, i), jb = has_bit(bmind, j);
    if (ia != jb) return false;
    if (ia && a.finite_sizes.at(i) != b.finite_sizes.at(j)) return false;
    return true;
  };
  return find_iso(a.poset, b.poset, compat);
}

// Pushes (Q, M, g) forward along a surjective morphism α: Q→P:
// L = {p | Q(p) ⊆ M} and f(p) = Σ_{q ∈ Q(p)} g(q) on L_min^d.
inline ExtendedPoSystem pushforward(const Morphism& alpha, const ExtendedPoSystem& src) {
  if (alpha.source != src.poset)
    fail("InternalAssertion", "pushforward: morphism source differs from the extended system");
  if (!is_morphism(alpha)) fail("NotAMorphism", "pushforward needs a morphism");
  if (!is_surjective(alpha)) fail("NotSurjective", "pushforward needs a surjective morphism");
  require_valid(src);
  ExtendedPoSystem out;
  out.poset = alpha.target;
  for (int p = 0; p < out.poset.size(); ++p) {
    Mask fib = fiber(alpha, p);
    if ((fib & ~src.lower) == 0) out.lower |= bit(p);
  }
  Mask mind = src.l_min_d();
  for_each_bit(out.l_min_d(), [&](int p) {
    int total = 0;
    for_each_bit(fiber(alpha, p), [&](int q) {
      if (!has_bit(mind, q))
        fail("InternalAssertion", "fiber of a minimal discrete element leaves M_min^d");
      total += src.finite_sizes.at(q);
    });
    out.finite_sizes[p] = total;
  });
  require_valid(out);
  return out;
}

namespace detail {

// Enumerates surjective maps source→target in lexicographic order, pruning
// candidates that break strict-pair preservation. `fn` returns true to stop.
inline void enumerate_surjections(const PoSystem& src, const PoSystem& dst,
                                  const std::function<bool(const std::vector<int>&)>& fn) {
  int n = src.size(), m = dst.size();
  if (m > n) return;
  std::vector<int> map(n, -1);
  std::vector<int> hits(m, 0);
  int covered = 0;
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return covered == m && fn(map);
    if (m - covered > n - i) return false;  // cannot become surjective
    for (int c = 0; c < m; ++c) {
      // reflexive sources need reflexive images; discrete sources are free
      bool ok = !src.lt(i, i) || dst.lt(c, c);
      for (int j = 0; j < i && ok; ++j) {
        if (src.lt(j, i) && !dst.lt(map[j], c)) ok = false;
        if (src.lt(i, j) && !dst.lt(c, map[j])) ok = false;
      }
      if (!ok) continue;
      map[i] = c;
      if (hits[c]++ == 0) ++covered;
      if (rec(i + 1)) return true;
      if (--hits[c] == 0) --covered;
      map[i] = -1;
    }
    return false;
  };
  rec(0);
}

}  // namespace detail

// Search for a witness that (Q,M,g) refines to (P,L,f): a surjective morphism
// α: Q→P whose pushforward of the source data is exactly the target data.
inline std::optional<Morphism> refines(const ExtendedPoSystem& src, const ExtendedPoSystem& dst) {
  require_valid(src);
  require_valid(dst);
  if (src.poset.size() > 12)
    fail("SizeLimit", "refinement witness search limited to 12 source elements");
  std::optional<Morphism> witness;
  detail::enumerate_surjections(src.poset, dst.poset, [&](const std::vector<int>& map) {
    Morphism alpha{src.poset, dst.poset, map};
    if (!is_morphism(alpha)) return false;
    ExtendedPoSystem pushed = pushforward(alpha, src);
    if (pushed.lower == dst.lower && pushed.finite_sizes == dst.finite_sizes) {
      witness = std::move(alpha);
      return true;
    }
    return false;
  });
  return witness;
}

struct Feasibility {
  bool feasible = true;
  std::vector<std::string> issues;
  Mask preimage_foundation = 0;  // finite foundation of Lα⁻¹
};

// Whether a bounded trim (P,L,f)-partition can be regularly refined along
// α: Q→P: (1) Lα⁻¹ has a finite foundation (automatic for finite Q, still
// computed), (2) |Q(p)| ≤ f(p) for p ∈ L_min^d.
inline Feasibility refinement_feasible(const ExtendedPoSystem& dst, const Morphism& alpha) {
  if (alpha.target != dst.poset)
    fail("InternalAssertion", "refinement_feasible: morphism target differs from the extended system");
  if (!is_morphism(alpha)) fail("NotAMorphism", "refinement check needs a morphism");
  if (!is_surjective(alpha)) fail("NotSurjective", "refinement check needs a surjective morphism");
  require_valid(dst);
  Feasibility out;
  out.preimage_foundation = finite_foundation(alpha.source, preimage_mask(alpha, dst.lower));
  for_each_bit(dst.l_min_d(), [&](int p) {
    int fib = popcount(fiber(alpha, p));
    int budget = dst.finite_sizes.at(p);
    if (fib > budget) {
      out.feasible = false;
      out.issues.push_back("fiber over " + dst.poset.name(p) + " has " + std::to_string(fib) +
                           " elements but f(" + dst.poset.name(p) + ") = " + std::to_string(budget));
    }
  });
  return out;
}

}  // namespace postone
