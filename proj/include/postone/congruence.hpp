// congruence.hpp --- morphisms, congruence relations, quotients, simple images
//
// A morphism α: Q→P must satisfy {r∈Q | r>q}α = {p∈P | p>qα} at every q.
// Surjective morphisms correspond to congruence relations; the quotient by
// the maximal congruence is the simple image s(P). Two routes compute it:
// an exhaustive one (enumerate all partitions, keep the congruences, join
// them) and a fast one (merge elements with isomorphic up-sets). The fast
// route is a heuristic; agreement with the exhaustive route is asserted at
// desk scale and is an acceptance criterion, not an assumed fact.

#pragma once

#include <numeric>

#include "postone/poset.hpp"

namespace postone {

struct Morphism {
  PoSystem source;
  PoSystem target;
  std::vector<int> map;  // source index -> target index

  int apply(int i) const { return map[i]; }
  const std::string& apply_name(const std::string& n) const {
    return target.name(map[source.index_or_fail(n)]);
  }
};

inline Morphism identity_morphism(const PoSystem& p) {
  Morphism m{p, p, std::vector<int>(p.size())};
  std::iota(m.map.begin(), m.map.end(), 0);
  return m;
}

inline bool is_surjective(const Morphism& m) {
  Mask hit = 0;
  for (int t : m.map) hit |= bit(t);
  return hit == m.target.all();
}

inline Mask image_mask(const Morphism& m, Mask s) {
  Mask out = 0;
  for_each_bit(s, [&](int i) { out |= bit(m.map[i]); });
  return out;
}

inline Mask preimage_mask(const Morphism& m, Mask s) {
  Mask out = 0;
  for (int i = 0; i < m.source.size(); ++i)
    if (has_bit(s, m.map[i])) out |= bit(i);
  return out;
}

inline Mask fiber(const Morphism& m, int target_elem) { return preimage_mask(m, bit(target_elem)); }

// The morphism law, checked at every source element.
inline bool is_morphism(const Morphism& m) {
  if (static_cast<int>(m.map.size()) != m.source.size()) return false;
  for (int t : m.map)
    if (t < 0 || t >= m.target.size()) return false;
  for (int q = 0; q < m.source.size(); ++q) {
    if (image_mask(m, m.source.strict_above(q)) != m.target.strict_above(m.map[q])) return false;
  }
  return true;
}

// g after f: source(f) -> target(g).
inline Morphism compose(const Morphism& f, const Morphism& g) {
  if (f.target != g.source) fail("InternalAssertion", "composing morphisms with mismatched middle system");
  Morphism out{f.source, g.target, std::vector<int>(f.map.size())};
  for (size_t i = 0; i < f.map.size(); ++i) out.map[i] = g.map[f.map[i]];
  return out;
}

inline bool same_map(const Morphism& a, const Morphism& b) {
  return a.source == b.source && a.target == b.target && a.map == b.map;
}

// --- congruences -------------------------------------------------------------

// Partition of the elements of a PO system. Classes are numbered in order of
// first occurrence, so equal partitions have equal representations.
struct Partition {
  std::vector<int> class_of;
  int num_classes = 0;

  static Partition normalized(std::vector<int> raw) {
    Partition p;
    p.class_of.assign(raw.size(), -1);
    std::map<int, int> renum;
    for (size_t i = 0; i < raw.size(); ++i) {
      auto [it, fresh] = renum.try_emplace(raw[i], p.num_classes);
      if (fresh) ++p.num_classes;
      p.class_of[i] = it->second;
    }
    return p;
  }

  static Partition discrete_partition(int n) {
    std::vector<int> raw(n);
    std::iota(raw.begin(), raw.end(), 0);
    return normalized(std::move(raw));
  }

  bool same(int a, int b) const { return class_of[a] == class_of[b]; }
  bool is_identity() const { return num_classes == static_cast<int>(class_of.size()); }
  bool operator==(const Partition&) const = default;
};

// Equivalence + the lifting law: q<r and q∼s imply some t with r∼t and s<t.
inline bool is_congruence(const PoSystem& p, const Partition& part) {
  int n = p.size();
  if (static_cast<int>(part.class_of.size()) != n) return false;
  for (int q = 0; q < n; ++q)
    for (int r = 0; r < n; ++r) {
      if (!p.lt(q, r)) continue;
      for (int s = 0; s < n; ++s) {
        if (!part.same(q, s)) continue;
        bool lifted = false;
        for (int t = 0; t < n && !lifted; ++t)
          lifted = part.same(r, t) && p.lt(s, t);
        if (!lifted) return false;
      }
    }
  return true;
}

// Quotient PO system and the projection morphism. Class elements are named
// after their least member; the relation is [q]<[r] iff s<t for some s∼q, t∼r.
inline std::pair<PoSystem, Morphism> quotient(const PoSystem& p, const Partition& part) {
  if (!is_congruence(p, part)) fail("InvalidCongruence", "partition fails the congruence law");
  int n = p.size();
  std::vector<std::string> class_name(part.num_classes);
  for (int i = n - 1; i >= 0; --i) class_name[part.class_of[i]] = p.name(i);  // least member wins
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (p.lt(s, t)) pairs.emplace_back(class_name[part.class_of[s]], class_name[part.class_of[t]]);
  PoSystem q = PoSystem::generate(class_name, pairs);
  Morphism proj{p, q, std::vector<int>(n)};
  for (int i = 0; i < n; ++i) proj.map[i] = q.index_or_fail(class_name[part.class_of[i]]);
  if (!is_morphism(proj)) fail("InternalAssertion", "quotient projection violates the morphism law");
  return {std::move(q), std::move(proj)};
}

// Enumerates all partitions of {0..n-1} via restricted growth strings.
template <typename Fn>
void for_each_partition(int n, Fn&& fn) {
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int i, int maxc) {
    if (i == n) {
      fn(Partition::normalized(rgs));
      return;
    }
    for (int c = 0; c <= maxc + 1; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(maxc, c));
    }
  };
  if (n == 0) {
    fn(Partition{});
    return;
  }
  rec(0, -1);
}

inline std::vector<Partition> all_congruences(const PoSystem& p) {
  std::vector<Partition> out;
  for_each_partition(p.size(), [&](const Partition& part) {
    if (is_congruence(p, part)) out.push_back(part);
  });
  return out;
}

// The coarsest congruence, computed exhaustively as the join of all
// congruences. That the join is itself a congruence is asserted at runtime.
inline Partition max_congruence(const PoSystem& p, int exhaustive_limit = 8) {
  int n = p.size();
  if (n > exhaustive_limit)
    fail("SizeLimit", "exhaustive congruence search limited to " +
                          std::to_string(exhaustive_limit) + " elements, got " + std::to_string(n));
  std::vector<int> dsu(n);
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<int(int)> find = [&](int x) { return dsu[x] == x ? x : dsu[x] = find(dsu[x]); };
  for_each_partition(n, [&](const Partition& part) {
    if (!is_congruence(p, part)) return;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (part.same(i, j)) dsu[find(i)] = find(j);
  });
  std::vector<int> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = find(i);
  Partition join = Partition::normalized(std::move(raw));
  if (!is_congruence(p, join))
    fail("InternalAssertion",
         "the join of all congruences is not a congruence; please report this system");
  return join;
}

// --- simple image ------------------------------------------------------------
//
// An equivalence is a congruence exactly when the set of classes strictly
// above an element is constant on each class: q<r ∧ q∼s asks for [r] above s,
// symmetrically, so the law reads UP(q) = UP(s) for q∼s with
// UP(q) = {[r] : r>q}. The coarsest such partition is computed by signature
// refinement from the one-class partition; every stable partition refines
// every step of the sequence, so the fixpoint is the maximal congruence.
// (Pairwise merging of elements with isomorphic up-sets, the first idea here,
// is NOT equivalent: in {a<b, b<b} the merge of a and b is a congruence even
// though a↑ and b↑ differ in size.)

inline Partition max_congruence_refinement(const PoSystem& p) {
  int n = p.size();
  if (n == 0) return Partition{};
  Partition part = Partition::normalized(std::vector<int>(n, 0));
  for (;;) {
    std::map<std::pair<int, std::vector<int>>, int> renum;
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      std::vector<int> sig;
      for (int c = 0; c < part.num_classes; ++c) {
        bool above = false;
        for (int r = 0; r < n && !above; ++r) above = p.lt(q, r) && part.class_of[r] == c;
        if (above) sig.push_back(c);
      }
      auto [it, fresh] = renum.try_emplace(std::make_pair(part.class_of[q], std::move(sig)),
                                           static_cast<int>(renum.size()));
      next[q] = it->second;
    }
    Partition np = Partition::normalized(std::move(next));
    if (np == part) break;
    part = std::move(np);
  }
  if (!is_congruence(p, part))
    fail("InternalAssertion", "refinement fixpoint fails the congruence law");
  return part;
}

struct SimpleImageOptions {
  bool verify_exhaustively = true;  // cross-check against max_congruence when small enough
  int exhaustive_limit = 8;
};

// s(P) with the canonical projection. Fast path: partition refinement. When
// the system is small enough the partition is verified against the exhaustive
// join of all congruences.
inline std::pair<PoSystem, Morphism> simple_image(const PoSystem& p,
                                                  const SimpleImageOptions& opt = {}) {
  Partition part = max_congruence_refinement(p);
  if (opt.verify_exhaustively && p.size() <= opt.exhaustive_limit) {
    if (!(part == max_congruence(p, opt.exhaustive_limit)))
      fail("InternalAssertion", "fast simple image disagrees with exhaustive quotient");
  }
  return quotient(p, part);
}

// True iff the maximal congruence is the identity.
inline bool is_simple(const PoSystem& p) { return max_congruence_refinement(p).is_identity(); }

// The two provable directions of the up-set criterion, usable as
// cross-checks: a simple system has simple up-sets and no repeated up-set
// isomorphism type; a repeated type forces a merge. (The converse of the
// conjunction fails when the minimum is comparable to everything, e.g.
// {a<b, b<b}, so it is not used as a decision procedure.)
inline bool criterion_upsets_distinct(const PoSystem& p) {
  for (int i = 0; i < p.size(); ++i)
    for (int j = i + 1; j < p.size(); ++j)
      if (isomorphic(p.restrict(p.up(i)).sys, p.restrict(p.up(j)).sys)) return false;
  return true;
}

inline bool criterion_upsets_simple(const PoSystem& p) {
  for (int i = 0; i < p.size(); ++i)
    if (!is_simple(p.restrict(p.up(i)).sys)) return false;
  return true;
}

// Given surjective β: P→Q, the unique γ: Q→s(P) with β∘γ = canonical
// projection. γ is forced classwise; well-definedness is asserted.
inline Morphism factor_to_simple(const Morphism& beta) {
  if (!is_morphism(beta)) fail("NotAMorphism", "factor_to_simple needs a morphism");
  if (!is_surjective(beta)) fail("NotSurjective", "factor_to_simple needs a surjective morphism");
  auto [sp, alpha] = simple_image(beta.source);
  Morphism gamma{beta.target, sp, std::vector<int>(beta.target.size(), -1)};
  for (int q = 0; q < beta.source.size(); ++q) {
    int& slot = gamma.map[beta.map[q]];
    if (slot == -1)
      slot = alpha.map[q];
    else if (slot != alpha.map[q])
      fail("InternalAssertion", "factorisation through the simple image is not well defined");
  }
  if (!is_morphism(gamma)) fail("InternalAssertion", "forced factorisation is not a morphism");
  if (!same_map(compose(beta, gamma), alpha))
    fail("InternalAssertion", "factorisation does not recover the canonical projection");
  return gamma;
}

}  // namespace postone
