// cellspace.hpp --- a symbolic model of a primitive Boolean space carrying a
// bounded trim partition for a finite extended PO system (P, L, f).
//
// The space is a forest of cells. A cell of type p owns one distinguished
// spine point lying in X_p and an infinite sequence of child cells whose
// types cycle through S(p) = {q : q > p} (which contains p itself exactly
// when p < p); the children converge to the spine. Maximal discrete types
// have S(p) = ∅ and yield one-point atom cells. Roots: a finite block
// realizing X_L (one root per non-discrete minimal type of L, f(p) roots per
// discrete one) and an unbounded block cycling through the types of P − L,
// materialized lazily.
//
// Every compact open subset is a finite disjoint union of "tails"
// tail(c, m) = spine of c plus children k ≥ m of c. Tails are closed under
// the ring operations: cell minus a child is children up to it plus a later
// tail, so relative complements stay inside the representation. Two tails
// are always nested or disjoint, which keeps normal forms canonical.
//
// Hand-built broken models (wrong child type at one address, a type dropped
// from a schedule) are supported through per-address and per-type overrides;
// `verify` performs the symbolic partition/trim checks that expose them.

#pragma once

#include <memory>
#include <set>

#include "postone/extended.hpp"

namespace postone {

// --- addressing ---------------------------------------------------------------

struct CellAddr {
  int root = 0;
  std::vector<int> path;  // 1-based child indices

  CellAddr child(int j) const {
    CellAddr c = *this;
    c.path.push_back(j);
    return c;
  }
  int depth() const { return static_cast<int>(path.size()); }
  auto operator<=>(const CellAddr&) const = default;

  // True when *this is a proper ancestor of `a`.
  bool proper_prefix_of(const CellAddr& a) const {
    if (root != a.root || path.size() >= a.path.size()) return false;
    return std::equal(path.begin(), path.end(), a.path.begin());
  }

  std::string str() const {
    std::string s = "root:" + std::to_string(root);
    for (int j : path) s += "/child:" + std::to_string(j);
    return s;
  }
};

struct Tail {
  CellAddr cell;
  int from = 1;  // tail(c, m): spine plus children ≥ m
  auto operator<=>(const Tail&) const = default;
  std::string str() const { return cell.str() + "/tail:" + std::to_string(from); }
};

inline CellAddr parse_cell_addr(const std::string& s, int* tail_from = nullptr) {
  CellAddr a;
  if (tail_from) *tail_from = 1;
  size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    size_t next = s.find('/', pos);
    std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    size_t colon = part.find(':');
    if (colon == std::string::npos) fail("InvalidAddress", "bad address component '" + part + "'");
    std::string key = part.substr(0, colon);
    int val = 0;
    try {
      val = std::stoi(part.substr(colon + 1));
    } catch (...) {
      fail("InvalidAddress", "bad index in '" + part + "'");
    }
    if (key == "root" && first)
      a.root = val;
    else if (key == "child" && !first)
      a.path.push_back(val);
    else if (key == "tail" && !first && tail_from)
      *tail_from = val;
    else
      fail("InvalidAddress", "unexpected component '" + part + "' in '" + s + "'");
    first = false;
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (tail_from && *tail_from < 1) fail("InvalidAddress", "tail index must be >= 1");
  return a;
}

// --- the model ----------------------------------------------------------------

struct CellModelData {
  ExtendedPoSystem eps;
  std::vector<int> l_roots;  // types of the finite root block for L
  std::vector<int> u_cycle;  // sorted types of P − L, cycled over the unbounded block
  std::map<int, std::vector<int>> cycle_override;  // per-type schedule replacement
  std::map<CellAddr, int> child_override;          // per-address type anomaly
  std::vector<std::vector<int>> cycle_by_type;     // S(p) sorted, or the override
  std::vector<Mask> reach_by_type;                 // types occurring in a canonical subtree
};

class CellModel {
public:
  CellModel() = default;
  explicit CellModel(std::shared_ptr<const CellModelData> d) : d_(std::move(d)) {}

  const CellModelData& data() const { return *d_; }
  const ExtendedPoSystem& eps() const { return d_->eps; }
  const PoSystem& poset() const { return d_->eps.poset; }
  int num_l_roots() const { return static_cast<int>(d_->l_roots.size()); }
  const std::vector<int>& u_cycle() const { return d_->u_cycle; }

  int root_type(int i) const {
    if (i < 0) fail("InvalidAddress", "negative root index");
    if (i < num_l_roots()) return d_->l_roots[i];
    if (d_->u_cycle.empty())
      fail("InvalidAddress", "root " + std::to_string(i) + " beyond the bounded block (L = P)");
    return d_->u_cycle[(i - num_l_roots()) % d_->u_cycle.size()];
  }

  // The repeating child-type schedule for cells of this type.
  const std::vector<int>& cycle(int type) const { return d_->cycle_by_type[type]; }

  bool is_atom_type(int type) const { return cycle(type).empty(); }

  int child_type(const CellAddr& parent, int j, int parent_type) const {
    if (j < 1) fail("InvalidAddress", "child indices are 1-based");
    auto ov = d_->child_override.find(parent.child(j));
    if (ov != d_->child_override.end()) return ov->second;
    const auto& cyc = cycle(parent_type);
    if (cyc.empty())
      fail("InvalidAddress", "cell " + parent.str() + " is an atom and has no children");
    return cyc[(j - 1) % cyc.size()];
  }

  int type_of(const CellAddr& a) const {
    int t = root_type(a.root);
    CellAddr cur{a.root, {}};
    for (int j : a.path) {
      t = child_type(cur, j, t);
      cur.path.push_back(j);
    }
    return t;
  }

  // Types occurring in the subtree of a canonical cell of the given type.
  Mask reach(int type) const { return d_->reach_by_type[type]; }

  // Types contributed by the infinitely recurring children of this type.
  Mask limit_types(int type) const {
    Mask m = 0;
    for (int q : cycle(type)) m |= reach(q);
    return m;
  }

  Mask reach_subtree(const CellAddr& a) const {
    int t = type_of(a);
    Mask m = bit(t) | limit_types(t);
    for (int j : overridden_children(a)) m |= reach_subtree(a.child(j));
    return m;
  }

  Mask reach_tail(const Tail& t) const {
    int ct = type_of(t.cell);
    Mask m = bit(ct) | limit_types(ct);
    for (int j : overridden_children(t.cell))
      if (j >= t.from) m |= reach_subtree(t.cell.child(j));
    return m;
  }

  // Number of points of the given type in a tail, saturated at 2. Exact for
  // the values 0 and 1, which is all the trim checks need.
  int count_in_tail(const Tail& t, int type) const {
    int ct = type_of(t.cell);
    int n = (ct == type) ? 1 : 0;
    if (has_bit(limit_types(ct), type)) return 2;
    for (int j : overridden_children(t.cell)) {
      if (j < t.from) continue;
      n += count_in_subtree(t.cell.child(j), type);
      if (n >= 2) return 2;
    }
    return n;
  }

  bool spine_in_tail(const CellAddr& spine, const Tail& t) const {
    if (spine == t.cell) return true;
    if (!t.cell.proper_prefix_of(spine)) return false;
    return spine.path[t.cell.path.size()] >= t.from;
  }

  // Child indices of `a` that carry an override at or beneath them.
  std::vector<int> overridden_children(const CellAddr& a) const {
    std::set<int> js;
    for (const auto& [addr, ty] : d_->child_override)
      if (a.proper_prefix_of(addr)) js.insert(addr.path[a.path.size()]);
    return {js.begin(), js.end()};
  }

  bool has_overrides() const { return !d_->child_override.empty() || !d_->cycle_override.empty(); }

  bool operator==(const CellModel& o) const { return d_ == o.d_; }

private:
  int count_in_subtree(const CellAddr& a, int type) const {
    int t = type_of(a);
    int n = (t == type) ? 1 : 0;
    if (has_bit(limit_types(t), type)) return 2;
    for (int j : overridden_children(a)) {
      n += count_in_subtree(a.child(j), type);
      if (n >= 2) return 2;
    }
    return n;
  }

  std::shared_ptr<const CellModelData> d_;
};

// Builds the canonical model of a valid finite (P, L, f).
inline CellModel build_model(const ExtendedPoSystem& eps,
                             std::map<int, std::vector<int>> cycle_override = {},
                             std::map<CellAddr, int> child_override = {}) {
  require_valid(eps);
  auto d = std::make_shared<CellModelData>();
  d->eps = eps;
  const PoSystem& p = eps.poset;
  for_each_bit(eps.l_min(), [&](int t) {
    int copies = has_bit(p.discrete(), t) ? eps.finite_sizes.at(t) : 1;
    for (int k = 0; k < copies; ++k) d->l_roots.push_back(t);
  });
  d->u_cycle = bits_of(eps.unbounded());
  d->cycle_override = std::move(cycle_override);
  d->child_override = std::move(child_override);
  d->cycle_by_type.resize(p.size());
  for (int t = 0; t < p.size(); ++t) {
    auto it = d->cycle_override.find(t);
    d->cycle_by_type[t] = it != d->cycle_override.end() ? it->second : bits_of(p.strict_above(t));
  }

  // reach fixpoint over types, honoring per-type schedule overrides
  d->reach_by_type.assign(p.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < p.size(); ++t) {
      Mask m = bit(t);
      for (int q : d->cycle_by_type[t]) m |= d->reach_by_type[q];
      if (m != d->reach_by_type[t]) {
        d->reach_by_type[t] = m;
        changed = true;
      }
    }
  }
  return CellModel(d);
}

// --- compact opens -------------------------------------------------------------

struct CompactOpen {
  std::vector<Tail> tails;  // canonical: sorted, pairwise disjoint, fully merged
  bool empty() const { return tails.empty(); }
  bool operator==(const CompactOpen&) const = default;
};

namespace detail {

// tail(c,m) ⊇ tail(d,k) iff same cell with k ≥ m, or d sits under child ≥ m.
inline bool tail_contains(const Tail& big, const Tail& small) {
  if (big.cell == small.cell) return small.from >= big.from;
  if (!big.cell.proper_prefix_of(small.cell)) return false;
  return small.cell.path[big.cell.path.size()] >= big.from;
}

inline bool tails_disjoint(const Tail& a, const Tail& b) {
  return !tail_contains(a, b) && !tail_contains(b, a);
}

}  // namespace detail

inline CompactOpen canonicalize(const CellModel& m, std::vector<Tail> tails) {
  // atoms: every tail of a childless cell is the whole singleton
  for (auto& t : tails)
    if (m.is_atom_type(m.type_of(t.cell))) t.from = 1;
  std::sort(tails.begin(), tails.end());
  tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
  bool changed = true;
  while (changed) {
    changed = false;
    // absorption
    for (size_t i = 0; i < tails.size() && !changed; ++i)
      for (size_t j = 0; j < tails.size() && !changed; ++j) {
        if (i == j) continue;
        if (detail::tail_contains(tails[i], tails[j])) {
          tails.erase(tails.begin() + static_cast<long>(j));
          changed = true;
        }
      }
    if (changed) continue;
    // merge tail(c,m), m ≥ 2, with the full child m−1 into tail(c,m−1)
    for (size_t i = 0; i < tails.size() && !changed; ++i) {
      if (tails[i].from < 2) continue;
      Tail sibling{tails[i].cell.child(tails[i].from - 1), 1};
      auto it = std::find(tails.begin(), tails.end(), sibling);
      if (it != tails.end()) {
        Tail merged{tails[i].cell, tails[i].from - 1};
        tails.erase(it);
        it = std::find(tails.begin(), tails.end(), Tail{merged.cell, merged.from + 1});
        tails.erase(it);
        tails.push_back(merged);
        std::sort(tails.begin(), tails.end());
        changed = true;
      }
    }
  }
  return CompactOpen{std::move(tails)};
}

inline CompactOpen make_open(const CellModel& m, std::vector<Tail> tails) {
  for (const auto& t : tails) {
    m.type_of(t.cell);  // validates the address
    if (t.from < 1) fail("InvalidAddress", "tail index must be >= 1");
  }
  return canonicalize(m, std::move(tails));
}

inline CompactOpen union_open(const CellModel& m, const CompactOpen& a, const CompactOpen& b) {
  std::vector<Tail> ts = a.tails;
  ts.insert(ts.end(), b.tails.begin(), b.tails.end());
  return canonicalize(m, std::move(ts));
}

inline CompactOpen intersect_open(const CellModel& m, const CompactOpen& a, const CompactOpen& b) {
  std::vector<Tail> ts;
  for (const auto& x : a.tails)
    for (const auto& y : b.tails) {
      if (detail::tail_contains(x, y))
        ts.push_back(y);
      else if (detail::tail_contains(y, x))
        ts.push_back(x);
    }
  return canonicalize(m, std::move(ts));
}

namespace detail {

inline void subtract_tail(const CellModel& m, const Tail& t1, const Tail& t2,
                          std::vector<Tail>& out) {
  if (tail_contains(t2, t1)) return;
  if (!tail_contains(t1, t2)) {
    out.push_back(t1);
    return;
  }
  if (t1.cell == t2.cell) {  // t2.from > t1.from: keep children t1.from .. t2.from−1
    for (int j = t1.from; j < t2.from; ++j) out.push_back(Tail{t1.cell.child(j), 1});
    return;
  }
  int j = t2.cell.path[t1.cell.path.size()];
  for (int k = t1.from; k < j; ++k) out.push_back(Tail{t1.cell.child(k), 1});
  out.push_back(Tail{t1.cell, j + 1});
  subtract_tail(m, Tail{t1.cell.child(j), 1}, t2, out);
}

}  // namespace detail

inline CompactOpen subtract_open(const CellModel& m, const CompactOpen& a, const CompactOpen& b) {
  std::vector<Tail> work = a.tails;
  for (const auto& t2 : b.tails) {
    std::vector<Tail> next;
    for (const auto& t : work) detail::subtract_tail(m, t, t2, next);
    work = std::move(next);
  }
  return canonicalize(m, std::move(work));
}

// --- types, trimness, trim decomposition --------------------------------------

// T(A): the union of (member type)↑ over the normalized members.
inline Mask type_of_open(const CellModel& m, const CompactOpen& a) {
  Mask t = 0;
  for (const auto& tl : a.tails) t |= m.poset().up(m.type_of(tl.cell));
  return t;
}

// p such that T(A) = p↑, with a single p-typed member when p is discrete.
inline std::optional<int> trim_type(const CellModel& m, const CompactOpen& a) {
  if (a.empty()) return std::nullopt;
  std::vector<int> ctypes;
  for (const auto& tl : a.tails) ctypes.push_back(m.type_of(tl.cell));
  for (size_t i = 0; i < ctypes.size(); ++i) {
    int p = ctypes[i];
    bool least = true;
    for (int c : ctypes) least = least && m.poset().leq(p, c);
    if (!least) continue;
    if (has_bit(m.poset().discrete(), p)) {
      int cnt = static_cast<int>(std::count(ctypes.begin(), ctypes.end(), p));
      if (cnt != 1) return std::nullopt;
    }
    return p;
  }
  return std::nullopt;
}

// A partition of A into trim sets, one group per non-discrete minimal
// type of T(A) and one per member typed with a discrete minimal type.
// Remaining members join the first group whose type lies below theirs.
inline std::vector<CompactOpen> decompose_trim(const CellModel& m, const CompactOpen& a) {
  if (a.empty()) fail("EmptySet", "cannot decompose the empty set");
  const PoSystem& p = m.poset();
  Mask f = p.minimal(type_of_open(m, a));
  struct Group {
    int type;
    std::vector<Tail> members;
  };
  std::vector<Group> groups;
  std::vector<Tail> rest;
  for_each_bit(f, [&](int q) {
    if (!has_bit(p.discrete(), q)) groups.push_back({q, {}});
  });
  for (const auto& tl : a.tails) {
    int c = m.type_of(tl.cell);
    if (has_bit(f & p.discrete(), c)) {
      groups.push_back({c, {tl}});
    } else {
      rest.push_back(tl);
    }
  }
  std::sort(groups.begin(), groups.end(), [&](const Group& x, const Group& y) {
    if (x.type != y.type) return x.type < y.type;
    if (x.members.empty() != y.members.empty()) return x.members.size() > y.members.size();
    return x.members < y.members;
  });
  for (const auto& tl : rest) {
    int c = m.type_of(tl.cell);
    bool placed = false;
    for (auto& g : groups) {
      if (p.leq(g.type, c)) {
        g.members.push_back(tl);
        placed = true;
        break;
      }
    }
    if (!placed) fail("InternalAssertion", "member with no eligible trim group");
  }
  std::vector<CompactOpen> out;
  for (auto& g : groups) out.push_back(canonicalize(m, std::move(g.members)));
  return out;
}

// --- normal forms ---------------------------------------------------------------

// The homeomorphism invariant of a compact open: its type set simplified as a
// standalone sub-PO-system together with the sizes of the finite partition
// elements it meets. Equality of normal forms is equality of the classified
// pairs (simple system, counts).
struct NormalForm {
  PoSystem ambient;            // the model's P (for disjoint unions)
  Mask type_set = 0;           // T(A), an upper set of the ambient
  std::map<int, int> raw;      // counts on T(A)_min ∩ P^d, ambient indices
  PoSystem simplified;         // s(T(A)) as a standalone system
  std::map<int, int> counts;   // counts on the minimal discrete part of `simplified`
};

inline NormalForm make_normal_form(const PoSystem& ambient, Mask type_set,
                                   std::map<int, int> raw) {
  NormalForm nf;
  nf.ambient = ambient;
  nf.type_set = type_set;
  nf.raw = std::move(raw);
  auto sub = ambient.restrict(type_set);
  auto [sp, proj] = simple_image(sub.sys);
  nf.simplified = sp;
  // counts survive only where the class stays minimal and discrete; points
  // absorbed into a perfect class are topologically invisible
  Mask mind = sp.minimal(sp.all()) & sp.discrete();
  for (size_t li = 0; li < sub.global.size(); ++li) {
    auto it = nf.raw.find(sub.global[li]);
    if (it == nf.raw.end()) continue;
    int target = proj.map[static_cast<int>(li)];
    if (has_bit(mind, target)) nf.counts[target] += it->second;
  }
  return nf;
}

inline NormalForm normal_form(const CellModel& m, const CompactOpen& a) {
  if (a.empty()) fail("EmptySet", "the empty set has no normal form");
  const PoSystem& p = m.poset();
  Mask t = type_of_open(m, a);
  Mask mind = p.minimal(t) & p.discrete();
  std::map<int, int> raw;
  for (const auto& tl : a.tails) {
    int c = m.type_of(tl.cell);
    if (has_bit(mind, c)) raw[c] += 1;
  }
  return make_normal_form(p, t, std::move(raw));
}

inline bool nf_equal(const NormalForm& a, const NormalForm& b) {
  auto compat = [&](int i, int j) {
    auto ia = a.counts.find(i);
    auto jb = b.counts.find(j);
    if ((ia == a.counts.end()) != (jb == b.counts.end())) return false;
    return ia == a.counts.end() || ia->second == jb->second;
  };
  return find_iso(a.simplified, b.simplified, compat).has_value();
}

// [A] ⊎ [B] at the pre-simplification level: union of the type sets in the
// shared ambient; counts add where an element stays minimal and drop where
// it loses minimality.
inline NormalForm nf_disjoint_union(const NormalForm& a, const NormalForm& b) {
  if (a.ambient != b.ambient)
    fail("IncompatibleAmbient", "normal forms come from models with different underlying systems");
  Mask t = a.type_set | b.type_set;
  Mask mind = a.ambient.minimal(t) & a.ambient.discrete();
  std::map<int, int> raw;
  for_each_bit(mind, [&](int p) {
    int v = 0;
    if (auto it = a.raw.find(p); it != a.raw.end()) v += it->second;
    if (auto it = b.raw.find(p); it != b.raw.end()) v += it->second;
    if (v > 0) raw[p] = v;
  });
  return make_normal_form(a.ambient, t, std::move(raw));
}

// --- canonical representatives and the structure diagram -----------------------

// First cell of each type in the deterministic enumeration: the L-block
// roots, the first cycle of unbounded roots, then depth-1 children of the
// L-block. Every type of P occurs there.
inline CellAddr find_cell_of_type(const CellModel& m, int type) {
  for (int i = 0; i < m.num_l_roots(); ++i)
    if (m.root_type(i) == type) return CellAddr{i, {}};
  for (int k = 0; k < static_cast<int>(m.u_cycle().size()); ++k)
    if (m.root_type(m.num_l_roots() + k) == type) return CellAddr{m.num_l_roots() + k, {}};
  for (int i = 0; i < m.num_l_roots(); ++i) {
    const auto& cyc = m.cycle(m.root_type(i));
    for (int j = 1; j <= static_cast<int>(cyc.size()); ++j)
      if (cyc[j - 1] == type) return CellAddr{i, {j}};
  }
  fail("InternalAssertion", "no cell of type " + m.poset().name(type) + " found");
}

// The PO system of homeomorphism classes of the model's trim cells, with the
// labeling morphism from P. Classes are normal-form equality; [A] < [B] iff
// the disjoint union [A] ⊎ [B] is absorbed back into [A].
inline std::pair<PoSystem, Morphism> structure_diagram(const CellModel& m) {
  const PoSystem& p = m.poset();
  int n = p.size();
  std::vector<NormalForm> nf;
  nf.reserve(n);
  for (int t = 0; t < n; ++t)
    nf.push_back(normal_form(m, make_open(m, {Tail{find_cell_of_type(m, t), 1}})));

  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (int t = 0; t < n; ++t) {
    for (size_t c = 0; c < reps.size(); ++c)
      if (nf_equal(nf[t], nf[reps[c]])) {
        cls[t] = static_cast<int>(c);
        break;
      }
    if (cls[t] < 0) {
      cls[t] = static_cast<int>(reps.size());
      reps.push_back(t);
    }
  }
  std::vector<std::string> names;
  for (int r : reps) names.push_back(p.name(r));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = 0; j < reps.size(); ++j) {
      NormalForm u = nf_disjoint_union(nf[reps[i]], nf[reps[j]]);
      if (nf_equal(u, nf[reps[i]])) pairs.emplace_back(names[i], names[j]);
    }
  PoSystem diagram = PoSystem::generate(names, pairs);
  Morphism labeling{p, diagram, std::vector<int>(n)};
  for (int t = 0; t < n; ++t) labeling.map[t] = diagram.index_or_fail(names[cls[t]]);
  if (!is_morphism(labeling))
    fail("InternalAssertion", "structure-diagram labeling violates the morphism law");
  if (!is_surjective(labeling))
    fail("InternalAssertion", "structure-diagram labeling is not surjective");
  auto [sp, proj] = simple_image(p);
  if (!isomorphic(diagram, sp))
    fail("InternalAssertion", "structure diagram differs from the simple image");
  return {std::move(diagram), std::move(labeling)};
}

// Orbit diagram: the ideal completion of the structure diagram; for finite
// systems this is the (order-isomorphic) ideal poset.
inline PoSystem orbit_diagram(const CellModel& m) {
  return ideal_poset(structure_diagram(m).first);
}

// --- verification ----------------------------------------------------------------

struct Violation {
  std::string axiom;    // "trim-base", "fullness", "cleanness", "partition", "roots"
  std::string kind;     // "child-type", "tail-type", "spine-count", "limit-types", ...
  std::string address;  // witness cell or spine
  std::string detail;
};

struct VerifyReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string mask_names(const PoSystem& p, Mask m) {
  std::string s;
  for_each_bit(m, [&](int i) { s += (s.empty() ? "" : ",") + p.name(i); });
  return "{" + s + "}";
}

}  // namespace detail

// Symbolic verification of the partition equation and the trim axioms over
// all cells to the given depth (cells whose whole subtree is canonical are
// checked once per type). `horizon` is how many unbounded-block roots to
// include; by default one full cycle.
inline VerifyReport verify_model(const CellModel& m, int depth, int horizon = -1) {
  VerifyReport rep;
  const PoSystem& p = m.poset();
  const ExtendedPoSystem& e = m.eps();

  // root block structure
  std::map<int, int> root_count;
  for (int i = 0; i < m.num_l_roots(); ++i) root_count[m.root_type(i)] += 1;
  for_each_bit(e.l_min(), [&](int t) {
    int want = has_bit(p.discrete(), t) ? e.finite_sizes.at(t) : 1;
    if (root_count[t] != want)
      rep.violations.push_back({"roots", "l-block", "root-block",
                                p.name(t) + ": " + std::to_string(root_count[t]) + " roots, expected " +
                                    std::to_string(want)});
    root_count.erase(t);
  });
  for (const auto& [t, c] : root_count)
    rep.violations.push_back(
        {"roots", "l-block", "root-block", "unexpected root type " + p.name(t)});
  Mask ucover = 0;
  for (int t : m.u_cycle()) ucover |= bit(t);
  if (ucover != e.unbounded())
    rep.violations.push_back({"roots", "u-cover", "root-block",
                              "unbounded block covers " + detail::mask_names(p, ucover) +
                                  ", expected " + detail::mask_names(p, e.unbounded())});

  std::set<int> clean_types;  // canonical subtrees already verified, by type
  std::function<void(const CellAddr&, int)> check = [&](const CellAddr& a, int remaining) {
    int t = m.type_of(a);
    // address-specific anomalies block the per-type memo; per-type schedule
    // overrides are global and therefore covered by it
    bool pure = m.overridden_children(a).empty();
    if (pure && clean_types.count(t)) return;

    // every small tail must be t-trim, with a single spine point when
    // t is discrete
    for (int from : {1, 2}) {
      Tail tl{a, from};
      Mask rt = m.reach_tail(tl);
      if (rt != p.up(t))
        rep.violations.push_back({"trim-base", "tail-type", tl.str(),
                                  "types " + detail::mask_names(p, rt) + ", expected " +
                                      detail::mask_names(p, p.up(t))});
      if (has_bit(p.discrete(), t) && m.count_in_tail(tl, t) != 1)
        rep.violations.push_back({"cleanness", "spine-count", tl.str(),
                                  "tail meets X_" + p.name(t) + " in " +
                                      std::to_string(m.count_in_tail(tl, t)) + " points"});
    }

    // partition equation at the spine: limit types must be {q : q > t}
    Mask lim = m.limit_types(t);
    if (lim != p.strict_above(t))
      rep.violations.push_back({"partition", "limit-types", a.str(),
                                "spine is a limit of " + detail::mask_names(p, lim) +
                                    ", expected " + detail::mask_names(p, p.strict_above(t))});

    // fullness: the small tails must not form a q-trim base for a foreign q
    Mask tinf = bit(t) | lim;
    for (int q = 0; q < p.size(); ++q)
      if (q != t && tinf == p.up(q) && !has_bit(p.discrete(), q))
        rep.violations.push_back({"fullness", "foreign-trim-base", a.str(),
                                  "spine has a neighbourhood base of " + p.name(q) +
                                      "-trim sets but lies in X_" + p.name(t)});

    if (remaining > 0) {
      const auto& cyc = m.cycle(t);
      auto overridden = m.overridden_children(a);
      int maxj = static_cast<int>(cyc.size());
      for (int j : overridden) maxj = std::max(maxj, j);
      for (int j = 1; j <= maxj; ++j) {
        bool is_override = std::find(overridden.begin(), overridden.end(), j) != overridden.end() &&
                           m.data().child_override.count(a.child(j));
        if (cyc.empty() && !is_override) continue;  // atoms have no scheduled children
        int ct = m.child_type(a, j, t);
        if (!has_bit(p.strict_above(t), ct))
          rep.violations.push_back({"trim-base", "child-type", a.child(j).str(),
                                    "child of type " + p.name(ct) + " under a " + p.name(t) +
                                        "-cell"});
        check(a.child(j), remaining - 1);
      }
    }
    if (pure) clean_types.insert(t);
  };

  int uroots = horizon >= 0 ? horizon : static_cast<int>(m.u_cycle().size());
  int nroots = m.num_l_roots() + (m.u_cycle().empty() ? 0 : uroots);
  for (int r = 0; r < nroots; ++r) check(CellAddr{r, {}}, depth);
  return rep;
}

// --- consolidation and refinement -----------------------------------------------

// A relabeled view of a model along a surjective morphism α: every cell of
// type q is read as a cell of type qα. Partition data is the pushforward.
struct Consolidation {
  CellModel base;
  Morphism alpha;  // base's P → target P

  ExtendedPoSystem eps() const { return pushforward(alpha, base.eps()); }
  int type_of(const CellAddr& a) const { return alpha.map[base.type_of(a)]; }
};

inline Consolidation consolidate(const CellModel& m, const Morphism& alpha) {
  if (alpha.source != m.poset())
    fail("InternalAssertion", "consolidation morphism must start at the model's system");
  if (!is_morphism(alpha)) fail("NotAMorphism", "consolidation needs a morphism");
  if (!is_surjective(alpha)) fail("NotSurjective", "consolidation needs a surjective morphism");
  return Consolidation{m, alpha};
}

// Checks, to the given depth, that every tail trim in the base stays trim
// with the relabeled type in the view, and that the view's counted partition
// data matches the pushforward formulas.
inline Diagnostics verify_consolidation(const Consolidation& v, int depth) {
  Diagnostics d;
  const CellModel& m = v.base;
  const PoSystem& src = m.poset();
  const PoSystem& dst = v.alpha.target;

  std::set<int> seen;
  std::function<void(const CellAddr&, int)> walk = [&](const CellAddr& a, int remaining) {
    int q = m.type_of(a);
    if (seen.count(q)) return;
    seen.insert(q);
    int pp = v.alpha.map[q];
    for (int from : {1, 2}) {
      Tail tl{a, from};
      Mask relabeled = image_mask(v.alpha, m.reach_tail(tl));
      if (relabeled != dst.up(pp))
        d.issues.push_back("tail " + tl.str() + " is not " + dst.name(pp) +
                           "-trim in the consolidated view");
      if (has_bit(dst.discrete(), pp)) {
        int cnt = 0;
        for_each_bit(fiber(v.alpha, pp), [&](int qq) { cnt += m.count_in_tail(tl, qq); });
        if (cnt != 1)
          d.issues.push_back("tail " + tl.str() + " meets the consolidated X_" + dst.name(pp) +
                             " in " + std::to_string(cnt) + " points");
      }
    }
    if (remaining == 0) return;
    const auto& cyc = m.cycle(q);
    for (int j = 1; j <= static_cast<int>(cyc.size()); ++j) walk(a.child(j), remaining - 1);
  };
  int nroots = m.num_l_roots() + static_cast<int>(m.u_cycle().size());
  for (int r = 0; r < nroots; ++r) walk(CellAddr{r, {}}, depth);

  // partition data: recount the finite elements from the actual root block
  ExtendedPoSystem pushed = v.eps();
  for_each_bit(pushed.l_min_d(), [&](int pp) {
    int counted = 0;
    Mask fib = fiber(v.alpha, pp);
    for (int r = 0; r < m.num_l_roots(); ++r) {
      CellAddr root{r, {}};
      int q = m.type_of(root);
      if (!has_bit(fib, q)) continue;
      if (m.count_in_tail(Tail{root, 1}, q) != 1)
        d.issues.push_back("root " + root.str() + " carries more than one " + src.name(q) +
                           " point");
      counted += 1;
    }
    if (counted != pushed.finite_sizes.at(pp))
      d.issues.push_back("consolidated X_" + dst.name(pp) + " has " + std::to_string(counted) +
                         " points, pushforward expects " +
                         std::to_string(pushed.finite_sizes.at(pp)));
  });
  return d;
}

// Builds a model over Q refining the target data along α: Q→P: M = Lα⁻¹ and
// g distributes f over the fibers of the minimal discrete part (evenly,
// remainder to the least elements), g = 1 elsewhere on M_min^d.
inline CellModel refine(const CellModel& dst, const Morphism& alpha) {
  if (alpha.target != dst.poset())
    fail("InternalAssertion", "refinement morphism must land in the model's system");
  if (!is_morphism(alpha)) fail("NotAMorphism", "refinement needs a morphism");
  if (!is_surjective(alpha)) fail("NotSurjective", "refinement needs a surjective morphism");
  const ExtendedPoSystem& target = dst.eps();
  Feasibility feas = refinement_feasible(target, alpha);
  if (!feas.feasible) {
    std::string msg;
    for (const auto& s : feas.issues) msg += (msg.empty() ? "" : "; ") + s;
    fail("Infeasible", msg);
  }
  ExtendedPoSystem refined;
  refined.poset = alpha.source;
  refined.lower = preimage_mask(alpha, target.lower);
  Mask mind = refined.l_min_d();
  for_each_bit(target.l_min_d(), [&](int pp) {
    std::vector<int> fib = bits_of(fiber(alpha, pp));
    int f = target.finite_sizes.at(pp);
    int base = f / static_cast<int>(fib.size());
    int rem = f % static_cast<int>(fib.size());
    for (size_t k = 0; k < fib.size(); ++k)
      refined.finite_sizes[fib[k]] = base + (static_cast<int>(k) < rem ? 1 : 0);
  });
  for_each_bit(mind, [&](int q) {
    if (!refined.finite_sizes.count(q)) refined.finite_sizes[q] = 1;
  });
  require_valid(refined);
  CellModel out = build_model(refined);
  if (!iso_extended(pushforward(alpha, refined), target))
    fail("InternalAssertion", "refined model does not consolidate back to the target data");
  return out;
}

// --- points -----------------------------------------------------------------------

// A point of the model: the spine of a cell, or a truncated branch (a finite
// descent word standing in for a limit point under depth-bounded analysis).
// For finite systems every point reachable at finite depth is clean, so
// truncated branches only ever under-approximate.
struct PointRef {
  CellAddr at;
  bool is_spine = true;

  static PointRef spine(CellAddr a) { return {std::move(a), true}; }
  static PointRef branch(CellAddr a) { return {std::move(a), false}; }
};

// The trim-neighbourhood type ideal of a spine point is the principal ideal
// of its type: tails of the cell witness the type itself, and for any r
// strictly below, an enclosing tail united with a disjoint r-cell is r-trim.
inline Mask spine_ideal(const CellModel& m, const CellAddr& spine) {
  return m.poset().down(m.type_of(spine));
}

// Known trim-neighbourhood types of a point. A spine sees its full principal
// ideal; a truncated branch has only the tails of its ancestors so far, a
// lower set that grows as the descent deepens.
inline Mask point_ideal(const CellModel& m, const PointRef& w) {
  if (w.is_spine) return spine_ideal(m, w.at);
  Mask types = bit(m.type_of(CellAddr{w.at.root, {}}));
  CellAddr walk{w.at.root, {}};
  for (int j : w.at.path) {
    walk.path.push_back(j);
    types |= bit(m.type_of(walk));
  }
  return m.poset().down_closure(types);
}

// An r-trim compact open containing the given spine, for r ≤ type(spine).
inline CompactOpen trim_witness(const CellModel& m, const CellAddr& spine, int r) {
  int t = m.type_of(spine);
  if (!m.poset().leq(r, t))
    fail("InternalAssertion", "no trim witness: type not below the spine's type");
  // r-typed ancestor (or the cell itself) covers the nested case
  CellAddr walk{spine.root, {}};
  if (m.type_of(walk) == r) return make_open(m, {Tail{walk, 1}});
  for (int j : spine.path) {
    walk.path.push_back(j);
    if (m.type_of(walk) == r) return make_open(m, {Tail{walk, 1}});
  }
  CellAddr other = find_cell_of_type(m, r);
  if (other.proper_prefix_of(spine) || other == spine)
    fail("InternalAssertion", "canonical r-cell unexpectedly an ancestor");
  return make_open(m, {Tail{spine, 1}, Tail{other, 1}});
}

}  // namespace postone
