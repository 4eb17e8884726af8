// completion.hpp --- ideal completion of presented systems, order-preserving
// maps out of id(P), and the checker for candidate completion maps.

#pragma once

#include <cstdlib>

#include "postone/presented.hpp"

namespace postone {

// Universal statements quantified over a bounded universe must leave room
// near the bound: witnessing ideals for the last few chain indices can fall
// past the detection horizon.
inline constexpr long kFringeMargin = 2;

// --- membership patterns -----------------------------------------------------------
//
// To present a detected ideal as a fresh element, its carrier must be
// describable against each family by a supported rule shape: everything,
// a suffix [k..], or a finite set away from the bound. Anything else (a
// gappy pattern still alive at the bound) is undecidable here.

namespace detail {

struct FamilyPattern {
  enum class Kind { none, all, suffix, finite } kind = Kind::none;
  long from = 0;            // suffix start
  std::vector<long> fixed;  // finite indices
};

inline FamilyPattern family_pattern(const BoundedView& v, const std::set<PElem>& carrier, int fam,
                                    const std::string& what) {
  const PFamily& f = v.system().families()[fam];
  FamilyPattern pat;
  if (!f.is_chain) {
    if (carrier.count(PElem{fam, -1})) pat.kind = FamilyPattern::Kind::finite;
    return pat;
  }
  std::vector<long> in;
  for (long i = 0; i <= v.bound(); ++i)
    if (carrier.count(PElem{fam, i})) in.push_back(i);
  if (in.empty()) return pat;
  bool contiguous = in.back() - in.front() + 1 == static_cast<long>(in.size());
  if (contiguous && in.back() == v.bound()) {
    pat.kind = in.front() == 0 ? FamilyPattern::Kind::all : FamilyPattern::Kind::suffix;
    pat.from = in.front();
    return pat;
  }
  if (in.back() < v.bound()) {
    pat.kind = FamilyPattern::Kind::finite;
    pat.fixed = in;
    return pat;
  }
  fail("UndecidedContainment", what + ": membership of family '" + f.name +
                                   "' is gappy at bound " + std::to_string(v.bound()));
}

// Whether every generator of the ideal lies below u (a universal statement,
// decided by checking all exposed generators at the bound).
inline bool ideal_below(const BoundedView& v, const DetectedIdeal& d, PElem u) {
  for (const auto& g : generators(v, d.ref))
    if (!v.leq(g, u)) return false;
  return true;
}

}  // namespace detail

struct CompletionResult {
  PresentedSystem system;
  std::vector<std::string> added;  // names of the fresh singletons (non-principal ideals)
  IdealDetection detection;        // detection on the input system
};

// id(P) as a presentation: the original families plus one reflexive
// singleton per detected non-principal ideal, ordered by carrier inclusion
// decided at the bound. Diagonal flags follow the rule that only principal
// ideals of discrete elements stay discrete.
inline CompletionResult ideal_completion(const PresentedSystem& sys, int bound) {
  BoundedView v(sys, bound);
  CompletionResult out;
  out.detection = detect_ideals(v);
  if (!out.detection.complete)
    fail("UndecidedContainment",
         "ideal detection incomplete at bound " + std::to_string(bound) + ": " +
             (out.detection.notes.empty() ? "" : out.detection.notes.front()));
  out.system = sys;

  std::vector<const DetectedIdeal*> fresh;
  for (const auto& d : out.detection.ideals)
    if (!d.principal()) fresh.push_back(&d);

  std::map<const DetectedIdeal*, int> fam_of;
  for (const DetectedIdeal* d : fresh) {
    PFamily f;
    f.name = d->ref.kind == IdealRef::Kind::chain_tail
                 ? "tail_" + sys.families()[d->ref.fam].name +
                       (d->ref.from ? "_" + std::to_string(d->ref.from) : "")
                 : "join_" + std::to_string(fam_of.size());
    f.is_chain = false;
    f.reflexive = true;  // non-principal ideals are never diagonal in id(P)
    fam_of[d] = static_cast<int>(out.system.families().size());
    out.system.add_family(f);
    out.added.push_back(f.name);
  }

  for (const DetectedIdeal* d : fresh) {
    RuleSide j{fam_of[d], false, 0, -1};
    // members sit strictly below the fresh element
    for (int fam = 0; fam < static_cast<int>(sys.families().size()); ++fam) {
      auto pat = detail::family_pattern(v, d->carrier, fam, d->ref.name(sys));
      using K = detail::FamilyPattern::Kind;
      if (pat.kind == K::none) continue;
      if (!sys.families()[fam].is_chain) {
        out.system.add_rule({RuleSide{fam, false, 0, -1}, j});
      } else if (pat.kind == K::all || pat.kind == K::suffix) {
        out.system.add_rule({RuleSide{fam, true, pat.from, -1}, j});
      } else {
        for (long i : pat.fixed) out.system.add_rule({RuleSide{fam, false, 0, i}, j});
      }
    }
    // the fresh element sits below everything dominating the whole carrier
    for (int fam = 0; fam < static_cast<int>(sys.families().size()); ++fam) {
      const PFamily& f = sys.families()[fam];
      if (!f.is_chain) {
        if (detail::ideal_below(v, *d, PElem{fam, -1}) && !d->carrier.count(PElem{fam, -1}))
          out.system.add_rule({j, RuleSide{fam, false, 0, -1}});
        continue;
      }
      std::vector<long> dominates;
      for (long i = 0; i <= v.bound(); ++i)
        if (detail::ideal_below(v, *d, PElem{fam, i}) && !d->carrier.count(PElem{fam, i}))
          dominates.push_back(i);
      if (dominates.empty()) continue;
      bool suffix = dominates.back() == v.bound() &&
                    dominates.back() - dominates.front() + 1 ==
                        static_cast<long>(dominates.size());
      if (suffix)
        out.system.add_rule({j, RuleSide{fam, true, dominates.front(), -1}});
      else if (dominates.back() < v.bound())
        for (long i : dominates) out.system.add_rule({j, RuleSide{fam, false, 0, i}});
      else
        fail("UndecidedContainment", d->ref.name(sys) + ": domination pattern of family '" +
                                         f.name + "' is gappy at bound " +
                                         std::to_string(v.bound()));
    }
  }
  // fresh elements against each other: carrier inclusion
  for (const DetectedIdeal* a : fresh)
    for (const DetectedIdeal* b : fresh) {
      if (a == b) continue;
      bool incl = true;
      for (const auto& x : a->carrier) incl = incl && b->carrier.count(x) > 0;
      if (incl)
        out.system.add_rule({RuleSide{fam_of[a], false, 0, -1}, RuleSide{fam_of[b], false, 0, -1}});
    }
  return out;
}

// Order isomorphism between two presented systems at a bound: a kind- and
// flag-respecting family bijection under which the bounded relations agree.
inline std::optional<std::map<std::string, std::string>> presented_iso_at_bound(
    const PresentedSystem& a, const PresentedSystem& b, int bound) {
  if (a.families().size() != b.families().size()) return std::nullopt;
  int n = static_cast<int>(a.families().size());
  BoundedView va(a, bound), vb(b, bound);
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) {
      for (const auto& x : va.universe())
        for (const auto& y : va.universe()) {
          PElem xi{map[x.fam], x.index}, yi{map[y.fam], y.index};
          if (va.lt(x, y) != vb.lt(xi, yi)) return false;
        }
      return true;
    }
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      if (a.families()[i].is_chain != b.families()[c].is_chain) continue;
      if (a.families()[i].reflexive != b.families()[c].reflexive) continue;
      map[i] = c;
      used[c] = true;
      if (rec(i + 1)) return true;
      used[c] = false;
      map[i] = -1;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  std::map<std::string, std::string> out;
  for (int i = 0; i < n; ++i) out[a.families()[i].name] = b.families()[map[i]].name;
  return out;
}

// --- morphisms of presented systems -------------------------------------------------

struct PresentedMorphism {
  struct Action {
    int to_fam = -1;
    bool indexed = false;  // chain → chain with an index shift
    long shift = 0;
  };
  std::vector<Action> per_family;  // indexed by source family

  PElem apply(PElem e) const {
    const Action& a = per_family[e.fam];
    return a.indexed ? PElem{a.to_fam, e.index + a.shift} : PElem{a.to_fam, -1};
  }
};

// Bounded check of the morphism law {r > q}α = {p > qα} over the exposed
// universes; indices within the morphism's shift of the bound are skipped on
// the comparison to avoid fringe artifacts.
inline Diagnostics check_presented_morphism(const PresentedSystem& src, const PresentedSystem& dst,
                                            const PresentedMorphism& m, int bound) {
  Diagnostics d;
  BoundedView vs(src, bound), vd(dst, bound);
  long fringe = 0;
  for (const auto& a : m.per_family) fringe = std::max(fringe, std::labs(a.shift) + 1);
  auto exposed_dst = vd.universe();
  for (const auto& q : vs.universe()) {
    std::set<PElem> lhs;
    for (const auto& r : vs.universe())
      if (vs.lt(q, r)) {
        PElem img = m.apply(r);
        if (!src.families()[r.fam].is_chain || r.index <= bound - fringe) lhs.insert(img);
      }
    PElem qa = m.apply(q);
    if (!vd.valid(qa)) {
      d.issues.push_back("image of " + src.elem_name(q) + " leaves the bounded universe");
      continue;
    }
    for (const auto& p : exposed_dst) {
      bool in_rhs = vd.lt(qa, p);
      bool in_lhs = lhs.count(p) > 0;
      bool p_fringe = dst.families()[p.fam].is_chain && p.index > bound - fringe;
      if (in_rhs && !in_lhs && !p_fringe)
        d.issues.push_back("law fails at " + src.elem_name(q) + ": " + dst.elem_name(p) +
                           " lies above the image but not in the image of the up-set");
      if (in_lhs && !in_rhs)
        d.issues.push_back("law fails at " + src.elem_name(q) + ": image of the up-set contains " +
                           dst.elem_name(p) + " which is not above the image");
    }
  }
  return d;
}

// J ↦ (Jα)↓ on detected ideals; the image closure must be a detected ideal
// of the target at the bound.
inline std::map<std::string, std::string> id_morphism(const PresentedSystem& src,
                                                      const PresentedSystem& dst,
                                                      const PresentedMorphism& m, int bound) {
  Diagnostics law = check_presented_morphism(src, dst, m, bound);
  if (!law.ok()) fail("NotAMorphism", law.issues.front());
  BoundedView vs(src, bound), vd(dst, bound);
  IdealDetection ds = detect_ideals(vs), dd = detect_ideals(vd);
  // closures are compared on a window a little past the bound: wide enough
  // to tell a tail from the last exposed principal, narrow enough to be
  // covered by both systems' slack
  long window = bound + 4;
  auto trim = [&](const std::set<PElem>& s) {
    std::set<PElem> out;
    for (const auto& e : s)
      if (!dst.families()[e.fam].is_chain || e.index <= window) out.insert(e);
    return out;
  };
  std::map<std::string, std::string> out;
  for (const auto& d : ds.ideals) {
    std::vector<PElem> image_gens;
    for (const auto& g : detail::generators(vs, d.ref)) {
      PElem img = m.apply(g);
      if (vd.valid(img)) image_gens.push_back(img);
    }
    std::set<PElem> closure =
        trim(detail::down_closure_within(vd, image_gens, vd.universe_ext(), nullptr));
    const DetectedIdeal* hit = nullptr;
    for (const auto& cand : dd.ideals)
      if (trim(cand.carrier_ext) == closure) {
        hit = &cand;
        break;
      }
    if (!hit)
      fail("InternalAssertion", "image of " + d.ref.name(src) +
                                    " is not a detected ideal of the target at bound " +
                                    std::to_string(bound));
    out[d.ref.name(src)] = hit->ref.name(dst);
  }
  return out;
}

// --- candidate completion maps --------------------------------------------------------

struct CompletionMapReport {
  TriBool embedding_iso;        // (1) β restricted to P is an isomorphism onto Pβ
  TriBool sups_match;           // (2) Jβ = sup_Q J for every ideal J of P
  TriBool strict_pairs_covered; // (3) p ⪇ q gives an ideal J with p ∈ J, Jβ = q
  TriBool discrete_sups;        // (4) p ∈ P^d, p = sup_Q J implies p ∈ J
  TriBool strongly_semi_trim;   // Jβ ∈ P only for principal J
  TriBool rank;                 // β is an isomorphism onto Q at bound
  bool beta_is_morphism = true;
  std::vector<std::string> witnesses;

  bool conditions_pass() const {
    return embedding_iso.is_yes() && sups_match.is_yes() && strict_pairs_covered.is_yes() &&
           discrete_sups.is_yes();
  }
};

// Checks a candidate β: id(P) → Q at the bound. P's families must be present
// in Q under the same names; β maps detected-ideal names to Q element names,
// with principal ideals implicitly going to their generators.
inline CompletionMapReport validate_completion_map(const PresentedSystem& p,
                                                   const PresentedSystem& q,
                                                   const std::map<std::string, std::string>& beta,
                                                   int bound) {
  for (const auto& f : p.families()) {
    int qi = q.family_index(f.name);
    if (qi < 0 || q.families()[qi].is_chain != f.is_chain ||
        q.families()[qi].reflexive != f.reflexive)
      fail("UnknownElement", "family '" + f.name + "' of P is not embedded in Q");
  }
  BoundedView vp(p, bound), vq(q, bound);
  IdealDetection det = detect_ideals(vp);
  auto in_p = [&](PElem e) { return p.family_index(q.families()[e.fam].name) >= 0; };
  auto to_q = [&](PElem e) {  // same element, Q family indexing
    return PElem{q.family_index(p.families()[e.fam].name), e.index};
  };
  auto beta_of = [&](const DetectedIdeal& d) -> PElem {
    if (d.principal()) return to_q(d.ref.gen);
    auto it = beta.find(d.ref.name(p));
    if (it == beta.end())
      fail("UnknownElement", "beta is not defined on " + d.ref.name(p));
    return q.parse_elem(it->second);
  };

  CompletionMapReport rep;
  int b = bound;
  TriBool yes = TriBool::yes_at(b);

  // (1) embedding: relations and flags agree on the exposed P part
  rep.embedding_iso = yes;
  for (const auto& x : vp.universe())
    for (const auto& y : vp.universe())
      if (vp.lt(x, y) != vq.lt(to_q(x), to_q(y))) {
        rep.embedding_iso = TriBool::no_at(b);
        rep.witnesses.push_back("(1) embedding disagrees on (" + p.elem_name(x) + "," +
                                p.elem_name(y) + ")");
      }

  auto sup_in_q = [&](const DetectedIdeal& d) -> std::optional<PElem> {
    std::vector<PElem> gens;
    for (const auto& g : detail::generators(vp, d.ref)) gens.push_back(to_q(g));
    std::vector<PElem> ubs;
    for (const auto& u : vq.universe()) {
      bool ok = true;
      for (const auto& g : gens)
        if (!vq.leq(g, u)) {
          ok = false;
          break;
        }
      if (ok) ubs.push_back(u);
    }
    for (const auto& u0 : ubs) {
      bool least = true;
      for (const auto& u : ubs)
        if (!vq.leq(u0, u)) {
          least = false;
          break;
        }
      if (least) return u0;
    }
    return std::nullopt;
  };

  // (2) Jβ = sup_Q J
  rep.sups_match = yes;
  for (const auto& d : det.ideals) {
    auto s = sup_in_q(d);
    PElem bimg = beta_of(d);
    if (!s || !(*s == bimg)) {
      rep.sups_match = TriBool::no_at(b);
      rep.witnesses.push_back("(2) sup_Q " + d.ref.name(p) + " is " +
                              (s ? q.elem_name(*s) : std::string("undecided")) + ", beta gives " +
                              q.elem_name(bimg));
    }
  }

  // (3) p ⪇ q in Q needs an ideal through p mapping to q. Chain elements
  // within the fringe margin of the bound are skipped: their witnessing
  // ideals may fall past the detection horizon.
  rep.strict_pairs_covered = det.complete ? yes : TriBool::unknown_at(b);
  for (const auto& x : vp.universe()) {
    if (p.families()[x.fam].is_chain && x.index > bound - kFringeMargin) continue;
    PElem xq = to_q(x);
    for (const auto& y : vq.universe()) {
      if (xq == y || !vq.lt(xq, y)) continue;
      bool found = false;
      for (const auto& d : det.ideals)
        if (ideal_contains(d, x) && beta_of(d) == y) {
          found = true;
          break;
        }
      if (!found) {
        if (det.complete) rep.strict_pairs_covered = TriBool::no_at(b);
        rep.witnesses.push_back("(3) no ideal J with " + p.elem_name(x) + " in J and J beta = " +
                                q.elem_name(y));
      }
    }
  }

  // (4) discrete suprema force membership
  rep.discrete_sups = yes;
  for (const auto& d : det.ideals) {
    auto s = sup_in_q(d);
    if (!s || !in_p(*s)) continue;
    if (q.families()[s->fam].reflexive) continue;
    PElem sp{p.family_index(q.families()[s->fam].name), s->index};
    if (!ideal_contains(d, sp)) {
      rep.discrete_sups = TriBool::no_at(b);
      rep.witnesses.push_back("(4) " + q.elem_name(*s) + " is a discrete supremum of " +
                              d.ref.name(p) + " but lies outside it");
    }
  }

  // strongly semi-trim: only principal ideals may land in P
  rep.strongly_semi_trim = det.complete ? yes : TriBool::unknown_at(b);
  for (const auto& d : det.ideals) {
    if (d.principal()) continue;
    if (in_p(beta_of(d))) {
      rep.strongly_semi_trim = TriBool::no_at(b);
      rep.witnesses.push_back("not strongly semi-trim: " + d.ref.name(p) +
                              " maps into P at " + q.elem_name(beta_of(d)));
    }
  }

  // rank: β is an isomorphism onto Q at bound
  rep.rank = det.complete ? yes : TriBool::unknown_at(b);
  {
    std::set<PElem> images;
    bool injective = true;
    for (const auto& d : det.ideals)
      if (!images.insert(beta_of(d)).second) injective = false;
    bool surjective = true;
    for (const auto& u : vq.universe())
      if (!images.count(u)) surjective = false;
    bool order_ok = true;
    for (const auto& a : det.ideals)
      for (const auto& c : det.ideals)
        if (ideal_lt(p, a, c) != vq.lt(beta_of(a), beta_of(c))) order_ok = false;
    if (!(injective && surjective && order_ok)) rep.rank = TriBool::no_at(b);
  }

  // morphism law for β itself, with the classifying witness. Principal
  // ideals of chain elements near the bound are skipped for the same
  // horizon reason as condition (3).
  for (const auto& d : det.ideals) {
    if (d.principal() && p.families()[d.ref.gen.fam].is_chain &&
        d.ref.gen.index > bound - kFringeMargin)
      continue;
    PElem bd = beta_of(d);
    std::set<PElem> lhs;
    for (const auto& other : det.ideals)
      if (ideal_lt(p, d, other)) lhs.insert(beta_of(other));
    for (const auto& u : vq.universe()) {
      if (!vq.lt(bd, u)) continue;
      if (q.families()[u.fam].is_chain && u.index > bound - kFringeMargin) continue;
      if (!lhs.count(u)) {
        rep.beta_is_morphism = false;
        rep.witnesses.push_back("beta is not a morphism: no ideal L with " + d.ref.name(p) +
                                " < L and L beta = " + q.elem_name(u));
      }
    }
    for (const auto& u : lhs)
      if (!vq.lt(bd, u)) {
        rep.beta_is_morphism = false;
        rep.witnesses.push_back("beta is not a morphism: " + q.elem_name(u) +
                                " is an ideal image not above " + q.elem_name(bd));
      }
  }
  return rep;
}

}  // namespace postone
