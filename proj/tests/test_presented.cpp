#include "doctest.h"

#include <random>

#include "postone/completion.hpp"
#include "postone/corpus.hpp"

using namespace postone;

namespace {

PresentedSystem parse(const std::string& s) { return PresentedSystem::parse(s); }

const char* kNatWithTop =
    "family j chain increasing\n"
    "family r singleton\n"
    "rule j[n] < r\n";

const char* kNatOmegaTop =
    "family j chain increasing\n"
    "family w singleton\n"
    "family r singleton\n"
    "rule j[n] < w\n"
    "rule w < r\n";

}  // namespace

TEST_CASE("parser: families, rules, hats, errors") {
  PresentedSystem q1 = parse(corpus::q1_dsl());
  CHECK(q1.families().size() == 5);
  CHECK(q1.hats().at("base").size() == 3);
  CHECK(q1.parse_elem("p[3]").index == 3);
  CHECK_THROWS_AS(q1.parse_elem("p"), Error);
  CHECK_THROWS_AS(q1.parse_elem("zz"), Error);
  CHECK_THROWS_WITH_AS(parse("family p chain sideways\n"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(parse("family p singleton\nrule p < p\n"),
                       doctest::Contains("ParseError"), Error);
}

TEST_CASE("leq: named examples") {
  PresentedSystem q1 = parse(corpus::q1_dsl());
  BoundedView v(q1, 20);
  CHECK(v.lt(q1.parse_elem("p[3]"), q1.parse_elem("r")));  // p_3 < s < r
  CHECK(v.lt(q1.parse_elem("p[3]"), q1.parse_elem("s")));
  CHECK_FALSE(v.lt(q1.parse_elem("q[3]"), q1.parse_elem("r")));
  CHECK_FALSE(v.lt(q1.parse_elem("s"), q1.parse_elem("t")));  // unrelated singletons

  PresentedSystem isop = parse(corpus::iso_p_dsl());
  BoundedView vi(isop, 12);
  CHECK(vi.lt(isop.parse_elem("b[7]"), isop.parse_elem("a[5]")));  // a5 > a7 > b7
  CHECK(vi.lt(isop.parse_elem("c"), isop.parse_elem("a[9]")));
  CHECK(vi.lt(isop.parse_elem("b[4]"), isop.parse_elem("b[4]")));  // reflexive family
  CHECK_FALSE(vi.lt(isop.parse_elem("a[2]"), isop.parse_elem("a[2]")));
}

TEST_CASE("antisymmetry validation at bound") {
  PresentedSystem good = parse(corpus::q2_dsl());
  CHECK(BoundedView(good, 15).validate().ok());

  PresentedSystem cyc = parse(
      "family x singleton\nfamily y singleton\nrule x < y\nrule y < x\n");
  CHECK_FALSE(BoundedView(cyc, 5).validate().ok());

  PresentedSystem chain_cycle = parse(
      "family a chain none\nrule a[n] < a[n+1]\nrule a[n+1] < a[n]\n");
  CHECK_FALSE(BoundedView(chain_cycle, 5).validate().ok());
}

TEST_CASE("detect_ideals: principals only for finite presentations") {
  PresentedSystem fence = parse(corpus::fence_dsl());
  BoundedView v(fence, 10);
  IdealDetection det = detect_ideals(v);
  CHECK(det.complete);
  CHECK(det.ideals.size() == 3);
  for (const auto& d : det.ideals) CHECK(d.principal());
}

TEST_CASE("detect_ideals: chain tails of the base system") {
  PresentedSystem base = parse(corpus::partition_base_dsl());
  BoundedView v(base, 15);
  IdealDetection det = detect_ideals(v);
  CHECK(det.complete);
  std::vector<std::string> tails;
  for (const auto& d : det.ideals)
    if (!d.principal()) tails.push_back(d.ref.name(base));
  CHECK(tails == std::vector<std::string>{"tail(p,0)", "tail(q,0)"});
  // a tail is distinguishable from the principal of the last exposed element
  for (const auto& d : det.ideals)
    if (!d.principal()) CHECK(d.merged_aliases.empty());
  // directedness of the detected carriers at the bound
  for (const auto& d : det.ideals) CHECK(detail::directed_at_bound(v, d.carrier));
}

TEST_CASE("detect_ideals: lone increasing chain has one tail up to equal closures") {
  PresentedSystem lone = parse("family c chain increasing\n");
  BoundedView v(lone, 10);
  IdealDetection det = detect_ideals(v);
  int nonprincipal = 0;
  for (const auto& d : det.ideals)
    if (!d.principal()) ++nonprincipal;
  CHECK(nonprincipal == 1);
}

TEST_CASE("detect_ideals: non-contiguous ascent fails closed") {
  PresentedSystem gappy = parse("family z chain none\nrule z[n] < z[n+2]\n");
  BoundedView v(gappy, 10);
  IdealDetection det = detect_ideals(v);
  CHECK_FALSE(det.complete);
  PElem z0 = gappy.parse_elem("z[0]");
  CHECK(is_separated(gappy, z0, 10).value.is_unknown());
  CHECK(is_compact(gappy, z0, 10).value.is_unknown());
}

TEST_CASE("is_separated: the three-space example") {
  PresentedSystem q = parse(kNatWithTop);
  QueryResult rq = is_separated(q, q.parse_elem("r"), 15);
  CHECK(rq.value.is_no());
  CHECK(rq.witness_ideal == "tail(j,0)");

  PresentedSystem s = parse(kNatOmegaTop);
  CHECK(is_separated(s, s.parse_elem("r"), 15).value.is_yes());
  CHECK(is_separated(s, s.parse_elem("w"), 15).value.is_no());

  PresentedSystem lone = parse("family r singleton\n");
  CHECK(is_separated(lone, lone.parse_elem("r"), 5).value.is_yes());
}

TEST_CASE("is_compact: named examples") {
  PresentedSystem lone = parse("family r singleton\n");
  CHECK(is_compact(lone, lone.parse_elem("r"), 5).value.is_yes());

  PresentedSystem q2 = parse(corpus::q2_dsl());
  QueryResult r = is_compact(q2, q2.parse_elem("p[1]"), 20);
  CHECK(r.value.is_no());
  CHECK(r.witness_ideal == "tail(q,0)");
  CHECK(r.witness_sup == "s");
}

TEST_CASE("weakly_separated: named examples") {
  PresentedSystem q3 = parse(corpus::q3_dsl());
  QueryResult r3 = weakly_separated(q3, "base", 20);
  CHECK(r3.value.is_no());
  CHECK(r3.witness_ideal == "tail(p,0)");
  CHECK(r3.witness_sup == "r");

  PresentedSystem q1 = parse(corpus::q1_dsl());
  CHECK(weakly_separated(q1, "base", 20).value.is_yes());

  PresentedSystem fence = parse(corpus::fence_dsl() + std::string("hat all x y z\n"));
  CHECK(weakly_separated(fence, "all", 10).value.is_yes());
}

TEST_CASE("rank_criteria reproduces the classification table") {
  PresentedSystem q1 = parse(corpus::q1_dsl());
  PresentedSystem q2 = parse(corpus::q2_dsl());
  PresentedSystem q3 = parse(corpus::q3_dsl());

  RankReport r1 = rank_criteria(q1, "base", 20);
  CHECK(r1.strongly_semi_trim.value.is_yes());
  CHECK(r1.rank.value.is_yes());

  RankReport r2 = rank_criteria(q2, "base", 20);
  CHECK(r2.strongly_semi_trim.value.is_yes());
  CHECK(r2.rank.value.is_no());
  CHECK(r2.rank.witness_ideal == "tail(q,0)");
  CHECK(r2.rank.witness_sup == "s");

  RankReport r3 = rank_criteria(q3, "base", 20);
  CHECK(r3.strongly_semi_trim.value.is_no());
  CHECK(r3.strongly_semi_trim.witness_sup == "r");
  CHECK(r3.rank.value.is_no());
}

TEST_CASE("raising the bound refines monotonically on the corpus") {
  for (const auto& dsl : {corpus::q1_dsl(), corpus::q2_dsl(), corpus::q3_dsl()}) {
    PresentedSystem sys = parse(dsl);
    TriBool::V prev_sst = TriBool::V::unknown, prev_rank = TriBool::V::unknown;
    for (int b : {8, 12, 16, 20, 24}) {
      RankReport r = rank_criteria(sys, "base", b);
      if (prev_sst != TriBool::V::unknown) CHECK(r.strongly_semi_trim.value.v == prev_sst);
      if (prev_rank != TriBool::V::unknown) CHECK(r.rank.value.v == prev_rank);
      prev_sst = r.strongly_semi_trim.value.v;
      prev_rank = r.rank.value.v;
    }
  }
}

TEST_CASE("leq is a partial order at bound on the corpus") {
  for (const auto& dsl :
       {corpus::q1_dsl(), corpus::q2_dsl(), corpus::q3_dsl(), corpus::iso_p_dsl()}) {
    PresentedSystem sys = parse(dsl);
    BoundedView v(sys, 10);
    CHECK(v.validate().ok());
    auto u = v.universe();
    bool transitive = true;
    for (const auto& a : u)
      for (const auto& b : u)
        for (const auto& c : u)
          if (v.leq(a, b) && v.leq(b, c) && !v.leq(a, c)) transitive = false;
    CHECK(transitive);
  }
}

TEST_CASE("ideal_completion: finite systems complete to themselves") {
  for (const auto& dsl : {corpus::fence_dsl(), corpus::bowtie_dsl()}) {
    PresentedSystem sys = parse(dsl);
    CompletionResult comp = ideal_completion(sys, 10);
    CHECK(comp.added.empty());
    CHECK(presented_iso_at_bound(comp.system, sys, 10).has_value());
  }
}

TEST_CASE("ideal_completion: the base system completes to Q1") {
  PresentedSystem base = parse(corpus::partition_base_dsl());
  PresentedSystem q1 = parse(corpus::q1_dsl());
  CompletionResult comp = ideal_completion(base, 20);
  REQUIRE(comp.added.size() == 2);
  auto iso = presented_iso_at_bound(comp.system, q1, 20);
  REQUIRE(iso.has_value());
  CHECK(iso->at("tail_p") == "s");
  CHECK(iso->at("tail_q") == "t");
  // elements of P are compact in id(P)
  BoundedView v(base, 20);
  for (const auto& e : v.universe()) CHECK(is_compact(comp.system, e, 20).value.is_yes());
}

TEST_CASE("ideal_completion: iso-p adds nothing beyond principals") {
  PresentedSystem isop = parse(corpus::iso_p_dsl());
  CompletionResult comp = ideal_completion(isop, 12);
  CHECK(comp.added.empty());
}

TEST_CASE("truncate_to_posystem matches the bounded relation") {
  PresentedSystem isop = parse(corpus::iso_p_dsl());
  PoSystem t = truncate_to_posystem(isop, 4);
  CHECK(t.size() == 11);  // a0..a4, b0..b4, c
  CHECK(t.lt(t.index_or_fail("b[3]"), t.index_or_fail("a[1]")));
  CHECK(t.reflexive(t.index_or_fail("b[2]")));
  CHECK_FALSE(t.reflexive(t.index_or_fail("a[2]")));
}

TEST_CASE("presented morphisms: law check and ideal images") {
  // identity on Q1: every detected ideal maps to itself
  PresentedSystem q1 = parse(corpus::q1_dsl());
  PresentedMorphism ident;
  for (size_t f = 0; f < q1.families().size(); ++f)
    ident.per_family.push_back({static_cast<int>(f), q1.families()[f].is_chain, 0});
  CHECK(check_presented_morphism(q1, q1, ident, 12).ok());
  auto ids = id_morphism(q1, q1, ident, 12);
  for (const auto& [k, v] : ids) CHECK(k == v);

  // two chains folding onto one: tail ideals map to tail ideals
  PresentedSystem two = parse(
      "family p chain increasing\nfamily q chain increasing\n"
      "reflexive p\nreflexive q\n");
  PresentedSystem one = parse("family c chain increasing\nreflexive c\n");
  PresentedMorphism fold;
  fold.per_family = {{0, true, 0}, {0, true, 0}};
  CHECK(check_presented_morphism(two, one, fold, 12).ok());
  auto folded = id_morphism(two, one, fold, 12);
  CHECK(folded.at("tail(p,0)") == "tail(c,0)");
  CHECK(folded.at("tail(q,0)") == "tail(c,0)");
  CHECK(folded.at("down(p[2])") == "down(c[2])");

  // collapsing a finite chain onto a reflexive point fails the law
  PresentedSystem chain = parse("family x singleton\nfamily y singleton\nrule x < y\n");
  PresentedSystem pt = parse("family z singleton\nreflexive z\n");
  PresentedMorphism collapse;
  collapse.per_family = {{0, false, 0}, {0, false, 0}};
  CHECK_FALSE(check_presented_morphism(chain, pt, collapse, 8).ok());
}

TEST_CASE("validate_completion_map: the canonical inclusion into id(P) is a rank map") {
  PresentedSystem base = parse(corpus::partition_base_dsl());
  CompletionResult comp = ideal_completion(base, 16);
  std::map<std::string, std::string> beta{{"tail(p,0)", "tail_p"}, {"tail(q,0)", "tail_q"}};
  CompletionMapReport rep = validate_completion_map(base, comp.system, beta, 16);
  CHECK(rep.conditions_pass());
  CHECK(rep.strongly_semi_trim.is_yes());
  CHECK(rep.rank.is_yes());
  CHECK(rep.beta_is_morphism);
}

TEST_CASE("validate_completion_map: mapping a tail into P kills strong semi-trimness") {
  PresentedSystem base = parse(corpus::partition_base_dsl());
  PresentedSystem q3 = parse(corpus::q3_dsl());
  std::map<std::string, std::string> beta{{"tail(p,0)", "r"}, {"tail(q,0)", "t"}};
  CompletionMapReport rep = validate_completion_map(base, q3, beta, 16);
  CHECK(rep.sups_match.is_yes());
  CHECK(rep.strict_pairs_covered.is_yes());
  CHECK(rep.strongly_semi_trim.is_no());
  CHECK(rep.rank.is_no());
}

TEST_CASE("validate_completion_map: the remark counterexample") {
  int b = 12;
  PresentedSystem p = parse(corpus::remark_p_dsl(b));
  PresentedSystem q = parse(corpus::remark_q_dsl(b));
  CompletionMapReport rep = validate_completion_map(p, q, corpus::remark_beta(b), b);
  CHECK(rep.embedding_iso.is_yes());
  CHECK(rep.sups_match.is_yes());
  CHECK(rep.strict_pairs_covered.is_yes());
  CHECK(rep.discrete_sups.is_yes());
  CHECK(rep.strongly_semi_trim.is_yes());
  CHECK(rep.rank.is_no());
  CHECK_FALSE(rep.beta_is_morphism);
  bool witness = false;
  for (const auto& w : rep.witnesses)
    if (w == "beta is not a morphism: no ideal L with tail(m,0) < L and L beta = s")
      witness = true;
  CHECK(witness);
}

namespace {

// Independent order oracle: breadth-first path search over rule instances
// with a generous index cap, no closure matrix involved.
bool leq_path_oracle(const PresentedSystem& sys, PElem x, PElem y, long cap) {
  if (x == y) return true;
  std::set<PElem> seen{x};
  std::vector<PElem> frontier{x};
  auto step = [&](PElem e, const RuleSide& lhs, const RuleSide& rhs) {
    std::vector<PElem> out;
    if (lhs.fam != e.fam) return out;
    bool chain_lhs = sys.families()[lhs.fam].is_chain;
    std::vector<long> ns;  // matching values of the quantified index
    if (lhs.indexed) {
      if (e.index < lhs.shift) return out;
      ns.push_back(e.index - lhs.shift);
    } else if (chain_lhs && e.index != lhs.fixed) {
      return out;
    } else if (rhs.indexed) {
      for (long n = 0; n <= cap; ++n) ns.push_back(n);  // one-sided universal
    } else {
      ns.push_back(0);
    }
    for (long n : ns) {
      PElem img{rhs.fam, -1};
      if (sys.families()[rhs.fam].is_chain) {
        img.index = rhs.indexed ? n + rhs.shift : rhs.fixed;
        if (img.index < 0 || img.index > cap) continue;
      }
      out.push_back(img);
    }
    return out;
  };
  while (!frontier.empty()) {
    std::vector<PElem> next;
    for (const auto& e : frontier)
      for (const auto& r : sys.rules())
        for (const auto& img : step(e, r.lhs, r.rhs)) {
          if (img == y) return true;
          if (seen.insert(img).second) next.push_back(img);
        }
    frontier = std::move(next);
  }
  return false;
}

}  // namespace

TEST_CASE("bounded closure agrees with a plain path search") {
  for (const auto& dsl : {corpus::q1_dsl(), corpus::q2_dsl(), corpus::q3_dsl(),
                          corpus::iso_p_dsl(), std::string(kNatOmegaTop),
                          std::string("family z chain none\nrule z[n] < z[n+2]\n"),
                          corpus::remark_q_dsl(8)}) {
    PresentedSystem sys = PresentedSystem::parse(dsl);
    BoundedView v(sys, 8);
    auto u = v.universe();
    for (const auto& x : u)
      for (const auto& y : u) {
        if (x == y) continue;
        CHECK(v.lt(x, y) == leq_path_oracle(sys, x, y, v.ext() + 32));
      }
  }
}

TEST_CASE("morphism checker accepts index shifts and rejects order reversal") {
  PresentedSystem c = parse("family c chain increasing\nreflexive c\n");
  PresentedSystem d = parse("family d chain increasing\nreflexive d\n");
  PresentedMorphism shift1;
  shift1.per_family = {{0, true, 1}};  // c[n] -> d[n+1]
  CHECK(check_presented_morphism(c, d, shift1, 10).ok());

  PresentedSystem down = parse("family d chain decreasing\nreflexive d\n");
  PresentedMorphism into_down;
  into_down.per_family = {{0, true, 0}};
  CHECK_FALSE(check_presented_morphism(c, down, into_down, 10).ok());
}

TEST_CASE("ideal_completion carries singleton members into the fresh element") {
  PresentedSystem sys = parse(
      "family x singleton\nfamily p chain increasing\nreflexive p\nrule x < p[0]\n");
  CompletionResult comp = ideal_completion(sys, 12);
  REQUIRE(comp.added == std::vector<std::string>{"tail_p"});
  BoundedView v(comp.system, 12);
  CHECK(v.lt(comp.system.parse_elem("x"), comp.system.parse_elem("tail_p")));
  CHECK(v.lt(comp.system.parse_elem("p[4]"), comp.system.parse_elem("tail_p")));
  CHECK(v.validate().ok());
}

TEST_CASE("bound monotonicity on randomly generated presentations") {
  std::mt19937_64 rng(0x5eedULL ^ 77);
  int built = 0;
  while (built < 60) {
    PresentedSystem sys;
    sys.add_family(PFamily{"a", true, ChainDir::increasing, rng() % 2 == 0});
    sys.add_family(PFamily{"b", true, rng() % 2 ? ChainDir::increasing : ChainDir::none,
                           rng() % 2 == 0});
    sys.add_family(PFamily{"r", false, ChainDir::none, rng() % 2 == 0});
    sys.add_rule({RuleSide{0, true, 0, -1}, RuleSide{0, true, 1, -1}});  // a successors
    int extra = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < extra; ++k) {
      switch (rng() % 4) {
        case 0: sys.add_rule({RuleSide{0, true, 0, -1}, RuleSide{2, false, 0, -1}}); break;
        case 1: sys.add_rule({RuleSide{1, true, 0, -1}, RuleSide{2, false, 0, -1}}); break;
        case 2:
          sys.add_rule({RuleSide{1, true, 0, -1},
                        RuleSide{0, true, static_cast<long>(rng() % 2), -1}});
          break;
        case 3: sys.add_rule({RuleSide{1, true, 1, -1}, RuleSide{1, true, 0, -1}}); break;
      }
    }
    try {
      if (!BoundedView(sys, 16).validate().ok()) continue;
    } catch (const Error&) {
      continue;
    }
    ++built;
    for (const auto& e : std::vector<PElem>{{0, 0}, {0, 3}, {1, 2}, {2, -1}}) {
      TriBool::V sep = TriBool::V::unknown, cmp = TriBool::V::unknown;
      for (int b : {6, 10, 14}) {
        QueryResult s = is_separated(sys, e, b);
        QueryResult c = is_compact(sys, e, b);
        if (sep != TriBool::V::unknown) CHECK(s.value.v == sep);
        if (cmp != TriBool::V::unknown) CHECK(c.value.v == cmp);
        if (!s.value.is_unknown()) sep = s.value.v;
        if (!c.value.is_unknown()) cmp = c.value.v;
      }
    }
  }
}
