// corpus.hpp --- built-in example systems and their expected classifications,
// runnable end to end so tests and the CLI can cite stable names.

#pragma once

#include "postone/cellspace.hpp"
#include "postone/completion.hpp"

namespace postone::corpus {

// Base system: two increasing chains p, q and a top r over the p-chain.
inline std::string partition_base_dsl() {
  return "family p chain increasing\n"
         "family q chain increasing\n"
         "family r singleton\n"
         "reflexive p\nreflexive q\nreflexive r\n"
         "rule p[n] < r\n"
         "hat base p q r\n";
}

// The three completions: s,t both; s merging both limits; t alone.
inline std::string q1_dsl() {
  return partition_base_dsl() +
         "family s singleton\nfamily t singleton\n"
         "reflexive s\nreflexive t\n"
         "rule p[n] < s\nrule s < r\nrule q[n] < t\n";
}
inline std::string q2_dsl() {
  return partition_base_dsl() +
         "family s singleton\nreflexive s\n"
         "rule p[n] < s\nrule q[n] < s\nrule s < r\n";
}
inline std::string q3_dsl() {
  return partition_base_dsl() +
         "family t singleton\nreflexive t\n"
         "rule q[n] < t\n";
}

// Decreasing chain a over incomparable reflexive b's with a common bottom c.
inline std::string iso_p_dsl() {
  return "family a chain decreasing\n"
         "family b chain none\n"
         "family c singleton\n"
         "reflexive b\n"
         "rule b[n] < a[n]\n"
         "rule c < b[n]\n"
         "hat base a b c\n";
}

// The completion-map counterexample: an increasing minima chain m below
// copies j1..jN of the naturals (m[k-1] < jk[0]), targets r and s. Every
// element is reflexive. N scales with the bound so that each exposed minimum
// keeps a witnessing tail while no tail swallows the whole minima chain.
inline std::string remark_p_dsl(int bound) {
  int n = std::max(2, bound - 1);
  std::string s = "family m chain increasing\nreflexive m\n";
  for (int k = 1; k <= n; ++k) {
    s += "family j" + std::to_string(k) + " chain increasing\n";
    s += "reflexive j" + std::to_string(k) + "\n";
  }
  for (int k = 1; k <= n; ++k)
    s += "rule m[" + std::to_string(k - 1) + "] < j" + std::to_string(k) + "[0]\n";
  std::string hat = "hat base m";
  for (int k = 1; k <= n; ++k) hat += " j" + std::to_string(k);
  return s + hat + "\n";
}

inline std::string remark_q_dsl(int bound) {
  int n = std::max(2, bound - 1);
  std::string s = remark_p_dsl(bound) +
                  "family r singleton\nfamily s singleton\n"
                  "reflexive r\nreflexive s\n"
                  "rule m[n] < r\nrule r < s\n";
  for (int k = 1; k <= n; ++k) s += "rule j" + std::to_string(k) + "[n] < s\n";
  return s;
}

inline std::map<std::string, std::string> remark_beta(int bound) {
  int n = std::max(2, bound - 1);
  std::map<std::string, std::string> beta;
  beta["tail(m,0)"] = "r";
  for (int k = 1; k <= n; ++k) beta["tail(j" + std::to_string(k) + ",0)"] = "s";
  return beta;
}

// Small finite presentations (no chain families).
inline std::string fence_dsl() {
  return "family x singleton\nfamily y singleton\nfamily z singleton\n"
         "rule x < z\nrule y < z\n";
}
inline std::string bowtie_dsl() {
  return "family a singleton\nfamily b singleton\nfamily c singleton\n"
         "reflexive c\n"
         "rule a < c\nrule b < c\n";
}

// --- runner ------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool ok = false;
};

struct Report {
  std::string name;
  std::vector<Check> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

namespace detail {

inline void expect(Report& rep, const std::string& name, const std::string& expected,
                   const std::string& actual) {
  rep.checks.push_back({name, expected, actual, expected == actual});
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace detail

inline std::vector<std::string> names() {
  return {"partition-types", "iso-p", "propn-maps-remark", "finite-systems"};
}

inline Report run(const std::string& name, int bound = 20) {
  Report rep;
  rep.name = name;
  if (name == "partition-types") {
    PresentedSystem base = PresentedSystem::parse(partition_base_dsl());
    PresentedSystem q1 = PresentedSystem::parse(q1_dsl());
    PresentedSystem q2 = PresentedSystem::parse(q2_dsl());
    PresentedSystem q3 = PresentedSystem::parse(q3_dsl());

    RankReport r1 = rank_criteria(q1, "base", bound);
    detail::expect(rep, "q1.strongly_semi_trim", "true", r1.strongly_semi_trim.value.str());
    detail::expect(rep, "q1.rank", "true", r1.rank.value.str());

    RankReport r2 = rank_criteria(q2, "base", bound);
    detail::expect(rep, "q2.strongly_semi_trim", "true", r2.strongly_semi_trim.value.str());
    detail::expect(rep, "q2.rank", "false", r2.rank.value.str());
    detail::expect(rep, "q2.rank.witness_ideal", "tail(q,0)", r2.rank.witness_ideal);
    detail::expect(rep, "q2.rank.witness_sup", "s", r2.rank.witness_sup);

    RankReport r3 = rank_criteria(q3, "base", bound);
    detail::expect(rep, "q3.strongly_semi_trim", "false", r3.strongly_semi_trim.value.str());
    detail::expect(rep, "q3.sst.witness_ideal", "tail(p,0)", r3.strongly_semi_trim.witness_ideal);
    detail::expect(rep, "q3.sst.witness_sup", "r", r3.strongly_semi_trim.witness_sup);
    detail::expect(rep, "q3.rank", "false", r3.rank.value.str());

    CompletionResult comp = ideal_completion(base, bound);
    detail::expect(rep, "completion.added", "2", std::to_string(comp.added.size()));
    detail::expect(rep, "completion.iso_q1", "true",
                   detail::bool_str(presented_iso_at_bound(comp.system, q1, bound).has_value()));
    bool all_compact = true;
    BoundedView v(base, bound);
    for (const auto& e : v.universe())
      if (!is_compact(comp.system, e, bound).value.is_yes()) all_compact = false;
    detail::expect(rep, "completion.base_compact", "true", detail::bool_str(all_compact));
  } else if (name == "iso-p") {
    PresentedSystem sys = PresentedSystem::parse(iso_p_dsl());
    BoundedView v(sys, bound);
    detail::expect(rep, "antisymmetric_at_bound", "true", detail::bool_str(v.validate().ok()));
    detail::expect(rep, "a5_above_b7", "true",
                   detail::bool_str(v.lt(sys.parse_elem("b[7]"), sys.parse_elem("a[5]"))));
    detail::expect(rep, "c_below_a9", "true",
                   detail::bool_str(v.lt(sys.parse_elem("c"), sys.parse_elem("a[9]"))));
    detail::expect(rep, "b3_b4_incomparable", "true",
                   detail::bool_str(!v.lt(sys.parse_elem("b[3]"), sys.parse_elem("b[4]")) &&
                                    !v.lt(sys.parse_elem("b[4]"), sys.parse_elem("b[3]"))));
    // L = {b_n, c} is a lower subset at bound
    bool lower = true;
    int bf = sys.family_index("b"), cf = sys.family_index("c");
    for (const auto& x : v.universe())
      for (const auto& y : v.universe())
        if ((y.fam == bf || y.fam == cf) && v.lt(x, y) && x.fam != bf && x.fam != cf)
          lower = false;
    detail::expect(rep, "L_lower_subset", "true", detail::bool_str(lower));
    // finite foundation {c} and f(c) = 1 on a truncation
    PoSystem trunc = truncate_to_posystem(sys, 8);
    Mask l = 0;
    for (int i = 0; i < trunc.size(); ++i)
      if (trunc.name(i)[0] == 'b' || trunc.name(i)[0] == 'c') l |= bit(i);
    Mask found = finite_foundation(trunc, l);
    detail::expect(rep, "foundation", "{c}",
                   postone::detail::mask_names(trunc, found));
    ExtendedPoSystem e;
    e.poset = trunc;
    e.lower = l;
    e.finite_sizes[trunc.index_or_fail("c")] = 1;
    detail::expect(rep, "eps_valid_f_c_1", "true", detail::bool_str(validate(e).ok()));
    // no non-principal ideals at a modest bound
    IdealDetection det = detect_ideals(v);
    int nonprincipal = 0;
    for (const auto& d : det.ideals)
      if (!d.principal()) ++nonprincipal;
    detail::expect(rep, "non_principal_ideals", "0", std::to_string(nonprincipal));
    detail::expect(rep, "detection_complete", "true", detail::bool_str(det.complete));
  } else if (name == "propn-maps-remark") {
    int b = std::min(bound, 12);  // the family count scales with the bound
    PresentedSystem p = PresentedSystem::parse(remark_p_dsl(b));
    PresentedSystem q = PresentedSystem::parse(remark_q_dsl(b));
    CompletionMapReport r = validate_completion_map(p, q, remark_beta(b), b);
    detail::expect(rep, "cond1_embedding", "true", r.embedding_iso.str());
    detail::expect(rep, "cond2_sups", "true", r.sups_match.str());
    detail::expect(rep, "cond3_strict_pairs", "true", r.strict_pairs_covered.str());
    detail::expect(rep, "cond4_discrete_sups", "true", r.discrete_sups.str());
    detail::expect(rep, "strongly_semi_trim", "true", r.strongly_semi_trim.str());
    detail::expect(rep, "rank", "false", r.rank.str());
    detail::expect(rep, "beta_is_morphism", "false", detail::bool_str(r.beta_is_morphism));
    std::string want = "beta is not a morphism: no ideal L with tail(m,0) < L and L beta = s";
    bool found = false;
    for (const auto& w : r.witnesses)
      if (w == want) found = true;
    detail::expect(rep, "witness", want, found ? want : "(missing)");
  } else if (name == "finite-systems") {
    for (const auto& [nm, dsl] :
         std::vector<std::pair<std::string, std::string>>{{"fence", fence_dsl()},
                                                          {"bowtie", bowtie_dsl()}}) {
      PresentedSystem sys = PresentedSystem::parse(dsl);
      CompletionResult comp = ideal_completion(sys, bound);
      detail::expect(rep, nm + ".added", "0", std::to_string(comp.added.size()));
      detail::expect(rep, nm + ".iso_input", "true",
                     detail::bool_str(presented_iso_at_bound(comp.system, sys, bound).has_value()));
    }
  } else {
    fail("CorpusMismatch", "no corpus entry named '" + name + "'");
  }
  return rep;
}

}  // namespace postone::corpus
