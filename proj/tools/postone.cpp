// postone --- batch CLI over PO systems, extended systems, cell-space models
// and finitely presented countable systems. Reports are JSON on stdout;
// exit 0 on success, 1 on domain errors, 2 on usage errors.

#include <iostream>

#include "CLI11.hpp"
#include "postone/completion.hpp"
#include "postone/json_io.hpp"

using namespace postone;

namespace {

bool g_pretty = false;

void emit(const Json& j) { std::cout << (g_pretty ? j.dump(2) : j.dump()) << "\n"; }

PresentedMorphism presented_morphism_from_json(const PresentedSystem& src,
                                               const PresentedSystem& dst, const Json& j) {
  if (!j.contains("families")) fail("BadInput", "a presented morphism needs 'families'");
  PresentedMorphism m;
  m.per_family.resize(src.families().size());
  std::vector<bool> seen(src.families().size(), false);
  for (const auto& [k, v] : j["families"].items()) {
    int f = src.family_index(k);
    if (f < 0) fail("BadInput", "unknown source family '" + k + "'");
    int g = dst.family_index(v.at("to").get<std::string>());
    if (g < 0) fail("BadInput", "unknown target family '" + v.at("to").get<std::string>() + "'");
    PresentedMorphism::Action act;
    act.to_fam = g;
    act.indexed = dst.families()[g].is_chain;
    act.shift = v.value("shift", 0);
    m.per_family[f] = act;
    seen[f] = true;
  }
  for (size_t f = 0; f < seen.size(); ++f)
    if (!seen[f]) fail("BadInput", "morphism misses family '" + src.families()[f].name + "'");
  return m;
}

Json tri_json(const TriBool& t) { return Json{{"value", t.str()}, {"bound", t.at_bound}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "PO systems, trim partitions of primitive Boolean spaces, and their completions.\n"
      "Reports are JSON on stdout; POSTONE_SEED reseeds the randomized test suites."};
  app.set_help_all_flag("--help-all");
  app.add_flag("--pretty", g_pretty, "indent JSON output");
  app.require_subcommand(1);

  std::string file, file2, file3, elem, hat = "base";
  int bound = 20, depth = 4, horizon = -1;
  std::vector<std::string> paths, paths_a, paths_b;

  // --- poset ---------------------------------------------------------------
  auto* poset = app.add_subcommand("poset", "finite PO system operations");
  poset->require_subcommand(1);
  auto* pval = poset->add_subcommand("validate", "check a PO system file");
  pval->add_option("file", file)->required();
  pval->callback([&] {
    PoSystem p = posystem_from_json(load_json_file(file));
    std::vector<std::string> discrete, minimal;
    for_each_bit(p.discrete(), [&](int i) { discrete.push_back(p.name(i)); });
    for_each_bit(p.minimal(p.all()), [&](int i) { minimal.push_back(p.name(i)); });
    emit(Json{{"valid", true},
              {"elements", p.size()},
              {"discrete", discrete},
              {"minimal", minimal}});
  });
  auto* piso = poset->add_subcommand("iso", "search for an isomorphism between two systems");
  piso->add_option("file1", file)->required();
  piso->add_option("file2", file2)->required();
  piso->callback([&] {
    PoSystem a = posystem_from_json(load_json_file(file));
    PoSystem b = posystem_from_json(load_json_file(file2));
    auto iso = find_iso(a, b);
    Json j{{"isomorphic", iso.has_value()}};
    if (iso) {
      Json map = Json::object();
      for (int i = 0; i < a.size(); ++i) map[a.name(i)] = b.name((*iso)[i]);
      j["map"] = map;
    }
    emit(j);
  });

  // --- simple images ---------------------------------------------------------
  auto* simg = app.add_subcommand("simple-image", "quotient by the maximal congruence");
  simg->add_option("file", file)->required();
  simg->callback([&] {
    PoSystem p = posystem_from_json(load_json_file(file));
    auto [s, proj] = simple_image(p);
    emit(Json{{"simple_image", to_json(s)}, {"projection", to_json(proj)["map"]}});
  });
  auto* issimple = app.add_subcommand("is-simple", "test for non-trivial congruences");
  issimple->add_option("file", file)->required();
  issimple->callback([&] {
    PoSystem p = posystem_from_json(load_json_file(file));
    emit(Json{{"simple", is_simple(p)}});
  });

  // --- extended systems --------------------------------------------------------
  auto* eps = app.add_subcommand("eps", "extended PO system operations");
  eps->require_subcommand(1);
  auto* eval_ = eps->add_subcommand("validate", "check (P, L, f)");
  eval_->add_option("file", file)->required();
  eval_->callback([&] {
    ExtendedPoSystem e = eps_from_json(load_json_file(file));
    Diagnostics d = validate(e);
    emit(Json{{"valid", d.ok()}, {"issues", d.issues}});
  });
  auto* eiso = eps->add_subcommand("iso", "isomorphism of extended systems");
  eiso->add_option("file1", file)->required();
  eiso->add_option("file2", file2)->required();
  eiso->callback([&] {
    ExtendedPoSystem a = eps_from_json(load_json_file(file));
    ExtendedPoSystem b = eps_from_json(load_json_file(file2));
    require_valid(a);
    require_valid(b);
    auto iso = iso_extended(a, b);
    Json j{{"isomorphic", iso.has_value()}};
    if (iso) {
      Json map = Json::object();
      for (int i = 0; i < a.poset.size(); ++i) map[a.poset.name(i)] = b.poset.name((*iso)[i]);
      j["map"] = map;
    }
    emit(j);
  });
  auto* eref = eps->add_subcommand("refines", "search a refinement witness src ≺ dst");
  eref->add_option("src", file)->required();
  eref->add_option("dst", file2)->required();
  eref->callback([&] {
    ExtendedPoSystem src = eps_from_json(load_json_file(file));
    ExtendedPoSystem dst = eps_from_json(load_json_file(file2));
    auto w = refines(src, dst);
    Json j{{"refines", w.has_value()}};
    if (w) j["witness"] = to_json(*w)["map"];
    emit(j);
  });
  auto* epush = eps->add_subcommand("pushforward", "push (Q, M, g) along a surjective morphism");
  epush->add_option("alpha", file)->required();
  epush->add_option("src", file2)->required();
  epush->callback([&] {
    Morphism alpha = morphism_from_json(load_json_file(file));
    ExtendedPoSystem src = eps_from_json(load_json_file(file2));
    emit(Json{{"eps", to_json(pushforward(alpha, src))}});
  });
  auto* efeas = eps->add_subcommand("feasible", "refinement feasibility along a morphism");
  efeas->add_option("dst", file)->required();
  efeas->add_option("alpha", file2)->required();
  efeas->callback([&] {
    ExtendedPoSystem dst = eps_from_json(load_json_file(file));
    Morphism alpha = morphism_from_json(load_json_file(file2));
    Feasibility f = refinement_feasible(dst, alpha);
    std::vector<std::string> foundation;
    for_each_bit(f.preimage_foundation, [&](int i) { foundation.push_back(alpha.source.name(i)); });
    emit(Json{{"feasible", f.feasible}, {"issues", f.issues}, {"foundation", foundation}});
  });

  // --- cell space ----------------------------------------------------------------
  auto* space = app.add_subcommand("space", "symbolic cell-space models");
  space->require_subcommand(1);
  auto add_model_cmd = [&](const char* name, const char* desc) {
    auto* c = space->add_subcommand(name, desc);
    c->add_option("model", file)->required();
    return c;
  };
  auto* sbuild = add_model_cmd("build", "build a model and summarize its root blocks");
  sbuild->add_option("--horizon", horizon, "unbounded roots to list");
  sbuild->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    int uroots = horizon >= 0 ? horizon : static_cast<int>(m.u_cycle().size());
    Json roots = Json::array();
    for (int r = 0; r < m.num_l_roots() + (m.u_cycle().empty() ? 0 : uroots); ++r)
      roots.push_back(Json{{"index", r}, {"type", m.poset().name(m.root_type(r))}});
    std::vector<std::string> cyc;
    for (int t : m.u_cycle()) cyc.push_back(m.poset().name(t));
    emit(Json{{"l_roots", m.num_l_roots()}, {"u_cycle", cyc}, {"roots", roots}});
  });
  auto* sverify = add_model_cmd("verify", "symbolic partition/trim checks to a depth");
  sverify->add_option("--depth", depth, "verification depth")->required();
  sverify->add_option("--horizon", horizon, "unbounded roots to check");
  sverify->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    emit(to_json(verify_model(m, depth, horizon)));
  });
  auto* sdec = add_model_cmd("decompose", "partition a compact open into trim sets");
  sdec->add_option("paths", paths, "tail paths")->required();
  sdec->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    CompactOpen a = open_from_paths(m, paths);
    Json parts = Json::array();
    for (const auto& part : decompose_trim(m, a))
      parts.push_back(Json{{"trim_type", m.poset().name(*trim_type(m, part))},
                           {"tails", to_json(part)}});
    emit(Json{{"parts", parts}});
  });
  auto* snf = add_model_cmd("nf", "normal form of a compact open");
  snf->add_option("paths", paths, "tail paths")->required();
  snf->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    CompactOpen a = open_from_paths(m, paths);
    Json j = to_json(normal_form(m, a));
    auto tt = trim_type(m, a);
    j["trim_type"] = tt ? Json(m.poset().name(*tt)) : Json(nullptr);
    j["type"] = [&] {
      std::vector<std::string> names;
      for_each_bit(type_of_open(m, a), [&](int i) { names.push_back(m.poset().name(i)); });
      return names;
    }();
    emit(j);
  });
  auto* shomeo = add_model_cmd("homeo", "compare normal forms of two compact opens");
  shomeo->add_option("--a", paths_a, "tail paths of the first set")->required();
  shomeo->add_option("--b", paths_b, "tail paths of the second set")->required();
  shomeo->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    NormalForm na = normal_form(m, open_from_paths(m, paths_a));
    NormalForm nb = normal_form(m, open_from_paths(m, paths_b));
    emit(Json{{"homeomorphic", nf_equal(na, nb)}});
  });
  auto* sdiag = add_model_cmd("diagram", "structure diagram and labeling morphism");
  sdiag->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    auto [d, label] = structure_diagram(m);
    emit(Json{{"diagram", to_json(d)},
              {"labeling", to_json(label)["map"]},
              {"iso_to_simple_image", true}});  // asserted during construction
  });
  auto* scons = add_model_cmd("consolidate", "relabel the model along a surjective morphism");
  scons->add_option("alpha", file2)->required();
  scons->add_option("--depth", depth, "alignment check depth");
  scons->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    Morphism alpha = morphism_from_json(load_json_file(file2));
    Consolidation v = consolidate(m, alpha);
    Diagnostics d = verify_consolidation(v, depth);
    emit(Json{{"eps", to_json(v.eps())},
              {"checks", Json{{"trim_alignment", d.ok()}, {"issues", d.issues}}}});
  });
  auto* srefine = add_model_cmd("refine", "build a finer model along a surjective morphism");
  srefine->add_option("alpha", file2)->required();
  srefine->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    Morphism alpha = morphism_from_json(load_json_file(file2));
    emit(to_json_model(refine(m, alpha)));
  });
  auto* sorb = add_model_cmd("orbits", "orbit diagram (ideal completion of the structure diagram)");
  sorb->callback([&] {
    CellModel m = model_from_json(load_json_file(file));
    emit(Json{{"orbit_diagram", to_json(orbit_diagram(m))}});
  });

  // --- presented systems ------------------------------------------------------------
  auto* inf = app.add_subcommand("inf", "finitely presented countable systems");
  inf->require_subcommand(1);
  auto add_inf_cmd = [&](const char* name, const char* desc) {
    auto* c = inf->add_subcommand(name, desc);
    c->add_option("--bound", bound, "index bound for decisions");
    c->add_option("file", file)->required();
    return c;
  };
  auto* iideals = add_inf_cmd("ideals", "detected ideals at the bound");
  iideals->callback([&] {
    PresentedSystem sys = PresentedSystem::parse(load_text_file(file));
    BoundedView v(sys, bound);
    Diagnostics val = v.validate();
    if (!val.ok()) fail("AntisymmetryViolation", val.issues.front());
    IdealDetection det = detect_ideals(v);
    Json ideals = Json::array();
    for (const auto& d : det.ideals) {
      Json j{{"name", d.ref.name(sys)},
             {"kind", d.principal() ? "principal" : "chain_tail"},
             {"size_at_bound", d.carrier.size()}};
      if (!d.merged_aliases.empty()) j["equal_to_bound"] = d.merged_aliases;
      ideals.push_back(j);
    }
    emit(Json{{"ideals", ideals}, {"complete", det.complete}, {"notes", det.notes}});
  });
  auto* icomplete = add_inf_cmd("complete", "ideal completion as a new presentation");
  icomplete->callback([&] {
    PresentedSystem sys = PresentedSystem::parse(load_text_file(file));
    CompletionResult comp = ideal_completion(sys, bound);
    Json fams = Json::array();
    for (const auto& f : comp.system.families())
      fams.push_back(Json{{"name", f.name},
                          {"kind", f.is_chain ? "chain" : "singleton"},
                          {"reflexive", f.reflexive}});
    emit(Json{{"added", comp.added}, {"families", fams}});
  });
  auto* isep = add_inf_cmd("separated", "is the element separated?");
  isep->add_option("elem", elem)->required();
  isep->callback([&] {
    PresentedSystem sys = PresentedSystem::parse(load_text_file(file));
    emit(Json{{"separated", to_json(is_separated(sys, sys.parse_elem(elem), bound))}});
  });
  auto* icomp = add_inf_cmd("compact", "is the element compact?");
  icomp->add_option("elem", elem)->required();
  icomp->callback([&] {
    PresentedSystem sys = PresentedSystem::parse(load_text_file(file));
    emit(Json{{"compact", to_json(is_compact(sys, sys.parse_elem(elem), bound))}});
  });
  auto* irank = add_inf_cmd("rank", "rank-partition criteria for a marked subsystem");
  irank->add_option("--hat", hat, "marked sub-presentation name");
  irank->callback([&] {
    PresentedSystem sys = PresentedSystem::parse(load_text_file(file));
    RankReport r = rank_criteria(sys, hat, bound);
    emit(Json{{"strongly_semi_trim", to_json(r.strongly_semi_trim)},
              {"rank", to_json(r.rank)}});
  });
  auto* iidm = add_inf_cmd("idmorph", "map detected ideals along a presented morphism");
  iidm->add_option("dst", file2)->required();
  iidm->add_option("map", file3)->required();
  iidm->callback([&] {
    PresentedSystem src = PresentedSystem::parse(load_text_file(file));
    PresentedSystem dst = PresentedSystem::parse(load_text_file(file2));
    PresentedMorphism m = presented_morphism_from_json(src, dst, load_json_file(file3));
    emit(Json{{"ideal_map", id_morphism(src, dst, m, bound)}});
  });
  auto* ichk = add_inf_cmd("checkmap", "validate a candidate completion map");
  ichk->add_option("q", file2)->required();
  ichk->add_option("beta", file3)->required();
  ichk->callback([&] {
    PresentedSystem p = PresentedSystem::parse(load_text_file(file));
    PresentedSystem q = PresentedSystem::parse(load_text_file(file2));
    std::map<std::string, std::string> beta =
        load_json_file(file3).at("ideals").get<std::map<std::string, std::string>>();
    CompletionMapReport r = validate_completion_map(p, q, beta, bound);
    emit(Json{{"conditions",
               Json{{"1_embedding", tri_json(r.embedding_iso)},
                    {"2_sups", tri_json(r.sups_match)},
                    {"3_strict_pairs", tri_json(r.strict_pairs_covered)},
                    {"4_discrete_sups", tri_json(r.discrete_sups)}}},
              {"strongly_semi_trim", tri_json(r.strongly_semi_trim)},
              {"rank", tri_json(r.rank)},
              {"beta_is_morphism", r.beta_is_morphism},
              {"witnesses", r.witnesses}});
  });

  // --- corpus --------------------------------------------------------------------------
  auto* corp = app.add_subcommand("corpus", "run a built-in example end to end");
  std::string corpus_name;
  corp->add_option("name", corpus_name)->required();
  corp->add_option("--bound", bound, "index bound for decisions");
  corp->callback([&] {
    corpus::Report rep = corpus::run(corpus_name, bound);
    emit(to_json(rep));
    if (!rep.ok()) fail("CorpusMismatch", "corpus '" + corpus_name + "' deviates; see checks");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const Error& e) {
    emit(Json{{"error", Json{{"kind", e.kind()}, {"message", e.what()}}}});
    return 1;
  } catch (const std::exception& e) {
    emit(Json{{"error", Json{{"kind", "Internal"}, {"message", e.what()}}}});
    return 1;
  }
  return 0;
}
