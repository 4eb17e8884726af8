// Shared helpers for the test suites: seeded RNG and random generators for
// PO systems, congruences, and extended systems. The seed comes from the
// POSTONE_SEED environment variable when set, so property runs are
// reproducible and re-seedable.

#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "postone/cellspace.hpp"
#include "postone/extended.hpp"

namespace testsupport {

inline std::uint64_t seed() {
  if (const char* s = std::getenv("POSTONE_SEED")) return std::strtoull(s, nullptr, 10);
  return 0x9e3779b97f4a7c15ull;
}

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive
  return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random PO system on n ≤ 8 elements: edges follow index order (so the
// closure is automatically antisymmetric), reflexive flags independent.
inline postone::PoSystem random_posystem(Rng& rng, int n, int edge_percent = 35,
                                         int reflexive_percent = 30) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i) {
    if (pick(rng, 0, 99) < reflexive_percent) pairs.emplace_back(names[i], names[i]);
    for (int j = i + 1; j < n; ++j)
      if (pick(rng, 0, 99) < edge_percent) pairs.emplace_back(names[i], names[j]);
  }
  return postone::PoSystem::generate(names, pairs);
}

inline postone::Mask random_lower(Rng& rng, const postone::PoSystem& p, int percent = 50) {
  postone::Mask s = 0;
  for (int i = 0; i < p.size(); ++i)
    if (pick(rng, 0, 99) < percent) s |= postone::bit(i);
  return p.down_closure(s);
}

inline postone::ExtendedPoSystem random_eps(Rng& rng, const postone::PoSystem& p) {
  postone::ExtendedPoSystem e;
  e.poset = p;
  e.lower = random_lower(rng, p);
  postone::for_each_bit(e.l_min_d(), [&](int i) { e.finite_sizes[i] = pick(rng, 1, 3); });
  return e;
}

inline postone::Partition random_congruence(Rng& rng, const postone::PoSystem& p) {
  auto all = postone::all_congruences(p);
  return all[rng() % all.size()];
}

// Random valid model plus compact-open sampling helpers.

inline postone::CellModel random_model(Rng& rng, int max_elems = 6) {
  postone::PoSystem p = random_posystem(rng, pick(rng, 1, max_elems));
  return postone::build_model(random_eps(rng, p));
}

// All cell addresses to the given depth (children bounded by the cycle).
inline std::vector<postone::CellAddr> sample_cells(const postone::CellModel& m, int depth) {
  std::vector<postone::CellAddr> out;
  std::function<void(postone::CellAddr, int)> rec = [&](postone::CellAddr a, int rem) {
    out.push_back(a);
    if (rem == 0) return;
    int k = static_cast<int>(m.cycle(m.type_of(a)).size());
    for (int j = 1; j <= k; ++j) rec(a.child(j), rem - 1);
  };
  int nroots = m.num_l_roots() + static_cast<int>(m.u_cycle().size());
  for (int r = 0; r < nroots; ++r) rec(postone::CellAddr{r, {}}, depth);
  return out;
}

inline postone::CellAddr random_cell(Rng& rng, const postone::CellModel& m, int max_depth = 3) {
  int nroots = m.num_l_roots() + static_cast<int>(m.u_cycle().size());
  postone::CellAddr a{pick(rng, 0, nroots - 1), {}};
  int d = pick(rng, 0, max_depth);
  for (int i = 0; i < d; ++i) {
    int k = static_cast<int>(m.cycle(m.type_of(a)).size());
    if (k == 0) break;
    a = a.child(pick(rng, 1, std::min(4, k + 2)));
  }
  return a;
}

inline postone::CompactOpen random_open(Rng& rng, const postone::CellModel& m,
                                        int max_tails = 4) {
  std::vector<postone::Tail> ts;
  int n = pick(rng, 1, max_tails);
  for (int i = 0; i < n; ++i) ts.push_back({random_cell(rng, m), pick(rng, 1, 3)});
  return postone::make_open(m, std::move(ts));
}

inline bool point_in_open(const postone::CellModel& m, const postone::CellAddr& spine,
                          const postone::CompactOpen& a) {
  for (const auto& t : a.tails)
    if (m.spine_in_tail(spine, t)) return true;
  return false;
}

// A relabeled copy of P (names suffixed and therefore re-sorted), returned
// with the relabeling as a morphism P → copy.
inline std::pair<postone::PoSystem, postone::Morphism> relabeled_copy(const postone::PoSystem& p,
                                                                      const std::string& sfx) {
  std::vector<std::string> names;
  for (const auto& n : p.names()) names.push_back(n + sfx);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [a, b] : p.relation_pairs()) pairs.emplace_back(a + sfx, b + sfx);
  postone::PoSystem q = postone::PoSystem::generate(names, pairs);
  postone::Morphism m{p, q, std::vector<int>(p.size())};
  for (int i = 0; i < p.size(); ++i) m.map[i] = q.index_or_fail(p.name(i) + sfx);
  return {std::move(q), std::move(m)};
}

}  // namespace testsupport
