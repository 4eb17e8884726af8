// presented.hpp --- finitely presented countable PO systems
//
// A presentation is a finite list of families (singletons and ω-chains) with
// index-shift rule atoms: within-chain successors, cross-family shifted
// relations F[n+a] < G[n+b], fixed-index relations and singleton relations.
// Order queries are decided by bounded path composition over an index
// universe extended by a shift-dependent slack; antisymmetry is validated
// exhaustively up to the bound. Queries whose truth cannot be certified at
// the bound return unknown(bound) rather than guessing.
//
// Ideal detection covers principal ideals, tails of ascending chains, and
// certified finite joins. For this rule language a directed lower set
// visible at the bound has one of those shapes unless a family carries
// non-contiguous ascent, in which case detection marks itself incomplete
// and dependent queries fail closed.

#pragma once

#include <bit>
#include <set>
#include <sstream>

#include "postone/poset.hpp"

namespace postone {

// --- three-valued answers -----------------------------------------------------

struct TriBool {
  enum class V { no, yes, unknown };
  V v = V::unknown;
  int at_bound = 0;

  static TriBool yes_at(int b) { return {V::yes, b}; }
  static TriBool no_at(int b) { return {V::no, b}; }
  static TriBool unknown_at(int b) { return {V::unknown, b}; }
  bool is_yes() const { return v == V::yes; }
  bool is_no() const { return v == V::no; }
  bool is_unknown() const { return v == V::unknown; }
  std::string str() const {
    switch (v) {
      case V::yes: return "true";
      case V::no: return "false";
      default: return "unknown";
    }
  }
};

// --- presentations --------------------------------------------------------------

enum class ChainDir { none, increasing, decreasing };

struct PFamily {
  std::string name;
  bool is_chain = false;
  ChainDir dir = ChainDir::none;
  bool reflexive = false;
};

struct PElem {
  int fam = -1;
  long index = -1;  // -1 for singleton families
  auto operator<=>(const PElem&) const = default;
};

struct RuleSide {
  int fam = -1;
  bool indexed = false;  // F[n+shift], universally quantified n
  long shift = 0;
  long fixed = -1;  // fixed chain index; -1 for singletons
};

struct PRule {
  RuleSide lhs, rhs;
};

class PresentedSystem {
public:
  const std::vector<PFamily>& families() const { return fams_; }
  const std::vector<PRule>& rules() const { return rules_; }
  const std::map<std::string, std::vector<int>>& hats() const { return hats_; }

  int family_index(const std::string& n) const {
    for (size_t i = 0; i < fams_.size(); ++i)
      if (fams_[i].name == n) return static_cast<int>(i);
    return -1;
  }

  // Largest universal index shift; fixed indices are kept separate since
  // they bound jump targets, not climbing rates.
  long max_shift() const {
    long s = 1;
    for (const auto& r : rules_) s = std::max({s, r.lhs.shift, r.rhs.shift});
    return s;
  }
  long max_fixed_index() const {
    long s = 0;
    for (const auto& r : rules_) s = std::max({s, r.lhs.fixed, r.rhs.fixed});
    return s;
  }

  std::string elem_name(PElem e) const {
    const PFamily& f = fams_[e.fam];
    if (!f.is_chain) return f.name;
    return f.name + "[" + std::to_string(e.index) + "]";
  }

  PElem parse_elem(const std::string& s) const {
    auto lb = s.find('[');
    if (lb == std::string::npos) {
      int f = family_index(s);
      if (f < 0 || fams_[f].is_chain) fail("UnknownElement", "no singleton named '" + s + "'");
      return {f, -1};
    }
    if (s.back() != ']') fail("UnknownElement", "malformed element '" + s + "'");
    int f = family_index(s.substr(0, lb));
    if (f < 0 || !fams_[f].is_chain) fail("UnknownElement", "no chain family in '" + s + "'");
    long idx = 0;
    try {
      idx = std::stol(s.substr(lb + 1, s.size() - lb - 2));
    } catch (...) {
      fail("UnknownElement", "bad index in '" + s + "'");
    }
    if (idx < 0) fail("UnknownElement", "negative index in '" + s + "'");
    return {f, idx};
  }

  // DSL: family <name> chain increasing|decreasing|none | family <name> singleton
  //      reflexive <name> | rule <side> < <side> | hat <name> <family>...
  static PresentedSystem parse(const std::string& text) {
    PresentedSystem sys;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::istringstream ls(line);
      std::string word;
      if (!(ls >> word)) continue;
      auto err = [&](const std::string& msg) {
        fail("ParseError", "line " + std::to_string(lineno) + ": " + msg);
      };
      if (word == "family") {
        std::string name, kind;
        if (!(ls >> name >> kind)) err("family needs a name and a kind");
        PFamily f;
        f.name = name;
        if (sys.family_index(name) >= 0) err("duplicate family '" + name + "'");
        if (kind == "singleton") {
          f.is_chain = false;
        } else if (kind == "chain") {
          f.is_chain = true;
          std::string dir;
          if (!(ls >> dir)) err("chain family needs a direction");
          if (dir == "increasing")
            f.dir = ChainDir::increasing;
          else if (dir == "decreasing")
            f.dir = ChainDir::decreasing;
          else if (dir == "none")
            f.dir = ChainDir::none;
          else
            err("unknown chain direction '" + dir + "'");
        } else {
          err("unknown family kind '" + kind + "'");
        }
        sys.fams_.push_back(f);
      } else if (word == "reflexive") {
        std::string name;
        if (!(ls >> name)) err("reflexive needs a family name");
        int f = sys.family_index(name);
        if (f < 0) err("unknown family '" + name + "'");
        sys.fams_[f].reflexive = true;
      } else if (word == "rule") {
        std::string l, cmp, r;
        if (!(ls >> l >> cmp >> r) || cmp != "<") err("rule must look like 'rule lhs < rhs'");
        PRule rule{sys.parse_side(l, err), sys.parse_side(r, err)};
        if (rule.lhs.fam == rule.rhs.fam && rule.lhs.indexed == rule.rhs.indexed &&
            rule.lhs.shift == rule.rhs.shift && rule.lhs.fixed == rule.rhs.fixed)
          err("a rule may not relate an element to itself; use 'reflexive'");
        sys.rules_.push_back(rule);
      } else if (word == "hat") {
        std::string name;
        if (!(ls >> name)) err("hat needs a name");
        std::vector<int> fams;
        std::string f;
        while (ls >> f) {
          int fi = sys.family_index(f);
          if (fi < 0) err("unknown family '" + f + "' in hat");
          fams.push_back(fi);
        }
        sys.hats_[name] = fams;
      } else {
        err("unknown directive '" + word + "'");
      }
    }
    // successor rules implied by the declared direction
    for (int f = 0; f < static_cast<int>(sys.fams_.size()); ++f) {
      const PFamily& fam = sys.fams_[f];
      if (!fam.is_chain || fam.dir == ChainDir::none) continue;
      RuleSide lo{f, true, 0, -1}, hi{f, true, 1, -1};
      if (fam.dir == ChainDir::increasing)
        sys.rules_.push_back({lo, hi});
      else
        sys.rules_.push_back({hi, lo});
    }
    return sys;
  }

  void add_family(PFamily f) { fams_.push_back(std::move(f)); }
  void add_rule(PRule r) { rules_.push_back(r); }
  void set_hat(const std::string& name, std::vector<int> fams) { hats_[name] = std::move(fams); }

  bool chains_present() const {
    for (const auto& f : fams_)
      if (f.is_chain) return true;
    return false;
  }

private:
  template <typename Err>
  RuleSide parse_side(const std::string& s, Err&& err) const {
    RuleSide side;
    auto lb = s.find('[');
    if (lb == std::string::npos) {
      side.fam = family_index(s);
      if (side.fam < 0) err("unknown family '" + s + "'");
      if (fams_[side.fam].is_chain) err("chain family '" + s + "' needs an index");
      return side;
    }
    if (s.back() != ']') err("malformed side '" + s + "'");
    side.fam = family_index(s.substr(0, lb));
    if (side.fam < 0 || !fams_[side.fam].is_chain) err("unknown chain family in '" + s + "'");
    std::string idx = s.substr(lb + 1, s.size() - lb - 2);
    if (!idx.empty() && idx[0] == 'n') {
      side.indexed = true;
      if (idx == "n")
        side.shift = 0;
      else if (idx.size() > 2 && idx[1] == '+') {
        try {
          side.shift = std::stol(idx.substr(2));
        } catch (...) {
          err("bad shift in '" + s + "'");
        }
      } else {
        err("indexed side must be [n] or [n+k] in '" + s + "'");
      }
    } else {
      try {
        side.fixed = std::stol(idx);
      } catch (...) {
        err("bad index in '" + s + "'");
      }
      if (side.fixed < 0) err("negative index in '" + s + "'");
    }
    return side;
  }

  std::vector<PFamily> fams_;
  std::vector<PRule> rules_;
  std::map<std::string, std::vector<int>> hats_;
};

// --- bounded order view ----------------------------------------------------------

namespace detail {

class Bits {
public:
  Bits() = default;
  explicit Bits(size_t n) : n_(n), w_((n + 63) / 64, 0) {}
  void set(size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  Bits& operator|=(const Bits& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  bool subset_of(const Bits& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  size_t count() const {
    size_t c = 0;
    for (auto w : w_) c += static_cast<size_t>(std::popcount(w));
    return c;
  }
  bool operator==(const Bits&) const = default;
  size_t size() const { return n_; }

private:
  size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace detail

// Materialized order relation on all elements with index up to an extended
// bound. The extension leaves room for rule paths that overshoot the
// queried indices; with index-shift atoms path arithmetic is monotone, so
// the slack below is sufficient at desk scale.
class BoundedView {
public:
  BoundedView(const PresentedSystem& sys, int bound) : sys_(&sys), bound_(bound) {
    long slack =
        sys.max_shift() * (static_cast<long>(sys.families().size()) + 2) + 8;
    ext_ = std::max<long>(bound, sys.max_fixed_index() + 1) + slack;
    base_.assign(sys.families().size() + 1, 0);
    for (size_t f = 0; f < sys.families().size(); ++f)
      base_[f + 1] = base_[f] + (sys.families()[f].is_chain ? ext_ + 1 : 1);
    size_t n = static_cast<size_t>(base_.back());
    above_.assign(n, detail::Bits(n));
    for (const auto& r : sys.rules()) {
      if (r.lhs.indexed || r.rhs.indexed) {
        for (long k = 0; k <= ext_; ++k) {
          std::optional<PElem> a = instantiate(r.lhs, k), b = instantiate(r.rhs, k);
          if (!a || !b) continue;
          above_[id(*a)].set(id(*b));
          if (!r.lhs.indexed && !r.rhs.indexed) break;
        }
      } else {
        PElem a{r.lhs.fam, r.lhs.fixed}, b{r.rhs.fam, r.rhs.fixed};
        if (valid(a) && valid(b)) above_[id(a)].set(id(b));
      }
    }
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        if (above_[i].get(k)) above_[i] |= above_[k];
  }

  const PresentedSystem& system() const { return *sys_; }
  int bound() const { return bound_; }
  long ext() const { return ext_; }

  bool valid(PElem e) const {
    if (e.fam < 0 || e.fam >= static_cast<int>(sys_->families().size())) return false;
    if (sys_->families()[e.fam].is_chain) return e.index >= 0 && e.index <= ext_;
    return true;
  }

  bool lt(PElem a, PElem b) const {
    if (!valid(a) || !valid(b)) fail("UnknownElement", "element outside the bounded universe");
    if (a == b) return sys_->families()[a.fam].reflexive;
    return above_[id(a)].get(id(b));
  }
  bool leq(PElem a, PElem b) const { return a == b || lt(a, b); }

  // Exposed elements: indices up to the queried bound only.
  std::vector<PElem> universe() const { return universe_to(bound_); }

  // The full internal universe, slack included; used where carriers must be
  // distinguished beyond the queried bound.
  std::vector<PElem> universe_ext() const { return universe_to(ext_); }

  Diagnostics validate() const {
    Diagnostics d;
    auto u = universe();
    for (const auto& a : u)
      for (const auto& b : u)
        if (a < b && lt(a, b) && lt(b, a))
          d.issues.push_back("antisymmetry fails at bound " + std::to_string(bound_) + ": " +
                             sys_->elem_name(a) + " < " + sys_->elem_name(b) + " < " +
                             sys_->elem_name(a));
    return d;
  }

private:
  std::vector<PElem> universe_to(long max_index) const {
    std::vector<PElem> out;
    for (size_t f = 0; f < sys_->families().size(); ++f) {
      if (sys_->families()[f].is_chain)
        for (long i = 0; i <= max_index; ++i) out.push_back({static_cast<int>(f), i});
      else
        out.push_back({static_cast<int>(f), -1});
    }
    return out;
  }

  std::optional<PElem> instantiate(const RuleSide& s, long n) const {
    if (!s.indexed) {
      PElem e{s.fam, s.fixed};
      return valid(e) ? std::optional<PElem>(e) : std::nullopt;
    }
    PElem e{s.fam, n + s.shift};
    return valid(e) ? std::optional<PElem>(e) : std::nullopt;
  }

  size_t id(PElem e) const {
    return static_cast<size_t>(base_[e.fam] + (sys_->families()[e.fam].is_chain ? e.index : 0));
  }

  const PresentedSystem* sys_;
  int bound_;
  long ext_;
  std::vector<long> base_;
  std::vector<detail::Bits> above_;
};

// --- ideals ------------------------------------------------------------------------

struct IdealRef {
  enum class Kind { principal, chain_tail, join };
  Kind kind = Kind::principal;
  PElem gen;                    // principal
  int fam = -1;                 // chain_tail
  long from = 0;                // chain_tail
  std::vector<IdealRef> parts;  // join

  std::string name(const PresentedSystem& sys) const {
    switch (kind) {
      case Kind::principal: return "down(" + sys.elem_name(gen) + ")";
      case Kind::chain_tail:
        return "tail(" + sys.families()[fam].name + "," + std::to_string(from) + ")";
      default: {
        std::string s = "join(";
        for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i].name(sys);
        return s + ")";
      }
    }
  }
};

struct DetectedIdeal {
  IdealRef ref;
  std::set<PElem> carrier;      // exposed part of the downward closure
  std::set<PElem> carrier_ext;  // closure over the slack universe; tells a
                                // tail apart from the last exposed principal
  bool principal() const { return ref.kind == IdealRef::Kind::principal; }
  std::vector<std::string> merged_aliases;  // refs with the same closure at bound
};

struct IdealDetection {
  std::vector<DetectedIdeal> ideals;
  bool complete = true;
  std::vector<std::string> notes;
};

namespace detail {

inline std::set<PElem> down_closure_within(const BoundedView& v, const std::vector<PElem>& gens,
                                           const std::vector<PElem>& space,
                                           const std::vector<int>* fam_filter) {
  std::set<PElem> out;
  for (const auto& x : space) {
    if (fam_filter &&
        std::find(fam_filter->begin(), fam_filter->end(), x.fam) == fam_filter->end())
      continue;
    for (const auto& g : gens)
      if (v.leq(x, g)) {
        out.insert(x);
        break;
      }
  }
  return out;
}

inline std::set<PElem> down_closure(const BoundedView& v, const std::vector<PElem>& gens,
                                    const std::vector<int>* fam_filter) {
  return down_closure_within(v, gens, v.universe(), fam_filter);
}

// Tail generators run into the slack so that closures stay honest past the
// queried bound.
inline std::vector<PElem> generators(const BoundedView& v, const IdealRef& r) {
  std::vector<PElem> out;
  switch (r.kind) {
    case IdealRef::Kind::principal: out.push_back(r.gen); break;
    case IdealRef::Kind::chain_tail:
      for (long i = r.from; i <= v.ext(); ++i) out.push_back({r.fam, i});
      break;
    case IdealRef::Kind::join:
      for (const auto& p : r.parts) {
        auto g = generators(v, p);
        out.insert(out.end(), g.begin(), g.end());
      }
      break;
  }
  return out;
}

inline bool directed_at_bound(const BoundedView& v, const std::set<PElem>& carrier) {
  for (const auto& x : carrier)
    for (const auto& y : carrier) {
      bool ub = false;
      for (const auto& z : carrier)
        if (v.leq(x, z) && v.leq(y, z)) {
          ub = true;
          break;
        }
      if (!ub) return false;
    }
  return true;
}

}  // namespace detail

// Detects principal ideals and ascending chain tails; duplicates (equal
// closures over the slack universe) are merged and recorded. Joins of two
// ideals are never emitted: a directed union forces one closure inside the
// other (a common upper bound of x ∈ A−B̄ and y ∈ B−Ā would witness x ∈ B̄
// or y ∈ Ā), so a certified join always deduplicates. `fam_filter`
// restricts to a sub-presentation (ideals OF that subset).
inline IdealDetection detect_ideals(const BoundedView& v,
                                    const std::vector<int>* fam_filter = nullptr) {
  const PresentedSystem& sys = v.system();
  IdealDetection det;
  auto filtered = [&](int fam) {
    return !fam_filter ||
           std::find(fam_filter->begin(), fam_filter->end(), fam) != fam_filter->end();
  };
  std::vector<PElem> space_ext = v.universe_ext();

  auto push = [&](IdealRef ref) {
    std::vector<PElem> gens = detail::generators(v, ref);
    std::set<PElem> carrier = detail::down_closure(v, gens, fam_filter);
    if (carrier.empty()) return;
    std::set<PElem> ext = detail::down_closure_within(v, gens, space_ext, fam_filter);
    for (auto& existing : det.ideals)
      if (existing.carrier_ext == ext) {
        existing.merged_aliases.push_back(ref.name(sys));
        return;
      }
    det.ideals.push_back({std::move(ref), std::move(carrier), std::move(ext), {}});
  };

  for (const auto& e : v.universe())
    if (filtered(e.fam)) push({IdealRef::Kind::principal, e, -1, 0, {}});

  for (int f = 0; f < static_cast<int>(sys.families().size()); ++f) {
    if (!sys.families()[f].is_chain || !filtered(f)) continue;
    bool contiguous = true;
    for (long i = 0; i + 1 <= v.bound(); ++i)
      if (!v.lt({f, i}, {f, i + 1})) {
        contiguous = false;
        break;
      }
    if (contiguous) {
      push({IdealRef::Kind::chain_tail, {}, f, 0, {}});
      continue;
    }
    bool ascent = false;
    for (long i = 0; i <= v.bound() && !ascent; ++i)
      for (long j = i + 1; j <= v.bound() && !ascent; ++j)
        if (v.lt({f, i}, {f, j})) ascent = true;
    if (ascent) {
      det.complete = false;
      det.notes.push_back("family '" + sys.families()[f].name +
                          "' has non-contiguous ascent; ideal detection is incomplete");
    }
  }
  return det;
}

inline bool ideal_contains(const DetectedIdeal& d, PElem x) { return d.carrier_ext.count(x) > 0; }

// Strict order of id(P) on detected ideals: proper closure inclusion, plus
// the diagonal rule (an ideal is below itself unless it is the principal
// ideal of a discrete element).
inline bool ideal_lt(const PresentedSystem& sys, const DetectedIdeal& a, const DetectedIdeal& b) {
  if (&a == &b || a.carrier_ext == b.carrier_ext)
    return !a.principal() || sys.families()[a.ref.gen.fam].reflexive;
  for (const auto& x : a.carrier_ext)
    if (!b.carrier_ext.count(x)) return false;
  return true;
}

// Least upper bound of the ideal in the exposed universe, decided at bound.
inline std::optional<PElem> sup_at(const BoundedView& v, const DetectedIdeal& d) {
  std::vector<PElem> ubs;
  for (const auto& u : v.universe()) {
    bool ok = true;
    for (const auto& g : detail::generators(v, d.ref))
      if (!v.leq(g, u)) {
        ok = false;
        break;
      }
    if (ok) ubs.push_back(u);
  }
  for (const auto& u0 : ubs) {
    bool least = true;
    for (const auto& u : ubs)
      if (!v.leq(u0, u)) {
        least = false;
        break;
      }
    if (least) return u0;
  }
  return std::nullopt;
}

// --- separated / compact / rank criteria ---------------------------------------------

struct QueryResult {
  TriBool value;
  std::string witness_ideal;  // empty when not applicable
  std::string witness_sup;
};

// Separated: p is not the supremum of a strictly increasing sequence
// (equivalently, of a non-principal ideal).
inline QueryResult is_separated(const PresentedSystem& sys, PElem p, int bound) {
  BoundedView v(sys, bound);
  IdealDetection det = detect_ideals(v);
  for (const auto& d : det.ideals) {
    if (d.principal()) continue;
    auto s = sup_at(v, d);
    if (s && *s == p) return {TriBool::no_at(bound), d.ref.name(sys), sys.elem_name(*s)};
  }
  if (det.complete) return {TriBool::yes_at(bound), "", ""};
  return {TriBool::unknown_at(bound), "", ""};
}

// Compact: p belongs to every ideal whose supremum dominates it.
inline QueryResult is_compact(const PresentedSystem& sys, PElem p, int bound) {
  BoundedView v(sys, bound);
  IdealDetection det = detect_ideals(v);
  for (const auto& d : det.ideals) {
    auto s = sup_at(v, d);
    if (!s) continue;  // no supremum: the condition is vacuous for this ideal
    if (v.leq(p, *s) && !ideal_contains(d, p))
      return {TriBool::no_at(bound), d.ref.name(sys), sys.elem_name(*s)};
  }
  if (det.complete) return {TriBool::yes_at(bound), "", ""};
  return {TriBool::unknown_at(bound), "", ""};
}

// Weak separation of the marked sub-presentation P̂ inside P: no element of
// P̂ is the supremum (in P) of a non-principal ideal of P̂ that misses it.
inline QueryResult weakly_separated(const PresentedSystem& sys, const std::string& hat,
                                    int bound) {
  auto it = sys.hats().find(hat);
  if (it == sys.hats().end()) fail("UnknownElement", "no hat named '" + hat + "'");
  BoundedView v(sys, bound);
  IdealDetection det = detect_ideals(v, &it->second);
  for (const auto& d : det.ideals) {
    if (d.principal()) continue;
    auto s = sup_at(v, d);
    if (!s) continue;
    bool in_hat = std::find(it->second.begin(), it->second.end(), s->fam) != it->second.end();
    if (in_hat && !ideal_contains(d, *s))
      return {TriBool::no_at(bound), d.ref.name(sys), sys.elem_name(*s)};
  }
  if (det.complete) return {TriBool::yes_at(bound), "", ""};
  return {TriBool::unknown_at(bound), "", ""};
}

// Finite truncation of a presentation as a PoSystem (indices ≤ max_index).
inline PoSystem truncate_to_posystem(const PresentedSystem& sys, int max_index) {
  BoundedView v(sys, max_index);
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  auto u = v.universe();
  for (const auto& e : u) names.push_back(sys.elem_name(e));
  for (const auto& x : u)
    for (const auto& y : u)
      if (v.lt(x, y)) pairs.emplace_back(sys.elem_name(x), sys.elem_name(y));
  return PoSystem::generate(names, pairs);
}

struct RankReport {
  QueryResult strongly_semi_trim;
  QueryResult rank;
};

// The rank-partition criteria for a complete semi-trim partition whose clean
// types are the marked sub-presentation: strongly semi-trim iff P̂ is weakly
// separated in P; rank iff additionally every element of P̂ is compact in P.
inline RankReport rank_criteria(const PresentedSystem& sys, const std::string& hat, int bound) {
  RankReport rep;
  rep.strongly_semi_trim = weakly_separated(sys, hat, bound);
  auto it = sys.hats().find(hat);
  BoundedView v(sys, bound);
  bool any_unknown = false;
  rep.rank = {TriBool::yes_at(bound), "", ""};
  for (const auto& e : v.universe()) {
    if (std::find(it->second.begin(), it->second.end(), e.fam) == it->second.end()) continue;
    QueryResult c = is_compact(sys, e, bound);
    if (c.value.is_no()) {
      rep.rank = c;
      return rep;
    }
    if (c.value.is_unknown()) any_unknown = true;
  }
  if (any_unknown) rep.rank = {TriBool::unknown_at(bound), "", ""};
  return rep;
}

}  // namespace postone
