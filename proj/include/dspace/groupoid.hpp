#pragma once

#include "dspace/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dspace {

namespace detail {

inline std::uint64_t pair_key(int a, int b) {
  return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint64_t(std::uint32_t(b));
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) const {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  mutable std::vector<int> parent_;
};

}  // namespace detail

/// Connected components of a finite groupoid in canonical order: components
/// are sorted by their smallest object id, and that object is the component
/// representative.
struct Pi0 {
  std::vector<int> component_of;     // object id -> component index
  std::vector<int> representative;   // component index -> object id
  std::vector<long long> aut_order;  // component index -> |Aut(representative)|

  int count() const { return static_cast<int>(representative.size()); }
};

/// A finite groupoid presented by objects, morphisms, chosen identities and a
/// total composition table on composable pairs.  compose(f, g) is "g after f":
/// for f: x -> y and g: y -> z it returns the morphism x -> z.
///
/// Objects and morphisms are dense integer ids in insertion order; every
/// morphism also carries a display name used in diagnostics and serialization.
class FiniteGroupoid {
 public:
  struct Morphism {
    int src = -1;
    int tgt = -1;
    std::string name;
  };

  int add_object(std::string name) {
    object_names_.push_back(std::move(name));
    identity_.push_back(-1);
    return static_cast<int>(object_names_.size()) - 1;
  }

  int add_morphism(int src, int tgt, std::string name) {
    if (src < 0 || src >= object_count() || tgt < 0 || tgt >= object_count()) {
      throw std::invalid_argument("morphism endpoints out of range");
    }
    morphisms_.push_back(Morphism{src, tgt, std::move(name)});
    return static_cast<int>(morphisms_.size()) - 1;
  }

  void set_identity(int obj, int mor) { identity_.at(obj) = mor; }

  /// Records h = g . f (apply f first).
  void set_compose(int f, int g, int h) { compose_[detail::pair_key(f, g)] = h; }

  int object_count() const { return static_cast<int>(object_names_.size()); }
  int morphism_count() const { return static_cast<int>(morphisms_.size()); }

  const std::string& object_name(int obj) const { return object_names_.at(obj); }
  const Morphism& morphism(int mor) const { return morphisms_.at(mor); }
  int identity_at(int obj) const { return identity_.at(obj); }

  bool composable(int f, int g) const { return morphisms_.at(f).tgt == morphisms_.at(g).src; }

  /// g . f; throws if the pair is missing from the table.
  int compose(int f, int g) const {
    const auto it = compose_.find(detail::pair_key(f, g));
    if (it == compose_.end()) {
      throw std::invalid_argument("composition undefined for (" + morphisms_.at(f).name + ", " +
                                  morphisms_.at(g).name + ")");
    }
    return it->second;
  }

  /// The two-sided inverse of f; throws if none exists (invalid groupoid).
  int inverse(int f) const {
    ensure_inverses();
    const int g = inverse_[f];
    if (g < 0) {
      throw std::invalid_argument("morphism has no two-sided inverse: " + morphisms_.at(f).name);
    }
    return g;
  }

  const std::vector<int>& outgoing(int obj) const {
    ensure_adjacency();
    return outgoing_[obj];
  }

  /// All morphisms x -> y, in morphism-id order.
  const std::vector<int>& hom(int x, int y) const {
    ensure_adjacency();
    static const std::vector<int> empty;
    const auto it = hom_.find(detail::pair_key(x, y));
    return it == hom_.end() ? empty : it->second;
  }

  const Pi0& pi0() const {
    ensure_pi0();
    return *pi0_;
  }

  /// Structural diagnostics; empty means the presentation is a groupoid.
  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    const auto complain = [&issues](std::string msg) {
      if (issues.size() < 32) issues.push_back(std::move(msg));
    };

    for (int x = 0; x < object_count(); ++x) {
      const int id = identity_[x];
      if (id < 0 || id >= morphism_count()) {
        complain("object '" + object_names_[x] + "' has no identity morphism");
        continue;
      }
      if (morphisms_[id].src != x || morphisms_[id].tgt != x) {
        complain("identity of '" + object_names_[x] + "' is not an endomorphism of it");
      }
    }
    if (!issues.empty()) return issues;

    // The table must be defined exactly on composable pairs, with correct
    // endpoints.
    for (const auto& [key, h] : compose_) {
      const int f = static_cast<int>(key >> 32);
      const int g = static_cast<int>(key & 0xffffffffu);
      if (f >= morphism_count() || g >= morphism_count() || h < 0 || h >= morphism_count()) {
        complain("composition table refers to unknown morphisms");
        continue;
      }
      if (!composable(f, g)) {
        complain("composition defined for non-composable pair (" + morphisms_[f].name + ", " +
                 morphisms_[g].name + ")");
      } else if (morphisms_[h].src != morphisms_[f].src || morphisms_[h].tgt != morphisms_[g].tgt) {
        complain("composite of (" + morphisms_[f].name + ", " + morphisms_[g].name +
                 ") has wrong endpoints");
      }
    }
    for (int f = 0; f < morphism_count(); ++f) {
      for (const int g : outgoing(morphisms_[f].tgt)) {
        if (compose_.find(detail::pair_key(f, g)) == compose_.end()) {
          complain("composition missing for composable pair (" + morphisms_[f].name + ", " +
                   morphisms_[g].name + ")");
        }
      }
    }
    if (!issues.empty()) return issues;

    for (int f = 0; f < morphism_count(); ++f) {
      const int left = compose(identity_[morphisms_[f].src], f);
      const int right = compose(f, identity_[morphisms_[f].tgt]);
      if (left != f || right != f) {
        complain("identity law fails at morphism " + morphisms_[f].name);
      }
    }

    for (int f = 0; f < morphism_count() && issues.empty(); ++f) {
      for (const int g : outgoing(morphisms_[f].tgt)) {
        const int fg = compose(f, g);
        for (const int h : outgoing(morphisms_[g].tgt)) {
          if (compose(fg, h) != compose(f, compose(g, h))) {
            complain("associativity fails at (" + morphisms_[f].name + ", " + morphisms_[g].name +
                     ", " + morphisms_[h].name + ")");
            break;
          }
        }
        if (!issues.empty()) break;
      }
    }

    ensure_inverses();
    for (int f = 0; f < morphism_count(); ++f) {
      if (inverse_[f] < 0) {
        complain("morphism has no two-sided inverse: " + morphisms_[f].name);
      }
    }
    return issues;
  }

 private:
  void ensure_adjacency() const {
    if (!outgoing_.empty() || object_count() == 0) {
      if (outgoing_.empty() && object_count() > 0) outgoing_.resize(object_count());
      return;
    }
    outgoing_.assign(object_count(), {});
    for (int m = 0; m < morphism_count(); ++m) {
      outgoing_[morphisms_[m].src].push_back(m);
      hom_[detail::pair_key(morphisms_[m].src, morphisms_[m].tgt)].push_back(m);
    }
  }

  void ensure_inverses() const {
    if (!inverse_.empty() || morphism_count() == 0) return;
    ensure_adjacency();
    inverse_.assign(morphism_count(), -1);
    for (int f = 0; f < morphism_count(); ++f) {
      const int src = morphisms_[f].src;
      const int tgt = morphisms_[f].tgt;
      for (const int g : hom(tgt, src)) {
        const auto fg = compose_.find(detail::pair_key(f, g));
        const auto gf = compose_.find(detail::pair_key(g, f));
        if (fg != compose_.end() && gf != compose_.end() && fg->second == identity_[src] &&
            gf->second == identity_[tgt]) {
          inverse_[f] = g;
          break;
        }
      }
    }
  }

  void ensure_pi0() const {
    if (pi0_) return;
    detail::UnionFind uf(object_count());
    for (const auto& m : morphisms_) uf.unite(m.src, m.tgt);

    std::map<int, int> root_min;  // union-find root -> smallest object id
    for (int x = 0; x < object_count(); ++x) {
      const int r = uf.find(x);
      const auto it = root_min.find(r);
      if (it == root_min.end() || x < it->second) root_min[r] = x;
    }
    std::vector<int> reps;
    reps.reserve(root_min.size());
    for (const auto& [root, min_obj] : root_min) reps.push_back(min_obj);
    std::sort(reps.begin(), reps.end());

    Pi0 result;
    result.representative = reps;
    result.component_of.assign(object_count(), -1);
    std::unordered_map<int, int> root_to_comp;
    for (int c = 0; c < static_cast<int>(reps.size()); ++c) {
      root_to_comp[uf.find(reps[c])] = c;
    }
    for (int x = 0; x < object_count(); ++x) {
      result.component_of[x] = root_to_comp.at(uf.find(x));
    }
    ensure_adjacency();
    result.aut_order.reserve(reps.size());
    for (const int rep : reps) {
      result.aut_order.push_back(static_cast<long long>(hom(rep, rep).size()));
    }
    pi0_ = std::make_shared<Pi0>(std::move(result));
  }

  std::vector<std::string> object_names_;
  std::vector<Morphism> morphisms_;
  std::vector<int> identity_;
  std::unordered_map<std::uint64_t, int> compose_;

  mutable std::vector<std::vector<int>> outgoing_;
  mutable std::unordered_map<std::uint64_t, std::vector<int>> hom_;
  mutable std::vector<int> inverse_;
  mutable std::shared_ptr<Pi0> pi0_;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

inline GroupoidPtr share(FiniteGroupoid g) {
  return std::make_shared<const FiniteGroupoid>(std::move(g));
}

/// Homotopy cardinality: sum over components of 1/|Aut(representative)|.
inline Rational cardinality(const FiniteGroupoid& g) {
  Rational total = 0;
  const Pi0& pi = g.pi0();
  for (int c = 0; c < pi.count(); ++c) {
    total += Rational(1, pi.aut_order[c]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Basic constructions
// ---------------------------------------------------------------------------

inline FiniteGroupoid make_discrete_groupoid(const std::vector<std::string>& names) {
  FiniteGroupoid g;
  for (const auto& n : names) g.add_object(n);
  for (int x = 0; x < g.object_count(); ++x) {
    const int id = g.add_morphism(x, x, "id(" + names[x] + ")");
    g.set_identity(x, id);
    g.set_compose(id, id, id);
  }
  return g;
}

/// One-object groupoid from a finite group given by its multiplication table;
/// table[a][b] is the product "b after a".
inline FiniteGroupoid make_group_groupoid(const std::string& object_name,
                                          const std::vector<std::string>& element_names, int unit,
                                          const std::vector<std::vector<int>>& table) {
  FiniteGroupoid g;
  const int obj = g.add_object(object_name);
  for (const auto& n : element_names) g.add_morphism(obj, obj, n);
  g.set_identity(obj, unit);
  for (int a = 0; a < static_cast<int>(element_names.size()); ++a) {
    for (int b = 0; b < static_cast<int>(element_names.size()); ++b) {
      g.set_compose(a, b, table[a][b]);
    }
  }
  return g;
}

inline FiniteGroupoid product_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  FiniteGroupoid p;
  for (int x = 0; x < a.object_count(); ++x) {
    for (int y = 0; y < b.object_count(); ++y) {
      p.add_object("(" + a.object_name(x) + "|" + b.object_name(y) + ")");
    }
  }
  const auto obj = [&b](int x, int y) { return x * b.object_count() + y; };
  const auto mor = [&b](int f, int g) { return f * b.morphism_count() + g; };
  for (int f = 0; f < a.morphism_count(); ++f) {
    for (int g = 0; g < b.morphism_count(); ++g) {
      p.add_morphism(obj(a.morphism(f).src, b.morphism(g).src),
                     obj(a.morphism(f).tgt, b.morphism(g).tgt),
                     "(" + a.morphism(f).name + "|" + b.morphism(g).name + ")");
    }
  }
  for (int x = 0; x < a.object_count(); ++x) {
    for (int y = 0; y < b.object_count(); ++y) {
      p.set_identity(obj(x, y), mor(a.identity_at(x), b.identity_at(y)));
    }
  }
  for (int f = 0; f < a.morphism_count(); ++f) {
    for (const int f2 : a.outgoing(a.morphism(f).tgt)) {
      const int fa = a.compose(f, f2);
      for (int g = 0; g < b.morphism_count(); ++g) {
        for (const int g2 : b.outgoing(b.morphism(g).tgt)) {
          p.set_compose(mor(f, g), mor(f2, g2), mor(fa, b.compose(g, g2)));
        }
      }
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Functors
// ---------------------------------------------------------------------------

/// A strict functor between finite groupoids; stores dense object/morphism
/// maps.  Source and target groupoids are shared immutable values.
struct GroupoidFunctor {
  GroupoidPtr source;
  GroupoidPtr target;
  std::vector<int> object_map;
  std::vector<int> morphism_map;

  int on_object(int x) const { return object_map.at(x); }
  int on_morphism(int m) const { return morphism_map.at(m); }

  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    const auto complain = [&issues](std::string msg) {
      if (issues.size() < 32) issues.push_back(std::move(msg));
    };
    if (!source || !target) return {"functor endpoints missing"};
    if (static_cast<int>(object_map.size()) != source->object_count() ||
        static_cast<int>(morphism_map.size()) != source->morphism_count()) {
      return {"functor maps have wrong size"};
    }
    for (const int x : object_map) {
      if (x < 0 || x >= target->object_count()) return {"functor object map out of range"};
    }
    for (const int m : morphism_map) {
      if (m < 0 || m >= target->morphism_count()) return {"functor morphism map out of range"};
    }
    for (int m = 0; m < source->morphism_count(); ++m) {
      const auto& sm = source->morphism(m);
      const auto& tm = target->morphism(morphism_map[m]);
      if (tm.src != object_map[sm.src] || tm.tgt != object_map[sm.tgt]) {
        complain("functor breaks endpoints at morphism " + sm.name);
      }
    }
    if (!issues.empty()) return issues;
    for (int x = 0; x < source->object_count(); ++x) {
      if (morphism_map[source->identity_at(x)] != target->identity_at(object_map[x])) {
        complain("functor breaks identity at object " + source->object_name(x));
      }
    }
    for (int f = 0; f < source->morphism_count() && issues.empty(); ++f) {
      for (const int g : source->outgoing(source->morphism(f).tgt)) {
        const int h = source->compose(f, g);
        if (target->compose(morphism_map[f], morphism_map[g]) != morphism_map[h]) {
          complain("functor breaks composition at (" + source->morphism(f).name + ", " +
                   source->morphism(g).name + ")");
          break;
        }
      }
    }
    return issues;
  }
};

inline GroupoidFunctor identity_functor(const GroupoidPtr& g) {
  GroupoidFunctor f;
  f.source = g;
  f.target = g;
  f.object_map.resize(g->object_count());
  std::iota(f.object_map.begin(), f.object_map.end(), 0);
  f.morphism_map.resize(g->morphism_count());
  std::iota(f.morphism_map.begin(), f.morphism_map.end(), 0);
  return f;
}

/// then . first (apply `first`, then `then`).  Requires first.target and
/// then.source to be the same shared groupoid.
inline GroupoidFunctor compose_functors(const GroupoidFunctor& first, const GroupoidFunctor& then) {
  if (first.target != then.source) {
    throw std::invalid_argument("compose_functors: middle groupoid mismatch");
  }
  GroupoidFunctor out;
  out.source = first.source;
  out.target = then.target;
  out.object_map.reserve(first.object_map.size());
  for (const int x : first.object_map) out.object_map.push_back(then.object_map.at(x));
  out.morphism_map.reserve(first.morphism_map.size());
  for (const int m : first.morphism_map) out.morphism_map.push_back(then.morphism_map.at(m));
  return out;
}

inline bool same_mapping(const GroupoidFunctor& a, const GroupoidFunctor& b) {
  return a.object_map == b.object_map && a.morphism_map == b.morphism_map;
}

/// Full subgroupoid on the listed components (canonical component indices of
/// parent.pi0()), together with the inclusion functor.
struct ComponentSubgroupoid {
  GroupoidPtr groupoid;
  GroupoidFunctor inclusion;          // subgroupoid -> parent
  std::vector<int> object_to_parent;  // sub object id -> parent object id
};

inline ComponentSubgroupoid component_subgroupoid(const GroupoidPtr& parent,
                                                  const std::vector<int>& components) {
  std::vector<bool> keep(parent->pi0().count(), false);
  for (const int c : components) keep.at(c) = true;

  ComponentSubgroupoid out;
  FiniteGroupoid sub;
  std::vector<int> obj_new(parent->object_count(), -1);
  for (int x = 0; x < parent->object_count(); ++x) {
    if (keep[parent->pi0().component_of[x]]) {
      obj_new[x] = sub.add_object(parent->object_name(x));
      out.object_to_parent.push_back(x);
    }
  }
  std::vector<int> mor_new(parent->morphism_count(), -1);
  std::vector<int> mor_old;
  for (int m = 0; m < parent->morphism_count(); ++m) {
    const auto& mm = parent->morphism(m);
    if (obj_new[mm.src] >= 0) {
      mor_new[m] = sub.add_morphism(obj_new[mm.src], obj_new[mm.tgt], mm.name);
      mor_old.push_back(m);
    }
  }
  for (int x = 0; x < parent->object_count(); ++x) {
    if (obj_new[x] >= 0) sub.set_identity(obj_new[x], mor_new[parent->identity_at(x)]);
  }
  for (const int f : mor_old) {
    for (const int g : parent->outgoing(parent->morphism(f).tgt)) {
      sub.set_compose(mor_new[f], mor_new[g], mor_new[parent->compose(f, g)]);
    }
  }
  out.groupoid = share(std::move(sub));
  out.inclusion.source = out.groupoid;
  out.inclusion.target = parent;
  out.inclusion.object_map = out.object_to_parent;
  out.inclusion.morphism_map = mor_old;
  return out;
}

// ---------------------------------------------------------------------------
// Homotopy fibers and pullbacks
// ---------------------------------------------------------------------------

/// Homotopy fiber of F over a target object b: objects are pairs (a, beta)
/// with beta: F(a) -> b; a morphism (a, beta) -> (a', beta') is a source
/// morphism u: a -> a' with beta' . F(u) = beta.
struct HomotopyFiber {
  GroupoidPtr groupoid;
  std::vector<std::pair<int, int>> objects;  // (source object, target morphism beta)
  GroupoidFunctor projection;                // fiber -> source groupoid
};

inline HomotopyFiber homotopy_fiber(const GroupoidFunctor& functor, int base_object) {
  const FiniteGroupoid& s = *functor.source;
  const FiniteGroupoid& t = *functor.target;

  HomotopyFiber fib;
  std::unordered_map<std::uint64_t, int> index;  // (a, beta) -> fiber object id
  FiniteGroupoid g;
  for (int a = 0; a < s.object_count(); ++a) {
    for (const int beta : t.hom(functor.on_object(a), base_object)) {
      index[detail::pair_key(a, beta)] = g.add_object(
          "(" + s.object_name(a) + "|" + t.morphism(beta).name + ")");
      fib.objects.emplace_back(a, beta);
    }
  }
  // Morphisms out of (a, beta) correspond exactly to source morphisms u out
  // of a; the target is (a', beta . F(u)^{-1}).
  std::unordered_map<std::uint64_t, int> mor_index;  // (fiber src object, u) -> morphism id
  std::vector<int> mor_u;
  std::vector<int> mor_src_obj;
  for (int o = 0; o < static_cast<int>(fib.objects.size()); ++o) {
    const auto [a, beta] = fib.objects[o];
    for (const int u : s.outgoing(a)) {
      const int fu = functor.on_morphism(u);
      const int beta2 = t.compose(t.inverse(fu), beta);  // beta . F(u)^{-1}
      const int target_obj = index.at(detail::pair_key(s.morphism(u).tgt, beta2));
      const int m = g.add_morphism(o, target_obj, "(" + s.morphism(u).name + ")");
      mor_index[detail::pair_key(o, u)] = m;
      mor_u.push_back(u);
      mor_src_obj.push_back(o);
    }
  }
  for (int o = 0; o < static_cast<int>(fib.objects.size()); ++o) {
    g.set_identity(o, mor_index.at(detail::pair_key(o, s.identity_at(fib.objects[o].first))));
  }
  for (int m = 0; m < g.morphism_count(); ++m) {
    const int o1 = mor_src_obj[m];
    const int u = mor_u[m];
    const int o2 = g.morphism(m).tgt;
    const int a2 = fib.objects[o2].first;
    for (const int v : s.outgoing(a2)) {
      const int m2 = mor_index.at(detail::pair_key(o2, v));
      g.set_compose(m, m2, mor_index.at(detail::pair_key(o1, s.compose(u, v))));
    }
  }
  fib.groupoid = share(std::move(g));
  fib.projection.source = fib.groupoid;
  fib.projection.target = functor.source;
  for (const auto& [a, beta] : fib.objects) fib.projection.object_map.push_back(a);
  fib.projection.morphism_map = mor_u;
  return fib;
}

/// Homotopy pullback (iso-comma groupoid) of F: A -> C and G: B -> C.
/// Objects are triples (a, b, gamma: F(a) -> G(b)); morphisms are pairs
/// (u, v) with gamma' . F(u) = G(v) . gamma.
struct HomotopyPullback {
  GroupoidPtr groupoid;
  std::vector<std::array<int, 3>> objects;  // (a, b, gamma)
  GroupoidFunctor to_first;                 // -> A
  GroupoidFunctor to_second;                // -> B
};

inline HomotopyPullback homotopy_pullback(const GroupoidFunctor& f, const GroupoidFunctor& g) {
  if (f.target != g.target) {
    throw std::invalid_argument("homotopy_pullback: cospan targets differ");
  }
  const FiniteGroupoid& a_g = *f.source;
  const FiniteGroupoid& b_g = *g.source;
  const FiniteGroupoid& c_g = *f.target;

  std::vector<std::vector<int>> b_by_image(c_g.object_count());
  for (int b = 0; b < b_g.object_count(); ++b) b_by_image[g.on_object(b)].push_back(b);

  HomotopyPullback out;
  FiniteGroupoid p;
  std::unordered_map<std::uint64_t, int> index;  // (a*nB+b, gamma) packed
  const auto key3 = [&](int a, int b, int gamma) {
    return detail::pair_key(a * b_g.object_count() + b, gamma);
  };
  for (int a = 0; a < a_g.object_count(); ++a) {
    for (const int gamma : c_g.outgoing(f.on_object(a))) {
      for (const int b : b_by_image[c_g.morphism(gamma).tgt]) {
        index[key3(a, b, gamma)] = p.add_object("(" + a_g.object_name(a) + "|" +
                                                b_g.object_name(b) + "|" +
                                                c_g.morphism(gamma).name + ")");
        out.objects.push_back({a, b, gamma});
      }
    }
  }
  std::unordered_map<std::uint64_t, int> mor_index;  // (object, u*nMorB+v)
  std::vector<std::array<int, 2>> mor_uv;
  std::vector<int> mor_src_obj;
  const auto mkey = [&](int o, int u, int v) {
    return detail::pair_key(o, u * b_g.morphism_count() + v);
  };
  for (int o = 0; o < static_cast<int>(out.objects.size()); ++o) {
    const auto [a, b, gamma] = out.objects[o];
    for (const int u : a_g.outgoing(a)) {
      const int fu = f.on_morphism(u);
      const int prefix = c_g.compose(c_g.inverse(fu), gamma);  // gamma . F(u)^{-1}
      for (const int v : b_g.outgoing(b)) {
        const int gamma2 = c_g.compose(prefix, g.on_morphism(v));  // G(v) . prefix
        const int o2 = index.at(key3(a_g.morphism(u).tgt, b_g.morphism(v).tgt, gamma2));
        const int m = p.add_morphism(o, o2, "(" + a_g.morphism(u).name + "|" +
                                     b_g.morphism(v).name + ")");
        mor_index[mkey(o, u, v)] = m;
        mor_uv.push_back({u, v});
        mor_src_obj.push_back(o);
      }
    }
  }
  for (int o = 0; o < static_cast<int>(out.objects.size()); ++o) {
    const auto [a, b, gamma] = out.objects[o];
    p.set_identity(o, mor_index.at(mkey(o, a_g.identity_at(a), b_g.identity_at(b))));
  }
  for (int m = 0; m < p.morphism_count(); ++m) {
    const int o1 = mor_src_obj[m];
    const auto [u, v] = mor_uv[m];
    const int o2 = p.morphism(m).tgt;
    const auto [a2, b2, gamma2] = out.objects[o2];
    (void)gamma2;
    for (const int u2 : a_g.outgoing(a2)) {
      for (const int v2 : b_g.outgoing(b2)) {
        const int m2 = mor_index.at(mkey(o2, u2, v2));
        p.set_compose(m, m2, mor_index.at(mkey(o1, a_g.compose(u, u2), b_g.compose(v, v2))));
      }
    }
  }
  out.groupoid = share(std::move(p));
  out.to_first.source = out.groupoid;
  out.to_first.target = f.source;
  out.to_second.source = out.groupoid;
  out.to_second.target = g.source;
  for (const auto& [a, b, gamma] : out.objects) {
    out.to_first.object_map.push_back(a);
    out.to_second.object_map.push_back(b);
  }
  for (const auto& [u, v] : mor_uv) {
    out.to_first.morphism_map.push_back(u);
    out.to_second.morphism_map.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivalences, monomorphisms, pullback squares
// ---------------------------------------------------------------------------

struct EquivalenceVerdict {
  bool holds = false;
  std::string witness;  // empty when holds
};

namespace detail {

/// Shared check for full+faithful+pi0-injective; optionally also essential
/// surjectivity.  Relies on the groupoid torsor argument: a functor is full
/// and faithful iff it is injective on pi0 and restricts to a bijection on
/// automorphism groups of component representatives.
inline EquivalenceVerdict check_ff_pi0(const GroupoidFunctor& f, bool require_surjective) {
  const FiniteGroupoid& s = *f.source;
  const FiniteGroupoid& t = *f.target;
  const Pi0& sp = s.pi0();
  const Pi0& tp = t.pi0();

  std::vector<int> hit(tp.count(), -1);
  for (int c = 0; c < sp.count(); ++c) {
    const int rep = sp.representative[c];
    const int tc = tp.component_of[f.on_object(rep)];
    if (hit[tc] >= 0) {
      return {false, "not injective on components: objects '" +
                         s.object_name(sp.representative[hit[tc]]) + "' and '" +
                         s.object_name(rep) + "' map into the same component"};
    }
    hit[tc] = c;
    if (sp.aut_order[c] != tp.aut_order[tc]) {
      return {false, "hom-set size mismatch at object '" + s.object_name(rep) + "': |Aut| " +
                         std::to_string(sp.aut_order[c]) + " vs " +
                         std::to_string(tp.aut_order[tc]) + " in the target"};
    }
    // Faithfulness at the representative: distinct endomorphisms must stay
    // distinct.
    const auto& endos = s.hom(rep, rep);
    std::vector<int> images;
    images.reserve(endos.size());
    for (const int u : endos) images.push_back(f.on_morphism(u));
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
      return {false, "not faithful at object '" + s.object_name(rep) +
                         "': two automorphisms have the same image"};
    }
  }
  if (require_surjective) {
    for (int tc = 0; tc < tp.count(); ++tc) {
      if (hit[tc] < 0) {
        return {false, "not essentially surjective: component of '" +
                           t.object_name(tp.representative[tc]) + "' is not reached"};
      }
    }
  }
  return {true, ""};
}

}  // namespace detail

/// Equivalence of groupoids: fully faithful and essentially surjective.
inline EquivalenceVerdict is_equivalence(const GroupoidFunctor& f) {
  return detail::check_ff_pi0(f, /*require_surjective=*/true);
}

/// Monomorphism of groupoids: fully faithful and injective on components
/// (equivalently, all homotopy fibers are empty or contractible).
inline EquivalenceVerdict is_monomorphism(const GroupoidFunctor& f) {
  return detail::check_ff_pi0(f, /*require_surjective=*/false);
}

struct PullbackVerdict {
  bool holds = false;
  std::string witness;
};

/// Decides whether a strictly commuting square
///
///     P --to_first-->  A
///     |                |
///  to_second       from_first
///     v                v
///     B -from_second-> C
///
/// is a homotopy pullback: the comparison functor from P into the iso-comma
/// groupoid of (from_first, from_second) must be an equivalence.  A square
/// that does not commute strictly is rejected as invalid input.
///
/// The iso-comma groupoid is traversed without materializing its composition
/// table, which keeps large instances affordable.
inline PullbackVerdict is_pullback_square(const GroupoidFunctor& to_first,
                                          const GroupoidFunctor& to_second,
                                          const GroupoidFunctor& from_first,
                                          const GroupoidFunctor& from_second) {
  if (to_first.source != to_second.source || from_first.source != to_first.target ||
      from_second.source != to_second.target || from_first.target != from_second.target) {
    throw std::invalid_argument("is_pullback_square: square endpoints do not match");
  }
  const FiniteGroupoid& corner = *to_first.source;
  const FiniteGroupoid& a_g = *from_first.source;
  const FiniteGroupoid& b_g = *from_second.source;
  const FiniteGroupoid& c_g = *from_first.target;

  const GroupoidFunctor via_a = compose_functors(to_first, from_first);
  const GroupoidFunctor via_b = compose_functors(to_second, from_second);
  for (int x = 0; x < corner.object_count(); ++x) {
    if (via_a.on_object(x) != via_b.on_object(x)) {
      throw std::invalid_argument("square does not commute strictly at object '" +
                                  corner.object_name(x) + "'");
    }
  }
  for (int m = 0; m < corner.morphism_count(); ++m) {
    if (via_a.on_morphism(m) != via_b.on_morphism(m)) {
      throw std::invalid_argument("square does not commute strictly at morphism '" +
                                  corner.morphism(m).name + "'");
    }
  }

  // Enumerate iso-comma objects (a, b, gamma: F(a) -> G(b)).
  std::vector<std::vector<int>> b_by_image(c_g.object_count());
  for (int b = 0; b < b_g.object_count(); ++b) {
    b_by_image[from_second.on_object(b)].push_back(b);
  }
  std::vector<std::array<int, 3>> objects;
  std::unordered_map<std::uint64_t, int> index;
  const auto key3 = [&](int a, int b, int gamma) {
    return detail::pair_key(a * b_g.object_count() + b, gamma);
  };
  for (int a = 0; a < a_g.object_count(); ++a) {
    for (const int gamma : c_g.outgoing(from_first.on_object(a))) {
      for (const int b : b_by_image[c_g.morphism(gamma).tgt]) {
        index[key3(a, b, gamma)] = static_cast<int>(objects.size());
        objects.push_back({a, b, gamma});
      }
    }
  }

  detail::UnionFind uf(static_cast<int>(objects.size()));
  for (int o = 0; o < static_cast<int>(objects.size()); ++o) {
    const auto [a, b, gamma] = objects[o];
    for (const int u : a_g.outgoing(a)) {
      const int fu = from_first.on_morphism(u);
      const int prefix = c_g.compose(c_g.inverse(fu), gamma);
      for (const int v : b_g.outgoing(b)) {
        const int gamma2 = c_g.compose(prefix, from_second.on_morphism(v));
        uf.unite(o, index.at(key3(a_g.morphism(u).tgt, b_g.morphism(v).tgt, gamma2)));
      }
    }
  }

  const Pi0& cp = corner.pi0();
  const auto comparison_object = [&](int w) {
    const int a = to_first.on_object(w);
    const int b = to_second.on_object(w);
    const int gamma = c_g.identity_at(via_a.on_object(w));
    return index.at(key3(a, b, gamma));
  };

  // pi0-injectivity of the comparison functor, phrased via iso-comma roots.
  std::unordered_map<int, int> root_to_corner_comp;
  for (int w = 0; w < corner.object_count(); ++w) {
    const int root = uf.find(comparison_object(w));
    const int cc = cp.component_of[w];
    const auto it = root_to_corner_comp.find(root);
    if (it == root_to_corner_comp.end()) {
      root_to_corner_comp[root] = cc;
    } else if (it->second != cc) {
      return {false, "comparison functor not injective on components: '" +
                         corner.object_name(cp.representative[it->second]) + "' and '" +
                         corner.object_name(cp.representative[cc]) +
                         "' land in the same iso-comma component"};
    }
  }

  // Essential surjectivity: every iso-comma component must be reached.
  std::unordered_map<int, int> root_count;
  for (int o = 0; o < static_cast<int>(objects.size()); ++o) root_count[uf.find(o)] = o;
  if (root_count.size() != root_to_corner_comp.size()) {
    for (const auto& [root, witness_obj] : root_count) {
      if (root_to_corner_comp.find(root) == root_to_corner_comp.end()) {
        const auto [a, b, gamma] = objects[witness_obj];
        return {false, "comparison functor not essentially surjective: iso-comma component of (" +
                           a_g.object_name(a) + "|" + b_g.object_name(b) +
                           ") is not reached (corner has " + std::to_string(cp.count()) +
                           " components, iso-comma has " + std::to_string(root_count.size()) +
                           ")"};
      }
    }
  }

  // Automorphism comparison at one representative per corner component.
  for (int c = 0; c < cp.count(); ++c) {
    const int w = cp.representative[c];
    const auto [a, b, gamma] = objects[comparison_object(w)];
    long long aut_ic = 0;
    for (const int u : a_g.hom(a, a)) {
      const int prefix = c_g.compose(c_g.inverse(from_first.on_morphism(u)), gamma);
      for (const int v : b_g.hom(b, b)) {
        if (c_g.compose(prefix, from_second.on_morphism(v)) == gamma) ++aut_ic;
      }
    }
    const auto& endos = corner.hom(w, w);
    if (static_cast<long long>(endos.size()) != aut_ic) {
      return {false, "hom-set size mismatch at '" + corner.object_name(w) + "': |Aut| " +
                         std::to_string(endos.size()) + " in the corner vs " +
                         std::to_string(aut_ic) + " in the iso-comma groupoid"};
    }
    std::vector<std::uint64_t> images;
    images.reserve(endos.size());
    for (const int e : endos) {
      images.push_back(detail::pair_key(to_first.on_morphism(e), to_second.on_morphism(e)));
    }
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
      return {false, "comparison functor not faithful at '" + corner.object_name(w) + "'"};
    }
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Spans and their matrices
// ---------------------------------------------------------------------------

/// A span of groupoids S <-left- M -right-> T with shared apex M.
struct GroupoidSpan {
  GroupoidFunctor left;
  GroupoidFunctor right;
};

/// Matrix of exact rationals with component labels; rows are indexed by the
/// components of the span's right-hand target, columns by those of the left.
struct RationalMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<Rational>> entries;

  int rows() const { return static_cast<int>(entries.size()); }
  int cols() const { return entries.empty() ? 0 : static_cast<int>(entries.front().size()); }

  bool operator==(const RationalMatrix& other) const { return entries == other.entries; }
};

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  RationalMatrix out;
  out.row_labels = a.row_labels;
  out.col_labels = b.col_labels;
  out.entries.assign(a.rows(), std::vector<Rational>(b.cols(), Rational(0)));
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      if (a.entries[i][k] == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out.entries[i][j] += a.entries[i][k] * b.entries[k][j];
      }
    }
  }
  return out;
}

/// The linear map attached to a span, in the delta/component bases: the
/// (t, s) entry is the homotopy cardinality of the double fiber of
/// (left, right): M -> S x T over (s, t), weighted by 1/|Aut(t)| so that the
/// identity span yields the identity matrix (the homotopy-integral
/// normalization of the comultiplication display).
inline RationalMatrix span_matrix(const GroupoidSpan& span) {
  if (span.left.source != span.right.source) {
    throw std::invalid_argument("span legs must share their apex");
  }
  const FiniteGroupoid& s_g = *span.left.target;
  const FiniteGroupoid& t_g = *span.right.target;
  const Pi0& sp = s_g.pi0();
  const Pi0& tp = t_g.pi0();

  const GroupoidPtr product = share(product_groupoid(s_g, t_g));
  GroupoidFunctor pair;
  pair.source = span.left.source;
  pair.target = product;
  const int nt_obj = t_g.object_count();
  const int nt_mor = t_g.morphism_count();
  for (int x = 0; x < span.left.source->object_count(); ++x) {
    pair.object_map.push_back(span.left.on_object(x) * nt_obj + span.right.on_object(x));
  }
  for (int m = 0; m < span.left.source->morphism_count(); ++m) {
    pair.morphism_map.push_back(span.left.on_morphism(m) * nt_mor + span.right.on_morphism(m));
  }

  RationalMatrix out;
  for (int tc = 0; tc < tp.count(); ++tc) out.row_labels.push_back(t_g.object_name(tp.representative[tc]));
  for (int sc = 0; sc < sp.count(); ++sc) out.col_labels.push_back(s_g.object_name(sp.representative[sc]));
  out.entries.assign(tp.count(), std::vector<Rational>(sp.count(), Rational(0)));
  for (int sc = 0; sc < sp.count(); ++sc) {
    for (int tc = 0; tc < tp.count(); ++tc) {
      const int base = sp.representative[sc] * nt_obj + tp.representative[tc];
      const Rational fiber = cardinality(*homotopy_fiber(pair, base).groupoid);
      out.entries[tc][sc] = fiber / Rational(tp.aut_order[tc]);
    }
  }
  return out;
}

/// Composite span via the homotopy pullback of the middle legs.
inline GroupoidSpan compose_spans(const GroupoidSpan& first, const GroupoidSpan& second) {
  if (first.right.target != second.left.target) {
    throw std::invalid_argument("compose_spans: middle groupoid mismatch");
  }
  const HomotopyPullback middle = homotopy_pullback(first.right, second.left);
  GroupoidSpan out;
  out.left = compose_functors(middle.to_first, first.left);
  out.right = compose_functors(middle.to_second, second.right);
  return out;
}

}  // namespace dspace
