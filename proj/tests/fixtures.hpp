#pragma once

#include <dspace/constructors.hpp>
#include <dspace/groupoid.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixtures {

using dspace::FiniteGroupoid;
using dspace::GroupoidFunctor;
using dspace::GroupoidPtr;

struct GroupData {
  std::vector<std::string> names;
  int unit = 0;
  std::vector<std::vector<int>> table;  // table[a][b] = b * a ("b after a")
};

inline GroupData cyclic_group(int n) {
  GroupData g;
  for (int i = 0; i < n; ++i) g.names.push_back("g" + std::to_string(i));
  g.unit = 0;
  g.table.assign(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
  }
  return g;
}

inline GroupoidPtr group_groupoid(const GroupData& g, const std::string& object_name = "*") {
  return dspace::share(dspace::make_group_groupoid(object_name, g.names, g.unit, g.table));
}

inline GroupoidPtr cyclic_groupoid(int n) { return group_groupoid(cyclic_group(n)); }

inline GroupoidPtr discrete(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return dspace::share(dspace::make_discrete_groupoid(names));
}

inline GroupoidPtr point() { return discrete(1); }

/// Exactly one morphism between every ordered pair of objects.
inline GroupoidPtr codiscrete(int n) {
  FiniteGroupoid g;
  for (int i = 0; i < n; ++i) g.add_object("x" + std::to_string(i));
  const auto mor = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g.add_morphism(i, j, "(" + std::to_string(i) + "->" + std::to_string(j) + ")");
    }
  }
  for (int i = 0; i < n; ++i) g.set_identity(i, mor(i, i));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) g.set_compose(mor(i, j), mor(j, k), mor(i, k));
    }
  }
  return dspace::share(std::move(g));
}

/// Action groupoid S//G for a left action act[g][s], with its projection to
/// the one-object groupoid of G.
struct ActionGroupoid {
  GroupoidPtr groupoid;
  GroupoidPtr base;
  GroupoidFunctor projection;
};

inline ActionGroupoid action_groupoid(const GroupData& g, int set_size,
                                      const std::vector<std::vector<int>>& act) {
  const int order = static_cast<int>(g.names.size());
  FiniteGroupoid q;
  for (int s = 0; s < set_size; ++s) q.add_object("s" + std::to_string(s));
  const auto mor = [set_size](int elem, int s) { return elem * set_size + s; };
  for (int e = 0; e < order; ++e) {
    for (int s = 0; s < set_size; ++s) {
      q.add_morphism(s, act[e][s], g.names[e] + "@s" + std::to_string(s));
    }
  }
  for (int s = 0; s < set_size; ++s) q.set_identity(s, mor(g.unit, s));
  for (int e = 0; e < order; ++e) {
    for (int s = 0; s < set_size; ++s) {
      for (int e2 = 0; e2 < order; ++e2) {
        q.set_compose(mor(e, s), mor(e2, act[e][s]), mor(g.table[e][e2], s));
      }
    }
  }
  ActionGroupoid out;
  out.groupoid = dspace::share(std::move(q));
  out.base = group_groupoid(g);
  out.projection.source = out.groupoid;
  out.projection.target = out.base;
  out.projection.object_map.assign(set_size, 0);
  for (int e = 0; e < order; ++e) {
    for (int s = 0; s < set_size; ++s) out.projection.morphism_map.push_back(e);
  }
  return out;
}

/// Unique functor to the one-point groupoid.
inline GroupoidFunctor to_point(const GroupoidPtr& g, const GroupoidPtr& pt) {
  GroupoidFunctor f;
  f.source = g;
  f.target = pt;
  f.object_map.assign(g->object_count(), 0);
  f.morphism_map.assign(g->morphism_count(), pt->identity_at(0));
  return f;
}

inline dspace::CategoryFunctor functor_by_names(const dspace::CategoryPtr& src,
                                                const dspace::CategoryPtr& tgt,
                                                const std::map<std::string, std::string>& on_objects,
                                                const std::map<std::string, std::string>& on_morphisms) {
  const auto cat_object = [](const dspace::FiniteCategory& c, const std::string& name) {
    for (int o = 0; o < c.object_count(); ++o) {
      if (c.object_name(o) == name) return o;
    }
    throw std::runtime_error("no object named " + name);
  };
  const auto cat_morphism = [](const dspace::FiniteCategory& c, const std::string& name) {
    for (int m = 0; m < c.morphism_count(); ++m) {
      if (c.morphism(m).name == name) return m;
    }
    throw std::runtime_error("no morphism named " + name);
  };
  dspace::CategoryFunctor f;
  f.source = src;
  f.target = tgt;
  f.object_map.resize(src->object_count());
  f.morphism_map.resize(src->morphism_count());
  for (int o = 0; o < src->object_count(); ++o) {
    f.object_map[o] = cat_object(*tgt, on_objects.at(src->object_name(o)));
  }
  for (int m = 0; m < src->morphism_count(); ++m) {
    f.morphism_map[m] = cat_morphism(*tgt, on_morphisms.at(src->morphism(m).name));
  }
  if (const auto issues = f.validate(); !issues.empty()) {
    throw std::runtime_error("functor_by_names: " + issues.front());
  }
  return f;
}

inline int object_named(const FiniteGroupoid& g, const std::string& name) {
  for (int o = 0; o < g.object_count(); ++o) {
    if (g.object_name(o) == name) return o;
  }
  throw std::runtime_error("no object named " + name);
}

/// Grafts one extra object onto the (discrete) top level of a tower, with the
/// given face images by name: face_names[i] is the image under d_i.
inline void graft_top_simplex(dspace::TruncatedSimplicialGroupoid& x, const std::string& name,
                              const std::vector<std::string>& face_names) {
  const int n = x.truncation;
  std::vector<std::string> names;
  for (int o = 0; o < x.level(n)->object_count(); ++o) {
    names.push_back(x.level(n)->object_name(o));
  }
  names.push_back(name);
  const GroupoidPtr grown = dspace::share(dspace::make_discrete_groupoid(names));
  for (int i = 0; i <= n; ++i) {
    GroupoidFunctor& d = x.faces[n][i];
    d.source = grown;
    const int image = object_named(*x.level(n - 1), face_names[i]);
    d.object_map.push_back(image);
    d.morphism_map.push_back(image);
  }
  for (GroupoidFunctor& s : x.degeneracies[n - 1]) s.target = grown;
  x.levels[n] = grown;
}

inline dspace::MonoidData z2_monoid() { return {{"e", "x"}, "e", {{0, 1}, {1, 0}}}; }

/// The free partial monoid on one generator x with x·x undefined.
inline dspace::PartialMonoid one_letter_partial_monoid() {
  return {{"e", "x"}, "e", {{0, 1}, {1, -1}}};
}

/// Two objects u, v with Aut(u) = {id_u, t} of order two and a single arrow
/// f: u -> v satisfying f∘t = f.
inline dspace::FiniteCategory two_object_aut_category() {
  dspace::FiniteCategory c;
  const int u = c.add_object("u");
  const int v = c.add_object("v");
  const int id_u = c.add_morphism(u, u, "id_u");
  const int t = c.add_morphism(u, u, "t");
  const int id_v = c.add_morphism(v, v, "id_v");
  const int f = c.add_morphism(u, v, "f");
  c.set_identity(u, id_u);
  c.set_identity(v, id_v);
  c.set_compose(id_u, id_u, id_u);
  c.set_compose(id_u, t, t);
  c.set_compose(t, id_u, t);
  c.set_compose(t, t, id_u);
  c.set_compose(id_u, f, f);
  c.set_compose(t, f, f);
  c.set_compose(f, id_v, f);
  c.set_compose(id_v, id_v, id_v);
  return c;
}

/// A retract b of a: s: a -> b, r: b -> a with r∘s = id_a, and the idempotent
/// e = s∘r on b.
inline dspace::FiniteCategory retraction_category() {
  dspace::FiniteCategory c;
  const int a = c.add_object("a");
  const int b = c.add_object("b");
  const int id_a = c.add_morphism(a, a, "id_a");
  const int id_b = c.add_morphism(b, b, "id_b");
  const int s = c.add_morphism(a, b, "s");
  const int r = c.add_morphism(b, a, "r");
  const int e = c.add_morphism(b, b, "e");
  c.set_identity(a, id_a);
  c.set_identity(b, id_b);
  c.set_compose(id_a, id_a, id_a);
  c.set_compose(id_a, s, s);
  c.set_compose(s, id_b, s);
  c.set_compose(s, r, id_a);
  c.set_compose(s, e, s);
  c.set_compose(r, id_a, r);
  c.set_compose(r, s, e);
  c.set_compose(id_b, id_b, id_b);
  c.set_compose(id_b, r, r);
  c.set_compose(id_b, e, e);
  c.set_compose(e, id_b, e);
  c.set_compose(e, r, r);
  c.set_compose(e, e, e);
  return c;
}

}  // namespace fixtures
