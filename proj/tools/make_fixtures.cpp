// Regenerates the JSON fixtures under data/.  Every file is written in the
// canonical dump format, so rerunning the generator is byte-stable.
//
// Usage: make_fixtures [output-dir]   (default: data)

#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <dspace/constructors.hpp>
#include <dspace/groupoid.hpp>
#include <dspace/json_io.hpp>
#include <dspace/simplicial.hpp>

namespace {

using dspace::CategoryFunctor;
using dspace::CategoryPtr;
using dspace::DocumentKind;
using dspace::FiniteCategory;
using dspace::GroupoidFunctor;
using dspace::Json;
using dspace::MapDocument;
using dspace::SemiSimplicialGroupoid;
using dspace::TruncatedSimplicialGroupoid;

/// A two-object category with Aut(u) = Z/2 acting trivially on the single
/// arrow u -> v: objects u, v; morphisms id_u, t, id_v, f with t^2 = id_u
/// and f∘t = f.
FiniteCategory two_object_aut_category() {
    FiniteCategory c;
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

/// A retract b of a: s: a -> b, r: b -> a with r∘s = id_a and the idempotent
/// e = s∘r on b.
FiniteCategory retraction_category() {
    FiniteCategory c;
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

CategoryFunctor functor_by_names(const CategoryPtr& source, const CategoryPtr& target,
                                 const std::map<std::string, std::string>& on_objects,
                                 const std::map<std::string, std::string>& on_morphisms) {
    const auto object_index = [](const FiniteCategory& c, const std::string& name) {
        for (int o = 0; o < c.object_count(); ++o) {
            if (c.object_name(o) == name) return o;
        }
        throw std::runtime_error("unknown object '" + name + "'");
    };
    const auto morphism_index = [](const FiniteCategory& c, const std::string& name) {
        for (int m = 0; m < c.morphism_count(); ++m) {
            if (c.morphism(m).name == name) return m;
        }
        throw std::runtime_error("unknown morphism '" + name + "'");
    };
    CategoryFunctor functor;
    functor.source = source;
    functor.target = target;
    functor.object_map.resize(source->object_count());
    functor.morphism_map.resize(source->morphism_count());
    for (const auto& [from, to] : on_objects) {
        functor.object_map[object_index(*source, from)] = object_index(*target, to);
    }
    for (const auto& [from, to] : on_morphisms) {
        functor.morphism_map[morphism_index(*source, from)] = morphism_index(*target, to);
    }
    const auto problems = functor.validate();
    if (!problems.empty()) throw std::runtime_error("bad functor: " + problems.front());
    return functor;
}

/// One nondegenerate edge over a single vertex and nothing above: the
/// smallest nontrivial semi-simplicial fixture for the Kan extension.
SemiSimplicialGroupoid edge_semi_simplicial() {
    SemiSimplicialGroupoid z;
    z.truncation = 3;
    z.levels.push_back(dspace::share(dspace::make_discrete_groupoid({"*"})));
    z.levels.push_back(dspace::share(dspace::make_discrete_groupoid({"a"})));
    z.levels.push_back(dspace::share(dspace::make_discrete_groupoid({})));
    z.levels.push_back(dspace::share(dspace::make_discrete_groupoid({})));
    z.faces.resize(4);
    for (int i = 0; i < 2; ++i) {
        GroupoidFunctor face;
        face.source = z.levels[1];
        face.target = z.levels[0];
        face.object_map = {0};
        face.morphism_map = {0};
        z.faces[1].push_back(std::move(face));
    }
    for (int n = 2; n <= 3; ++n) {
        for (int i = 0; i <= n; ++i) {
            GroupoidFunctor face;
            face.source = z.levels[n];
            face.target = z.levels[n - 1];
            z.faces[n].push_back(std::move(face));
        }
    }
    const auto problems = z.validate();
    if (!problems.empty()) throw std::runtime_error("bad fixture: " + problems.front());
    return z;
}

MapDocument interval_inclusion_map() {
    const CategoryPtr two = dspace::share(dspace::category_from_poset(dspace::chain_poset(1)));
    const CategoryPtr three = dspace::share(dspace::category_from_poset(dspace::chain_poset(2)));
    MapDocument document;
    document.source = dspace::nerve(two, 3);
    document.target = dspace::nerve(three, 3);
    const CategoryFunctor interval =
        functor_by_names(two, three, {{"0", "0"}, {"1", "1"}},
                         {{"0<=0", "0<=0"}, {"0<=1", "0<=1"}, {"1<=1", "1<=1"}});
    document.map = dspace::nerve_map(interval, document.source, document.target);
    return document;
}

/// Collapses the edge of [1] onto the long edge of [2]; the naturality square
/// of the inner face d_1 is not a pullback, so the map is not culf.
MapDocument endpoints_map() {
    const CategoryPtr two = dspace::share(dspace::category_from_poset(dspace::chain_poset(1)));
    const CategoryPtr three = dspace::share(dspace::category_from_poset(dspace::chain_poset(2)));
    MapDocument document;
    document.source = dspace::nerve(two, 3);
    document.target = dspace::nerve(three, 3);
    const CategoryFunctor endpoints =
        functor_by_names(two, three, {{"0", "0"}, {"1", "2"}},
                         {{"0<=0", "0<=0"}, {"0<=1", "0<=2"}, {"1<=1", "2<=2"}});
    document.map = dspace::nerve_map(endpoints, document.source, document.target);
    return document;
}

void write_fixture(const std::string& dir, const std::string& name, DocumentKind kind,
                   Json payload) {
    const std::string path = dir + "/" + name;
    dspace::write_text_file(path, dspace::canonical_dump(dspace::wrap_document(kind, payload)));
    std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    try {
        write_fixture(dir, "divisors-12.json", DocumentKind::Poset,
                      dspace::poset_to_json(dspace::divisor_poset(12)));
        write_fixture(dir, "divisors-60.json", DocumentKind::Poset,
                      dspace::poset_to_json(dspace::divisor_poset(60)));
        write_fixture(dir, "boolean-3.json", DocumentKind::Poset,
                      dspace::poset_to_json(dspace::boolean_lattice(3)));
        write_fixture(dir, "chain-10.json", DocumentKind::Poset,
                      dspace::poset_to_json(dspace::chain_poset(10)));
        write_fixture(dir, "z2-monoid.json", DocumentKind::Monoid,
                      dspace::monoid_to_json({{"e", "x"}, "e", {{0, 1}, {1, 0}}}));
        write_fixture(dir, "one-letter-partial.json", DocumentKind::PartialMonoid,
                      dspace::partial_monoid_to_json({{"e", "x"}, "e", {{0, 1}, {1, -1}}}));
        write_fixture(dir, "two-object-aut.json", DocumentKind::Category,
                      dspace::category_to_json(two_object_aut_category()));
        write_fixture(dir, "retraction.json", DocumentKind::Category,
                      dspace::category_to_json(retraction_category()));
        write_fixture(dir, "interval-inclusion.json", DocumentKind::Map,
                      dspace::map_to_json(interval_inclusion_map()));
        write_fixture(dir, "endpoints-map.json", DocumentKind::Map,
                      dspace::map_to_json(endpoints_map()));
        write_fixture(dir, "edge-semi.json", DocumentKind::SemiSimplicial,
                      dspace::semi_simplicial_to_json(edge_semi_simplicial()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
