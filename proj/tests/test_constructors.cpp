#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "dspace/constructors.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dspace;

namespace {

int object_named(const FiniteGroupoid& g, const std::string& name) {
    for (int o = 0; o < g.object_count(); ++o) {
        if (g.object_name(o) == name) return o;
    }
    throw std::runtime_error("no object named " + name);
}

int morphism_named(const FiniteCategory& c, const std::string& name) {
    for (int m = 0; m < c.morphism_count(); ++m) {
        if (c.morphism(m).name == name) return m;
    }
    throw std::runtime_error("no morphism named " + name);
}

bool any_contains(const std::vector<std::string>& problems, const std::string& needle) {
    return std::any_of(problems.begin(), problems.end(), [&](const std::string& p) {
        return p.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("finite categories validate units, totality and associativity", "[constructors]") {
    SECTION("the shared fixtures are genuine categories") {
        CHECK(fixtures::two_object_aut_category().validate().empty());
        CHECK(fixtures::retraction_category().validate().empty());
    }
    SECTION("isomorphisms are recognized") {
        const FiniteCategory c = fixtures::two_object_aut_category();
        CHECK(c.is_isomorphism(morphism_named(c, "t")));
        CHECK(c.is_isomorphism(morphism_named(c, "id_v")));
        CHECK_FALSE(c.is_isomorphism(morphism_named(c, "f")));
    }
    SECTION("missing identities are reported") {
        FiniteCategory c;
        c.add_object("p");
        CHECK(any_contains(c.validate(), "object 'p' has no identity"));
    }
    SECTION("missing composites are reported") {
        FiniteCategory c;
        const int p = c.add_object("p");
        const int id = c.add_morphism(p, p, "id");
        c.add_morphism(p, p, "g");
        c.set_identity(p, id);
        c.set_compose(id, id, id);
        CHECK(any_contains(c.validate(), "missing composite of 'id' then 'g'"));
    }
    SECTION("broken associativity is reported") {
        FiniteCategory c;
        const int p = c.add_object("p");
        const int e = c.add_morphism(p, p, "e");
        const int a = c.add_morphism(p, p, "a");
        const int b = c.add_morphism(p, p, "b");
        c.set_identity(p, e);
        c.set_compose(e, e, e);
        c.set_compose(e, a, a);
        c.set_compose(e, b, b);
        c.set_compose(a, e, a);
        c.set_compose(b, e, b);
        c.set_compose(a, a, b);
        c.set_compose(a, b, e);
        c.set_compose(b, a, e);
        c.set_compose(b, b, b);
        CHECK(any_contains(c.validate(), "associativity fails on 'a', 'a', 'b'"));
    }
}

TEST_CASE("posets compile to categories with one arrow per relation", "[constructors]") {
    const FiniteCategory chain = category_from_poset(chain_poset(2));
    REQUIRE(chain.validate().empty());
    CHECK(chain.object_count() == 3);
    CHECK(chain.morphism_count() == 6);
    CHECK(chain.compose(morphism_named(chain, "0<=1"), morphism_named(chain, "1<=2")) ==
          morphism_named(chain, "0<=2"));

    SECTION("defective order data is rejected with a named witness") {
        CHECK_THROWS_WITH(category_from_poset(PosetData{{"p", "p"}, {}}),
                          Catch::Matchers::ContainsSubstring("duplicate poset element"));
        CHECK_THROWS_WITH(category_from_poset(PosetData{{"p"}, {{"p", "q"}}}),
                          Catch::Matchers::ContainsSubstring("unknown element 'q'"));
        CHECK_THROWS_WITH(category_from_poset(PosetData{{"p"}, {}}),
                          Catch::Matchers::ContainsSubstring("order is not reflexive at 'p'"));
        CHECK_THROWS_WITH(
            category_from_poset(
                PosetData{{"p", "q"}, {{"p", "p"}, {"q", "q"}, {"p", "q"}, {"q", "p"}}}),
            Catch::Matchers::ContainsSubstring("not antisymmetric on 'p' and 'q'"));
        CHECK_THROWS_WITH(
            category_from_poset(PosetData{
                {"p", "q", "r"},
                {{"p", "p"}, {"q", "q"}, {"r", "r"}, {"p", "q"}, {"q", "r"}}}),
            Catch::Matchers::ContainsSubstring(
                "not transitive: 'p' <= 'q' <= 'r' but the outer relation is missing"));
    }
}

TEST_CASE("builtin poset families have the expected shape", "[constructors]") {
    const PosetData d12 = divisor_poset(12);
    CHECK(d12.elements == std::vector<std::string>{"1", "2", "3", "4", "6", "12"});
    CHECK(d12.relations.size() == 18);

    const PosetData d60 = divisor_poset(60);
    CHECK(d60.elements.size() == 12);
    CHECK(d60.relations.size() == 54);

    const PosetData b3 = boolean_lattice(3);
    CHECK(b3.elements.size() == 8);
    CHECK(b3.relations.size() == 27);
    CHECK(b3.elements.front() == "000");
    CHECK(b3.elements.back() == "111");
    CHECK(boolean_lattice(0).elements == std::vector<std::string>{"()"});

    CHECK(chain_poset(10).elements.size() == 11);
    CHECK(chain_poset(10).relations.size() == 66);

    const PosetData fence = fence_poset(2);
    CHECK(fence.elements.size() == 5);
    CHECK(fence.relations.size() == 9);

    CHECK_THROWS_AS(divisor_poset(0), std::invalid_argument);
    CHECK_THROWS_AS(fence_poset(0), std::invalid_argument);
}

TEST_CASE("monoid categories enforce the unit and associativity laws", "[constructors]") {
    const FiniteCategory z2 = category_from_monoid(fixtures::z2_monoid());
    REQUIRE(z2.validate().empty());
    CHECK(z2.object_count() == 1);
    CHECK(z2.object_name(0) == "*");
    CHECK(z2.morphism_count() == 2);
    CHECK(z2.is_isomorphism(morphism_named(z2, "x")));

    MonoidData broken_unit = fixtures::z2_monoid();
    broken_unit.table[0][1] = 0;
    CHECK_THROWS_WITH(category_from_monoid(broken_unit),
                      Catch::Matchers::ContainsSubstring("unit law fails at 'x'"));

    const MonoidData broken_assoc{
        {"e", "a", "b"}, "e", {{0, 1, 2}, {1, 2, 2}, {2, 0, 0}}};
    CHECK_THROWS_WITH(category_from_monoid(broken_assoc),
                      Catch::Matchers::ContainsSubstring("associativity fails on"));
}

TEST_CASE("partial monoids validate strong associativity", "[constructors]") {
    CHECK(fixtures::one_letter_partial_monoid().validate().empty());

    PartialMonoid broken_unit = fixtures::one_letter_partial_monoid();
    broken_unit.table[1][0] = -1;
    CHECK(any_contains(broken_unit.validate(), "unit law fails at 'x'"));

    const PartialMonoid mismatched{
        {"e", "a", "b"}, "e", {{0, 1, 2}, {1, 2, 0}, {2, -1, -1}}};
    CHECK(any_contains(mismatched.validate(),
                       "associativity definedness mismatch on 'a', 'a', 'a'"));
}

TEST_CASE("nerve levels count multichains of the underlying poset", "[constructors]") {
    const auto check_counts = [](const PosetData& poset, int truncation) {
        const oracles::PosetTable table = oracles::poset_table(poset);
        const TruncatedSimplicialGroupoid x = nerve(share(category_from_poset(poset)), truncation);
        REQUIRE(x.validate().empty());
        for (int k = 0; k <= truncation; ++k) {
            INFO("level " << k);
            CHECK(x.level(k)->object_count() == oracles::multichain_count(table, k));
        }
    };
    check_counts(divisor_poset(12), 3);
    check_counts(boolean_lattice(3), 2);
    check_counts(fence_poset(2), 2);

    // Frozen spot values for the divisor poset of 12.
    const oracles::PosetTable d12 = oracles::poset_table(divisor_poset(12));
    CHECK(oracles::multichain_count(d12, 1) == 18);
    CHECK(oracles::multichain_count(d12, 2) == 40);
    CHECK(oracles::multichain_count(d12, 3) == 75);
}

TEST_CASE("the retraction category nerve contains the splitting triangle", "[constructors]") {
    const FiniteCategory c = fixtures::retraction_category();
    const TruncatedSimplicialGroupoid x = nerve(share(c), 2);
    REQUIRE(x.validate().empty());
    CHECK(x.level(0)->object_count() == 2);
    CHECK(x.level(1)->object_count() == 5);
    CHECK(x.level(2)->object_count() == 13);

    const int sr = object_named(*x.level(2), "s|r");
    CHECK(x.level(1)->object_name(x.face(2, 1).on_object(sr)) == "id_a");
    CHECK(x.level(1)->object_name(x.face(2, 0).on_object(sr)) == "r");
    CHECK(x.level(1)->object_name(x.face(2, 2).on_object(sr)) == "s");
}

TEST_CASE("partial monoid nerves enumerate strings with defined run products",
          "[constructors]") {
    const PartialMonoid pm = fixtures::one_letter_partial_monoid();
    const TruncatedSimplicialGroupoid x = nerve_partial(pm, 4);
    REQUIRE(x.validate().empty());
    for (int k = 0; k <= 4; ++k) {
        CHECK(x.level(k)->object_count() == k + 1);
    }
    CHECK(x.level(0)->object_name(0) == "()");

    const int xe = object_named(*x.level(2), "(x,e)");
    CHECK(x.level(1)->object_name(x.face(2, 0).on_object(xe)) == "(e)");
    CHECK(x.level(1)->object_name(x.face(2, 1).on_object(xe)) == "(x)");
    CHECK(x.level(1)->object_name(x.face(2, 2).on_object(xe)) == "(x)");

    const int just_x = object_named(*x.level(1), "(x)");
    CHECK(x.level(2)->object_name(x.degeneracy(1, 0).on_object(just_x)) == "(e,x)");
    CHECK(x.level(2)->object_name(x.degeneracy(1, 1).on_object(just_x)) == "(x,e)");

    const PartialMonoid mismatched{
        {"e", "a", "b"}, "e", {{0, 1, 2}, {1, 2, 0}, {2, -1, -1}}};
    CHECK_THROWS_AS(nerve_partial(mismatched, 2), std::invalid_argument);
}

TEST_CASE("fat nerves of groups are connected with full automorphism groups",
          "[constructors]") {
    const TruncatedSimplicialGroupoid fat =
        fat_nerve(share(category_from_monoid(fixtures::z2_monoid())), 3);
    REQUIRE(fat.validate().empty());
    for (int n = 0; n <= 3; ++n) {
        INFO("level " << n);
        const Pi0& pi = fat.level(n)->pi0();
        REQUIRE(pi.count() == 1);
        CHECK(pi.aut_order[0] == 2);
        CHECK(cardinality(*fat.level(n)) == Rational(1, 2));
    }
    const StructureReport report = structure_report(fat);
    CHECK(report.decomposition.holds());
    CHECK(report.segal.holds());
    CHECK(report.complete.holds());
    CHECK(report.split.holds());
}

TEST_CASE("the fat nerve separates automorphism classes of arrows", "[constructors]") {
    const TruncatedSimplicialGroupoid fat =
        fat_nerve(share(fixtures::two_object_aut_category()), 2);
    REQUIRE(fat.validate().empty());

    const auto aut_at = [](const FiniteGroupoid& g, const std::string& name) {
        const Pi0& pi = g.pi0();
        return pi.aut_order[pi.component_of[object_named(g, name)]];
    };

    const Pi0& vertices = fat.level(0)->pi0();
    REQUIRE(vertices.count() == 2);
    CHECK(aut_at(*fat.level(0), "u") == 2);
    CHECK(aut_at(*fat.level(0), "v") == 1);

    const Pi0& edges = fat.level(1)->pi0();
    REQUIRE(edges.count() == 3);
    CHECK(aut_at(*fat.level(1), "id_u") == 2);
    CHECK(aut_at(*fat.level(1), "f") == 2);
    CHECK(aut_at(*fat.level(1), "id_v") == 1);
    CHECK(edges.component_of[object_named(*fat.level(1), "id_u")] ==
          edges.component_of[object_named(*fat.level(1), "t")]);
    CHECK(edges.component_of[object_named(*fat.level(1), "f")] !=
          edges.component_of[object_named(*fat.level(1), "id_v")]);

    CHECK(check_decomposition(fat).holds());
    CHECK(check_segal(fat).holds());
    CHECK(check_complete(fat).holds());
}

TEST_CASE("fat nerves of posets look like strict nerves", "[constructors]") {
    const TruncatedSimplicialGroupoid fat =
        fat_nerve(share(category_from_poset(chain_poset(2))), 2);
    REQUIRE(fat.validate().empty());
    const std::vector<int> expected = {3, 6, 10};
    for (int n = 0; n <= 2; ++n) {
        const Pi0& pi = fat.level(n)->pi0();
        CHECK(pi.count() == expected[n]);
        for (const long long aut : pi.aut_order) CHECK(aut == 1);
    }
}
