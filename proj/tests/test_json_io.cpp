#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>

#include "dspace/constructors.hpp"
#include "dspace/json_io.hpp"
#include "fixtures.hpp"

using namespace dspace;

namespace {

std::string dump_document(DocumentKind kind, Json payload) {
    return canonical_dump(wrap_document(kind, std::move(payload)));
}

}  // namespace

TEST_CASE("groupoid documents round trip byte for byte", "[json]") {
    const GroupoidPtr g = fixtures::cyclic_groupoid(3);
    const std::string text = dump_document(DocumentKind::Groupoid, groupoid_to_json(*g));
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::Groupoid);
    REQUIRE(document.groupoid != nullptr);
    CHECK(document.groupoid->object_count() == 1);
    CHECK(document.groupoid->morphism_count() == 3);
    CHECK(cardinality(*document.groupoid) == Rational(1, 3));
    CHECK(dump_document(DocumentKind::Groupoid, groupoid_to_json(*document.groupoid)) == text);
}

TEST_CASE("duplicate names are disambiguated with index prefixes", "[json]") {
    FiniteGroupoid doubled;
    const int a0 = doubled.add_object("a");
    const int a1 = doubled.add_object("a");
    doubled.set_identity(a0, doubled.add_morphism(a0, a0, "id"));
    doubled.set_identity(a1, doubled.add_morphism(a1, a1, "id"));
    doubled.set_compose(0, 0, 0);
    doubled.set_compose(1, 1, 1);
    REQUIRE(doubled.validate().empty());

    const Json payload = groupoid_to_json(doubled);
    CHECK(payload["objects"] == Json({"0:a", "1:a"}));
    CHECK(payload["morphisms"][0]["id"] == "0:id");

    const std::string text = dump_document(DocumentKind::Groupoid, payload);
    const Document document = load_document_text(text);
    CHECK(dump_document(DocumentKind::Groupoid, groupoid_to_json(*document.groupoid)) == text);
}

TEST_CASE("category documents round trip byte for byte", "[json]") {
    const FiniteCategory category = fixtures::two_object_aut_category();
    const std::string text = dump_document(DocumentKind::Category, category_to_json(category));
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::Category);
    REQUIRE(document.category != nullptr);
    CHECK(document.category->object_count() == 2);
    CHECK(document.category->morphism_count() == 4);
    CHECK(dump_document(DocumentKind::Category, category_to_json(*document.category)) == text);
}

TEST_CASE("poset documents compile to interval categories", "[json]") {
    const PosetData poset = divisor_poset(6);
    const std::string text = dump_document(DocumentKind::Poset, poset_to_json(poset));
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::Poset);
    REQUIRE(document.category != nullptr);
    CHECK(document.category->object_count() == 4);
    CHECK(document.category->morphism_count() == 9);

    const PosetData reparsed = poset_from_json(parse_json_text(text), "poset");
    CHECK(dump_document(DocumentKind::Poset, poset_to_json(reparsed)) == text);

    SECTION("order violations surface with the poset prefix") {
        Json broken = poset_to_json(PosetData{
            {"p", "q", "r"},
            {{"p", "p"}, {"q", "q"}, {"r", "r"}, {"p", "q"}, {"q", "r"}}});
        CHECK_THROWS_MATCHES(document_from_json(wrap_document(DocumentKind::Poset, broken)),
                             DocumentError,
                             Catch::Matchers::Message("poset: order is not transitive: 'p' <= 'q' "
                                                      "<= 'r' but the outer relation is missing"));
    }
}

TEST_CASE("monoid documents compile to one-object categories", "[json]") {
    const std::string text =
        dump_document(DocumentKind::Monoid, monoid_to_json(fixtures::z2_monoid()));
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::Monoid);
    REQUIRE(document.category != nullptr);
    CHECK(document.category->object_count() == 1);
    CHECK(document.category->morphism_count() == 2);

    SECTION("broken unit laws surface with the monoid prefix") {
        MonoidData broken = fixtures::z2_monoid();
        broken.table[0][1] = 0;
        CHECK_THROWS_MATCHES(
            document_from_json(wrap_document(DocumentKind::Monoid, monoid_to_json(broken))),
            DocumentError, Catch::Matchers::Message("monoid: unit law fails at 'x'"));
    }
    SECTION("null products are rejected outside partial monoids") {
        Json payload = monoid_to_json(fixtures::z2_monoid());
        payload["table"][1][1] = nullptr;
        CHECK_THROWS_WITH(monoid_from_json(payload, "monoid"),
                          Catch::Matchers::ContainsSubstring(
                              "null product is only allowed in partial monoids"));
    }
}

TEST_CASE("partial monoid documents keep undefined products as null", "[json]") {
    const PartialMonoid monoid = fixtures::one_letter_partial_monoid();
    const Json payload = partial_monoid_to_json(monoid);
    CHECK(payload["table"][1][1].is_null());

    const std::string text = dump_document(DocumentKind::PartialMonoid, payload);
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::PartialMonoid);
    REQUIRE(document.partial_monoid.has_value());
    CHECK(document.partial_monoid->defined(0, 1));
    CHECK_FALSE(document.partial_monoid->defined(1, 1));
    CHECK(dump_document(DocumentKind::PartialMonoid,
                        partial_monoid_to_json(*document.partial_monoid)) == text);

    SECTION("unit gaps are rejected on load") {
        Json json = partial_monoid_to_json(fixtures::one_letter_partial_monoid());
        json["table"][0][1] = nullptr;
        CHECK_THROWS_WITH(partial_monoid_from_json(json, "partial-monoid"),
                          Catch::Matchers::ContainsSubstring("partial-monoid: unit law fails"));
    }
    SECTION("one-sided definedness is rejected on load") {
        const PartialMonoid mismatched{{"e", "a", "b"}, "e", {{0, 1, 2}, {1, 2, 0}, {2, -1, -1}}};
        CHECK_THROWS_WITH(
            partial_monoid_from_json(partial_monoid_to_json(mismatched), "partial-monoid"),
            Catch::Matchers::ContainsSubstring("associativity definedness mismatch"));
    }
}

TEST_CASE("simplicial documents round trip byte for byte", "[json]") {
    SECTION("a discrete poset nerve") {
        const TruncatedSimplicialGroupoid x =
            nerve(share(category_from_poset(chain_poset(2))), 2);
        const std::string text = dump_document(DocumentKind::Simplicial, simplicial_to_json(x));
        const Document document = load_document_text(text);
        REQUIRE(document.kind == DocumentKind::Simplicial);
        REQUIRE(document.simplicial.has_value());
        CHECK(dump_document(DocumentKind::Simplicial, simplicial_to_json(*document.simplicial)) ==
              text);
    }
    SECTION("a fat nerve with nontrivial level automorphisms") {
        const TruncatedSimplicialGroupoid x =
            fat_nerve(share(category_from_monoid(fixtures::z2_monoid())), 2);
        const std::string text = dump_document(DocumentKind::Simplicial, simplicial_to_json(x));
        const Document document = load_document_text(text);
        REQUIRE(document.simplicial.has_value());
        CHECK(document.simplicial->truncation == 2);
        CHECK(cardinality(*document.simplicial->level(2)) == Rational(1, 2));
        CHECK(dump_document(DocumentKind::Simplicial, simplicial_to_json(*document.simplicial)) ==
              text);
    }
    SECTION("the loaded tower revalidates") {
        const TruncatedSimplicialGroupoid x =
            nerve(share(category_from_poset(chain_poset(1))), 2);
        Json json = wrap_document(DocumentKind::Simplicial, simplicial_to_json(x));

        Json missing_level = json;
        missing_level["levels"].erase(2);
        CHECK_THROWS_WITH(document_from_json(missing_level),
                          Catch::Matchers::ContainsSubstring("expected 3 levels"));

        Json missing_face = json;
        missing_face["faces"].erase("2");
        CHECK_THROWS_MATCHES(document_from_json(missing_face), DocumentError,
                             Catch::Matchers::Message("simplicial.faces['2']: missing"));

        Json stray_key = json;
        stray_key["faces"]["7"] = Json::array();
        CHECK_THROWS_WITH(document_from_json(stray_key),
                          Catch::Matchers::ContainsSubstring("unexpected level key '7'"));

        Json short_row = json;
        short_row["faces"]["2"].erase(2);
        CHECK_THROWS_WITH(document_from_json(short_row),
                          Catch::Matchers::ContainsSubstring("expected 3 functors"));

        Json bad_image = json;
        bad_image["degeneracies"]["0"][0]["on_objects"]["0"] = "no-such-object";
        CHECK_THROWS_WITH(document_from_json(bad_image),
                          Catch::Matchers::ContainsSubstring("unknown target object"));
    }
}

TEST_CASE("semi-simplicial documents carry only faces", "[json]") {
    const NondegeneratePart part =
        nondegenerate_part(nerve(share(category_from_poset(chain_poset(2))), 3));
    REQUIRE(part.closed);
    const Json payload = semi_simplicial_to_json(part.space);
    CHECK_FALSE(payload.contains("degeneracies"));

    const std::string text = dump_document(DocumentKind::SemiSimplicial, payload);
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::SemiSimplicial);
    REQUIRE(document.semi_simplicial.has_value());
    CHECK(document.semi_simplicial->truncation == 3);
    CHECK(document.semi_simplicial->level(2)->object_count() == 1);
    CHECK(dump_document(DocumentKind::SemiSimplicial,
                        semi_simplicial_to_json(*document.semi_simplicial)) == text);
}

TEST_CASE("map documents validate the stored simplicial map", "[json]") {
    const CategoryPtr two = share(category_from_poset(chain_poset(1)));
    const CategoryPtr three = share(category_from_poset(chain_poset(2)));
    const TruncatedSimplicialGroupoid xs = nerve(two, 2);
    const TruncatedSimplicialGroupoid xt = nerve(three, 2);
    const CategoryFunctor interval = fixtures::functor_by_names(
        two, three, {{"0", "0"}, {"1", "1"}},
        {{"0<=0", "0<=0"}, {"0<=1", "0<=1"}, {"1<=1", "1<=1"}});
    const MapDocument original{xs, xt, nerve_map(interval, xs, xt)};

    const std::string text = dump_document(DocumentKind::Map, map_to_json(original));
    const Document document = load_document_text(text);
    REQUIRE(document.kind == DocumentKind::Map);
    REQUIRE(document.map.has_value());
    CHECK(document.map->source.truncation == 2);
    CHECK(validate_map(document.map->map, document.map->source, document.map->target).empty());
    CHECK(dump_document(DocumentKind::Map, map_to_json(*document.map)) == text);

    SECTION("missing morphism images are reported with their location") {
        Json broken = parse_json_text(text);
        REQUIRE(broken["levels"][1]["on_morphisms"].erase("id(0<=1)") == 1);
        CHECK_THROWS_MATCHES(
            document_from_json(broken), DocumentError,
            Catch::Matchers::Message("map.levels[1].on_morphisms: missing morphism 'id(0<=1)'"));
    }
    SECTION("non-simplicial data is rejected by the stored-map validator") {
        Json broken = parse_json_text(text);
        broken["levels"][1]["on_objects"]["0<=1"] = "1<=2";
        CHECK_THROWS_WITH(document_from_json(broken),
                          Catch::Matchers::ContainsSubstring("map: "));
    }
}

TEST_CASE("the document envelope rejects malformed input", "[json]") {
    CHECK_THROWS_MATCHES(load_document_text("{"), DocumentError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::StartsWith("parse error:")));
    CHECK_THROWS_MATCHES(load_document_text("[1, 2]"), DocumentError,
                         Catch::Matchers::Message("document: expected a JSON object"));
    CHECK_THROWS_MATCHES(load_document_text("{\"kind\": \"poset\"}"), DocumentError,
                         Catch::Matchers::Message("document: missing field 'format'"));
    CHECK_THROWS_MATCHES(load_document_text("{\"format\": 99, \"kind\": \"poset\"}"),
                         DocumentError,
                         Catch::Matchers::Message("document.format: unrecognized version"));
    CHECK_THROWS_MATCHES(load_document_text("{\"format\": 1, \"kind\": \"widget\"}"),
                         DocumentError,
                         Catch::Matchers::Message("document.kind: unknown kind 'widget'"));

    Json groupoid = wrap_document(DocumentKind::Groupoid,
                                  groupoid_to_json(*fixtures::cyclic_groupoid(2)));
    groupoid["morphisms"][1]["src"] = "missing";
    CHECK_THROWS_MATCHES(
        document_from_json(groupoid), DocumentError,
        Catch::Matchers::Message("groupoid.morphisms['g1'].src: unknown object 'missing'"));
}

TEST_CASE("documents pass through the filesystem unchanged", "[json]") {
    const std::string path = "build_test_roundtrip.json";
    const std::string text =
        dump_document(DocumentKind::Poset, poset_to_json(boolean_lattice(2)));
    write_text_file(path, text);
    const Document document = load_document(path);
    REQUIRE(document.kind == DocumentKind::Poset);
    CHECK(document.category->object_count() == 4);
    CHECK(canonical_dump(read_json_file(path)) == text);
    std::remove(path.c_str());

    CHECK_THROWS_WITH(load_document("definitely-absent.json"),
                      Catch::Matchers::ContainsSubstring("cannot open"));
}
