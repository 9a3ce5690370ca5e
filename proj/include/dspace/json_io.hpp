#pragma once

#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dspace/constructors.hpp"
#include "dspace/groupoid.hpp"
#include "dspace/simplicial.hpp"

namespace dspace {

using Json = nlohmann::json;

inline constexpr int kDocumentFormat = 1;

/// Raised on malformed documents; the message starts with a location path.
class DocumentError : public std::runtime_error {
public:
    explicit DocumentError(const std::string& message) : std::runtime_error(message) {}
};

enum class DocumentKind {
    Groupoid,
    Category,
    Poset,
    Monoid,
    PartialMonoid,
    Simplicial,
    SemiSimplicial,
    Map,
};

inline std::string to_string(DocumentKind kind) {
    switch (kind) {
        case DocumentKind::Groupoid: return "groupoid";
        case DocumentKind::Category: return "category";
        case DocumentKind::Poset: return "poset";
        case DocumentKind::Monoid: return "monoid";
        case DocumentKind::PartialMonoid: return "partial-monoid";
        case DocumentKind::Simplicial: return "simplicial";
        case DocumentKind::SemiSimplicial: return "semi-simplicial";
        case DocumentKind::Map: return "map";
    }
    return "unknown";
}

struct MapDocument {
    TruncatedSimplicialGroupoid source;
    TruncatedSimplicialGroupoid target;
    SimplicialMap map;
};

/// A parsed, schema-validated document.  Exactly the member matching `kind`
/// is populated; poset and monoid sugar is additionally compiled to a
/// FiniteCategory ready for the nerve constructors.
struct Document {
    DocumentKind kind = DocumentKind::Groupoid;
    std::shared_ptr<const FiniteGroupoid> groupoid;
    std::shared_ptr<const FiniteCategory> category;  // category, poset, monoid
    std::optional<PartialMonoid> partial_monoid;
    std::optional<TruncatedSimplicialGroupoid> simplicial;
    std::optional<SemiSimplicialGroupoid> semi_simplicial;
    std::optional<MapDocument> map;
};

namespace detail {

inline const Json& require_field(const Json& json, const char* key, const std::string& where) {
    if (!json.is_object()) throw DocumentError(where + ": expected a JSON object");
    const auto it = json.find(key);
    if (it == json.end()) throw DocumentError(where + ": missing field '" + key + "'");
    return *it;
}

inline std::string require_string(const Json& json, const std::string& where) {
    if (!json.is_string()) throw DocumentError(where + ": expected a string");
    return json.get<std::string>();
}

inline const Json& require_array(const Json& json, const std::string& where) {
    if (!json.is_array()) throw DocumentError(where + ": expected an array");
    return json;
}

/// Stable unique string ids for serialization: the stored names when they are
/// already unique, otherwise prefixed with the numeric index.
inline std::vector<std::string> unique_ids(const std::vector<std::string>& names) {
    std::map<std::string, int> seen;
    for (const auto& name : names) ++seen[name];
    const bool unique = std::all_of(seen.begin(), seen.end(),
                                    [](const auto& entry) { return entry.second == 1; });
    if (unique) return names;
    std::vector<std::string> out;
    out.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        out.push_back(std::to_string(i) + ":" + names[i]);
    }
    return out;
}

inline std::vector<std::string> object_ids(const FiniteGroupoid& g) {
    std::vector<std::string> names;
    names.reserve(g.object_count());
    for (int o = 0; o < g.object_count(); ++o) names.push_back(g.object_name(o));
    return unique_ids(names);
}

inline std::vector<std::string> morphism_ids(const FiniteGroupoid& g) {
    std::vector<std::string> names;
    names.reserve(g.morphism_count());
    for (int m = 0; m < g.morphism_count(); ++m) names.push_back(g.morphism(m).name);
    return unique_ids(names);
}

/// The raw id-level content of a groupoid/category payload.
struct RawCategory {
    struct Morphism {
        std::string id, src, tgt;
    };
    std::vector<std::string> objects;
    std::vector<Morphism> morphisms;
    std::vector<std::pair<std::string, std::string>> identities;     // object -> morphism
    std::vector<std::array<std::string, 3>> composites;              // [f, g, h], h = g∘f
};

inline RawCategory parse_category_payload(const Json& json, const std::string& where) {
    RawCategory out;
    for (const auto& [index, value] :
         require_array(require_field(json, "objects", where), where + ".objects").items()) {
        out.objects.push_back(require_string(value, where + ".objects[" + index + "]"));
    }
    for (const auto& [index, value] :
         require_array(require_field(json, "morphisms", where), where + ".morphisms").items()) {
        const std::string mwhere = where + ".morphisms[" + index + "]";
        out.morphisms.push_back({require_string(require_field(value, "id", mwhere), mwhere + ".id"),
                                 require_string(require_field(value, "src", mwhere), mwhere + ".src"),
                                 require_string(require_field(value, "tgt", mwhere), mwhere + ".tgt")});
    }
    const Json& identity = require_field(json, "identity", where);
    if (!identity.is_object()) throw DocumentError(where + ".identity: expected an object");
    for (const auto& [object, morphism] : identity.items()) {
        out.identities.emplace_back(object,
                                    require_string(morphism, where + ".identity['" + object + "']"));
    }
    for (const auto& [index, triple] :
         require_array(require_field(json, "compose", where), where + ".compose").items()) {
        const std::string cwhere = where + ".compose[" + index + "]";
        if (!triple.is_array() || triple.size() != 3) {
            throw DocumentError(cwhere + ": expected a [f, g, h] triple");
        }
        out.composites.push_back({require_string(triple[0], cwhere + "[0]"),
                                  require_string(triple[1], cwhere + "[1]"),
                                  require_string(triple[2], cwhere + "[2]")});
    }
    return out;
}

/// Builds a FiniteGroupoid or FiniteCategory (same construction interface)
/// from raw payload data, resolving string ids.
template <typename Target>
Target build_category_like(const RawCategory& raw, const std::string& where) {
    Target out;
    std::unordered_map<std::string, int> objects, morphisms;
    for (const auto& name : raw.objects) {
        if (!objects.emplace(name, out.add_object(name)).second) {
            throw DocumentError(where + ".objects: duplicate id '" + name + "'");
        }
    }
    for (const auto& morphism : raw.morphisms) {
        const auto src = objects.find(morphism.src);
        const auto tgt = objects.find(morphism.tgt);
        if (src == objects.end()) {
            throw DocumentError(where + ".morphisms['" + morphism.id + "'].src: unknown object '" +
                                morphism.src + "'");
        }
        if (tgt == objects.end()) {
            throw DocumentError(where + ".morphisms['" + morphism.id + "'].tgt: unknown object '" +
                                morphism.tgt + "'");
        }
        if (!morphisms.emplace(morphism.id, out.add_morphism(src->second, tgt->second, morphism.id))
                 .second) {
            throw DocumentError(where + ".morphisms: duplicate id '" + morphism.id + "'");
        }
    }
    const auto morphism_id = [&](const std::string& id, const std::string& at) {
        const auto it = morphisms.find(id);
        if (it == morphisms.end()) {
            throw DocumentError(at + ": unknown morphism '" + id + "'");
        }
        return it->second;
    };
    for (const auto& [object, morphism] : raw.identities) {
        const auto it = objects.find(object);
        if (it == objects.end()) {
            throw DocumentError(where + ".identity: unknown object '" + object + "'");
        }
        out.set_identity(it->second, morphism_id(morphism, where + ".identity['" + object + "']"));
    }
    for (const auto& triple : raw.composites) {
        const std::string at = where + ".compose";
        out.set_compose(morphism_id(triple[0], at), morphism_id(triple[1], at),
                        morphism_id(triple[2], at));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Groupoid / category payloads
// ---------------------------------------------------------------------------

inline Json groupoid_to_json(const FiniteGroupoid& g) {
    const std::vector<std::string> objects = detail::object_ids(g);
    const std::vector<std::string> morphisms = detail::morphism_ids(g);
    Json payload;
    payload["objects"] = objects;
    Json mors = Json::array();
    for (int m = 0; m < g.morphism_count(); ++m) {
        mors.push_back(Json{{"id", morphisms[m]},
                            {"src", objects[g.morphism(m).src]},
                            {"tgt", objects[g.morphism(m).tgt]}});
    }
    payload["morphisms"] = std::move(mors);
    Json identity = Json::object();
    for (int o = 0; o < g.object_count(); ++o) {
        identity[objects[o]] = morphisms[g.identity_at(o)];
    }
    payload["identity"] = std::move(identity);
    std::vector<std::array<std::string, 3>> triples;
    for (int f = 0; f < g.morphism_count(); ++f) {
        for (const int h : g.outgoing(g.morphism(f).tgt)) {
            triples.push_back({morphisms[f], morphisms[h], morphisms[g.compose(f, h)]});
        }
    }
    std::sort(triples.begin(), triples.end());
    Json compose = Json::array();
    for (const auto& triple : triples) {
        compose.push_back(Json{triple[0], triple[1], triple[2]});
    }
    payload["compose"] = std::move(compose);
    return payload;
}

inline FiniteGroupoid groupoid_from_json(const Json& json, const std::string& where) {
    FiniteGroupoid out = detail::build_category_like<FiniteGroupoid>(
        detail::parse_category_payload(json, where), where);
    const auto problems = out.validate();
    if (!problems.empty()) {
        throw DocumentError(where + ": " + problems.front());
    }
    return out;
}

inline Json category_to_json(const FiniteCategory& category) {
    std::vector<std::string> object_names, morphism_names;
    for (int o = 0; o < category.object_count(); ++o) object_names.push_back(category.object_name(o));
    for (int m = 0; m < category.morphism_count(); ++m) {
        morphism_names.push_back(category.morphism(m).name);
    }
    const std::vector<std::string> objects = detail::unique_ids(object_names);
    const std::vector<std::string> morphisms = detail::unique_ids(morphism_names);
    Json payload;
    payload["objects"] = objects;
    Json mors = Json::array();
    for (int m = 0; m < category.morphism_count(); ++m) {
        mors.push_back(Json{{"id", morphisms[m]},
                            {"src", objects[category.morphism(m).src]},
                            {"tgt", objects[category.morphism(m).tgt]}});
    }
    payload["morphisms"] = std::move(mors);
    Json identity = Json::object();
    for (int o = 0; o < category.object_count(); ++o) {
        identity[objects[o]] = morphisms[category.identity_at(o)];
    }
    payload["identity"] = std::move(identity);
    std::vector<std::array<std::string, 3>> triples;
    for (int f = 0; f < category.morphism_count(); ++f) {
        for (int h = 0; h < category.morphism_count(); ++h) {
            if (category.composable(f, h)) {
                triples.push_back({morphisms[f], morphisms[h], morphisms[category.compose(f, h)]});
            }
        }
    }
    std::sort(triples.begin(), triples.end());
    Json compose = Json::array();
    for (const auto& triple : triples) {
        compose.push_back(Json{triple[0], triple[1], triple[2]});
    }
    payload["compose"] = std::move(compose);
    return payload;
}

inline FiniteCategory category_from_json(const Json& json, const std::string& where) {
    FiniteCategory out = detail::build_category_like<FiniteCategory>(
        detail::parse_category_payload(json, where), where);
    const auto problems = out.validate();
    if (!problems.empty()) {
        throw DocumentError(where + ": " + problems.front());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Poset / monoid / partial monoid payloads
// ---------------------------------------------------------------------------

inline Json poset_to_json(const PosetData& poset) {
    Json payload;
    payload["elements"] = poset.elements;
    std::vector<std::array<std::string, 2>> pairs;
    for (const auto& [lo, hi] : poset.relations) pairs.push_back({lo, hi});
    std::sort(pairs.begin(), pairs.end());
    Json leq = Json::array();
    for (const auto& pair : pairs) leq.push_back(Json{pair[0], pair[1]});
    payload["leq"] = std::move(leq);
    return payload;
}

inline PosetData poset_from_json(const Json& json, const std::string& where) {
    PosetData out;
    for (const auto& [index, value] :
         detail::require_array(detail::require_field(json, "elements", where), where + ".elements")
             .items()) {
        out.elements.push_back(detail::require_string(value, where + ".elements[" + index + "]"));
    }
    for (const auto& [index, value] :
         detail::require_array(detail::require_field(json, "leq", where), where + ".leq").items()) {
        const std::string pwhere = where + ".leq[" + index + "]";
        if (!value.is_array() || value.size() != 2) {
            throw DocumentError(pwhere + ": expected a [lower, upper] pair");
        }
        out.relations.emplace_back(detail::require_string(value[0], pwhere + "[0]"),
                                   detail::require_string(value[1], pwhere + "[1]"));
    }
    return out;
}

inline Json monoid_to_json(const MonoidData& monoid) {
    Json payload;
    payload["elements"] = monoid.elements;
    payload["unit"] = monoid.unit;
    Json table = Json::array();
    for (const auto& row : monoid.table) {
        Json out_row = Json::array();
        for (const int entry : row) out_row.push_back(monoid.elements.at(entry));
        table.push_back(std::move(out_row));
    }
    payload["table"] = std::move(table);
    return payload;
}

namespace detail {

/// Parses {elements, unit, table}; table entries are element names, with null
/// allowed when `allow_undefined` (encoded as -1).
inline void parse_monoid_common(const Json& json, const std::string& where, bool allow_undefined,
                                std::vector<std::string>& elements, std::string& unit,
                                std::vector<std::vector<int>>& table) {
    std::unordered_map<std::string, int> index;
    for (const auto& [i, value] :
         require_array(require_field(json, "elements", where), where + ".elements").items()) {
        const std::string name = require_string(value, where + ".elements[" + i + "]");
        if (!index.emplace(name, static_cast<int>(elements.size())).second) {
            throw DocumentError(where + ".elements: duplicate element '" + name + "'");
        }
        elements.push_back(name);
    }
    unit = require_string(require_field(json, "unit", where), where + ".unit");
    const Json& rows = require_array(require_field(json, "table", where), where + ".table");
    if (rows.size() != elements.size()) {
        throw DocumentError(where + ".table: expected " + std::to_string(elements.size()) +
                            " rows");
    }
    for (const auto& [r, row] : rows.items()) {
        const std::string rwhere = where + ".table[" + r + "]";
        if (!row.is_array() || row.size() != elements.size()) {
            throw DocumentError(rwhere + ": expected " + std::to_string(elements.size()) +
                                " entries");
        }
        std::vector<int> out_row;
        for (const auto& [c, entry] : row.items()) {
            const std::string ewhere = rwhere + "[" + c + "]";
            if (entry.is_null()) {
                if (!allow_undefined) {
                    throw DocumentError(ewhere + ": null product is only allowed in partial monoids");
                }
                out_row.push_back(-1);
                continue;
            }
            const std::string name = require_string(entry, ewhere);
            const auto it = index.find(name);
            if (it == index.end()) {
                throw DocumentError(ewhere + ": unknown element '" + name + "'");
            }
            out_row.push_back(it->second);
        }
        table.push_back(std::move(out_row));
    }
}

}  // namespace detail

inline MonoidData monoid_from_json(const Json& json, const std::string& where) {
    MonoidData out;
    detail::parse_monoid_common(json, where, false, out.elements, out.unit, out.table);
    return out;
}

inline Json partial_monoid_to_json(const PartialMonoid& monoid) {
    Json payload;
    payload["elements"] = monoid.elements;
    payload["unit"] = monoid.unit;
    Json table = Json::array();
    for (const auto& row : monoid.table) {
        Json out_row = Json::array();
        for (const int entry : row) {
            if (entry < 0) {
                out_row.push_back(nullptr);
            } else {
                out_row.push_back(monoid.elements.at(entry));
            }
        }
        table.push_back(std::move(out_row));
    }
    payload["table"] = std::move(table);
    return payload;
}

inline PartialMonoid partial_monoid_from_json(const Json& json, const std::string& where) {
    PartialMonoid out;
    detail::parse_monoid_common(json, where, true, out.elements, out.unit, out.table);
    const auto problems = out.validate();
    if (!problems.empty()) {
        throw DocumentError(where + ": " + problems.front());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Simplicial bundles and maps
// ---------------------------------------------------------------------------

namespace detail {

inline Json functor_to_json(const GroupoidFunctor& functor,
                            const std::vector<std::string>& src_objects,
                            const std::vector<std::string>& src_morphisms,
                            const std::vector<std::string>& tgt_objects,
                            const std::vector<std::string>& tgt_morphisms) {
    Json on_objects = Json::object();
    for (std::size_t o = 0; o < functor.object_map.size(); ++o) {
        on_objects[src_objects[o]] = tgt_objects[functor.object_map[o]];
    }
    Json on_morphisms = Json::object();
    for (std::size_t m = 0; m < functor.morphism_map.size(); ++m) {
        on_morphisms[src_morphisms[m]] = tgt_morphisms[functor.morphism_map[m]];
    }
    return Json{{"on_objects", std::move(on_objects)}, {"on_morphisms", std::move(on_morphisms)}};
}

/// Name-to-id lookup tables for one loaded groupoid level.
struct LevelIndex {
    std::unordered_map<std::string, int> objects;
    std::unordered_map<std::string, int> morphisms;
};

inline LevelIndex index_level(const FiniteGroupoid& g) {
    LevelIndex out;
    for (int o = 0; o < g.object_count(); ++o) out.objects.emplace(g.object_name(o), o);
    for (int m = 0; m < g.morphism_count(); ++m) out.morphisms.emplace(g.morphism(m).name, m);
    return out;
}

inline GroupoidFunctor functor_from_json(const Json& json, const std::string& where,
                                         const GroupoidPtr& source, const LevelIndex& src_index,
                                         const GroupoidPtr& target, const LevelIndex& tgt_index) {
    GroupoidFunctor out;
    out.source = source;
    out.target = target;
    const Json& on_objects = require_field(json, "on_objects", where);
    if (!on_objects.is_object()) throw DocumentError(where + ".on_objects: expected an object");
    const Json& on_morphisms = require_field(json, "on_morphisms", where);
    if (!on_morphisms.is_object()) throw DocumentError(where + ".on_morphisms: expected an object");

    out.object_map.assign(source->object_count(), -1);
    for (const auto& [from, to] : on_objects.items()) {
        const auto src = src_index.objects.find(from);
        if (src == src_index.objects.end()) {
            throw DocumentError(where + ".on_objects: unknown source object '" + from + "'");
        }
        const auto tgt = tgt_index.objects.find(require_string(to, where + ".on_objects['" + from + "']"));
        if (tgt == tgt_index.objects.end()) {
            throw DocumentError(where + ".on_objects['" + from + "']: unknown target object");
        }
        out.object_map[src->second] = tgt->second;
    }
    for (int o = 0; o < source->object_count(); ++o) {
        if (out.object_map[o] < 0) {
            throw DocumentError(where + ".on_objects: missing object '" + source->object_name(o) +
                                "'");
        }
    }
    out.morphism_map.assign(source->morphism_count(), -1);
    for (const auto& [from, to] : on_morphisms.items()) {
        const auto src = src_index.morphisms.find(from);
        if (src == src_index.morphisms.end()) {
            throw DocumentError(where + ".on_morphisms: unknown source morphism '" + from + "'");
        }
        const auto tgt =
            tgt_index.morphisms.find(require_string(to, where + ".on_morphisms['" + from + "']"));
        if (tgt == tgt_index.morphisms.end()) {
            throw DocumentError(where + ".on_morphisms['" + from + "']: unknown target morphism");
        }
        out.morphism_map[src->second] = tgt->second;
    }
    for (int m = 0; m < source->morphism_count(); ++m) {
        if (out.morphism_map[m] < 0) {
            throw DocumentError(where + ".on_morphisms: missing morphism '" +
                                source->morphism(m).name + "'");
        }
    }
    return out;
}

/// Shared loader for simplicial and semi-simplicial payloads.
inline void load_bundle_core(const Json& json, const std::string& where, bool with_degeneracies,
                             int& truncation, std::vector<GroupoidPtr>& levels,
                             std::vector<std::vector<GroupoidFunctor>>& faces,
                             std::vector<std::vector<GroupoidFunctor>>& degeneracies) {
    const Json& truncation_json = require_field(json, "truncation", where);
    if (!truncation_json.is_number_integer()) {
        throw DocumentError(where + ".truncation: expected an integer");
    }
    truncation = truncation_json.get<int>();
    if (truncation < 0) throw DocumentError(where + ".truncation: must be non-negative");

    const Json& level_array = require_array(require_field(json, "levels", where), where + ".levels");
    if (static_cast<int>(level_array.size()) != truncation + 1) {
        throw DocumentError(where + ".levels: expected " + std::to_string(truncation + 1) +
                            " levels");
    }
    std::vector<LevelIndex> indexes;
    for (int n = 0; n <= truncation; ++n) {
        const std::string lwhere = where + ".levels[" + std::to_string(n) + "]";
        FiniteGroupoid level = build_category_like<FiniteGroupoid>(
            parse_category_payload(level_array[n], lwhere), lwhere);
        const auto problems = level.validate();
        if (!problems.empty()) {
            throw DocumentError(lwhere + ": " + problems.front());
        }
        levels.push_back(share(std::move(level)));
        indexes.push_back(index_level(*levels.back()));
    }

    const auto load_tower = [&](const char* key, int low, int high, int arity_offset,
                                std::vector<std::vector<GroupoidFunctor>>& out, bool down) {
        const Json& tower = require_field(json, key, where);
        if (!tower.is_object()) {
            throw DocumentError(where + "." + key + ": expected an object keyed by level");
        }
        out.resize(high + 1);
        for (int n = low; n <= high; ++n) {
            const std::string twhere = where + "." + key + "['" + std::to_string(n) + "']";
            const auto it = tower.find(std::to_string(n));
            if (it == tower.end()) throw DocumentError(twhere + ": missing");
            const Json& entries = require_array(*it, twhere);
            if (static_cast<int>(entries.size()) != n + arity_offset) {
                throw DocumentError(twhere + ": expected " + std::to_string(n + arity_offset) +
                                    " functors");
            }
            const int target = down ? n - 1 : n + 1;
            for (int i = 0; i < static_cast<int>(entries.size()); ++i) {
                out[n].push_back(functor_from_json(entries[i],
                                                   twhere + "[" + std::to_string(i) + "]",
                                                   levels[n], indexes[n], levels[target],
                                                   indexes[target]));
            }
        }
        for (const auto& [key_text, unused] : tower.items()) {
            (void)unused;
            int parsed = -1;
            try {
                parsed = std::stoi(key_text);
            } catch (const std::exception&) {
            }
            if (parsed < low || parsed > high) {
                throw DocumentError(where + "." + key + ": unexpected level key '" + key_text +
                                    "'");
            }
        }
    };
    if (truncation >= 1) {
        load_tower("faces", 1, truncation, 1, faces, true);
    } else if (json.contains("faces") && !json["faces"].empty()) {
        throw DocumentError(where + ".faces: no face maps exist at truncation 0");
    }
    faces.resize(truncation + 1);
    if (with_degeneracies) {
        if (truncation >= 1) {
            load_tower("degeneracies", 0, truncation - 1, 1, degeneracies, false);
        } else if (json.contains("degeneracies") && !json["degeneracies"].empty()) {
            throw DocumentError(where + ".degeneracies: no degeneracies exist at truncation 0");
        }
        degeneracies.resize(std::max(truncation, 0));
    }
}

}  // namespace detail

inline Json simplicial_to_json(const TruncatedSimplicialGroupoid& x) {
    Json payload;
    payload["truncation"] = x.truncation;
    std::vector<std::vector<std::string>> objects, morphisms;
    Json levels = Json::array();
    for (int n = 0; n <= x.truncation; ++n) {
        objects.push_back(detail::object_ids(*x.level(n)));
        morphisms.push_back(detail::morphism_ids(*x.level(n)));
        levels.push_back(groupoid_to_json(*x.level(n)));
    }
    payload["levels"] = std::move(levels);
    Json faces = Json::object();
    for (int n = 1; n <= x.truncation; ++n) {
        Json entries = Json::array();
        for (int i = 0; i <= n; ++i) {
            entries.push_back(detail::functor_to_json(x.face(n, i), objects[n], morphisms[n],
                                                      objects[n - 1], morphisms[n - 1]));
        }
        faces[std::to_string(n)] = std::move(entries);
    }
    payload["faces"] = std::move(faces);
    Json degeneracies = Json::object();
    for (int n = 0; n < x.truncation; ++n) {
        Json entries = Json::array();
        for (int i = 0; i <= n; ++i) {
            entries.push_back(detail::functor_to_json(x.degeneracy(n, i), objects[n], morphisms[n],
                                                      objects[n + 1], morphisms[n + 1]));
        }
        degeneracies[std::to_string(n)] = std::move(entries);
    }
    payload["degeneracies"] = std::move(degeneracies);
    return payload;
}

inline Json semi_simplicial_to_json(const SemiSimplicialGroupoid& z) {
    Json payload;
    payload["truncation"] = z.truncation;
    std::vector<std::vector<std::string>> objects, morphisms;
    Json levels = Json::array();
    for (int n = 0; n <= z.truncation; ++n) {
        objects.push_back(detail::object_ids(*z.level(n)));
        morphisms.push_back(detail::morphism_ids(*z.level(n)));
        levels.push_back(groupoid_to_json(*z.level(n)));
    }
    payload["levels"] = std::move(levels);
    Json faces = Json::object();
    for (int n = 1; n <= z.truncation; ++n) {
        Json entries = Json::array();
        for (int i = 0; i <= n; ++i) {
            entries.push_back(detail::functor_to_json(z.face(n, i), objects[n], morphisms[n],
                                                      objects[n - 1], morphisms[n - 1]));
        }
        faces[std::to_string(n)] = std::move(entries);
    }
    payload["faces"] = std::move(faces);
    return payload;
}

inline TruncatedSimplicialGroupoid simplicial_from_json(const Json& json,
                                                        const std::string& where) {
    TruncatedSimplicialGroupoid out;
    detail::load_bundle_core(json, where, true, out.truncation, out.levels, out.faces,
                             out.degeneracies);
    const auto problems = out.validate();
    if (!problems.empty()) {
        throw DocumentError(where + ": " + problems.front());
    }
    return out;
}

inline SemiSimplicialGroupoid semi_simplicial_from_json(const Json& json,
                                                        const std::string& where) {
    SemiSimplicialGroupoid out;
    std::vector<std::vector<GroupoidFunctor>> unused;
    detail::load_bundle_core(json, where, false, out.truncation, out.levels, out.faces, unused);
    const auto problems = out.validate();
    if (!problems.empty()) {
        throw DocumentError(where + ": " + problems.front());
    }
    return out;
}

inline Json map_to_json(const MapDocument& document) {
    Json payload;
    payload["source"] = simplicial_to_json(document.source);
    payload["target"] = simplicial_to_json(document.target);
    Json levels = Json::array();
    for (int n = 0; n <= document.source.truncation; ++n) {
        levels.push_back(detail::functor_to_json(
            document.map.levels[n], detail::object_ids(*document.source.level(n)),
            detail::morphism_ids(*document.source.level(n)),
            detail::object_ids(*document.target.level(n)),
            detail::morphism_ids(*document.target.level(n))));
    }
    payload["levels"] = std::move(levels);
    return payload;
}

inline MapDocument map_from_json(const Json& json, const std::string& where) {
    MapDocument out;
    out.source = simplicial_from_json(detail::require_field(json, "source", where), where + ".source");
    out.target = simplicial_from_json(detail::require_field(json, "target", where), where + ".target");
    if (out.source.truncation != out.target.truncation) {
        throw DocumentError(where + ": source and target truncations differ");
    }
    const Json& levels =
        detail::require_array(detail::require_field(json, "levels", where), where + ".levels");
    if (static_cast<int>(levels.size()) != out.source.truncation + 1) {
        throw DocumentError(where + ".levels: expected " +
                            std::to_string(out.source.truncation + 1) + " functors");
    }
    for (int n = 0; n <= out.source.truncation; ++n) {
        out.map.levels.push_back(detail::functor_from_json(
            levels[n], where + ".levels[" + std::to_string(n) + "]", out.source.levels[n],
            detail::index_level(*out.source.level(n)), out.target.levels[n],
            detail::index_level(*out.target.level(n))));
    }
    const auto problems = validate_map(out.map, out.source, out.target);
    if (!problems.empty()) {
        throw DocumentError(where + ": " + problems.front());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Document envelope
// ---------------------------------------------------------------------------

inline Json wrap_document(DocumentKind kind, Json payload) {
    payload["format"] = kDocumentFormat;
    payload["kind"] = to_string(kind);
    return payload;
}

inline Document document_from_json(const Json& json) {
    if (!json.is_object()) throw DocumentError("document: expected a JSON object");
    const Json& format = detail::require_field(json, "format", "document");
    if (!format.is_number_integer() || format.get<int>() != kDocumentFormat) {
        throw DocumentError("document.format: unrecognized version");
    }
    const std::string kind = detail::require_string(detail::require_field(json, "kind", "document"),
                                                    "document.kind");
    Document out;
    if (kind == "groupoid") {
        out.kind = DocumentKind::Groupoid;
        out.groupoid = std::make_shared<const FiniteGroupoid>(groupoid_from_json(json, "groupoid"));
    } else if (kind == "category") {
        out.kind = DocumentKind::Category;
        out.category = std::make_shared<const FiniteCategory>(category_from_json(json, "category"));
    } else if (kind == "poset") {
        out.kind = DocumentKind::Poset;
        try {
            out.category = std::make_shared<const FiniteCategory>(
                category_from_poset(poset_from_json(json, "poset")));
        } catch (const std::invalid_argument& error) {
            throw DocumentError("poset: " + std::string(error.what()));
        }
    } else if (kind == "monoid") {
        out.kind = DocumentKind::Monoid;
        try {
            out.category = std::make_shared<const FiniteCategory>(
                category_from_monoid(monoid_from_json(json, "monoid")));
        } catch (const std::invalid_argument& error) {
            throw DocumentError("monoid: " + std::string(error.what()));
        }
    } else if (kind == "partial-monoid") {
        out.kind = DocumentKind::PartialMonoid;
        out.partial_monoid = partial_monoid_from_json(json, "partial-monoid");
    } else if (kind == "simplicial") {
        out.kind = DocumentKind::Simplicial;
        out.simplicial = simplicial_from_json(json, "simplicial");
    } else if (kind == "semi-simplicial") {
        out.kind = DocumentKind::SemiSimplicial;
        out.semi_simplicial = semi_simplicial_from_json(json, "semi-simplicial");
    } else if (kind == "map") {
        out.kind = DocumentKind::Map;
        out.map = map_from_json(json, "map");
    } else {
        throw DocumentError("document.kind: unknown kind '" + kind + "'");
    }
    return out;
}

/// Canonical text form: sorted keys, two-space indentation, trailing newline.
inline std::string canonical_dump(const Json& json) { return json.dump(2) + "\n"; }

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& error) {
        throw DocumentError(std::string("parse error: ") + error.what());
    }
}

inline Document load_document_text(const std::string& text) {
    return document_from_json(parse_json_text(text));
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DocumentError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str());
}

inline Document load_document(const std::string& path) {
    return document_from_json(read_json_file(path));
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DocumentError("cannot open '" + path + "' for writing");
    out << text;
}

}  // namespace dspace
