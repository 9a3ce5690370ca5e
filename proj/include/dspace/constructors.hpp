#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dspace/groupoid.hpp"
#include "dspace/simplicial.hpp"

namespace dspace {

// ---------------------------------------------------------------------------
// Finite categories
// ---------------------------------------------------------------------------

/// A finite category presented by explicit object/morphism tables.  Unlike
/// FiniteGroupoid, morphisms need not be invertible.
class FiniteCategory {
public:
    struct Morphism {
        int src = -1;
        int tgt = -1;
        std::string name;
    };

    int add_object(std::string name) {
        object_names_.push_back(std::move(name));
        return static_cast<int>(object_names_.size()) - 1;
    }

    int add_morphism(int src, int tgt, std::string name) {
        if (src < 0 || src >= object_count() || tgt < 0 || tgt >= object_count()) {
            throw std::out_of_range("morphism endpoints out of range");
        }
        morphisms_.push_back(Morphism{src, tgt, std::move(name)});
        return static_cast<int>(morphisms_.size()) - 1;
    }

    void set_identity(int object, int morphism) {
        identity_.resize(object_names_.size(), -1);
        identity_.at(object) = morphism;
    }

    /// Record that `then ∘ first == result`.
    void set_compose(int first, int then, int result) {
        compose_[detail::pair_key(first, then)] = result;
    }

    int object_count() const { return static_cast<int>(object_names_.size()); }
    int morphism_count() const { return static_cast<int>(morphisms_.size()); }
    const std::string& object_name(int o) const { return object_names_.at(o); }
    const Morphism& morphism(int m) const { return morphisms_.at(m); }

    int identity_at(int object) const {
        if (object < 0 || object >= static_cast<int>(identity_.size()) ||
            identity_[object] < 0) {
            throw std::out_of_range("object has no identity morphism");
        }
        return identity_[object];
    }

    bool composable(int first, int then) const {
        return morphisms_.at(first).tgt == morphisms_.at(then).src;
    }

    int compose(int first, int then) const {
        auto it = compose_.find(detail::pair_key(first, then));
        if (it == compose_.end()) {
            throw std::out_of_range("composite not defined");
        }
        return it->second;
    }

    /// A morphism is invertible when some morphism composes with it to the
    /// identities on both sides.
    bool is_isomorphism(int m) const {
        const Morphism& f = morphisms_.at(m);
        for (int g = 0; g < morphism_count(); ++g) {
            const Morphism& back = morphisms_[g];
            if (back.src != f.tgt || back.tgt != f.src) continue;
            if (compose(m, g) == identity_at(f.src) &&
                compose(g, m) == identity_at(f.tgt)) {
                return true;
            }
        }
        return false;
    }

    /// Structural well-formedness: identities behave as units, composition is
    /// total on composable pairs, and associativity holds.
    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        auto complain = [&](std::string msg) {
            if (problems.size() < 32) problems.push_back(std::move(msg));
        };
        for (int o = 0; o < object_count(); ++o) {
            if (o >= static_cast<int>(identity_.size()) || identity_[o] < 0) {
                complain("object '" + object_names_[o] + "' has no identity");
                continue;
            }
            const Morphism& id = morphisms_.at(identity_[o]);
            if (id.src != o || id.tgt != o) {
                complain("identity of '" + object_names_[o] + "' is not an endomorphism");
            }
        }
        for (int f = 0; f < morphism_count(); ++f) {
            for (int g = 0; g < morphism_count(); ++g) {
                const bool ok = composable(f, g);
                auto it = compose_.find(detail::pair_key(f, g));
                if (ok && it == compose_.end()) {
                    complain("missing composite of '" + morphisms_[f].name + "' then '" +
                             morphisms_[g].name + "'");
                } else if (!ok && it != compose_.end()) {
                    complain("composite defined for non-composable pair '" +
                             morphisms_[f].name + "', '" + morphisms_[g].name + "'");
                } else if (ok) {
                    const Morphism& h = morphisms_.at(it->second);
                    if (h.src != morphisms_[f].src || h.tgt != morphisms_[g].tgt) {
                        complain("composite of '" + morphisms_[f].name + "' then '" +
                                 morphisms_[g].name + "' has wrong endpoints");
                    }
                }
            }
        }
        if (!problems.empty()) return problems;
        for (int f = 0; f < morphism_count(); ++f) {
            const Morphism& mf = morphisms_[f];
            if (compose(identity_at(mf.src), f) != f || compose(f, identity_at(mf.tgt)) != f) {
                complain("identity law fails at '" + mf.name + "'");
            }
        }
        for (int f = 0; f < morphism_count(); ++f) {
            for (int g = 0; g < morphism_count(); ++g) {
                if (!composable(f, g)) continue;
                const int fg = compose(f, g);
                for (int h = 0; h < morphism_count(); ++h) {
                    if (!composable(g, h)) continue;
                    if (compose(fg, h) != compose(f, compose(g, h))) {
                        complain("associativity fails on '" + morphisms_[f].name + "', '" +
                                 morphisms_[g].name + "', '" + morphisms_[h].name + "'");
                    }
                }
            }
        }
        return problems;
    }

private:
    std::vector<std::string> object_names_;
    std::vector<Morphism> morphisms_;
    std::vector<int> identity_;
    std::unordered_map<std::uint64_t, int> compose_;
};

using CategoryPtr = std::shared_ptr<const FiniteCategory>;

inline CategoryPtr share(FiniteCategory category) {
    return std::make_shared<const FiniteCategory>(std::move(category));
}

/// A functor between finite categories, tabulated on objects and morphisms.
struct CategoryFunctor {
    CategoryPtr source;
    CategoryPtr target;
    std::vector<int> object_map;
    std::vector<int> morphism_map;

    int on_object(int o) const { return object_map.at(o); }
    int on_morphism(int m) const { return morphism_map.at(m); }

    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        auto complain = [&](std::string msg) {
            if (problems.size() < 32) problems.push_back(std::move(msg));
        };
        if (static_cast<int>(object_map.size()) != source->object_count() ||
            static_cast<int>(morphism_map.size()) != source->morphism_count()) {
            complain("functor tables have the wrong size");
            return problems;
        }
        for (int m = 0; m < source->morphism_count(); ++m) {
            const auto& sm = source->morphism(m);
            const auto& tm = target->morphism(morphism_map[m]);
            if (tm.src != object_map[sm.src] || tm.tgt != object_map[sm.tgt]) {
                complain("functor breaks endpoints at '" + sm.name + "'");
            }
        }
        for (int o = 0; o < source->object_count(); ++o) {
            if (morphism_map[source->identity_at(o)] != target->identity_at(object_map[o])) {
                complain("functor breaks the identity at '" + source->object_name(o) + "'");
            }
        }
        for (int f = 0; f < source->morphism_count(); ++f) {
            for (int g = 0; g < source->morphism_count(); ++g) {
                if (!source->composable(f, g)) continue;
                if (morphism_map[source->compose(f, g)] !=
                    target->compose(morphism_map[f], morphism_map[g])) {
                    complain("functor breaks composition on '" + source->morphism(f).name +
                             "', '" + source->morphism(g).name + "'");
                }
            }
        }
        return problems;
    }
};

// ---------------------------------------------------------------------------
// Posets, monoids, partial monoids → categories
// ---------------------------------------------------------------------------

/// A finite poset given by its elements and the full order relation
/// (all pairs (a, b) with a ≤ b, including the reflexive pairs).
struct PosetData {
    std::vector<std::string> elements;
    std::vector<std::pair<std::string, std::string>> relations;
};

/// Builds the category whose morphisms x → y are the order relations x ≤ y.
/// Throws std::invalid_argument when the relation is not reflexive,
/// transitive and antisymmetric.
inline FiniteCategory category_from_poset(const PosetData& poset) {
    const int n = static_cast<int>(poset.elements.size());
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) {
        if (!index.emplace(poset.elements[i], i).second) {
            throw std::invalid_argument("duplicate poset element '" + poset.elements[i] + "'");
        }
    }
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (const auto& [lo, hi] : poset.relations) {
        auto a = index.find(lo);
        auto b = index.find(hi);
        if (a == index.end() || b == index.end()) {
            throw std::invalid_argument("relation mentions unknown element '" +
                                        (a == index.end() ? lo : hi) + "'");
        }
        leq[a->second][b->second] = true;
    }
    for (int i = 0; i < n; ++i) {
        if (!leq[i][i]) {
            throw std::invalid_argument("order is not reflexive at '" + poset.elements[i] + "'");
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && leq[i][j] && leq[j][i]) {
                throw std::invalid_argument("order is not antisymmetric on '" +
                                            poset.elements[i] + "' and '" +
                                            poset.elements[j] + "'");
            }
            if (!leq[i][j]) continue;
            for (int k = 0; k < n; ++k) {
                if (leq[j][k] && !leq[i][k]) {
                    throw std::invalid_argument(
                        "order is not transitive: '" + poset.elements[i] + "' <= '" +
                        poset.elements[j] + "' <= '" + poset.elements[k] +
                        "' but the outer relation is missing");
                }
            }
        }
    }
    FiniteCategory category;
    for (const auto& e : poset.elements) category.add_object(e);
    std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (leq[i][j]) {
                arrow[i][j] = category.add_morphism(
                    i, j, poset.elements[i] + "<=" + poset.elements[j]);
            }
        }
    }
    for (int i = 0; i < n; ++i) category.set_identity(i, arrow[i][i]);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (arrow[i][j] < 0) continue;
            for (int k = 0; k < n; ++k) {
                if (arrow[j][k] >= 0) {
                    category.set_compose(arrow[i][j], arrow[j][k], arrow[i][k]);
                }
            }
        }
    }
    return category;
}

/// A finite monoid by multiplication table; table[a][b] is the product
/// "b after a" (left-to-right composition order).
struct MonoidData {
    std::vector<std::string> elements;
    std::string unit;
    std::vector<std::vector<int>> table;
};

inline FiniteCategory category_from_monoid(const MonoidData& monoid) {
    const int n = static_cast<int>(monoid.elements.size());
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) {
        if (!index.emplace(monoid.elements[i], i).second) {
            throw std::invalid_argument("duplicate monoid element '" + monoid.elements[i] + "'");
        }
    }
    auto unit_it = index.find(monoid.unit);
    if (unit_it == index.end()) {
        throw std::invalid_argument("unit '" + monoid.unit + "' is not an element");
    }
    const int unit = unit_it->second;
    if (static_cast<int>(monoid.table.size()) != n) {
        throw std::invalid_argument("multiplication table has the wrong shape");
    }
    for (const auto& row : monoid.table) {
        if (static_cast<int>(row.size()) != n) {
            throw std::invalid_argument("multiplication table has the wrong shape");
        }
        for (int v : row) {
            if (v < 0 || v >= n) throw std::invalid_argument("table entry out of range");
        }
    }
    for (int a = 0; a < n; ++a) {
        if (monoid.table[unit][a] != a || monoid.table[a][unit] != a) {
            throw std::invalid_argument("unit law fails at '" + monoid.elements[a] + "'");
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                if (monoid.table[monoid.table[a][b]][c] != monoid.table[a][monoid.table[b][c]]) {
                    throw std::invalid_argument(
                        "associativity fails on '" + monoid.elements[a] + "', '" +
                        monoid.elements[b] + "', '" + monoid.elements[c] + "'");
                }
            }
        }
    }
    FiniteCategory category;
    const int star = category.add_object("*");
    std::vector<int> arrow(n);
    for (int a = 0; a < n; ++a) arrow[a] = category.add_morphism(star, star, monoid.elements[a]);
    category.set_identity(star, arrow[unit]);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            category.set_compose(arrow[a], arrow[b], arrow[monoid.table[a][b]]);
        }
    }
    return category;
}

/// A finite partial monoid: table entries < 0 mean "product undefined".
struct PartialMonoid {
    std::vector<std::string> elements;
    std::string unit;
    std::vector<std::vector<int>> table;

    int element_count() const { return static_cast<int>(elements.size()); }

    int unit_index() const {
        auto it = std::find(elements.begin(), elements.end(), unit);
        if (it == elements.end()) throw std::invalid_argument("unit is not an element");
        return static_cast<int>(it - elements.begin());
    }

    bool defined(int a, int b) const { return table.at(a).at(b) >= 0; }
    int product(int a, int b) const { return table.at(a).at(b); }

    /// Unit laws must hold totally; associativity must hold strongly: for all
    /// a, b, c the composite (ab)c is defined exactly when a(bc) is, and then
    /// the two agree.
    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        auto complain = [&](std::string msg) {
            if (problems.size() < 32) problems.push_back(std::move(msg));
        };
        const int n = element_count();
        if (static_cast<int>(table.size()) != n) {
            complain("table has the wrong shape");
            return problems;
        }
        for (const auto& row : table) {
            if (static_cast<int>(row.size()) != n) {
                complain("table has the wrong shape");
                return problems;
            }
            for (int v : row) {
                if (v >= n) {
                    complain("table entry out of range");
                    return problems;
                }
            }
        }
        int e = -1;
        try {
            e = unit_index();
        } catch (const std::invalid_argument&) {
            complain("unit '" + unit + "' is not an element");
            return problems;
        }
        for (int a = 0; a < n; ++a) {
            if (!defined(e, a) || product(e, a) != a || !defined(a, e) || product(a, e) != a) {
                complain("unit law fails at '" + elements[a] + "'");
            }
        }
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                for (int c = 0; c < n; ++c) {
                    const bool left = defined(a, b) && defined(product(a, b), c);
                    const bool right = defined(b, c) && defined(a, product(b, c));
                    if (left != right) {
                        complain("associativity definedness mismatch on '" + elements[a] +
                                 "', '" + elements[b] + "', '" + elements[c] + "'");
                    } else if (left && product(product(a, b), c) != product(a, product(b, c))) {
                        complain("associativity fails on '" + elements[a] + "', '" +
                                 elements[b] + "', '" + elements[c] + "'");
                    }
                }
            }
        }
        return problems;
    }
};

// ---------------------------------------------------------------------------
// Nerves
// ---------------------------------------------------------------------------

namespace detail {

/// Joins morphism names with '|' to label a composable string.
inline std::string join_names(const FiniteCategory& category, const std::vector<int>& string) {
    std::string out;
    for (std::size_t i = 0; i < string.size(); ++i) {
        if (i > 0) out += '|';
        out += category.morphism(string[i]).name;
    }
    return out;
}

}  // namespace detail

/// The nerve of a finite category, truncated at level `truncation`.  Level n
/// is the discrete groupoid of length-n composable strings of morphisms;
/// level 0 is the discrete groupoid of objects.
inline TruncatedSimplicialGroupoid nerve(const CategoryPtr& category, int truncation) {
    if (truncation < 0) throw std::invalid_argument("truncation must be non-negative");
    const FiniteCategory& cat = *category;

    // strings[n] lists the composable strings of length n in generation order;
    // index[n] maps a string back to its object id at level n.
    std::vector<std::vector<std::vector<int>>> strings(truncation + 1);
    std::vector<std::map<std::vector<int>, int>> index(truncation + 1);

    TruncatedSimplicialGroupoid space;
    space.truncation = truncation;

    {
        std::vector<std::string> names;
        names.reserve(cat.object_count());
        for (int o = 0; o < cat.object_count(); ++o) names.push_back(cat.object_name(o));
        space.levels.push_back(share(make_discrete_groupoid(names)));
    }
    for (int n = 1; n <= truncation; ++n) {
        std::vector<std::string> names;
        if (n == 1) {
            for (int m = 0; m < cat.morphism_count(); ++m) {
                strings[1].push_back({m});
                index[1].emplace(std::vector<int>{m}, static_cast<int>(strings[1].size()) - 1);
                names.push_back(cat.morphism(m).name);
            }
        } else {
            for (const auto& prefix : strings[n - 1]) {
                const int tail = cat.morphism(prefix.back()).tgt;
                for (int m = 0; m < cat.morphism_count(); ++m) {
                    if (cat.morphism(m).src != tail) continue;
                    std::vector<int> extended = prefix;
                    extended.push_back(m);
                    strings[n].push_back(extended);
                    index[n].emplace(std::move(extended), static_cast<int>(strings[n].size()) - 1);
                    names.push_back(detail::join_names(cat, strings[n].back()));
                }
            }
        }
        space.levels.push_back(share(make_discrete_groupoid(names)));
    }

    auto discrete_functor = [&](int src_level, int tgt_level,
                                auto&& on_string) -> GroupoidFunctor {
        GroupoidFunctor functor;
        functor.source = space.levels[src_level];
        functor.target = space.levels[tgt_level];
        const int count = functor.source->object_count();
        functor.object_map.resize(count);
        functor.morphism_map.resize(count);
        for (int s = 0; s < count; ++s) {
            const int image = on_string(s);
            functor.object_map[s] = image;
            functor.morphism_map[s] = image;  // discrete levels: morphism ids mirror object ids
        }
        return functor;
    };

    space.faces.assign(truncation + 1, {});
    space.degeneracies.assign(std::max(truncation, 0), {});
    for (int n = 1; n <= truncation; ++n) {
        for (int i = 0; i <= n; ++i) {
            space.faces[n].push_back(discrete_functor(n, n - 1, [&](int s) {
                const std::vector<int>& str = strings[n][s];
                if (n == 1) {
                    return i == 0 ? cat.morphism(str[0]).tgt : cat.morphism(str[0]).src;
                }
                std::vector<int> image;
                image.reserve(n - 1);
                if (i == 0) {
                    image.assign(str.begin() + 1, str.end());
                } else if (i == n) {
                    image.assign(str.begin(), str.end() - 1);
                } else {
                    image.assign(str.begin(), str.begin() + (i - 1));
                    image.push_back(cat.compose(str[i - 1], str[i]));
                    image.insert(image.end(), str.begin() + (i + 1), str.end());
                }
                return index[n - 1].at(image);
            }));
        }
    }
    for (int n = 0; n < truncation; ++n) {
        for (int i = 0; i <= n; ++i) {
            space.degeneracies[n].push_back(discrete_functor(n, n + 1, [&](int s) {
                std::vector<int> image;
                image.reserve(n + 1);
                if (n == 0) {
                    image.push_back(cat.identity_at(s));
                } else {
                    const std::vector<int>& str = strings[n][s];
                    image.assign(str.begin(), str.begin() + i);
                    const int vertex = i == 0 ? cat.morphism(str[0]).src
                                              : cat.morphism(str[i - 1]).tgt;
                    image.push_back(cat.identity_at(vertex));
                    image.insert(image.end(), str.begin() + i, str.end());
                }
                return index[n + 1].at(image);
            }));
        }
    }
    return space;
}

/// The nerve of a partial monoid, truncated at level `truncation`.  Level 0 is
/// a single point; level n consists of the tuples (a_1, …, a_n) all of whose
/// consecutive-run products are defined.
inline TruncatedSimplicialGroupoid nerve_partial(const PartialMonoid& monoid, int truncation) {
    if (truncation < 0) throw std::invalid_argument("truncation must be non-negative");
    {
        auto problems = monoid.validate();
        if (!problems.empty()) throw std::invalid_argument(problems.front());
    }
    const int n_elems = monoid.element_count();

    // run_product[t] caches the product of every consecutive run of the tuple,
    // or -1 when any needed product is undefined.
    auto runs_defined = [&](const std::vector<int>& tuple) {
        const int k = static_cast<int>(tuple.size());
        for (int lo = 0; lo < k; ++lo) {
            int acc = tuple[lo];
            for (int hi = lo + 1; hi < k; ++hi) {
                if (!monoid.defined(acc, tuple[hi])) return false;
                acc = monoid.product(acc, tuple[hi]);
            }
        }
        return true;
    };
    auto run_product = [&](const std::vector<int>& tuple, int lo, int hi) {
        int acc = tuple[lo];
        for (int t = lo + 1; t <= hi; ++t) acc = monoid.product(acc, tuple[t]);
        return acc;
    };
    auto tuple_name = [&](const std::vector<int>& tuple) {
        std::string out = "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i > 0) out += ',';
            out += monoid.elements[tuple[i]];
        }
        return out + ")";
    };

    std::vector<std::vector<std::vector<int>>> tuples(truncation + 1);
    std::vector<std::map<std::vector<int>, int>> index(truncation + 1);
    tuples[0].push_back({});
    index[0].emplace(std::vector<int>{}, 0);
    for (int n = 1; n <= truncation; ++n) {
        for (const auto& prefix : tuples[n - 1]) {
            for (int a = 0; a < n_elems; ++a) {
                std::vector<int> extended = prefix;
                extended.push_back(a);
                if (!runs_defined(extended)) continue;
                tuples[n].push_back(extended);
                index[n].emplace(std::move(extended), static_cast<int>(tuples[n].size()) - 1);
            }
        }
    }

    TruncatedSimplicialGroupoid space;
    space.truncation = truncation;
    for (int n = 0; n <= truncation; ++n) {
        std::vector<std::string> names;
        names.reserve(tuples[n].size());
        for (const auto& tuple : tuples[n]) names.push_back(tuple_name(tuple));
        space.levels.push_back(share(make_discrete_groupoid(names)));
    }

    auto discrete_functor = [&](int src_level, int tgt_level,
                                auto&& on_tuple) -> GroupoidFunctor {
        GroupoidFunctor functor;
        functor.source = space.levels[src_level];
        functor.target = space.levels[tgt_level];
        const int count = functor.source->object_count();
        functor.object_map.resize(count);
        functor.morphism_map.resize(count);
        for (int s = 0; s < count; ++s) {
            const int image = on_tuple(tuples[src_level][s]);
            functor.object_map[s] = image;
            functor.morphism_map[s] = image;
        }
        return functor;
    };

    const int unit = monoid.unit_index();
    space.faces.assign(truncation + 1, {});
    space.degeneracies.assign(std::max(truncation, 0), {});
    for (int n = 1; n <= truncation; ++n) {
        for (int i = 0; i <= n; ++i) {
            space.faces[n].push_back(discrete_functor(n, n - 1, [&, i, n](const std::vector<int>& t) {
                std::vector<int> image;
                image.reserve(n - 1);
                if (i == 0) {
                    image.assign(t.begin() + 1, t.end());
                } else if (i == n) {
                    image.assign(t.begin(), t.end() - 1);
                } else {
                    image.assign(t.begin(), t.begin() + (i - 1));
                    image.push_back(run_product(t, i - 1, i));
                    image.insert(image.end(), t.begin() + (i + 1), t.end());
                }
                return index[n - 1].at(image);
            }));
        }
    }
    for (int n = 0; n < truncation; ++n) {
        for (int i = 0; i <= n; ++i) {
            space.degeneracies[n].push_back(
                discrete_functor(n, n + 1, [&, i](const std::vector<int>& t) {
                    std::vector<int> image;
                    image.reserve(t.size() + 1);
                    image.assign(t.begin(), t.begin() + i);
                    image.push_back(unit);
                    image.insert(image.end(), t.begin() + i, t.end());
                    return index[t.size() + 1].at(image);
                }));
        }
    }
    return space;
}

/// The fat nerve of a finite category.  Level n has the composable strings as
/// objects, and as morphisms the isomorphism tuples (φ_0, …, φ_n) conjugating
/// one string into another; level 0 is the core of the category.
inline TruncatedSimplicialGroupoid fat_nerve(const CategoryPtr& category, int truncation) {
    if (truncation < 0) throw std::invalid_argument("truncation must be non-negative");
    const FiniteCategory& cat = *category;

    std::vector<int> isos;  // morphism ids of the invertible morphisms
    std::unordered_map<int, int> inverse_of;
    for (int m = 0; m < cat.morphism_count(); ++m) {
        if (cat.is_isomorphism(m)) {
            isos.push_back(m);
            const auto& fm = cat.morphism(m);
            for (int g = 0; g < cat.morphism_count(); ++g) {
                const auto& gm = cat.morphism(g);
                if (gm.src == fm.tgt && gm.tgt == fm.src &&
                    cat.compose(m, g) == cat.identity_at(fm.src) &&
                    cat.compose(g, m) == cat.identity_at(fm.tgt)) {
                    inverse_of[m] = g;
                    break;
                }
            }
        }
    }
    auto isos_at = [&](int object) {
        std::vector<int> out;
        for (int m : isos) {
            if (cat.morphism(m).src == object) out.push_back(m);
        }
        return out;
    };

    // Composable strings per level, exactly as for the ordinary nerve.
    std::vector<std::vector<std::vector<int>>> strings(truncation + 1);
    std::vector<std::map<std::vector<int>, int>> index(truncation + 1);
    for (int o = 0; o < cat.object_count(); ++o) {
        strings[0].push_back({o});
        index[0].emplace(std::vector<int>{o}, o);
    }
    for (int n = 1; n <= truncation; ++n) {
        for (const auto& prefix : strings[n - 1]) {
            const int tail = n == 1 ? prefix[0] : cat.morphism(prefix.back()).tgt;
            for (int m = 0; m < cat.morphism_count(); ++m) {
                if (cat.morphism(m).src != tail) continue;
                std::vector<int> extended = n == 1 ? std::vector<int>{m} : prefix;
                if (n > 1) extended.push_back(m);
                strings[n].push_back(extended);
                index[n].emplace(std::move(extended), static_cast<int>(strings[n].size()) - 1);
            }
        }
    }
    auto string_vertex = [&](int level, const std::vector<int>& str, int v) {
        if (level == 0) return str[0];
        return v == 0 ? cat.morphism(str[0]).src : cat.morphism(str[v - 1]).tgt;
    };

    // Morphisms of level n: (source string s, iso tuple φ) with matching
    // vertices; the target string is determined by conjugation.
    struct LevelData {
        std::vector<std::vector<int>> tuples;           // iso tuple per morphism
        std::vector<int> source_string;                 // source string id per morphism
        std::map<std::pair<int, std::vector<int>>, int> morphism_index;
    };
    std::vector<LevelData> data(truncation + 1);

    TruncatedSimplicialGroupoid space;
    space.truncation = truncation;
    std::vector<std::shared_ptr<FiniteGroupoid>> built(truncation + 1);

    for (int n = 0; n <= truncation; ++n) {
        auto level = std::make_shared<FiniteGroupoid>();
        for (const auto& str : strings[n]) {
            level->add_object(n == 0 ? cat.object_name(str[0]) : detail::join_names(cat, str));
        }
        auto conjugate = [&](int s, const std::vector<int>& phi) {
            // target string: f_i' = φ_i ∘ f_i ∘ φ_{i-1}^{-1}
            const auto& str = strings[n][s];
            std::vector<int> out;
            out.reserve(str.size());
            if (n == 0) {
                out.push_back(cat.morphism(phi[0]).tgt);
            } else {
                for (int i = 1; i <= n; ++i) {
                    const int back = inverse_of.at(phi[i - 1]);
                    out.push_back(cat.compose(cat.compose(back, str[i - 1]), phi[i]));
                }
            }
            return index[n].at(out);
        };
        // Enumerate iso tuples per source string.
        for (int s = 0; s < static_cast<int>(strings[n].size()); ++s) {
            std::vector<std::vector<int>> choices(n + 1);
            for (int v = 0; v <= n; ++v) choices[v] = isos_at(string_vertex(n, strings[n][s], v));
            std::vector<int> tuple(n + 1);
            auto emit = [&](auto&& self, int v) -> void {
                if (v > n) {
                    const int target = conjugate(s, tuple);
                    const int id = level->add_morphism(
                        s, target, "(" + [&] {
                            std::string body;
                            for (int t = 0; t <= n; ++t) {
                                if (t > 0) body += ',';
                                body += cat.morphism(tuple[t]).name;
                            }
                            return body;
                        }() + ")");
                    data[n].tuples.push_back(tuple);
                    data[n].source_string.push_back(s);
                    data[n].morphism_index.emplace(std::make_pair(s, tuple), id);
                    return;
                }
                for (int choice : choices[v]) {
                    tuple[v] = choice;
                    self(self, v + 1);
                }
            };
            emit(emit, 0);
        }
        for (int s = 0; s < static_cast<int>(strings[n].size()); ++s) {
            std::vector<int> ids(n + 1);
            for (int v = 0; v <= n; ++v) {
                ids[v] = cat.identity_at(string_vertex(n, strings[n][s], v));
            }
            level->set_identity(s, data[n].morphism_index.at({s, ids}));
        }
        // Composition: componentwise composition of tuples.
        for (int f = 0; f < level->morphism_count(); ++f) {
            const int s = data[n].source_string[f];
            const int mid = level->morphism(f).tgt;
            for (int g = 0; g < level->morphism_count(); ++g) {
                if (data[n].source_string[g] != mid) continue;
                std::vector<int> combined(n + 1);
                for (int v = 0; v <= n; ++v) {
                    combined[v] = cat.compose(data[n].tuples[f][v], data[n].tuples[g][v]);
                }
                level->set_compose(f, g, data[n].morphism_index.at({s, combined}));
            }
        }
        built[n] = level;
        space.levels.push_back(level);
    }

    auto tuple_functor = [&](int src_level, int tgt_level, auto&& on_string,
                             auto&& on_tuple) -> GroupoidFunctor {
        GroupoidFunctor functor;
        functor.source = space.levels[src_level];
        functor.target = space.levels[tgt_level];
        functor.object_map.resize(functor.source->object_count());
        for (int s = 0; s < functor.source->object_count(); ++s) {
            functor.object_map[s] = index[tgt_level].at(on_string(strings[src_level][s]));
        }
        functor.morphism_map.resize(functor.source->morphism_count());
        for (int m = 0; m < functor.source->morphism_count(); ++m) {
            const int s = data[src_level].source_string[m];
            functor.morphism_map[m] = data[tgt_level].morphism_index.at(
                {functor.object_map[s], on_tuple(data[src_level].tuples[m], strings[src_level][s])});
        }
        return functor;
    };

    space.faces.assign(truncation + 1, {});
    space.degeneracies.assign(std::max(truncation, 0), {});
    for (int n = 1; n <= truncation; ++n) {
        for (int i = 0; i <= n; ++i) {
            auto on_string = [&, i, n](const std::vector<int>& str) {
                std::vector<int> image;
                if (n == 1) {
                    image.push_back(i == 0 ? cat.morphism(str[0]).tgt : cat.morphism(str[0]).src);
                } else if (i == 0) {
                    image.assign(str.begin() + 1, str.end());
                } else if (i == n) {
                    image.assign(str.begin(), str.end() - 1);
                } else {
                    image.assign(str.begin(), str.begin() + (i - 1));
                    image.push_back(cat.compose(str[i - 1], str[i]));
                    image.insert(image.end(), str.begin() + (i + 1), str.end());
                }
                return image;
            };
            auto on_tuple = [&, i](const std::vector<int>& phi, const std::vector<int>&) {
                std::vector<int> out = phi;
                out.erase(out.begin() + i);
                return out;
            };
            space.faces[n].push_back(tuple_functor(n, n - 1, on_string, on_tuple));
        }
    }
    for (int n = 0; n < truncation; ++n) {
        for (int i = 0; i <= n; ++i) {
            auto on_string = [&, i, n](const std::vector<int>& str) {
                std::vector<int> image;
                if (n == 0) {
                    image.push_back(cat.identity_at(str[0]));
                } else {
                    image.assign(str.begin(), str.begin() + i);
                    const int vertex = string_vertex(n, str, i);
                    image.push_back(cat.identity_at(vertex));
                    image.insert(image.end(), str.begin() + i, str.end());
                }
                return image;
            };
            auto on_tuple = [&, i](const std::vector<int>& phi, const std::vector<int>&) {
                std::vector<int> out = phi;
                out.insert(out.begin() + i, phi[i]);
                return out;
            };
            space.degeneracies[n].push_back(tuple_functor(n, n + 1, on_string, on_tuple));
        }
    }
    return space;
}

/// Lifts a functor between categories to a simplicial map between nerves.
/// The nerves must have been built with `nerve` from the functor's endpoints;
/// levels are matched by object names.
inline SimplicialMap nerve_map(const CategoryFunctor& functor,
                               const TruncatedSimplicialGroupoid& source_nerve,
                               const TruncatedSimplicialGroupoid& target_nerve) {
    if (source_nerve.truncation != target_nerve.truncation) {
        throw std::invalid_argument("nerves have different truncations");
    }
    const FiniteCategory& src_cat = *functor.source;
    const FiniteCategory& tgt_cat = *functor.target;

    SimplicialMap map;
    map.levels.reserve(source_nerve.truncation + 1);
    for (int n = 0; n <= source_nerve.truncation; ++n) {
        const auto& src_level = source_nerve.level(n);
        const auto& tgt_level = target_nerve.level(n);
        std::unordered_map<std::string, int> target_index;
        for (int o = 0; o < tgt_level->object_count(); ++o) {
            target_index.emplace(tgt_level->object_name(o), o);
        }
        auto image_name = [&](const std::string& name) {
            if (n == 0) {
                // object name lookup
                for (int o = 0; o < src_cat.object_count(); ++o) {
                    if (src_cat.object_name(o) == name) {
                        return tgt_cat.object_name(functor.on_object(o));
                    }
                }
                throw std::invalid_argument("unknown object '" + name + "' in source nerve");
            }
            std::string out;
            std::size_t start = 0;
            bool first = true;
            auto append_image = [&](const std::string& piece) {
                for (int m = 0; m < src_cat.morphism_count(); ++m) {
                    if (src_cat.morphism(m).name == piece) {
                        if (!first) out += '|';
                        first = false;
                        out += tgt_cat.morphism(functor.on_morphism(m)).name;
                        return;
                    }
                }
                throw std::invalid_argument("unknown morphism '" + piece + "' in source nerve");
            };
            while (true) {
                const auto bar = name.find('|', start);
                if (bar == std::string::npos) {
                    append_image(name.substr(start));
                    break;
                }
                append_image(name.substr(start, bar - start));
                start = bar + 1;
            }
            return out;
        };
        GroupoidFunctor level_map;
        level_map.source = src_level;
        level_map.target = tgt_level;
        level_map.object_map.resize(src_level->object_count());
        level_map.morphism_map.resize(src_level->object_count());
        for (int s = 0; s < src_level->object_count(); ++s) {
            auto it = target_index.find(image_name(src_level->object_name(s)));
            if (it == target_index.end()) {
                throw std::invalid_argument("image simplex missing from target nerve");
            }
            level_map.object_map[s] = it->second;
            level_map.morphism_map[s] = it->second;
        }
        map.levels.push_back(std::move(level_map));
    }
    return map;
}

// ---------------------------------------------------------------------------
// Poset builders
// ---------------------------------------------------------------------------

/// The divisors of n ordered by divisibility.
inline PosetData divisor_poset(int n) {
    if (n <= 0) throw std::invalid_argument("divisor poset needs a positive integer");
    PosetData poset;
    std::vector<int> divisors;
    for (int d = 1; d <= n; ++d) {
        if (n % d == 0) divisors.push_back(d);
    }
    for (int d : divisors) poset.elements.push_back(std::to_string(d));
    for (int a : divisors) {
        for (int b : divisors) {
            if (b % a == 0) {
                poset.relations.emplace_back(std::to_string(a), std::to_string(b));
            }
        }
    }
    return poset;
}

/// Subsets of {1, …, n} ordered by inclusion; elements named by bitstrings.
inline PosetData boolean_lattice(int n) {
    if (n < 0 || n > 20) throw std::invalid_argument("boolean lattice rank out of range");
    PosetData poset;
    auto name = [n](unsigned mask) {
        std::string out(n, '0');
        for (int b = 0; b < n; ++b) {
            if (mask & (1u << b)) out[b] = '1';
        }
        return out.empty() ? std::string("()") : out;
    };
    const unsigned total = 1u << n;
    for (unsigned mask = 0; mask < total; ++mask) poset.elements.push_back(name(mask));
    for (unsigned a = 0; a < total; ++a) {
        for (unsigned b = 0; b < total; ++b) {
            if ((a & b) == a) poset.relations.emplace_back(name(a), name(b));
        }
    }
    return poset;
}

/// The linear order 0 < 1 < … < n (n+1 elements).
inline PosetData chain_poset(int n) {
    if (n < 0) throw std::invalid_argument("chain length must be non-negative");
    PosetData poset;
    for (int i = 0; i <= n; ++i) poset.elements.push_back(std::to_string(i));
    for (int i = 0; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            poset.relations.emplace_back(std::to_string(i), std::to_string(j));
        }
    }
    return poset;
}

/// The fence (zig-zag) a_0 < b_0 > a_1 < b_1 > … with `peaks` upper elements.
inline PosetData fence_poset(int peaks) {
    if (peaks <= 0) throw std::invalid_argument("fence needs at least one peak");
    PosetData poset;
    for (int i = 0; i <= peaks; ++i) poset.elements.push_back("a" + std::to_string(i));
    for (int i = 0; i < peaks; ++i) poset.elements.push_back("b" + std::to_string(i));
    for (const auto& e : poset.elements) poset.relations.emplace_back(e, e);
    for (int i = 0; i < peaks; ++i) {
        poset.relations.emplace_back("a" + std::to_string(i), "b" + std::to_string(i));
        poset.relations.emplace_back("a" + std::to_string(i + 1), "b" + std::to_string(i));
    }
    return poset;
}

}  // namespace dspace
