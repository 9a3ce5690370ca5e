#include <catch2/catch_amalgamated.hpp>

#include <dspace/deltacat.hpp>

#include <vector>

using namespace dspace;

namespace {

/// All weakly monotone maps [m] -> [n], enumerated lexicographically.
std::vector<SimplexMap> all_maps(int m, int n) {
  std::vector<SimplexMap> out;
  std::vector<int> v(m + 1, 0);
  while (true) {
    SimplexMap a;
    a.domain_rank = m;
    a.codomain_rank = n;
    a.values = v;
    out.push_back(a);
    int i = m;
    while (i >= 0 && v[i] == n) --i;
    if (i < 0) break;
    const int next = v[i] + 1;
    for (int j = i; j <= m; ++j) v[j] = next;
  }
  return out;
}

/// Brute-force check that (new_free, new_generic) is a universal cocone for
/// the span (generic_leg, free_leg): it commutes, and every commuting cocone
/// with target rank at most max_target factors through it uniquely.
void require_universal_cocone(const SimplexMap& generic_leg, const SimplexMap& free_leg,
                              const GenericFreePushout& po, int max_target) {
  REQUIRE(po.new_free.validate().empty());
  REQUIRE(po.new_generic.validate().empty());
  REQUIRE(compose(generic_leg, po.new_free) == compose(free_leg, po.new_generic));
  for (int t = 0; t <= max_target; ++t) {
    const auto from_q = all_maps(generic_leg.codomain_rank, t);
    const auto from_r = all_maps(free_leg.codomain_rank, t);
    const auto from_s = all_maps(po.apex_rank, t);
    for (const auto& u : from_q) {
      const SimplexMap ug = compose(generic_leg, u);
      for (const auto& v : from_r) {
        if (!(ug == compose(free_leg, v))) continue;
        int mediators = 0;
        for (const auto& w : from_s) {
          if (compose(po.new_free, w) == u && compose(po.new_generic, w) == v) ++mediators;
        }
        REQUIRE(mediators == 1);
      }
    }
  }
}

}  // namespace

TEST_CASE("simplex map construction and classification", "[deltacat]") {
  CHECK(SimplexMap::identity(3).is_generic());
  CHECK(SimplexMap::identity(3).is_free());
  CHECK(SimplexMap::identity(0).values == std::vector<int>{0});

  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i <= n; ++i) {
      const SimplexMap d = SimplexMap::coface(i, n);
      CHECK(d.validate().empty());
      CHECK(d.is_free() == (i == 0 || i == n));
      CHECK(d.is_generic() == (i != 0 && i != n));
    }
  }
  for (int n = 0; n <= 3; ++n) {
    for (int i = 0; i <= n; ++i) {
      const SimplexMap s = SimplexMap::codegeneracy(i, n);
      CHECK(s.validate().empty());
      CHECK(s.is_generic());
      CHECK_FALSE(s.is_free());
    }
  }

  SimplexMap bad;
  bad.domain_rank = 1;
  bad.codomain_rank = 2;
  bad.values = {2, 1};
  CHECK_FALSE(bad.validate().empty());

  CHECK(SimplexMap::coface(1, 3).to_string() == "[2]→[3]:(0,2,3)");
  const auto cls = classify_map(SimplexMap::codegeneracy(0, 1));
  CHECK(cls.generic);
  CHECK_FALSE(cls.free);
}

TEST_CASE("cosimplicial identities", "[deltacat]") {
  for (int n = 2; n <= 4; ++n) {
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        CHECK(compose(SimplexMap::coface(i, n - 1), SimplexMap::coface(j, n)) ==
              compose(SimplexMap::coface(j - 1, n - 1), SimplexMap::coface(i, n)));
      }
    }
  }
  for (int n = 0; n <= 2; ++n) {
    for (int i = 0; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        CHECK(compose(SimplexMap::codegeneracy(j + 1, n + 1), SimplexMap::codegeneracy(i, n)) ==
              compose(SimplexMap::codegeneracy(i, n + 1), SimplexMap::codegeneracy(j, n)));
      }
    }
  }
  // Mixed identities at rank 2: s_j . d_i.
  for (int n = 1; n <= 3; ++n) {
    for (int j = 0; j <= n - 1; ++j) {
      // d_i then s_j, expressed on cosimplicial generators.
      for (int i = 0; i <= n; ++i) {
        const SimplexMap lhs = compose(SimplexMap::coface(i, n), SimplexMap::codegeneracy(j, n - 1));
        if (i < j) {
          CHECK(lhs == compose(SimplexMap::codegeneracy(j - 1, n - 2), SimplexMap::coface(i, n - 1)));
        } else if (i == j || i == j + 1) {
          CHECK(lhs == SimplexMap::identity(n - 1));
        } else {
          CHECK(lhs == compose(SimplexMap::codegeneracy(j, n - 2), SimplexMap::coface(i - 1, n - 1)));
        }
      }
    }
  }
}

TEST_CASE("generic-free factorization is correct and unique", "[deltacat]") {
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      for (const auto& a : all_maps(m, n)) {
        const GenericFreeFactorization fac = factorize(a);
        CHECK(fac.generic.is_generic());
        CHECK(fac.free.is_free());
        CHECK(compose(fac.generic, fac.free) == a);

        // Exhaustive uniqueness: no other generic/free pair composes to a.
        int found = 0;
        for (int k = 0; k <= n; ++k) {
          for (const auto& g : all_maps(m, k)) {
            if (!g.is_generic()) continue;
            for (const auto& f : all_maps(k, n)) {
              if (!f.is_free()) continue;
              if (compose(g, f) == a) ++found;
            }
          }
        }
        CHECK(found == 1);
      }
    }
  }
}

TEST_CASE("pushouts of generic maps along free maps", "[deltacat]") {
  SECTION("bottom degeneracy along the missing-vertex face") {
    const GenericFreePushout po =
        pushout_generic_free(SimplexMap::codegeneracy(0, 0), SimplexMap::coface(0, 2));
    CHECK(po.apex_rank == 1);
    CHECK(po.new_free == SimplexMap::coface(0, 1));
    CHECK(po.new_generic == SimplexMap::codegeneracy(1, 1));
  }

  SECTION("generator pushouts stay generators") {
    // Pushing any codegeneracy along an outer coface yields a codegeneracy
    // along an outer coface again.
    for (int p = 1; p <= 3; ++p) {
      for (int i = 0; i <= p - 1; ++i) {
        const SimplexMap s = SimplexMap::codegeneracy(i, p - 1);
        for (const int outer : {0, p + 1}) {
          const GenericFreePushout po = pushout_generic_free(s, SimplexMap::coface(outer, p + 1));
          const int shift = outer == 0 ? 1 : 0;
          CHECK(po.new_generic == SimplexMap::codegeneracy(i + shift, p));
          CHECK(po.new_free == SimplexMap::coface(outer == 0 ? 0 : p, p));
        }
      }
    }
    // Same for inner cofaces.
    for (int p = 1; p <= 3; ++p) {
      for (int i = 1; i <= p; ++i) {
        const SimplexMap d = SimplexMap::coface(i, p + 1);
        for (const int outer : {0, p + 1}) {
          const GenericFreePushout po = pushout_generic_free(d, SimplexMap::coface(outer, p + 1));
          const int shift = outer == 0 ? 1 : 0;
          CHECK(po.new_generic == SimplexMap::coface(i + shift, p + 2));
          CHECK(po.new_free == SimplexMap::coface(outer == 0 ? 0 : p + 2, p + 2));
        }
      }
    }
  }

  SECTION("universal property, exhaustively on small ranks") {
    for (int p = 0; p <= 2; ++p) {
      for (int q = 0; q <= 2; ++q) {
        for (const auto& g : all_maps(p, q)) {
          if (!g.is_generic()) continue;
          for (int r = p; r <= p + 2; ++r) {
            for (const auto& f : all_maps(p, r)) {
              if (!f.is_free()) continue;
              const GenericFreePushout po = pushout_generic_free(g, f);
              CHECK(po.apex_rank == r - p + q);
              require_universal_cocone(g, f, po, 3);
            }
          }
        }
      }
    }
  }

  SECTION("invalid legs are rejected") {
    CHECK_THROWS_AS(pushout_generic_free(SimplexMap::coface(0, 2), SimplexMap::coface(0, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(pushout_generic_free(SimplexMap::codegeneracy(0, 0), SimplexMap::coface(1, 2)),
                    std::invalid_argument);
  }
}
