#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dspace {

/// A weakly monotone map [m] -> [n] between finite ordinals, stored by its
/// value list.  This is the combinatorial backbone for indexing face and
/// degeneracy data: every such map factors uniquely as an endpoint-preserving
/// ("generic") map followed by a distance-preserving ("free") map.
struct SimplexMap {
  int domain_rank = 0;    // m, for [m] = {0, ..., m}
  int codomain_rank = 0;  // n
  std::vector<int> values;

  static SimplexMap identity(int n) {
    SimplexMap a;
    a.domain_rank = n;
    a.codomain_rank = n;
    for (int i = 0; i <= n; ++i) a.values.push_back(i);
    return a;
  }

  /// The injection [n-1] -> [n] omitting i.
  static SimplexMap coface(int i, int n) {
    if (n < 1 || i < 0 || i > n) throw std::invalid_argument("coface index out of range");
    SimplexMap a;
    a.domain_rank = n - 1;
    a.codomain_rank = n;
    for (int j = 0; j <= n - 1; ++j) a.values.push_back(j < i ? j : j + 1);
    return a;
  }

  /// The surjection [n+1] -> [n] repeating i.
  static SimplexMap codegeneracy(int i, int n) {
    if (i < 0 || i > n) throw std::invalid_argument("codegeneracy index out of range");
    SimplexMap a;
    a.domain_rank = n + 1;
    a.codomain_rank = n;
    for (int j = 0; j <= n + 1; ++j) a.values.push_back(j <= i ? j : j - 1);
    return a;
  }

  int operator()(int i) const { return values.at(i); }

  bool operator==(const SimplexMap& other) const {
    return domain_rank == other.domain_rank && codomain_rank == other.codomain_rank &&
           values == other.values;
  }

  std::vector<std::string> validate() const {
    if (domain_rank < 0 || codomain_rank < 0) return {"negative rank"};
    if (static_cast<int>(values.size()) != domain_rank + 1) {
      return {"value list has wrong length"};
    }
    for (int i = 0; i <= domain_rank; ++i) {
      if (values[i] < 0 || values[i] > codomain_rank) return {"value out of range"};
      if (i > 0 && values[i] < values[i - 1]) return {"values not weakly monotone"};
    }
    return {};
  }

  /// Endpoint-preserving: sends 0 to 0 and the top to the top.
  bool is_generic() const {
    return values.front() == 0 && values.back() == codomain_rank;
  }

  /// Distance-preserving: consecutive values differ by exactly one.
  bool is_free() const {
    for (int i = 0; i + 1 <= domain_rank; ++i) {
      if (values[i + 1] != values[i] + 1) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string out = "[" + std::to_string(domain_rank) + "]→[" +
                      std::to_string(codomain_rank) + "]:(";
    for (int i = 0; i <= domain_rank; ++i) {
      if (i > 0) out += ",";
      out += std::to_string(values[i]);
    }
    return out + ")";
  }
};

/// then . first (apply `first`, then `then`).
inline SimplexMap compose(const SimplexMap& first, const SimplexMap& then) {
  if (first.codomain_rank != then.domain_rank) {
    throw std::invalid_argument("simplex maps not composable");
  }
  SimplexMap out;
  out.domain_rank = first.domain_rank;
  out.codomain_rank = then.codomain_rank;
  for (const int v : first.values) out.values.push_back(then.values.at(v));
  return out;
}

struct SimplexMapClass {
  bool generic = false;
  bool free = false;
};

inline SimplexMapClass classify_map(const SimplexMap& a) {
  return {a.is_generic(), a.is_free()};
}

/// The unique generic-then-free factorization a = free . generic.
struct GenericFreeFactorization {
  SimplexMap generic;  // [m] -> [k], endpoint-preserving
  SimplexMap free;     // [k] -> [n], distance-preserving
};

inline GenericFreeFactorization factorize(const SimplexMap& a) {
  GenericFreeFactorization out;
  const int bottom = a.values.front();
  const int k = a.values.back() - bottom;
  out.generic.domain_rank = a.domain_rank;
  out.generic.codomain_rank = k;
  for (const int v : a.values) out.generic.values.push_back(v - bottom);
  out.free.domain_rank = k;
  out.free.codomain_rank = a.codomain_rank;
  for (int j = 0; j <= k; ++j) out.free.values.push_back(j + bottom);
  return out;
}

/// Pushout in the simplex category of a generic map g: [p] -> [q] against a
/// free map f: [p] -> [r].  The cocone apex is [s] with s = r - p + q; the
/// free leg shifts by f(0) and the generic leg acts like g on the image
/// interval of f and like the identity outside it.
struct GenericFreePushout {
  SimplexMap new_free;     // [q] -> [s]
  SimplexMap new_generic;  // [r] -> [s]
  int apex_rank = 0;
};

inline GenericFreePushout pushout_generic_free(const SimplexMap& generic_leg,
                                               const SimplexMap& free_leg) {
  if (!generic_leg.is_generic()) throw std::invalid_argument("first leg must be generic");
  if (!free_leg.is_free()) throw std::invalid_argument("second leg must be free");
  if (generic_leg.domain_rank != free_leg.domain_rank) {
    throw std::invalid_argument("pushout legs must share their domain");
  }
  const int p = generic_leg.domain_rank;
  const int q = generic_leg.codomain_rank;
  const int r = free_leg.codomain_rank;
  const int c = free_leg.values.front();
  const int s = r - p + q;

  GenericFreePushout out;
  out.apex_rank = s;
  out.new_free.domain_rank = q;
  out.new_free.codomain_rank = s;
  for (int j = 0; j <= q; ++j) out.new_free.values.push_back(j + c);
  out.new_generic.domain_rank = r;
  out.new_generic.codomain_rank = s;
  for (int x = 0; x <= r; ++x) {
    if (x < c) {
      out.new_generic.values.push_back(x);
    } else if (x <= c + p) {
      out.new_generic.values.push_back(generic_leg.values[x - c] + c);
    } else {
      out.new_generic.values.push_back(x - p + q);
    }
  }
  return out;
}

}  // namespace dspace
