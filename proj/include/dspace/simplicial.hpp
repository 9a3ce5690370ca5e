#pragma once

#include "dspace/deltacat.hpp"
#include "dspace/groupoid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dspace {

enum class VerdictStatus {
  HoldsUpToTruncation,  // every instance that fits below the truncation holds
  Fails,                // a concrete counterexample exists
  Inconclusive,         // the truncation is too short to test anything
};

struct AxiomVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::string witness;

  bool holds() const { return status == VerdictStatus::HoldsUpToTruncation; }
};

namespace detail {

inline std::vector<std::string> validate_face_tower(const std::vector<GroupoidPtr>& levels,
                                                    const std::vector<std::vector<GroupoidFunctor>>& faces,
                                                    int truncation) {
  std::vector<std::string> issues;
  const auto complain = [&issues](std::string msg) {
    if (issues.size() < 32) issues.push_back(std::move(msg));
  };
  if (truncation < 0) return {"negative truncation"};
  if (static_cast<int>(levels.size()) != truncation + 1) return {"wrong number of levels"};
  for (int n = 0; n <= truncation; ++n) {
    if (!levels[n]) return {"missing level " + std::to_string(n)};
    for (const auto& msg : levels[n]->validate()) {
      complain("level " + std::to_string(n) + ": " + msg);
    }
  }
  if (!issues.empty()) return issues;
  if (static_cast<int>(faces.size()) != truncation + 1) return {"wrong face table size"};
  for (int n = 1; n <= truncation; ++n) {
    if (static_cast<int>(faces[n].size()) != n + 1) {
      return {"level " + std::to_string(n) + " must have " + std::to_string(n + 1) + " faces"};
    }
    for (int i = 0; i <= n; ++i) {
      const GroupoidFunctor& d = faces[n][i];
      if (d.source != levels[n] || d.target != levels[n - 1]) {
        complain("face " + std::to_string(i) + " at level " + std::to_string(n) +
                 " has wrong endpoints");
        continue;
      }
      for (const auto& msg : d.validate()) {
        complain("face " + std::to_string(i) + " at level " + std::to_string(n) + ": " + msg);
      }
    }
  }
  if (!issues.empty()) return issues;
  for (int n = 2; n <= truncation; ++n) {
    for (int j = 1; j <= n; ++j) {
      for (int i = 0; i < j; ++i) {
        if (!same_mapping(compose_functors(faces[n][j], faces[n - 1][i]),
                          compose_functors(faces[n][i], faces[n - 1][j - 1]))) {
          complain("face identity fails at level " + std::to_string(n) + " for (i,j)=(" +
                   std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }
  return issues;
}

}  // namespace detail

/// A truncated semi-simplicial groupoid: levels X_0..X_N with face functors
/// only.  faces[n][i] is d_i: X_n -> X_{n-1}.
struct SemiSimplicialGroupoid {
  int truncation = 0;
  std::vector<GroupoidPtr> levels;
  std::vector<std::vector<GroupoidFunctor>> faces;

  const GroupoidPtr& level(int n) const { return levels.at(n); }
  const GroupoidFunctor& face(int n, int i) const { return faces.at(n).at(i); }

  std::vector<std::string> validate() const {
    return detail::validate_face_tower(levels, faces, truncation);
  }
};

/// A truncated simplicial groupoid: levels X_0..X_N with faces and
/// degeneracies.  degeneracies[n][i] is s_i: X_n -> X_{n+1}, for n < N.
struct TruncatedSimplicialGroupoid {
  int truncation = 0;
  std::vector<GroupoidPtr> levels;
  std::vector<std::vector<GroupoidFunctor>> faces;
  std::vector<std::vector<GroupoidFunctor>> degeneracies;

  const GroupoidPtr& level(int n) const { return levels.at(n); }
  const GroupoidFunctor& face(int n, int i) const { return faces.at(n).at(i); }
  const GroupoidFunctor& degeneracy(int n, int i) const { return degeneracies.at(n).at(i); }

  std::vector<std::string> validate() const {
    std::vector<std::string> issues = detail::validate_face_tower(levels, faces, truncation);
    if (!issues.empty()) return issues;
    const auto complain = [&issues](std::string msg) {
      if (issues.size() < 32) issues.push_back(std::move(msg));
    };
    if (static_cast<int>(degeneracies.size()) != std::max(truncation, 0)) {
      return {"wrong degeneracy table size"};
    }
    for (int n = 0; n < truncation; ++n) {
      if (static_cast<int>(degeneracies[n].size()) != n + 1) {
        return {"level " + std::to_string(n) + " must have " + std::to_string(n + 1) +
                " degeneracies"};
      }
      for (int i = 0; i <= n; ++i) {
        const GroupoidFunctor& s = degeneracies[n][i];
        if (s.source != levels[n] || s.target != levels[n + 1]) {
          complain("degeneracy " + std::to_string(i) + " at level " + std::to_string(n) +
                   " has wrong endpoints");
          continue;
        }
        for (const auto& msg : s.validate()) {
          complain("degeneracy " + std::to_string(i) + " at level " + std::to_string(n) + ": " +
                   msg);
        }
      }
    }
    if (!issues.empty()) return issues;
    for (int n = 0; n + 2 <= truncation; ++n) {
      for (int i = 0; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
          if (!same_mapping(compose_functors(degeneracies[n][j], degeneracies[n + 1][i]),
                            compose_functors(degeneracies[n][i], degeneracies[n + 1][j + 1]))) {
            complain("degeneracy identity fails at level " + std::to_string(n) + " for (i,j)=(" +
                     std::to_string(i) + "," + std::to_string(j) + ")");
          }
        }
      }
    }
    for (int n = 0; n < truncation; ++n) {
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n + 1; ++i) {
          const GroupoidFunctor lhs = compose_functors(degeneracies[n][j], faces[n + 1][i]);
          bool ok = false;
          if (i == j || i == j + 1) {
            ok = same_mapping(lhs, identity_functor(levels[n]));
          } else if (i < j) {
            ok = n >= 1 && same_mapping(lhs, compose_functors(faces[n][i], degeneracies[n - 1][j - 1]));
          } else {
            ok = n >= 1 && same_mapping(lhs, compose_functors(faces[n][i - 1], degeneracies[n - 1][j]));
          }
          if (!ok) {
            complain("mixed identity fails at level " + std::to_string(n) + " for (i,j)=(" +
                     std::to_string(i) + "," + std::to_string(j) + ")");
          }
        }
      }
    }
    return issues;
  }
};

/// The contravariant action of a simplex map a: [m] -> [n]: the functor
/// X(a): X_n -> X_m, assembled from the stored faces and degeneracies via the
/// epi-mono factorization of a.  Well defined because the simplicial
/// identities are part of validation.
inline GroupoidFunctor operator_functor(const TruncatedSimplicialGroupoid& x, const SimplexMap& a) {
  const auto issues = a.validate();
  if (!issues.empty()) throw std::invalid_argument("invalid simplex map: " + issues.front());
  if (a.codomain_rank > x.truncation) {
    throw std::invalid_argument("simplex map exceeds the truncation");
  }
  GroupoidFunctor f = identity_functor(x.level(a.codomain_rank));
  int rank = a.codomain_rank;

  // Injective part: peel cofaces for missing values, largest first.
  std::vector<bool> in_image(a.codomain_rank + 1, false);
  for (const int v : a.values) in_image[v] = true;
  for (int j = a.codomain_rank; j >= 0; --j) {
    if (!in_image[j]) {
      f = compose_functors(f, x.face(rank, j));
      --rank;
    }
  }

  // Surjective part: peel codegeneracies at the first repeated position.
  std::vector<int> vals;
  int next_rank = 0;
  for (int v = 0; v <= a.codomain_rank; ++v) {
    if (in_image[v]) {
      for (const int w : a.values) {
        if (w == v) vals.push_back(next_rank);
      }
      ++next_rank;
    }
  }
  std::vector<int> peeled;
  while (true) {
    int j = -1;
    for (int i = 0; i + 1 < static_cast<int>(vals.size()); ++i) {
      if (vals[i] == vals[i + 1]) {
        j = i;
        break;
      }
    }
    if (j < 0) break;
    peeled.push_back(j);
    vals.erase(vals.begin() + j + 1);
  }
  for (int t = static_cast<int>(peeled.size()) - 1; t >= 0; --t) {
    f = compose_functors(f, x.degeneracy(rank, peeled[t]));
    ++rank;
  }
  return f;
}

/// Same, for a semi-simplicial groupoid; the map must be injective.
inline GroupoidFunctor operator_functor(const SemiSimplicialGroupoid& z, const SimplexMap& a) {
  const auto issues = a.validate();
  if (!issues.empty()) throw std::invalid_argument("invalid simplex map: " + issues.front());
  if (a.codomain_rank > z.truncation) {
    throw std::invalid_argument("simplex map exceeds the truncation");
  }
  GroupoidFunctor f = identity_functor(z.level(a.codomain_rank));
  int rank = a.codomain_rank;
  std::vector<bool> in_image(a.codomain_rank + 1, false);
  for (const int v : a.values) {
    if (in_image[v]) throw std::invalid_argument("operator map must be injective here");
    in_image[v] = true;
  }
  for (int j = a.codomain_rank; j >= 0; --j) {
    if (!in_image[j]) {
      f = compose_functors(f, z.face(rank, j));
      --rank;
    }
  }
  return f;
}

/// The edge [1] -> [n] spanning vertices i-1 and i (principal edge i, in
/// 1-indexed position notation), as a simplex map.
inline SimplexMap principal_edge_map(int position, int n) {
  if (position < 1 || position > n) throw std::invalid_argument("edge position out of range");
  SimplexMap a;
  a.domain_rank = 1;
  a.codomain_rank = n;
  a.values = {position - 1, position};
  return a;
}

/// The long edge [1] -> [n] spanning vertices 0 and n (for n = 0, the
/// degenerate edge at the unique vertex).
inline SimplexMap long_edge_map(int n) {
  SimplexMap a;
  a.domain_rank = 1;
  a.codomain_rank = n;
  a.values = {0, n};
  return a;
}

inline SimplexMap vertex_map(int vertex, int n) {
  SimplexMap a;
  a.domain_rank = 0;
  a.codomain_rank = n;
  a.values = {vertex};
  return a;
}

// ---------------------------------------------------------------------------
// Structural axioms
// ---------------------------------------------------------------------------

namespace detail {

struct SquareOutcome {
  bool holds = false;
  std::string witness;
};

/// Checks that the image square of the pushout of (generic_leg, free_leg) is
/// a homotopy pullback in X.
inline SquareOutcome check_generic_free_square(const TruncatedSimplicialGroupoid& x,
                                               const SimplexMap& generic_leg,
                                               const SimplexMap& free_leg) {
  const GenericFreePushout po = pushout_generic_free(generic_leg, free_leg);
  const PullbackVerdict verdict = is_pullback_square(
      operator_functor(x, po.new_free), operator_functor(x, po.new_generic),
      operator_functor(x, generic_leg), operator_functor(x, free_leg));
  if (verdict.holds) return {true, ""};
  return {false, "square over " + generic_leg.to_string() + " pushed along " +
                     free_leg.to_string() + " is not a pullback: " + verdict.witness};
}

}  // namespace detail

/// Decides whether X sends the generating generic-against-free pushouts of
/// the simplex category to homotopy pullbacks, for every instance that fits
/// below the truncation.
inline AxiomVerdict check_decomposition(const TruncatedSimplicialGroupoid& x) {
  const int n = x.truncation;
  bool any_checked = false;
  for (int p = 1; p + 1 <= n; ++p) {
    for (int i = 0; i <= p - 1; ++i) {
      for (const int outer : {0, p + 1}) {
        any_checked = true;
        const auto out = detail::check_generic_free_square(x, SimplexMap::codegeneracy(i, p - 1),
                                                           SimplexMap::coface(outer, p + 1));
        if (!out.holds) return {VerdictStatus::Fails, out.witness};
      }
    }
  }
  for (int p = 1; p + 2 <= n; ++p) {
    for (int i = 1; i <= p; ++i) {
      for (const int outer : {0, p + 1}) {
        any_checked = true;
        const auto out = detail::check_generic_free_square(x, SimplexMap::coface(i, p + 1),
                                                           SimplexMap::coface(outer, p + 1));
        if (!out.holds) return {VerdictStatus::Fails, out.witness};
      }
    }
  }
  if (!any_checked) return {VerdictStatus::Inconclusive, "truncation below 2 leaves nothing to check"};
  return {VerdictStatus::HoldsUpToTruncation, ""};
}

/// Decides the Segal condition: each X_n (n >= 2) must be the pullback of
/// X_{n-1} -> X_0 <- X_1 along last-vertex and first-vertex maps.
inline AxiomVerdict check_segal(const TruncatedSimplicialGroupoid& x) {
  if (x.truncation < 2) {
    return {VerdictStatus::Inconclusive, "truncation below 2 leaves nothing to check"};
  }
  for (int n = 2; n <= x.truncation; ++n) {
    const PullbackVerdict verdict = is_pullback_square(
        operator_functor(x, SimplexMap::coface(n, n)),
        operator_functor(x, principal_edge_map(n, n)),
        operator_functor(x, vertex_map(n - 1, n - 1)),
        operator_functor(x, vertex_map(0, 1)));
    if (!verdict.holds) {
      return {VerdictStatus::Fails, "level " + std::to_string(n) +
                                        " is not the pullback of the outer faces: " +
                                        verdict.witness};
    }
  }
  return {VerdictStatus::HoldsUpToTruncation, ""};
}

/// Completeness: s_0: X_0 -> X_1 is a monomorphism of groupoids.
inline AxiomVerdict check_complete(const TruncatedSimplicialGroupoid& x) {
  if (x.truncation < 1) return {VerdictStatus::Inconclusive, "no level 1"};
  const EquivalenceVerdict verdict = is_monomorphism(x.degeneracy(0, 0));
  if (verdict.holds) return {VerdictStatus::HoldsUpToTruncation, ""};
  return {VerdictStatus::Fails, "s_0 is not a monomorphism: " + verdict.witness};
}

/// Stiffness: every degeneracy square over the bottom degeneracy is a
/// pullback — a simplex with a degenerate principal edge is itself degenerate
/// in that direction.
inline AxiomVerdict check_stiff(const TruncatedSimplicialGroupoid& x) {
  if (x.truncation < 1) return {VerdictStatus::Inconclusive, "no level 1"};
  for (int n = 0; n + 1 <= x.truncation; ++n) {
    for (int i = 0; i <= n; ++i) {
      const PullbackVerdict verdict = is_pullback_square(
          x.degeneracy(n, i), operator_functor(x, vertex_map(i, n)),
          operator_functor(x, principal_edge_map(i + 1, n + 1)),
          x.degeneracy(0, 0));
      if (!verdict.holds) {
        return {VerdictStatus::Fails, "degeneracy square (n,i)=(" + std::to_string(n) + "," +
                                          std::to_string(i) + ") is not a pullback: " +
                                          verdict.witness};
      }
    }
  }
  return {VerdictStatus::HoldsUpToTruncation, ""};
}

/// Components of X_1 that lie in the essential image of s_0.
inline std::vector<bool> degenerate_edge_components(const TruncatedSimplicialGroupoid& x) {
  const GroupoidFunctor& s0 = x.degeneracy(0, 0);
  std::vector<bool> degenerate(x.level(1)->pi0().count(), false);
  const Pi0& base = x.level(0)->pi0();
  for (int c = 0; c < base.count(); ++c) {
    degenerate[x.level(1)->pi0().component_of[s0.on_object(base.representative[c])]] = true;
  }
  return degenerate;
}

/// Components of X_n not in the essential image of any degeneracy.
inline std::vector<bool> nondegenerate_components(const TruncatedSimplicialGroupoid& x, int n) {
  std::vector<bool> nondeg(x.level(n)->pi0().count(), true);
  if (n == 0) return nondeg;
  const Pi0& below = x.level(n - 1)->pi0();
  for (int i = 0; i <= n - 1; ++i) {
    const GroupoidFunctor& s = x.degeneracy(n - 1, i);
    for (int c = 0; c < below.count(); ++c) {
      nondeg[x.level(n)->pi0().component_of[s.on_object(below.representative[c])]] = false;
    }
  }
  return nondeg;
}

/// Full subgroupoid of one level selected by a letter word over {0, 1, a}:
/// position p of the word constrains principal edge p of the simplex to be
/// degenerate ('0'), nondegenerate ('a'), or unconstrained ('1').
struct WordSubgroupoid {
  std::string word;
  std::vector<int> components;  // canonical component indices within X_n
  ComponentSubgroupoid subgroupoid;
};

inline WordSubgroupoid word_subgroupoid(const TruncatedSimplicialGroupoid& x,
                                        const std::string& word) {
  const int n = static_cast<int>(word.size());
  if (n > x.truncation) throw std::invalid_argument("word longer than the truncation");
  for (const char c : word) {
    if (c != '0' && c != '1' && c != 'a') {
      throw std::invalid_argument("word letters must be one of 0, 1, a");
    }
  }
  WordSubgroupoid out;
  out.word = word;
  const Pi0& pi = x.level(n)->pi0();
  if (n == 0) {
    for (int c = 0; c < pi.count(); ++c) out.components.push_back(c);
  } else {
    const std::vector<bool> degenerate = degenerate_edge_components(x);
    const Pi0& edges = x.level(1)->pi0();
    std::vector<GroupoidFunctor> edge_of;
    for (int p = 1; p <= n; ++p) edge_of.push_back(operator_functor(x, principal_edge_map(p, n)));
    for (int c = 0; c < pi.count(); ++c) {
      bool selected = true;
      for (int p = 1; p <= n && selected; ++p) {
        if (word[p - 1] == '1') continue;
        const int edge_comp = edges.component_of[edge_of[p - 1].on_object(pi.representative[c])];
        selected = (word[p - 1] == '0') == degenerate[edge_comp];
      }
      if (selected) out.components.push_back(c);
    }
  }
  out.subgroupoid = component_subgroupoid(x.level(n), out.components);
  return out;
}

// ---------------------------------------------------------------------------
// Nondegenerate part and Kan extension along the inclusion of face maps
// ---------------------------------------------------------------------------

/// The levelwise full subgroupoids on nondegenerate components.  `closed`
/// reports whether all face maps restrict to them; only then do they form a
/// semi-simplicial groupoid.
struct NondegeneratePart {
  bool closed = false;
  std::string witness;
  SemiSimplicialGroupoid space;
  std::vector<std::vector<int>> components;  // per level
  std::vector<GroupoidFunctor> inclusions;   // per level, into x.level(n)
};

inline NondegeneratePart nondegenerate_part(const TruncatedSimplicialGroupoid& x) {
  NondegeneratePart out;
  out.space.truncation = x.truncation;
  std::vector<std::vector<int>> object_to_sub(x.truncation + 1);
  for (int n = 0; n <= x.truncation; ++n) {
    const std::vector<bool> nondeg = nondegenerate_components(x, n);
    std::vector<int> comps;
    for (int c = 0; c < static_cast<int>(nondeg.size()); ++c) {
      if (nondeg[c]) comps.push_back(c);
    }
    ComponentSubgroupoid sub = component_subgroupoid(x.level(n), comps);
    object_to_sub[n].assign(x.level(n)->object_count(), -1);
    for (int o = 0; o < static_cast<int>(sub.object_to_parent.size()); ++o) {
      object_to_sub[n][sub.object_to_parent[o]] = o;
    }
    out.components.push_back(std::move(comps));
    out.space.levels.push_back(sub.groupoid);
    out.inclusions.push_back(sub.inclusion);
  }
  out.space.faces.resize(x.truncation + 1);
  for (int n = 1; n <= x.truncation; ++n) {
    for (int i = 0; i <= n; ++i) {
      const GroupoidFunctor& parent_face = x.face(n, i);
      GroupoidFunctor d;
      d.source = out.space.levels[n];
      d.target = out.space.levels[n - 1];
      const auto& incl = out.inclusions[n];
      for (int o = 0; o < out.space.levels[n]->object_count(); ++o) {
        const int image = object_to_sub[n - 1][parent_face.on_object(incl.object_map[o])];
        if (image < 0) {
          out.closed = false;
          out.witness = "face " + std::to_string(i) + " of nondegenerate simplex '" +
                        out.space.levels[n]->object_name(o) + "' at level " + std::to_string(n) +
                        " is degenerate";
          return out;
        }
        d.object_map.push_back(image);
      }
      for (int m = 0; m < out.space.levels[n]->morphism_count(); ++m) {
        const int parent_mor = parent_face.on_morphism(incl.morphism_map[m]);
        const auto& target_mor = x.level(n - 1)->morphism(parent_mor);
        // Locate the same morphism inside the subgroupoid by matching the
        // parent id through the inclusion of level n-1.
        const auto& incl_below = out.inclusions[n - 1];
        int found = -1;
        for (const int cand : out.space.levels[n - 1]->outgoing(object_to_sub[n - 1][target_mor.src])) {
          if (incl_below.morphism_map[cand] == parent_mor) {
            found = cand;
            break;
          }
        }
        d.morphism_map.push_back(found);
      }
      out.space.faces[n].push_back(std::move(d));
    }
  }
  out.closed = true;
  return out;
}

/// Left Kan extension of a semi-simplicial groupoid along the inclusion into
/// the simplex category: level k is a sum of copies of Z_(number of a's)
/// indexed by words in {0, a}^k, with degeneracies inserting letters 0 and
/// faces merging adjacent letters.
struct KanExtension {
  TruncatedSimplicialGroupoid space;
  std::vector<std::vector<std::string>> words;   // per level, lexicographic
  std::vector<std::vector<int>> object_offsets;  // per level, per word
  std::vector<std::vector<int>> morphism_offsets;
};

namespace detail {

inline int count_letter(const std::string& w, char letter) {
  int n = 0;
  for (const char c : w) {
    if (c == letter) ++n;
  }
  return n;
}

}  // namespace detail

inline KanExtension kan_extend(const SemiSimplicialGroupoid& z) {
  KanExtension out;
  out.space.truncation = z.truncation;
  const int n = z.truncation;

  // Words of each length, in lexicographic order ('0' < 'a').
  out.words.resize(n + 1);
  out.words[0] = {""};
  for (int k = 1; k <= n; ++k) {
    for (const auto& w : out.words[k - 1]) {
      out.words[k].push_back(w + "0");
      out.words[k].push_back(w + "a");
    }
    std::sort(out.words[k].begin(), out.words[k].end());
  }

  std::vector<std::unordered_map<std::string, int>> word_index(n + 1);
  out.object_offsets.resize(n + 1);
  out.morphism_offsets.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    FiniteGroupoid level;
    for (int wi = 0; wi < static_cast<int>(out.words[k].size()); ++wi) {
      const std::string& w = out.words[k][wi];
      word_index[k][w] = wi;
      const FiniteGroupoid& copy = *z.level(detail::count_letter(w, 'a'));
      out.object_offsets[k].push_back(level.object_count());
      out.morphism_offsets[k].push_back(level.morphism_count());
      const int obj_off = level.object_count();
      const int mor_off = level.morphism_count();
      for (int o = 0; o < copy.object_count(); ++o) {
        level.add_object(w.empty() ? copy.object_name(o) : w + ":" + copy.object_name(o));
      }
      for (int m = 0; m < copy.morphism_count(); ++m) {
        const auto& mm = copy.morphism(m);
        level.add_morphism(obj_off + mm.src, obj_off + mm.tgt,
                           w.empty() ? mm.name : w + ":" + mm.name);
      }
      for (int o = 0; o < copy.object_count(); ++o) {
        level.set_identity(obj_off + o, mor_off + copy.identity_at(o));
      }
      for (int f = 0; f < copy.morphism_count(); ++f) {
        for (const int g : copy.outgoing(copy.morphism(f).tgt)) {
          level.set_compose(mor_off + f, mor_off + g, mor_off + copy.compose(f, g));
        }
      }
    }
    out.space.levels.push_back(share(std::move(level)));
  }

  // Helper copying one word-indexed block through an optional functor of Z.
  const auto emit_block = [&](GroupoidFunctor& functor, int k_from, int wi_from, int k_to,
                              const std::string& w_to, const GroupoidFunctor* zmap) {
    const std::string& w_from = out.words[k_from][wi_from];
    const FiniteGroupoid& copy = *z.level(detail::count_letter(w_from, 'a'));
    const int wi_to = word_index[k_to].at(w_to);
    const int obj_off = out.object_offsets[k_to][wi_to];
    const int mor_off = out.morphism_offsets[k_to][wi_to];
    for (int o = 0; o < copy.object_count(); ++o) {
      functor.object_map.push_back(obj_off + (zmap ? zmap->on_object(o) : o));
    }
    for (int m = 0; m < copy.morphism_count(); ++m) {
      functor.morphism_map.push_back(mor_off + (zmap ? zmap->on_morphism(m) : m));
    }
  };

  out.space.faces.resize(n + 1);
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i <= k; ++i) {
      GroupoidFunctor d;
      d.source = out.space.levels[k];
      d.target = out.space.levels[k - 1];
      for (int wi = 0; wi < static_cast<int>(out.words[k].size()); ++wi) {
        const std::string& w = out.words[k][wi];
        const int a_count = detail::count_letter(w, 'a');
        std::string w2;
        const GroupoidFunctor* zmap = nullptr;
        if (i == 0) {
          w2 = w.substr(1);
          if (w[0] == 'a') zmap = &z.face(a_count, 0);
        } else if (i == k) {
          w2 = w.substr(0, k - 1);
          if (w[k - 1] == 'a') zmap = &z.face(a_count, a_count);
        } else {
          // Merge 1-indexed letters i and i+1 (string indices i-1 and i).
          const char left = w[i - 1];
          const char right = w[i];
          const char merged = (left == '0' && right == '0') ? '0' : 'a';
          w2 = w.substr(0, i - 1) + merged + w.substr(i + 1);
          if (left == 'a' && right == 'a') {
            zmap = &z.face(a_count, detail::count_letter(w.substr(0, i), 'a'));
          }
        }
        emit_block(d, k, wi, k - 1, w2, zmap);
      }
      out.space.faces[k].push_back(std::move(d));
    }
  }

  out.space.degeneracies.resize(std::max(n, 0));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i <= k; ++i) {
      GroupoidFunctor s;
      s.source = out.space.levels[k];
      s.target = out.space.levels[k + 1];
      for (int wi = 0; wi < static_cast<int>(out.words[k].size()); ++wi) {
        const std::string& w = out.words[k][wi];
        const std::string w2 = w.substr(0, i) + "0" + w.substr(i);
        emit_block(s, k, wi, k + 1, w2, nullptr);
      }
      out.space.degeneracies[k].push_back(std::move(s));
    }
  }
  return out;
}

/// A levelwise map of truncated simplicial groupoids.  The functors pin their
/// endpoint groupoids; compatibility with a given source and target is
/// checked by validate_map.
struct SimplicialMap {
  std::vector<GroupoidFunctor> levels;
};

inline std::vector<std::string> validate_map(const SimplicialMap& f,
                                             const TruncatedSimplicialGroupoid& src,
                                             const TruncatedSimplicialGroupoid& tgt) {
  std::vector<std::string> issues;
  const auto complain = [&issues](std::string msg) {
    if (issues.size() < 32) issues.push_back(std::move(msg));
  };
  if (src.truncation != tgt.truncation) return {"source and target truncations differ"};
  if (static_cast<int>(f.levels.size()) != src.truncation + 1) return {"wrong number of levels"};
  for (int k = 0; k <= src.truncation; ++k) {
    if (f.levels[k].source != src.levels[k] || f.levels[k].target != tgt.levels[k]) {
      return {"level " + std::to_string(k) + " functor has wrong endpoints"};
    }
    for (const auto& msg : f.levels[k].validate()) {
      complain("level " + std::to_string(k) + ": " + msg);
    }
  }
  if (!issues.empty()) return issues;
  for (int k = 1; k <= src.truncation; ++k) {
    for (int i = 0; i <= k; ++i) {
      if (!same_mapping(compose_functors(src.face(k, i), f.levels[k - 1]),
                        compose_functors(f.levels[k], tgt.face(k, i)))) {
        complain("does not commute with face " + std::to_string(i) + " at level " +
                 std::to_string(k));
      }
    }
  }
  for (int k = 0; k < src.truncation; ++k) {
    for (int i = 0; i <= k; ++i) {
      if (!same_mapping(compose_functors(src.degeneracy(k, i), f.levels[k + 1]),
                        compose_functors(f.levels[k], tgt.degeneracy(k, i)))) {
        complain("does not commute with degeneracy " + std::to_string(i) + " at level " +
                 std::to_string(k));
      }
    }
  }
  return issues;
}

/// The counit comparison from the Kan extension of the nondegenerate part
/// back into the original space: a word block (w, sigma) is sent to the
/// appropriately degenerated image of sigma.
inline SimplicialMap kan_counit(const KanExtension& extension, const NondegeneratePart& part,
                                const TruncatedSimplicialGroupoid& x) {
  if (!part.closed) throw std::invalid_argument("nondegenerate part is not closed under faces");
  SimplicialMap out;
  for (int k = 0; k <= x.truncation; ++k) {
    GroupoidFunctor f;
    f.source = extension.space.levels[k];
    f.target = x.levels[k];
    for (int wi = 0; wi < static_cast<int>(extension.words[k].size()); ++wi) {
      const std::string& w = extension.words[k][wi];
      const int m = detail::count_letter(w, 'a');
      SimplexMap collapse;  // [k] -> [m], collapsing the 0-letter edges
      collapse.domain_rank = k;
      collapse.codomain_rank = m;
      collapse.values.push_back(0);
      for (int t = 1; t <= k; ++t) {
        collapse.values.push_back(collapse.values.back() + (w[t - 1] == 'a' ? 1 : 0));
      }
      const GroupoidFunctor block =
          compose_functors(part.inclusions[m], operator_functor(x, collapse));
      for (const int v : block.object_map) f.object_map.push_back(v);
      for (const int v : block.morphism_map) f.morphism_map.push_back(v);
    }
    out.levels.push_back(std::move(f));
  }
  return out;
}

/// Decomposition property for a semi-simplicial groupoid: only the
/// coface-against-coface pushouts exist to be checked.
inline AxiomVerdict is_semi_decomposition(const SemiSimplicialGroupoid& z) {
  const int n = z.truncation;
  bool any_checked = false;
  for (int p = 1; p + 2 <= n; ++p) {
    for (int i = 1; i <= p; ++i) {
      for (const int outer : {0, p + 1}) {
        any_checked = true;
        const GenericFreePushout po =
            pushout_generic_free(SimplexMap::coface(i, p + 1), SimplexMap::coface(outer, p + 1));
        const PullbackVerdict verdict = is_pullback_square(
            operator_functor(z, po.new_free), operator_functor(z, po.new_generic),
            operator_functor(z, SimplexMap::coface(i, p + 1)),
            operator_functor(z, SimplexMap::coface(outer, p + 1)));
        if (!verdict.holds) {
          return {VerdictStatus::Fails,
                  "square over [" + std::to_string(i) + "] coface at level " + std::to_string(p) +
                      " is not a pullback: " + verdict.witness};
        }
      }
    }
  }
  if (!any_checked) {
    return {VerdictStatus::Inconclusive, "truncation below 3 leaves nothing to check"};
  }
  return {VerdictStatus::HoldsUpToTruncation, ""};
}

// ---------------------------------------------------------------------------
// Map classification
// ---------------------------------------------------------------------------

struct MapClassification {
  AxiomVerdict conservative;
  AxiomVerdict ulf;
  bool culf = false;
  bool used_shortcut = false;
};

/// Classifies a simplicial map: conservative means all naturality squares of
/// degeneracies are pullbacks, ULF means the same for inner faces.  When both
/// spaces satisfy the decomposition property, one generating square of each
/// kind suffices.
inline MapClassification map_classify(const SimplicialMap& f,
                                      const TruncatedSimplicialGroupoid& src,
                                      const TruncatedSimplicialGroupoid& tgt,
                                      bool allow_shortcut = true) {
  MapClassification out;
  const int n = src.truncation;
  const bool shortcut = allow_shortcut && check_decomposition(src).holds() &&
                        check_decomposition(tgt).holds();
  out.used_shortcut = shortcut;

  const auto square = [&](const GroupoidFunctor& src_op, const GroupoidFunctor& tgt_op, int low,
                          int high) {
    return is_pullback_square(src_op, f.levels.at(low), f.levels.at(high), tgt_op);
  };

  if (n < 1) {
    out.conservative = {VerdictStatus::Inconclusive, "no level 1"};
  } else {
    out.conservative = {VerdictStatus::HoldsUpToTruncation, ""};
    const int top = shortcut ? 0 : n - 1;
    for (int k = 0; k <= top; ++k) {
      for (int i = 0; i <= k && out.conservative.holds(); ++i) {
        const PullbackVerdict verdict =
            square(src.degeneracy(k, i), tgt.degeneracy(k, i), k, k + 1);
        if (!verdict.holds) {
          out.conservative = {VerdictStatus::Fails,
                              "degeneracy square (n,i)=(" + std::to_string(k) + "," +
                                  std::to_string(i) + ") is not a pullback: " + verdict.witness};
        }
      }
      if (!out.conservative.holds()) break;
    }
  }

  if (n < 2) {
    out.ulf = {VerdictStatus::Inconclusive, "no level 2"};
  } else {
    out.ulf = {VerdictStatus::HoldsUpToTruncation, ""};
    const int top = shortcut ? 2 : n;
    for (int k = 2; k <= top; ++k) {
      for (int i = 1; i <= k - 1 && out.ulf.holds(); ++i) {
        const PullbackVerdict verdict = square(src.face(k, i), tgt.face(k, i), k, k - 1);
        if (!verdict.holds) {
          out.ulf = {VerdictStatus::Fails, "inner face square (n,i)=(" + std::to_string(k) + "," +
                                               std::to_string(i) + ") is not a pullback: " +
                                               verdict.witness};
        }
      }
      if (!out.ulf.holds()) break;
    }
  }

  out.culf = out.conservative.holds() && out.ulf.holds();
  return out;
}

// ---------------------------------------------------------------------------
// Structure report
// ---------------------------------------------------------------------------

struct StructureReport {
  AxiomVerdict decomposition;
  AxiomVerdict segal;
  AxiomVerdict complete;
  AxiomVerdict stiff;
  AxiomVerdict split;
  std::vector<std::string> notes;
};

inline StructureReport structure_report(const TruncatedSimplicialGroupoid& x) {
  StructureReport out;
  out.decomposition = check_decomposition(x);
  out.segal = check_segal(x);
  out.complete = check_complete(x);
  out.stiff = check_stiff(x);

  if (x.truncation < 1) {
    out.split = {VerdictStatus::Inconclusive, "no level 1"};
  } else if (!out.complete.holds()) {
    out.split = {VerdictStatus::Fails, "not complete: " + out.complete.witness};
  } else {
    const NondegeneratePart part = nondegenerate_part(x);
    if (part.closed) {
      out.split = {VerdictStatus::HoldsUpToTruncation, ""};
    } else {
      out.split = {VerdictStatus::Fails, part.witness};
    }
  }

  // Note any divergence between "no principal edge is degenerate" and "not in
  // the image of a degeneracy"; they agree on stiff spaces.
  for (int k = 2; k <= x.truncation; ++k) {
    std::string all_edges(k, 'a');
    const WordSubgroupoid effective = word_subgroupoid(x, all_edges);
    const std::vector<bool> nondeg = nondegenerate_components(x, k);
    std::vector<bool> effective_set(nondeg.size(), false);
    for (const int c : effective.components) effective_set[c] = true;
    for (int c = 0; c < static_cast<int>(nondeg.size()); ++c) {
      if (effective_set[c] != nondeg[c]) {
        out.notes.push_back(
            "level " + std::to_string(k) + " component '" +
            x.level(k)->object_name(x.level(k)->pi0().representative[c]) +
            (effective_set[c] ? "' has no degenerate principal edge but is degenerate"
                              : "' is nondegenerate but has a degenerate principal edge"));
      }
    }
  }
  return out;
}

}  // namespace dspace
