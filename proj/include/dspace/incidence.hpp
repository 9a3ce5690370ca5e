#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dspace/groupoid.hpp"
#include "dspace/rational.hpp"
#include "dspace/simplicial.hpp"

namespace dspace {

// ---------------------------------------------------------------------------
// Vectors over the components of X_1
// ---------------------------------------------------------------------------

/// An exact rational vector indexed by the canonical component order of X_1.
struct IncidenceVector {
    std::vector<Rational> values;

    bool operator==(const IncidenceVector&) const = default;
};

/// Display labels for the components of a groupoid: the object name of each
/// canonical representative.
inline std::vector<std::string> component_labels(const FiniteGroupoid& g) {
    const Pi0& pi = g.pi0();
    std::vector<std::string> labels;
    labels.reserve(pi.count());
    for (int c = 0; c < pi.count(); ++c) {
        labels.push_back(g.object_name(pi.representative[c]));
    }
    return labels;
}

/// The indicator vector of one component of X_1.
inline IncidenceVector delta_vector(const FiniteGroupoid& x1, int component) {
    IncidenceVector out;
    out.values.assign(x1.pi0().count(), Rational(0));
    out.values.at(component) = 1;
    return out;
}

// ---------------------------------------------------------------------------
// The section-coefficient tensor and the coalgebra
// ---------------------------------------------------------------------------

/// Sparse comultiplication tensor over π_0(X_1)^3.  `scaled[f]` maps a pair of
/// components (a, b) to the section coefficient c^f_{a,b}; `unscaled` keeps
/// the raw double-fiber cardinality (scaled · |Aut a|·|Aut b|) for the Segal
/// cross-check.  `aut_orders` records |Aut| at the canonical representative of
/// each X_1 component.
struct SectionTensor {
    std::vector<std::map<std::pair<int, int>, Rational>> scaled;
    std::vector<std::map<std::pair<int, int>, Rational>> unscaled;
    std::vector<long long> aut_orders;

    int component_count() const { return static_cast<int>(scaled.size()); }
};

struct Coalgebra {
    SectionTensor tensor;
    IncidenceVector counit;
};

/// Cardinality of the homotopy fiber of `functor` over `base_object`.
inline Rational fiber_cardinality(const GroupoidFunctor& functor, int base_object) {
    return cardinality(*homotopy_fiber(functor, base_object).groupoid);
}

/// The comultiplication tensor and counit of a decomposition space, truncated
/// at level 2.  Entries are assembled in one pass over the components of X_2:
/// a component [σ] with faces (d_1σ, d_2σ, d_0σ) in components (f, a, b)
/// contributes |Aut f| / |Aut σ| to c^f_{a,b}.  The counit is the literal
/// homotopy-fiber cardinality of s_0 over each component of X_1.
inline Coalgebra coalgebra(const TruncatedSimplicialGroupoid& x,
                           bool verify_preconditions = true) {
    if (x.truncation < 2) {
        throw std::invalid_argument("coalgebra needs truncation at least 2");
    }
    if (verify_preconditions) {
        const AxiomVerdict verdict = check_decomposition(x);
        if (!verdict.holds()) {
            throw std::invalid_argument("decomposition check failed: " + verdict.witness);
        }
    }
    const Pi0& edges = x.level(1)->pi0();
    const Pi0& triangles = x.level(2)->pi0();

    Coalgebra out;
    out.tensor.scaled.resize(edges.count());
    out.tensor.unscaled.resize(edges.count());
    out.tensor.aut_orders = edges.aut_order;

    const GroupoidFunctor& d0 = x.face(2, 0);
    const GroupoidFunctor& d1 = x.face(2, 1);
    const GroupoidFunctor& d2 = x.face(2, 2);
    for (int c = 0; c < triangles.count(); ++c) {
        const int rep = triangles.representative[c];
        const int f = edges.component_of[d1.on_object(rep)];
        const int a = edges.component_of[d2.on_object(rep)];
        const int b = edges.component_of[d0.on_object(rep)];
        const Rational scaled(edges.aut_order[f], triangles.aut_order[c]);
        out.tensor.scaled[f][{a, b}] += scaled;
        out.tensor.unscaled[f][{a, b}] +=
            scaled * edges.aut_order[a] * edges.aut_order[b];
    }

    const GroupoidFunctor& s0 = x.degeneracy(0, 0);
    out.counit.values.reserve(edges.count());
    for (int c = 0; c < edges.count(); ++c) {
        out.counit.values.push_back(fiber_cardinality(s0, edges.representative[c]));
    }
    return out;
}

/// Convolution product (F∗G)(f) = Σ_{(a,b)} c^f_{a,b} · F(a) · G(b).
inline IncidenceVector convolve(const Coalgebra& coalgebra, const IncidenceVector& lhs,
                                const IncidenceVector& rhs) {
    const int n = coalgebra.tensor.component_count();
    if (static_cast<int>(lhs.values.size()) != n || static_cast<int>(rhs.values.size()) != n) {
        throw std::invalid_argument("convolution operands keyed by a different component set");
    }
    IncidenceVector out;
    out.values.assign(n, Rational(0));
    for (int f = 0; f < n; ++f) {
        for (const auto& [pair, coefficient] : coalgebra.tensor.scaled[f]) {
            out.values[f] += coefficient * lhs.values[pair.first] * rhs.values[pair.second];
        }
    }
    return out;
}

/// ζ: the constant function 1 on π_0(X_1).
inline IncidenceVector zeta(const TruncatedSimplicialGroupoid& x) {
    IncidenceVector out;
    out.values.assign(x.level(1)->pi0().count(), Rational(1));
    return out;
}

/// Φ_r: the fiber cardinality, over each component of X_1, of the long-edge
/// functor restricted to the effective part of X_r (all principal edges
/// nondegenerate).  Φ_0 = ε and Φ_1 is the indicator of effective edges.
inline IncidenceVector phi(const TruncatedSimplicialGroupoid& x, int r,
                           bool verify_preconditions = true) {
    if (r < 0 || r > x.truncation) {
        throw std::invalid_argument("phi level exceeds the truncation");
    }
    if (verify_preconditions && !check_complete(x).holds()) {
        throw std::invalid_argument("phi needs a complete space");
    }
    const WordSubgroupoid effective = word_subgroupoid(x, std::string(r, 'a'));
    const GroupoidFunctor to_edges =
        compose_functors(effective.subgroupoid.inclusion, operator_functor(x, long_edge_map(r)));
    const Pi0& edges = x.level(1)->pi0();
    IncidenceVector out;
    out.values.reserve(edges.count());
    for (int c = 0; c < edges.count(); ++c) {
        out.values.push_back(fiber_cardinality(to_edges, edges.representative[c]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Length, tightness, Möbius verdicts
// ---------------------------------------------------------------------------

/// Per-component length table: ℓ(f) is the largest dimension of an effective
/// simplex with long edge in the component of f.  A component whose effective
/// fiber is still nonempty at the truncation is marked exceeded.
struct LengthTable {
    std::vector<int> length;     // per X_1 component; meaningless when exceeded
    std::vector<bool> exceeded;  // TruncationExceeded marker
    int bound = 0;               // the truncation N

    bool certified() const {
        return std::none_of(exceeded.begin(), exceeded.end(), [](bool e) { return e; });
    }
};

inline LengthTable lengths(const TruncatedSimplicialGroupoid& x,
                           bool verify_preconditions = true) {
    if (verify_preconditions && !check_complete(x).holds()) {
        throw std::invalid_argument("length analysis needs a complete space");
    }
    const Pi0& edges = x.level(1)->pi0();
    LengthTable out;
    out.bound = x.truncation;
    out.length.assign(edges.count(), -1);
    out.exceeded.assign(edges.count(), false);
    for (int r = 0; r <= x.truncation; ++r) {
        const WordSubgroupoid effective = word_subgroupoid(x, std::string(r, 'a'));
        const GroupoidFunctor to_edges = compose_functors(effective.subgroupoid.inclusion,
                                                          operator_functor(x, long_edge_map(r)));
        const Pi0& sub = effective.subgroupoid.groupoid->pi0();
        for (int c = 0; c < sub.count(); ++c) {
            const int f = edges.component_of[to_edges.on_object(sub.representative[c])];
            out.length[f] = std::max(out.length[f], r);
            if (r == x.truncation) out.exceeded[f] = true;
        }
    }
    return out;
}

struct TightnessVerdict {
    enum class Kind { Tight, NotTight, Inconclusive };

    Kind kind = Kind::Inconclusive;
    int bound = 0;        // Tight: the maximal length L; Inconclusive: the truncation N
    std::string witness;  // NotTight: an effective simplex with degenerate long edge
};

/// Tight(L) when the effective part first empties out at level L+1 within the
/// truncation; NotTight when some effective simplex has a degenerate long
/// edge (its 1-dimensional faces are then not all nondegenerate); otherwise
/// Inconclusive at the truncation.
inline TightnessVerdict tightness(const TruncatedSimplicialGroupoid& x,
                                  bool verify_preconditions = true) {
    if (verify_preconditions && !check_complete(x).holds()) {
        throw std::invalid_argument("tightness needs a complete space");
    }
    const std::vector<bool> degenerate = degenerate_edge_components(x);
    const Pi0& edges = x.level(1)->pi0();
    int first_empty = -1;
    for (int r = 0; r <= x.truncation; ++r) {
        const WordSubgroupoid effective = word_subgroupoid(x, std::string(r, 'a'));
        if (effective.components.empty()) {
            first_empty = r;
            break;
        }
        if (r < 2) continue;
        const GroupoidFunctor to_edges = compose_functors(effective.subgroupoid.inclusion,
                                                          operator_functor(x, long_edge_map(r)));
        const Pi0& sub = effective.subgroupoid.groupoid->pi0();
        for (int c = 0; c < sub.count(); ++c) {
            const int rep = sub.representative[c];
            if (degenerate[edges.component_of[to_edges.on_object(rep)]]) {
                return {TightnessVerdict::Kind::NotTight, r,
                        "effective simplex '" +
                            effective.subgroupoid.groupoid->object_name(rep) + "' at level " +
                            std::to_string(r) + " has a degenerate long edge"};
            }
        }
    }
    if (first_empty >= 0) {
        return {TightnessVerdict::Kind::Tight, first_empty - 1, ""};
    }
    return {TightnessVerdict::Kind::Inconclusive, x.truncation, ""};
}

/// Cumulative stages X_1^{(0)} ⊆ … ⊆ X_1^{(k)} of components of length ≤ j.
struct LengthFiltration {
    int bound = 0;
    std::vector<std::vector<int>> stages;  // stages[j]: sorted component indices
};

inline LengthFiltration length_filtration(const TruncatedSimplicialGroupoid& x, int k,
                                          bool verify_preconditions = true) {
    const LengthTable table = lengths(x, verify_preconditions);
    if (!table.certified()) {
        throw std::invalid_argument("length filtration needs lengths certified below truncation");
    }
    LengthFiltration out;
    out.bound = k;
    out.stages.resize(k + 1);
    for (int j = 0; j <= k; ++j) {
        for (int c = 0; c < static_cast<int>(table.length.size()); ++c) {
            if (table.length[c] <= j) out.stages[j].push_back(c);
        }
    }
    return out;
}

/// The full Möbius-space verdict: complete + decomposition + tight.  Local
/// finiteness is automatic for finite levels and recorded as satisfied.
struct MoebiusSpaceVerdict {
    AxiomVerdict decomposition;
    AxiomVerdict complete;
    bool locally_finite = true;
    TightnessVerdict tightness;

    bool moebius() const {
        return decomposition.holds() && complete.holds() &&
               tightness.kind == TightnessVerdict::Kind::Tight;
    }
};

inline MoebiusSpaceVerdict is_moebius_space(const TruncatedSimplicialGroupoid& x) {
    MoebiusSpaceVerdict out;
    out.decomposition = check_decomposition(x);
    out.complete = check_complete(x);
    if (out.complete.holds()) {
        out.tightness = tightness(x, false);
    } else {
        out.tightness = {TightnessVerdict::Kind::Inconclusive, x.truncation, ""};
    }
    return out;
}

/// μ = Σ_{r=0..L} (−1)^r Φ_r, computed only when the space is certified
/// Möbius; refused otherwise (mu left empty, see the verdict for the reason).
struct MoebiusResult {
    MoebiusSpaceVerdict verdict;
    std::optional<IncidenceVector> mu;
    std::vector<IncidenceVector> phis;  // Φ_0 … Φ_L when computed
};

inline MoebiusResult moebius(const TruncatedSimplicialGroupoid& x) {
    MoebiusResult out;
    out.verdict = is_moebius_space(x);
    if (!out.verdict.moebius()) return out;
    const int top = out.verdict.tightness.bound;
    IncidenceVector mu;
    mu.values.assign(x.level(1)->pi0().count(), Rational(0));
    for (int r = 0; r <= top; ++r) {
        out.phis.push_back(phi(x, r, false));
        for (std::size_t c = 0; c < mu.values.size(); ++c) {
            if (r % 2 == 0) {
                mu.values[c] += out.phis.back().values[c];
            } else {
                mu.values[c] -= out.phis.back().values[c];
            }
        }
    }
    out.mu = std::move(mu);
    return out;
}

// ---------------------------------------------------------------------------
// Segal section coefficients and gradedness
// ---------------------------------------------------------------------------

/// The closed formula for section coefficients of a Segal space:
/// c^{ab}_{a,b} = |Aut(y)|·|Aut(ab)| / (|Aut(a)|·|Aut(b)|) where y is the
/// middle vertex.  Returns 0 when no 2-simplex composes a with b.
inline Rational section_coefficient_segal(const TruncatedSimplicialGroupoid& x, int a, int b,
                                          bool verify_preconditions = true) {
    if (verify_preconditions) {
        const AxiomVerdict verdict = check_segal(x);
        if (!verdict.holds()) {
            throw std::invalid_argument("section coefficient formula needs a Segal space: " +
                                        verdict.witness);
        }
    }
    const Pi0& edges = x.level(1)->pi0();
    const Pi0& triangles = x.level(2)->pi0();
    const GroupoidFunctor& d0 = x.face(2, 0);
    const GroupoidFunctor& d1 = x.face(2, 1);
    const GroupoidFunctor& d2 = x.face(2, 2);
    int composite = -1;
    for (int c = 0; c < triangles.count(); ++c) {
        const int rep = triangles.representative[c];
        if (edges.component_of[d2.on_object(rep)] != a ||
            edges.component_of[d0.on_object(rep)] != b) {
            continue;
        }
        const int f = edges.component_of[d1.on_object(rep)];
        if (composite >= 0 && composite != f) {
            throw std::invalid_argument("ambiguous composite of the given components");
        }
        composite = f;
    }
    if (composite < 0) return Rational(0);

    const Pi0& vertices = x.level(0)->pi0();
    const GroupoidFunctor target_vertex = operator_functor(x, vertex_map(1, 1));
    const int y = vertices.component_of[target_vertex.on_object(edges.representative[a])];
    return Rational(Integer(vertices.aut_order[y]) * edges.aut_order[composite],
                    Integer(edges.aut_order[a]) * edges.aut_order[b]);
}

/// Graded: every 2-simplex satisfies ℓ(d_1σ) = ℓ(d_2σ) + ℓ(d_0σ).
inline AxiomVerdict is_graded(const TruncatedSimplicialGroupoid& x,
                              bool verify_preconditions = true) {
    const LengthTable table = lengths(x, verify_preconditions);
    if (!table.certified()) {
        throw std::invalid_argument("grading needs lengths certified below truncation");
    }
    const Pi0& edges = x.level(1)->pi0();
    const Pi0& triangles = x.level(2)->pi0();
    const GroupoidFunctor& d0 = x.face(2, 0);
    const GroupoidFunctor& d1 = x.face(2, 1);
    const GroupoidFunctor& d2 = x.face(2, 2);
    for (int c = 0; c < triangles.count(); ++c) {
        const int rep = triangles.representative[c];
        const int whole = table.length[edges.component_of[d1.on_object(rep)]];
        const int left = table.length[edges.component_of[d2.on_object(rep)]];
        const int right = table.length[edges.component_of[d0.on_object(rep)]];
        if (whole != left + right) {
            return {VerdictStatus::Fails,
                    "2-simplex '" + x.level(2)->object_name(rep) + "' has lengths " +
                        std::to_string(left) + " + " + std::to_string(right) +
                        " != " + std::to_string(whole)};
        }
    }
    return {VerdictStatus::HoldsUpToTruncation, ""};
}

// ---------------------------------------------------------------------------
// Identity verification suite
// ---------------------------------------------------------------------------

struct IdentityReport {
    enum class Outcome { Pass, Fail, PreconditionFailed };

    Outcome outcome = Outcome::Fail;
    std::string details;

    bool passed() const { return outcome == Outcome::Pass; }
};

namespace detail {

inline IdentityReport identity_pass(std::string details = "") {
    return {IdentityReport::Outcome::Pass, std::move(details)};
}

inline IdentityReport identity_fail(std::string details) {
    return {IdentityReport::Outcome::Fail, std::move(details)};
}

inline IdentityReport precondition_failed(std::string details) {
    return {IdentityReport::Outcome::PreconditionFailed, std::move(details)};
}

/// First component where two vectors differ, or -1.
inline int first_difference(const IncidenceVector& lhs, const IncidenceVector& rhs) {
    for (std::size_t c = 0; c < lhs.values.size(); ++c) {
        if (lhs.values[c] != rhs.values[c]) return static_cast<int>(c);
    }
    return -1;
}

}  // namespace detail

/// ζ∗μ = ε = μ∗ζ, plus the sign-free inversion principle
/// ζ∗Φ_even = ε + ζ∗Φ_odd and Φ_even∗ζ = ε + Φ_odd∗ζ with partial sums to L.
inline IdentityReport verify_inversion(const TruncatedSimplicialGroupoid& x) {
    const MoebiusResult result = moebius(x);
    if (!result.mu) {
        if (result.verdict.tightness.kind == TightnessVerdict::Kind::NotTight) {
            return detail::precondition_failed("not a Moebius space: " +
                                               result.verdict.tightness.witness);
        }
        if (!result.verdict.decomposition.holds()) {
            return detail::precondition_failed("not a decomposition space: " +
                                               result.verdict.decomposition.witness);
        }
        if (!result.verdict.complete.holds()) {
            return detail::precondition_failed("not complete: " + result.verdict.complete.witness);
        }
        return detail::precondition_failed("tightness inconclusive at truncation " +
                                           std::to_string(result.verdict.tightness.bound));
    }
    const Coalgebra coal = coalgebra(x, false);
    const IncidenceVector z = zeta(x);
    const auto labels = component_labels(*x.level(1));

    const IncidenceVector left = convolve(coal, z, *result.mu);
    if (const int c = detail::first_difference(left, coal.counit); c >= 0) {
        return detail::identity_fail("zeta*mu != counit at component '" + labels[c] + "' (" +
                                     to_string(left.values[c]) + " vs " +
                                     to_string(coal.counit.values[c]) + ")");
    }
    const IncidenceVector right = convolve(coal, *result.mu, z);
    if (const int c = detail::first_difference(right, coal.counit); c >= 0) {
        return detail::identity_fail("mu*zeta != counit at component '" + labels[c] + "'");
    }

    IncidenceVector even, odd;
    even.values.assign(z.values.size(), Rational(0));
    odd.values.assign(z.values.size(), Rational(0));
    for (std::size_t r = 0; r < result.phis.size(); ++r) {
        auto& side = (r % 2 == 0) ? even : odd;
        for (std::size_t c = 0; c < side.values.size(); ++c) {
            side.values[c] += result.phis[r].values[c];
        }
    }
    const auto plus = [](const IncidenceVector& lhs, const IncidenceVector& rhs) {
        IncidenceVector out = lhs;
        for (std::size_t c = 0; c < out.values.size(); ++c) out.values[c] += rhs.values[c];
        return out;
    };
    if (const int c = detail::first_difference(convolve(coal, z, even),
                                               plus(coal.counit, convolve(coal, z, odd)));
        c >= 0) {
        return detail::identity_fail("zeta*Phi_even != counit + zeta*Phi_odd at component '" +
                                     labels[c] + "'");
    }
    if (const int c = detail::first_difference(convolve(coal, even, z),
                                               plus(coal.counit, convolve(coal, odd, z)));
        c >= 0) {
        return detail::identity_fail("Phi_even*zeta != counit + Phi_odd*zeta at component '" +
                                     labels[c] + "'");
    }
    return detail::identity_pass("inverted with L = " +
                                 std::to_string(result.verdict.tightness.bound));
}

/// Σ_e c^f_{a,e}·c^e_{b,c} = Σ_e c^f_{e,c}·c^e_{a,b} for every f and (a,b,c).
inline IdentityReport verify_coassociativity(const TruncatedSimplicialGroupoid& x,
                                             const Coalgebra& coal) {
    const int n = coal.tensor.component_count();
    const auto labels = component_labels(*x.level(1));
    for (int f = 0; f < n; ++f) {
        std::map<std::tuple<int, int, int>, Rational> lhs, rhs;
        for (const auto& [pair, c1] : coal.tensor.scaled[f]) {
            const auto& [a, e] = pair;
            for (const auto& [pair2, c2] : coal.tensor.scaled[e]) {
                lhs[{a, pair2.first, pair2.second}] += c1 * c2;
            }
        }
        for (const auto& [pair, c1] : coal.tensor.scaled[f]) {
            const auto& [e, c] = pair;
            for (const auto& [pair2, c2] : coal.tensor.scaled[e]) {
                rhs[{pair2.first, pair2.second, c}] += c1 * c2;
            }
        }
        for (const auto& [key, value] : lhs) {
            if (value == 0) continue;
            auto it = rhs.find(key);
            if (it == rhs.end() || it->second != value) {
                return detail::identity_fail(
                    "coassociativity fails at f='" + labels[f] + "', (a,b,c)=('" +
                    labels[std::get<0>(key)] + "','" + labels[std::get<1>(key)] + "','" +
                    labels[std::get<2>(key)] + "')");
            }
        }
        for (const auto& [key, value] : rhs) {
            if (value == 0) continue;
            auto it = lhs.find(key);
            if (it == lhs.end() || it->second != value) {
                return detail::identity_fail(
                    "coassociativity fails at f='" + labels[f] + "', (a,b,c)=('" +
                    labels[std::get<0>(key)] + "','" + labels[std::get<1>(key)] + "','" +
                    labels[std::get<2>(key)] + "')");
            }
        }
    }
    return detail::identity_pass();
}

inline IdentityReport verify_coassociativity(const TruncatedSimplicialGroupoid& x) {
    return verify_coassociativity(x, coalgebra(x, false));
}

/// Σ_a c^f_{a,b}·ε(a) = [f = b] and Σ_b c^f_{a,b}·ε(b) = [f = a].
inline IdentityReport verify_counit(const TruncatedSimplicialGroupoid& x, const Coalgebra& coal) {
    const int n = coal.tensor.component_count();
    const auto labels = component_labels(*x.level(1));
    for (int f = 0; f < n; ++f) {
        std::vector<Rational> left(n, Rational(0)), right(n, Rational(0));
        for (const auto& [pair, c] : coal.tensor.scaled[f]) {
            left[pair.second] += c * coal.counit.values[pair.first];
            right[pair.first] += c * coal.counit.values[pair.second];
        }
        for (int g = 0; g < n; ++g) {
            const Rational expected = (g == f) ? 1 : 0;
            if (left[g] != expected) {
                return detail::identity_fail("left counit law fails at f='" + labels[f] +
                                             "', b='" + labels[g] + "' (" + to_string(left[g]) +
                                             ")");
            }
            if (right[g] != expected) {
                return detail::identity_fail("right counit law fails at f='" + labels[f] +
                                             "', a='" + labels[g] + "' (" + to_string(right[g]) +
                                             ")");
            }
        }
    }
    return detail::identity_pass();
}

inline IdentityReport verify_counit(const TruncatedSimplicialGroupoid& x) {
    return verify_counit(x, coalgebra(x, false));
}

/// ζ∗Φ_n = Φ_n + Φ_{n+1} = Φ_n∗ζ for n below the truncation.
inline IdentityReport verify_phi_recursion(const TruncatedSimplicialGroupoid& x,
                                           int max_level = 4) {
    if (!check_complete(x).holds()) {
        return detail::precondition_failed("phi recursion needs a complete space");
    }
    const Coalgebra coal = coalgebra(x, false);
    const IncidenceVector z = zeta(x);
    const auto labels = component_labels(*x.level(1));
    const int top = std::min(max_level, x.truncation - 1);
    IncidenceVector current = phi(x, 0, false);
    for (int n = 0; n <= top; ++n) {
        const IncidenceVector next = phi(x, n + 1, false);
        IncidenceVector sum = current;
        for (std::size_t c = 0; c < sum.values.size(); ++c) sum.values[c] += next.values[c];
        if (const int c = detail::first_difference(convolve(coal, z, current), sum); c >= 0) {
            return detail::identity_fail("zeta*Phi_" + std::to_string(n) + " != Phi_" +
                                         std::to_string(n) + " + Phi_" + std::to_string(n + 1) +
                                         " at component '" + labels[c] + "'");
        }
        if (const int c = detail::first_difference(convolve(coal, current, z), sum); c >= 0) {
            return detail::identity_fail("Phi_" + std::to_string(n) + "*zeta != Phi_" +
                                         std::to_string(n) + " + Phi_" + std::to_string(n + 1) +
                                         " at component '" + labels[c] + "'");
        }
        current = next;
    }
    return detail::identity_pass("checked n <= " + std::to_string(top));
}

/// Φ_n = (ζ − ε)^{∗n} for n up to the truncation.
inline IdentityReport verify_phi_power(const TruncatedSimplicialGroupoid& x, int max_level = 4) {
    if (!check_complete(x).holds()) {
        return detail::precondition_failed("phi powers need a complete space");
    }
    const Coalgebra coal = coalgebra(x, false);
    const auto labels = component_labels(*x.level(1));
    const int top = std::min(max_level, x.truncation);
    IncidenceVector base = zeta(x);
    for (std::size_t c = 0; c < base.values.size(); ++c) {
        base.values[c] -= coal.counit.values[c];
    }
    IncidenceVector power = coal.counit;  // (ζ−ε)^{∗0} = ε
    for (int n = 0; n <= top; ++n) {
        if (const int c = detail::first_difference(phi(x, n, false), power); c >= 0) {
            return detail::identity_fail("Phi_" + std::to_string(n) +
                                         " != (zeta-counit)^*" + std::to_string(n) +
                                         " at component '" + labels[c] + "'");
        }
        if (n < top) power = convolve(coal, power, base);
    }
    return detail::identity_pass("checked n <= " + std::to_string(top));
}

/// The section coefficients of a Segal space form a 2-cocycle, and the
/// coboundary formula c^{ab}_{a,b} = φ(a)·φ(ab)^{-1}·φ(b) holds for
/// φ(f: x→y) = |Aut x|^s·|Aut y|^t / |Aut f| with s + t = 1.  Fractional
/// exponents are handled exactly by comparing K-th powers for the common
/// denominator K of s and t.
inline IdentityReport verify_cocycle(const TruncatedSimplicialGroupoid& x,
                                     const Rational& s = Rational(1, 2)) {
    const AxiomVerdict segal = check_segal(x);
    if (!segal.holds()) {
        return detail::precondition_failed("cocycle needs a Segal space: " + segal.witness);
    }
    const Rational t = Rational(1) - s;
    const Pi0& vertices = x.level(0)->pi0();
    const Pi0& edges = x.level(1)->pi0();
    const auto labels = component_labels(*x.level(1));

    const GroupoidFunctor src_vertex = operator_functor(x, vertex_map(0, 1));
    const GroupoidFunctor tgt_vertex = operator_functor(x, vertex_map(1, 1));

    // Common exponent denominator K: both K·s and K·t must be integers.
    const long long k =
        boost::multiprecision::lcm(denominator(s), denominator(t)).convert_to<long long>();
    const Integer ks = (Integer(k) * numerator(s)) / denominator(s);
    const Integer kt = (Integer(k) * numerator(t)) / denominator(t);

    const auto int_pow = [](const Integer& base, const Integer& exp) {
        Integer out = 1;
        for (Integer i = 0; i < exp; ++i) out *= base;
        return out;
    };
    // base^exp as an exact rational, with negative exponents inverted.
    const auto signed_pow = [&int_pow](const Integer& base, const Integer& exp) {
        return exp >= 0 ? Rational(int_pow(base, exp)) : Rational(Integer(1), int_pow(base, -exp));
    };
    // φ(f)^K as an exact rational.
    const auto phi_power_k = [&](int f) {
        const Integer aut_src =
            vertices.aut_order[vertices.component_of[src_vertex.on_object(edges.representative[f])]];
        const Integer aut_tgt =
            vertices.aut_order[vertices.component_of[tgt_vertex.on_object(edges.representative[f])]];
        return signed_pow(aut_src, ks) * signed_pow(aut_tgt, kt) /
               Rational(int_pow(Integer(edges.aut_order[f]), Integer(k)));
    };
    const auto rational_pow_k = [&](const Rational& value) {
        return Rational(int_pow(numerator(value), Integer(k)),
                        int_pow(denominator(value), Integer(k)));
    };

    // Coboundary over all composable pairs (components of X_2).
    {
        const Pi0& triangles = x.level(2)->pi0();
        const GroupoidFunctor& d0 = x.face(2, 0);
        const GroupoidFunctor& d1 = x.face(2, 1);
        const GroupoidFunctor& d2 = x.face(2, 2);
        for (int c = 0; c < triangles.count(); ++c) {
            const int rep = triangles.representative[c];
            const int a = edges.component_of[d2.on_object(rep)];
            const int b = edges.component_of[d0.on_object(rep)];
            const int ab = edges.component_of[d1.on_object(rep)];
            const Rational coefficient = section_coefficient_segal(x, a, b, false);
            if (rational_pow_k(coefficient) * phi_power_k(ab) !=
                phi_power_k(a) * phi_power_k(b)) {
                return detail::identity_fail("coboundary fails at ('" + labels[a] + "','" +
                                             labels[b] + "')");
            }
        }
    }

    // 2-cocycle identity over composable triples (components of X_3).
    if (x.truncation >= 3) {
        const Pi0& tetras = x.level(3)->pi0();
        const auto edge = [&](int i, int j) {
            SimplexMap m;
            m.domain_rank = 1;
            m.codomain_rank = 3;
            m.values = {i, j};
            return operator_functor(x, m);
        };
        const GroupoidFunctor e01 = edge(0, 1), e12 = edge(1, 2), e23 = edge(2, 3);
        const GroupoidFunctor e02 = edge(0, 2), e13 = edge(1, 3);
        for (int c = 0; c < tetras.count(); ++c) {
            const int rep = tetras.representative[c];
            const int a = edges.component_of[e01.on_object(rep)];
            const int b = edges.component_of[e12.on_object(rep)];
            const int cc = edges.component_of[e23.on_object(rep)];
            const int ab = edges.component_of[e02.on_object(rep)];
            const int bc = edges.component_of[e13.on_object(rep)];
            const Rational lhs = section_coefficient_segal(x, a, b, false) *
                                 section_coefficient_segal(x, ab, cc, false);
            const Rational rhs = section_coefficient_segal(x, b, cc, false) *
                                 section_coefficient_segal(x, a, bc, false);
            if (lhs != rhs) {
                return detail::identity_fail("cocycle identity fails at ('" + labels[a] + "','" +
                                             labels[b] + "','" + labels[cc] + "')");
            }
        }
    }
    return detail::identity_pass();
}

/// A cULF map induces a coalgebra homomorphism: in the representable basis
/// h^u = |Aut u|·δ^u the pushforward sends h^u to h^{f(u)}, and the tensor
/// square must commute; ζ and every Φ_n pull back along the map.
inline IdentityReport verify_culf_hom(const SimplicialMap& f,
                                      const TruncatedSimplicialGroupoid& src,
                                      const TruncatedSimplicialGroupoid& tgt) {
    {
        const auto issues = validate_map(f, src, tgt);
        if (!issues.empty()) {
            return detail::precondition_failed("not a simplicial map: " + issues.front());
        }
        const MapClassification classes = map_classify(f, src, tgt);
        if (!classes.culf) {
            const std::string reason = !classes.conservative.holds()
                                           ? classes.conservative.witness
                                           : classes.ulf.witness;
            return detail::precondition_failed("map is not culf: " + reason);
        }
    }
    const Coalgebra src_coal = coalgebra(src, false);
    const Coalgebra tgt_coal = coalgebra(tgt, false);
    const Pi0& src_edges = src.level(1)->pi0();
    const Pi0& tgt_edges = tgt.level(1)->pi0();
    const auto src_labels = component_labels(*src.level(1));

    // Component image of the level-1 functor.
    std::vector<int> image(src_edges.count());
    for (int c = 0; c < src_edges.count(); ++c) {
        image[c] = tgt_edges.component_of[f.levels[1].on_object(src_edges.representative[c])];
    }

    // Tensor homomorphism square in the representable basis: for every u,
    // |Aut f(u)|·c^{f(u)}_{a',b'} = |Aut u|·Σ c^u_{a,b}·|Aut fa|·|Aut fb|/(|Aut a||Aut b|)
    // summed over (a,b) mapping to (a',b').
    for (int u = 0; u < src_edges.count(); ++u) {
        std::map<std::pair<int, int>, Rational> pushed;
        for (const auto& [pair, c] : src_coal.tensor.scaled[u]) {
            const auto& [a, b] = pair;
            pushed[{image[a], image[b]}] +=
                c * Rational(Integer(src_edges.aut_order[u]) *
                                 tgt_edges.aut_order[image[a]] * tgt_edges.aut_order[image[b]],
                             Integer(src_edges.aut_order[a]) * src_edges.aut_order[b]);
        }
        std::map<std::pair<int, int>, Rational> expected;
        for (const auto& [pair, c] : tgt_coal.tensor.scaled[image[u]]) {
            const Rational value = c * tgt_edges.aut_order[image[u]];
            if (value != 0) expected[pair] = value;
        }
        for (auto it = pushed.begin(); it != pushed.end();) {
            if (it->second == 0) {
                it = pushed.erase(it);
            } else {
                ++it;
            }
        }
        if (pushed != expected) {
            return detail::identity_fail("tensor homomorphism square fails at component '" +
                                         src_labels[u] + "'");
        }
    }

    // ζ and Φ_n pull back: Φ_n^src(u) = Φ_n^tgt(f u).
    for (int n = 0; n <= src.truncation; ++n) {
        const IncidenceVector src_phi = phi(src, n, false);
        const IncidenceVector tgt_phi = phi(tgt, n, false);
        for (int u = 0; u < src_edges.count(); ++u) {
            if (src_phi.values[u] != tgt_phi.values[image[u]]) {
                return detail::identity_fail("Phi_" + std::to_string(n) +
                                             " does not pull back at component '" +
                                             src_labels[u] + "'");
            }
        }
    }
    return detail::identity_pass();
}

}  // namespace dspace
