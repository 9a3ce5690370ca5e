// dspace: command-line front end for the finite decomposition-space toolkit.
//
// Subcommands
//   construct <kind> -i in.json [-N n] [-o out.json]   build a simplicial bundle
//   check <file> [--axioms a,b,...]                    decide structural axioms
//   analyze <file>                                     full structural survey
//   coalgebra <file> [--tensor|--counit]               incidence coalgebra tables
//   mobius <file>                                      Moebius function by component
//   verify <file> --identity <name>                    algebraic identity checks
//   map <map.json> [--classify] [--verify-hom]         classify a simplicial map
//
// Exit codes: 0 all requested checks pass (or values computed), 1 a check
// failed (the report carries a witness), 2 invalid input, 3 inconclusive at
// the chosen truncation.  Reports are deterministic: the same input and
// truncation produce byte-identical output.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <dspace/constructors.hpp>
#include <dspace/groupoid.hpp>
#include <dspace/incidence.hpp>
#include <dspace/json_io.hpp>
#include <dspace/simplicial.hpp>

namespace {

using dspace::AxiomVerdict;
using dspace::Coalgebra;
using dspace::Document;
using dspace::DocumentError;
using dspace::DocumentKind;
using dspace::IdentityReport;
using dspace::Json;
using dspace::MapDocument;
using dspace::Rational;
using dspace::TightnessVerdict;
using dspace::TruncatedSimplicialGroupoid;
using dspace::VerdictStatus;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInconclusive = 3;

std::string rational_to_string(const Rational& value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

std::string status_word(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::HoldsUpToTruncation: return "holds";
        case VerdictStatus::Fails: return "fails";
        case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Report accumulation: human text and the machine schema grow side by side,
// and the exit code is the worst outcome seen (fail > inconclusive > pass).
// ---------------------------------------------------------------------------

struct Report {
    std::string human;
    Json machine = Json::object();
    int exit_code = kExitPass;

    void line(const std::string& text) { human += text + "\n"; }

    void worsen(int code) {
        if (code == kExitFail) {
            exit_code = kExitFail;
        } else if (code == kExitInconclusive && exit_code == kExitPass) {
            exit_code = kExitInconclusive;
        }
    }

    void axiom_row(const std::string& name, VerdictStatus status, const std::string& witness) {
        std::string text = name + ": " + status_word(status);
        if (!witness.empty()) text += " -- " + witness;
        line(text);
        Json row = Json::object();
        row["axiom"] = name;
        row["status"] = status_word(status);
        row["witness"] = witness;
        machine["checks"].push_back(std::move(row));
        if (status == VerdictStatus::Fails) worsen(kExitFail);
        if (status == VerdictStatus::Inconclusive) worsen(kExitInconclusive);
    }

    void axiom_row(const std::string& name, const AxiomVerdict& verdict) {
        axiom_row(name, verdict.status, verdict.witness);
    }
};

int emit(const Report& report, bool json_mode) {
    if (json_mode) {
        Json machine = report.machine;
        machine["exit"] = report.exit_code;
        std::cout << dspace::canonical_dump(machine);
    } else {
        std::cout << report.human;
    }
    return report.exit_code;
}

// ---------------------------------------------------------------------------
// Input resolution
// ---------------------------------------------------------------------------

int default_truncation() {
    const char* env = std::getenv("DSPACE_TRUNCATION");
    if (env == nullptr) return 5;
    const std::string text(env);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
        throw DocumentError("DSPACE_TRUNCATION: not a nonnegative integer: '" + text + "'");
    }
    return value;
}

TruncatedSimplicialGroupoid truncate_tower(const TruncatedSimplicialGroupoid& x, int n) {
    TruncatedSimplicialGroupoid out;
    out.truncation = n;
    out.levels.assign(x.levels.begin(), x.levels.begin() + n + 1);
    out.faces.assign(x.faces.begin(), x.faces.begin() + n + 1);
    out.degeneracies.assign(x.degeneracies.begin(), x.degeneracies.begin() + std::max(n, 0));
    return out;
}

struct TowerInput {
    TruncatedSimplicialGroupoid space;
    std::string kind;         // document kind as loaded
    std::string description;  // how the tower was obtained
};

/// Turns a loaded document into a simplicial space.  Category-like documents
/// (category, poset, monoid) are nerved at the requested truncation; partial
/// monoids take the partial nerve; simplicial documents are used as stored,
/// optionally truncated further when a smaller -N is requested.
TowerInput resolve_tower(const Document& document, std::optional<int> requested) {
    TowerInput out;
    out.kind = dspace::to_string(document.kind);
    const int fallback = requested.has_value() ? *requested : default_truncation();
    switch (document.kind) {
        case DocumentKind::Category:
        case DocumentKind::Poset:
        case DocumentKind::Monoid:
            out.space = dspace::nerve(document.category, fallback);
            out.description = "nerve at truncation " + std::to_string(fallback);
            return out;
        case DocumentKind::PartialMonoid:
            out.space = dspace::nerve_partial(*document.partial_monoid, fallback);
            out.description = "partial nerve at truncation " + std::to_string(fallback);
            return out;
        case DocumentKind::Simplicial: {
            const TruncatedSimplicialGroupoid& stored = *document.simplicial;
            if (requested.has_value() && *requested > stored.truncation) {
                throw DocumentError("cannot raise the truncation of a stored simplicial document "
                                    "(stored truncation is " + std::to_string(stored.truncation) +
                                    ")");
            }
            if (requested.has_value() && *requested < stored.truncation) {
                out.space = truncate_tower(stored, *requested);
                out.description = "stored bundle truncated to " + std::to_string(*requested);
            } else {
                out.space = stored;
                out.description = "stored bundle at truncation " +
                                  std::to_string(stored.truncation);
            }
            return out;
        }
        case DocumentKind::SemiSimplicial:
            throw DocumentError("a semi-simplicial document has no degeneracies; build one with "
                                "'dspace construct kan-extend' first");
        case DocumentKind::Groupoid:
            throw DocumentError("a groupoid document does not define a simplicial space; "
                                "provide a category, poset, monoid, partial-monoid, or "
                                "simplicial document");
        case DocumentKind::Map:
            throw DocumentError("a map document describes a simplicial map; use 'dspace map' or "
                                "'dspace verify --identity culf-hom'");
    }
    throw DocumentError("unsupported document kind");
}

void report_header(Report& report, const std::string& command, const std::string& input,
                   const TowerInput& tower) {
    report.line(command + ": " + input);
    report.line("kind: " + tower.kind + " (" + tower.description + ")");
    report.line("truncation: " + std::to_string(tower.space.truncation));
    report.machine["command"] = command;
    report.machine["input"] = input;
    report.machine["kind"] = tower.kind;
    report.machine["truncation"] = tower.space.truncation;
}

// ---------------------------------------------------------------------------
// Axiom dispatch shared by `check` and `analyze`
// ---------------------------------------------------------------------------

AxiomVerdict split_verdict(const TruncatedSimplicialGroupoid& x) {
    if (x.truncation < 1) return {VerdictStatus::Inconclusive, "no level 1"};
    const AxiomVerdict complete = dspace::check_complete(x);
    if (!complete.holds()) {
        return {VerdictStatus::Fails, "not complete: " + complete.witness};
    }
    const dspace::NondegeneratePart part = dspace::nondegenerate_part(x);
    if (part.closed) return {VerdictStatus::HoldsUpToTruncation, ""};
    return {VerdictStatus::Fails, part.witness};
}

AxiomVerdict tight_verdict(const TruncatedSimplicialGroupoid& x) {
    const AxiomVerdict complete = dspace::check_complete(x);
    if (!complete.holds()) {
        return {VerdictStatus::Inconclusive, "tightness needs a complete space"};
    }
    const TightnessVerdict verdict = dspace::tightness(x, false);
    switch (verdict.kind) {
        case TightnessVerdict::Kind::Tight:
            return {VerdictStatus::HoldsUpToTruncation,
                    "maximal length " + std::to_string(verdict.bound)};
        case TightnessVerdict::Kind::NotTight:
            return {VerdictStatus::Fails, verdict.witness};
        case TightnessVerdict::Kind::Inconclusive:
            return {VerdictStatus::Inconclusive,
                    "no empty effective level within truncation " +
                        std::to_string(verdict.bound)};
    }
    return {VerdictStatus::Inconclusive, ""};
}

AxiomVerdict moebius_verdict(const TruncatedSimplicialGroupoid& x) {
    const dspace::MoebiusSpaceVerdict verdict = dspace::is_moebius_space(x);
    if (verdict.moebius()) {
        return {VerdictStatus::HoldsUpToTruncation,
                "maximal length " + std::to_string(verdict.tightness.bound)};
    }
    if (!verdict.decomposition.holds()) {
        if (verdict.decomposition.status == VerdictStatus::Inconclusive) {
            return {VerdictStatus::Inconclusive,
                    "decomposition inconclusive: " + verdict.decomposition.witness};
        }
        return {VerdictStatus::Fails,
                "not a decomposition space: " + verdict.decomposition.witness};
    }
    if (!verdict.complete.holds()) {
        if (verdict.complete.status == VerdictStatus::Inconclusive) {
            return {VerdictStatus::Inconclusive,
                    "completeness inconclusive: " + verdict.complete.witness};
        }
        return {VerdictStatus::Fails, "not complete: " + verdict.complete.witness};
    }
    if (verdict.tightness.kind == TightnessVerdict::Kind::NotTight) {
        return {VerdictStatus::Fails, "not tight: " + verdict.tightness.witness};
    }
    return {VerdictStatus::Inconclusive,
            "tightness inconclusive at truncation " + std::to_string(x.truncation)};
}

const std::vector<std::string> kAllAxioms = {"decomposition", "segal","complete", "stiff",
                                             "split", "tight", "locally-finite", "moebius"};

AxiomVerdict run_axiom(const TruncatedSimplicialGroupoid& x, const std::string& name) {
    if (name == "decomposition") return dspace::check_decomposition(x);
    if (name == "segal") return dspace::check_segal(x);
    if (name == "complete") return dspace::check_complete(x);
    if (name == "stiff") return dspace::check_stiff(x);
    if (name == "split") return split_verdict(x);
    if (name == "tight") return tight_verdict(x);
    if (name == "locally-finite") {
        return {VerdictStatus::HoldsUpToTruncation, "all levels are finite groupoids"};
    }
    if (name == "moebius") return moebius_verdict(x);
    throw DocumentError("unknown axiom '" + name + "'");
}

std::vector<std::string> parse_axiom_list(const std::string& text) {
    if (text.empty()) return kAllAxioms;
    std::vector<std::string> names;
    std::string current;
    std::istringstream stream(text);
    while (std::getline(stream, current, ',')) {
        if (current.empty()) continue;
        if (std::find(kAllAxioms.begin(), kAllAxioms.end(), current) == kAllAxioms.end()) {
            throw DocumentError("unknown axiom '" + current + "'");
        }
        names.push_back(current);
    }
    if (names.empty()) throw DocumentError("empty axiom list");
    return names;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_check(const std::string& input, std::optional<int> requested, const std::string& axioms,
              bool json_mode) {
    const std::vector<std::string> names = parse_axiom_list(axioms);
    const Document document = dspace::load_document(input);
    const TowerInput tower = resolve_tower(document, requested);
    Report report;
    report_header(report, "check", input, tower);
    report.machine["checks"] = Json::array();
    for (const std::string& name : names) {
        report.axiom_row(name, run_axiom(tower.space, name));
    }
    return emit(report, json_mode);
}

int run_analyze(const std::string& input, std::optional<int> requested, bool json_mode) {
    const Document document = dspace::load_document(input);
    const TowerInput tower = resolve_tower(document, requested);
    const TruncatedSimplicialGroupoid& x = tower.space;
    Report report;
    report_header(report, "analyze", input, tower);

    report.machine["levels"] = Json::array();
    for (int n = 0; n <= x.truncation; ++n) {
        const dspace::FiniteGroupoid& level = *x.level(n);
        const std::string cardinality = rational_to_string(dspace::cardinality(level));
        report.line("level " + std::to_string(n) + ": " + std::to_string(level.object_count()) +
                    " objects, " + std::to_string(level.pi0().count()) +
                    " components, cardinality " + cardinality);
        Json row = Json::object();
        row["index"] = n;
        row["objects"] = level.object_count();
        row["components"] = level.pi0().count();
        row["cardinality"] = cardinality;
        report.machine["levels"].push_back(std::move(row));
    }

    report.machine["checks"] = Json::array();
    for (const std::string& name : kAllAxioms) {
        report.axiom_row(name, run_axiom(x, name));
    }

    const dspace::StructureReport structure = dspace::structure_report(x);
    report.machine["notes"] = Json::array();
    for (const std::string& note : structure.notes) {
        report.line("note: " + note);
        report.machine["notes"].push_back(note);
    }
    return emit(report, json_mode);
}

int run_coalgebra(const std::string& input, std::optional<int> requested, bool show_tensor,
                  bool show_counit, bool json_mode) {
    const Document document = dspace::load_document(input);
    const TowerInput tower = resolve_tower(document, requested);
    const TruncatedSimplicialGroupoid& x = tower.space;
    Report report;
    report_header(report, "coalgebra", input, tower);
    if (x.truncation < 2) {
        throw DocumentError("coalgebra needs truncation at least 2 (have " +
                            std::to_string(x.truncation) + ")");
    }
    const AxiomVerdict decomposition = dspace::check_decomposition(x);
    if (!decomposition.holds()) {
        report.axiom_row("decomposition", decomposition);
        return emit(report, json_mode);
    }

    if (!show_tensor && !show_counit) {
        show_tensor = true;
        show_counit = true;
    }
    const Coalgebra coalgebra = dspace::coalgebra(x, false);
    const std::vector<std::string> labels = dspace::component_labels(*x.level(1));
    report.machine["components"] = labels;
    report.line("components: " + std::to_string(labels.size()));

    if (show_counit) {
        report.machine["counit"] = Json::array();
        for (std::size_t c = 0; c < labels.size(); ++c) {
            const std::string value = rational_to_string(coalgebra.counit.values[c]);
            report.line("counit[" + labels[c] + "] = " + value);
            Json row = Json::object();
            row["component"] = labels[c];
            row["value"] = value;
            report.machine["counit"].push_back(std::move(row));
        }
    }
    if (show_tensor) {
        report.machine["tensor"] = Json::array();
        for (std::size_t f = 0; f < labels.size(); ++f) {
            Json entries = Json::array();
            std::string text = "tensor[" + labels[f] + "]:";
            bool first = true;
            for (const auto& [key, value] : coalgebra.tensor.scaled[f]) {
                const std::string rendered = rational_to_string(value);
                text += std::string(first ? " " : ", ") + "(" + labels[key.first] + ", " +
                        labels[key.second] + ") = " + rendered;
                first = false;
                Json entry = Json::object();
                entry["left"] = labels[key.first];
                entry["right"] = labels[key.second];
                entry["value"] = rendered;
                entries.push_back(std::move(entry));
            }
            if (first) text += " (empty)";
            report.line(text);
            Json row = Json::object();
            row["component"] = labels[f];
            row["entries"] = std::move(entries);
            report.machine["tensor"].push_back(std::move(row));
        }
    }
    return emit(report, json_mode);
}

int run_mobius(const std::string& input, std::optional<int> requested, bool json_mode) {
    const Document document = dspace::load_document(input);
    const TowerInput tower = resolve_tower(document, requested);
    const TruncatedSimplicialGroupoid& x = tower.space;
    Report report;
    report_header(report, "mobius", input, tower);

    const dspace::MoebiusResult result = dspace::moebius(x);
    report.axiom_row("decomposition", result.verdict.decomposition);
    report.axiom_row("complete", result.verdict.complete);
    switch (result.verdict.tightness.kind) {
        case TightnessVerdict::Kind::Tight:
            report.axiom_row("tight", VerdictStatus::HoldsUpToTruncation,
                             "maximal length " + std::to_string(result.verdict.tightness.bound));
            break;
        case TightnessVerdict::Kind::NotTight:
            report.axiom_row("tight", VerdictStatus::Fails, result.verdict.tightness.witness);
            break;
        case TightnessVerdict::Kind::Inconclusive:
            report.axiom_row("tight", VerdictStatus::Inconclusive,
                             "no empty effective level within truncation " +
                                 std::to_string(x.truncation) + "; retry with a larger -N");
            break;
    }

    if (!result.mu.has_value()) {
        report.line("mu: not computed (not certified as a Moebius space)");
        report.machine["mu"] = nullptr;
        return emit(report, json_mode);
    }
    const std::vector<std::string> labels = dspace::component_labels(*x.level(1));
    report.machine["mu"] = Json::array();
    for (std::size_t c = 0; c < labels.size(); ++c) {
        const std::string value = rational_to_string(result.mu->values[c]);
        report.line("mu[" + labels[c] + "] = " + value);
        Json row = Json::object();
        row["component"] = labels[c];
        row["value"] = value;
        report.machine["mu"].push_back(std::move(row));
    }
    return emit(report, json_mode);
}

std::string outcome_word(IdentityReport::Outcome outcome) {
    switch (outcome) {
        case IdentityReport::Outcome::Pass: return "pass";
        case IdentityReport::Outcome::Fail: return "fail";
        case IdentityReport::Outcome::PreconditionFailed: return "precondition failed";
    }
    return "unknown";
}

void identity_rows(Report& report, const std::string& identity, const IdentityReport& result) {
    std::string text = "outcome: " + outcome_word(result.outcome);
    if (!result.details.empty()) text += " -- " + result.details;
    report.line(text);
    report.machine["identity"] = identity;
    report.machine["outcome"] = outcome_word(result.outcome);
    report.machine["details"] = result.details;
    switch (result.outcome) {
        case IdentityReport::Outcome::Pass:
            break;
        case IdentityReport::Outcome::Fail:
            report.worsen(kExitFail);
            break;
        case IdentityReport::Outcome::PreconditionFailed:
            // An obstruction that more data could not remove is a failure; an
            // obstruction phrased as inconclusive asks for a larger -N.
            report.worsen(result.details.find("inconclusive") != std::string::npos
                              ? kExitInconclusive
                              : kExitFail);
            break;
    }
}

int run_verify(const std::string& input, std::optional<int> requested, std::string identity,
               bool json_mode) {
    std::replace(identity.begin(), identity.end(), '_', '-');
    const std::vector<std::string> known = {"inversion",      "coassociativity", "counit",
                                            "phi-recursion",  "phi-power",       "cocycle",
                                            "culf-hom"};
    if (std::find(known.begin(), known.end(), identity) == known.end()) {
        throw DocumentError("unknown identity '" + identity + "'");
    }
    const Document document = dspace::load_document(input);

    if (identity == "culf-hom") {
        if (document.kind != DocumentKind::Map) {
            throw DocumentError("identity 'culf-hom' needs a map document");
        }
        const MapDocument& bundle = *document.map;
        Report report;
        report.line("verify culf-hom: " + input);
        report.line("kind: map (stored truncation " +
                    std::to_string(bundle.source.truncation) + ")");
        report.line("truncation: " + std::to_string(bundle.source.truncation));
        report.machine["command"] = "verify";
        report.machine["input"] = input;
        report.machine["kind"] = "map";
        report.machine["truncation"] = bundle.source.truncation;
        identity_rows(report, identity,
                      dspace::verify_culf_hom(bundle.map, bundle.source, bundle.target));
        return emit(report, json_mode);
    }

    const TowerInput tower = resolve_tower(document, requested);
    const TruncatedSimplicialGroupoid& x = tower.space;
    Report report;
    report_header(report, "verify " + identity, input, tower);
    report.machine["command"] = "verify";

    // The coalgebra identities presuppose the decomposition property; check
    // it here so a defective space is reported as a precondition, not as a
    // spurious identity failure.
    const bool needs_decomposition = identity == "coassociativity" || identity == "counit" ||
                                     identity == "phi-recursion" || identity == "phi-power" ||
                                     identity == "cocycle";
    if (needs_decomposition) {
        const AxiomVerdict decomposition = dspace::check_decomposition(x);
        if (!decomposition.holds()) {
            const std::string prefix = decomposition.status == VerdictStatus::Inconclusive
                                           ? "decomposition inconclusive: "
                                           : "not a decomposition space: ";
            identity_rows(report, identity,
                          {IdentityReport::Outcome::PreconditionFailed,
                           prefix + decomposition.witness});
            return emit(report, json_mode);
        }
    }

    IdentityReport result;
    if (identity == "inversion") {
        result = dspace::verify_inversion(x);
    } else if (identity == "coassociativity") {
        result = dspace::verify_coassociativity(x);
    } else if (identity == "counit") {
        result = dspace::verify_counit(x);
    } else if (identity == "phi-recursion") {
        result = dspace::verify_phi_recursion(x);
    } else if (identity == "phi-power") {
        result = dspace::verify_phi_power(x);
    } else {
        result = dspace::verify_cocycle(x);
    }
    identity_rows(report, identity, result);
    return emit(report, json_mode);
}

int run_map(const std::string& input, bool classify, bool verify_hom, bool json_mode) {
    const Document document = dspace::load_document(input);
    if (document.kind != DocumentKind::Map) {
        throw DocumentError("'dspace map' needs a map document");
    }
    const MapDocument& bundle = *document.map;
    Report report;
    report.line("map: " + input);
    report.line("kind: map (stored truncation " + std::to_string(bundle.source.truncation) + ")");
    report.line("truncation: " + std::to_string(bundle.source.truncation));
    report.machine["command"] = "map";
    report.machine["input"] = input;
    report.machine["kind"] = "map";
    report.machine["truncation"] = bundle.source.truncation;

    if (!classify && !verify_hom) classify = true;
    if (classify) {
        const dspace::MapClassification classes =
            dspace::map_classify(bundle.map, bundle.source, bundle.target);
        report.machine["checks"] = Json::array();
        report.axiom_row("conservative", classes.conservative);
        report.axiom_row("ulf", classes.ulf);
        report.line(std::string("culf: ") + (classes.culf ? "yes" : "no"));
        report.machine["culf"] = classes.culf;
    }
    if (verify_hom) {
        identity_rows(report, "culf-hom",
                      dspace::verify_culf_hom(bundle.map, bundle.source, bundle.target));
    }
    return emit(report, json_mode);
}

int run_construct(const std::string& kind, const std::string& input, std::optional<int> requested,
                  const std::string& output, bool json_mode) {
    const Document document = dspace::load_document(input);
    const int fallback = requested.has_value() ? *requested : default_truncation();
    TruncatedSimplicialGroupoid space;

    if (kind == "nerve" || kind == "fat-nerve") {
        if (document.category == nullptr) {
            throw DocumentError("construct " + kind +
                                " needs a category, poset, or monoid document");
        }
        space = kind == "nerve" ? dspace::nerve(document.category, fallback)
                                : dspace::fat_nerve(document.category, fallback);
    } else if (kind == "partial-nerve") {
        if (!document.partial_monoid.has_value()) {
            throw DocumentError("construct partial-nerve needs a partial-monoid document");
        }
        space = dspace::nerve_partial(*document.partial_monoid, fallback);
    } else if (kind == "kan-extend") {
        if (!document.semi_simplicial.has_value()) {
            throw DocumentError("construct kan-extend needs a semi-simplicial document");
        }
        const dspace::SemiSimplicialGroupoid& z = *document.semi_simplicial;
        if (requested.has_value() && *requested > z.truncation) {
            throw DocumentError("cannot raise the truncation of a stored semi-simplicial "
                                "document (stored truncation is " +
                                std::to_string(z.truncation) + ")");
        }
        space = dspace::kan_extend(z).space;
        if (requested.has_value() && *requested < z.truncation) {
            space = truncate_tower(space, *requested);
        }
    } else {
        throw DocumentError("unknown construct kind '" + kind + "'");
    }

    const Json wrapped =
        dspace::wrap_document(DocumentKind::Simplicial, dspace::simplicial_to_json(space));
    const std::string text = dspace::canonical_dump(wrapped);
    if (output.empty()) {
        std::cout << text;
        return kExitPass;
    }
    dspace::write_text_file(output, text);

    Report report;
    report.line("construct " + kind + ": " + input);
    report.line("truncation: " + std::to_string(space.truncation));
    report.line("wrote simplicial document to " + output);
    report.machine["command"] = "construct";
    report.machine["construct"] = kind;
    report.machine["input"] = input;
    report.machine["truncation"] = space.truncation;
    report.machine["output"] = output;
    return emit(report, json_mode);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite decomposition spaces: axioms, coalgebras, Moebius inversion"};
    app.name("dspace");
    app.require_subcommand(1);

    bool json_mode = false;
    app.add_flag("--json", json_mode, "emit the machine-readable report");

    std::string input;
    std::string output;
    std::string axioms;
    std::string identity;
    std::string construct_kind;
    int truncation = 0;
    bool show_tensor = false;
    bool show_counit = false;
    bool classify = false;
    bool verify_hom = false;

    const auto add_truncation = [&truncation](CLI::App* cmd) {
        return cmd->add_option("-N,--truncation", truncation,
                               "truncation level (default: DSPACE_TRUNCATION or 5)")
            ->check(CLI::NonNegativeNumber);
    };
    // Let global flags such as --json appear after the subcommand too.
    const auto subcommand = [&app](const std::string& name, const std::string& description) {
        CLI::App* cmd = app.add_subcommand(name, description);
        cmd->fallthrough();
        return cmd;
    };

    CLI::App* construct = subcommand("construct", "build a simplicial document");
    construct->add_option("kind", construct_kind, "nerve | fat-nerve | partial-nerve | kan-extend")
        ->required();
    construct->add_option("-i,--input", input, "input document")->required();
    construct->add_option("-o,--output", output, "output path (default: stdout)");
    CLI::Option* construct_n = add_truncation(construct);

    CLI::App* check = subcommand("check", "decide structural axioms");
    check->add_option("file", input, "input document")->required();
    check->add_option("--axioms", axioms, "comma-separated axiom list (default: all)");
    CLI::Option* check_n = add_truncation(check);

    CLI::App* analyze = subcommand("analyze", "full structural survey");
    analyze->add_option("file", input, "input document")->required();
    CLI::Option* analyze_n = add_truncation(analyze);

    CLI::App* coalgebra = subcommand("coalgebra", "incidence coalgebra tables");
    coalgebra->add_option("file", input, "input document")->required();
    coalgebra->add_flag("--tensor", show_tensor, "print only the comultiplication table");
    coalgebra->add_flag("--counit", show_counit, "print only the counit");
    CLI::Option* coalgebra_n = add_truncation(coalgebra);

    CLI::App* mobius = subcommand("mobius", "Moebius function by component");
    mobius->add_option("file", input, "input document")->required();
    CLI::Option* mobius_n = add_truncation(mobius);

    CLI::App* verify = subcommand("verify", "algebraic identity checks");
    verify->add_option("file", input, "input document")->required();
    verify
        ->add_option("--identity", identity,
                     "inversion | coassociativity | counit | phi-recursion | phi-power | "
                     "cocycle | culf-hom")
        ->required();
    CLI::Option* verify_n = add_truncation(verify);

    CLI::App* map_cmd = subcommand("map", "classify a simplicial map");
    map_cmd->add_option("file", input, "map document")->required();
    map_cmd->add_flag("--classify", classify, "report conservative / ulf / culf verdicts");
    map_cmd->add_flag("--verify-hom", verify_hom, "verify the coalgebra homomorphism identity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInvalid;
    }

    const auto requested = [](const CLI::Option* option, int value) -> std::optional<int> {
        if (option != nullptr && option->count() > 0) return value;
        return std::nullopt;
    };

    try {
        if (app.got_subcommand(construct)) {
            return run_construct(construct_kind, input, requested(construct_n, truncation),
                                 output, json_mode);
        }
        if (app.got_subcommand(check)) {
            return run_check(input, requested(check_n, truncation), axioms, json_mode);
        }
        if (app.got_subcommand(analyze)) {
            return run_analyze(input, requested(analyze_n, truncation), json_mode);
        }
        if (app.got_subcommand(coalgebra)) {
            return run_coalgebra(input, requested(coalgebra_n, truncation), show_tensor,
                                 show_counit, json_mode);
        }
        if (app.got_subcommand(mobius)) {
            return run_mobius(input, requested(mobius_n, truncation), json_mode);
        }
        if (app.got_subcommand(verify)) {
            return run_verify(input, requested(verify_n, truncation), identity, json_mode);
        }
        if (app.got_subcommand(map_cmd)) {
            return run_map(input, classify, verify_hom, json_mode);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    std::cerr << "error: no subcommand\n";
    return kExitInvalid;
}
