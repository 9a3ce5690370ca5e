// End-to-end tests for the dspace binary.  The build injects the binary
// location as DSPACE_CLI_PATH and the fixture directory as DSPACE_DATA_DIR;
// each case spawns the tool exactly as a user would and inspects the exit
// code and the combined output.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_path() { return DSPACE_CLI_PATH; }

std::string fixture(const std::string& name) {
    return std::string(DSPACE_DATA_DIR) + "/" + name;
}

/// Runs `dspace <args>` through the shell, capturing stdout and stderr.
/// `env_prefix` may hold variable assignments such as "DSPACE_TRUNCATION=2 ".
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string command = env_prefix + "\"" + cli_path() + "\" " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    std::size_t read = 0;
    while ((read = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, read);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

using Catch::Matchers::ContainsSubstring;

}  // namespace

TEST_CASE("check decides the requested axioms", "[cli]") {
    const CliResult result =
        run_cli("check " + fixture("z2-monoid.json") + " --axioms decomposition,segal");
    CHECK(result.exit_code == 0);
    CHECK_THAT(result.output, ContainsSubstring("truncation: 5"));
    CHECK_THAT(result.output, ContainsSubstring("decomposition: holds"));
    CHECK_THAT(result.output, ContainsSubstring("segal: holds"));
}

TEST_CASE("analyze surveys the space and fails with a witness", "[cli]") {
    const CliResult result = run_cli("analyze " + fixture("z2-monoid.json") + " -N 3");
    CHECK(result.exit_code == 1);
    CHECK_THAT(result.output, ContainsSubstring("truncation: 3"));
    CHECK_THAT(result.output, ContainsSubstring("level 2: 4 objects"));
    CHECK_THAT(result.output,
               ContainsSubstring("tight: fails -- effective simplex 'x|x' at level 2 has a "
                                 "degenerate long edge"));
    CHECK_THAT(result.output, ContainsSubstring("moebius: fails -- not tight"));
}

TEST_CASE("mobius prints the classical divisor table", "[cli]") {
    const CliResult result = run_cli("mobius " + fixture("divisors-12.json"));
    CHECK(result.exit_code == 0);
    CHECK_THAT(result.output, ContainsSubstring("tight: holds -- maximal length 3"));
    CHECK_THAT(result.output, ContainsSubstring("mu[1<=1] = 1"));
    CHECK_THAT(result.output, ContainsSubstring("mu[1<=2] = -1"));
    CHECK_THAT(result.output, ContainsSubstring("mu[1<=6] = 1"));
    CHECK_THAT(result.output, ContainsSubstring("mu[1<=12] = 0"));
    CHECK_THAT(result.output, ContainsSubstring("mu[4<=12] = -1"));
}

TEST_CASE("mobius is inconclusive below the needed truncation", "[cli]") {
    const CliResult result = run_cli("mobius " + fixture("chain-10.json") + " -N 3");
    CHECK(result.exit_code == 3);
    CHECK_THAT(result.output, ContainsSubstring("tight: inconclusive"));
    CHECK_THAT(result.output, ContainsSubstring("retry with a larger -N"));
    CHECK_THAT(result.output, ContainsSubstring("mu: not computed"));
}

TEST_CASE("invalid documents exit with code 2 and a location", "[cli]") {
    SECTION("unknown document kind") {
        const std::string path = "cli_bad_kind.json";
        std::ofstream(path) << "{\"format\": 1, \"kind\": \"widget\"}\n";
        const CliResult result = run_cli("check " + path);
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("document.kind: unknown kind 'widget'"));
        std::remove(path.c_str());
    }
    SECTION("missing file") {
        const CliResult result = run_cli("check cli_no_such_file.json");
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("cannot open"));
    }
    SECTION("unknown axiom name") {
        const CliResult result =
            run_cli("check " + fixture("z2-monoid.json") + " --axioms bogus");
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("unknown axiom 'bogus'"));
    }
    SECTION("unknown flag") {
        const CliResult result = run_cli("check " + fixture("z2-monoid.json") + " --frobnicate");
        CHECK(result.exit_code == 2);
    }
    SECTION("a groupoid document does not define a space") {
        const std::string path = "cli_groupoid_doc.json";
        std::ofstream(path) << "{\"format\": 1, \"kind\": \"groupoid\", \"objects\": [\"a\"], "
                               "\"morphisms\": [{\"id\": \"id_a\", \"src\": \"a\", \"tgt\": "
                               "\"a\"}], \"identity\": {\"a\": \"id_a\"}, \"compose\": "
                               "[[\"id_a\", \"id_a\", \"id_a\"]]}\n";
        const CliResult result = run_cli("analyze " + path);
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("does not define a simplicial space"));
        std::remove(path.c_str());
    }
}

TEST_CASE("construct writes deterministic loadable bundles", "[cli]") {
    const std::string first = "cli_construct_a.json";
    const std::string second = "cli_construct_b.json";
    CHECK(run_cli("construct nerve -i " + fixture("z2-monoid.json") + " -N 3 -o " + first)
              .exit_code == 0);
    CHECK(run_cli("construct nerve -i " + fixture("z2-monoid.json") + " -N 3 -o " + second)
              .exit_code == 0);
    CHECK(read_file(first) == read_file(second));

    SECTION("stdout output matches the file output") {
        const CliResult streamed =
            run_cli("construct nerve -i " + fixture("z2-monoid.json") + " -N 3");
        CHECK(streamed.exit_code == 0);
        CHECK(streamed.output == read_file(first));
    }
    SECTION("the written bundle loads as a stored simplicial space") {
        const CliResult result = run_cli("check " + first + " --axioms complete,segal");
        CHECK(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("stored bundle at truncation 3"));
    }
    SECTION("a stored bundle cannot be rechecked deeper than it was saved") {
        const CliResult result = run_cli("check " + first + " --axioms complete -N 4");
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("cannot raise the truncation"));
    }
    SECTION("a smaller -N truncates the stored bundle") {
        const CliResult result = run_cli("check " + first + " --axioms complete -N 2");
        CHECK(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("truncated to 2"));
    }
    std::remove(first.c_str());
    std::remove(second.c_str());
}

TEST_CASE("construct covers the partial nerve and the Kan extension", "[cli]") {
    SECTION("partial nerve of the one-letter monoid") {
        const std::string path = "cli_partial_nerve.json";
        CHECK(run_cli("construct partial-nerve -i " + fixture("one-letter-partial.json") +
                      " -N 4 -o " + path)
                  .exit_code == 0);
        const CliResult decomposition = run_cli("check " + path + " --axioms decomposition");
        CHECK(decomposition.exit_code == 0);
        const CliResult segal = run_cli("check " + path + " --axioms segal");
        CHECK(segal.exit_code == 1);
        CHECK_THAT(segal.output, ContainsSubstring("segal: fails"));
        std::remove(path.c_str());
    }
    SECTION("Kan extension of the edge fixture is split") {
        const std::string path = "cli_kan.json";
        CHECK(run_cli("construct kan-extend -i " + fixture("edge-semi.json") + " -o " + path)
                  .exit_code == 0);
        const CliResult result = run_cli("check " + path + " --axioms split,complete,tight");
        CHECK(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("split: holds"));
        std::remove(path.c_str());
    }
    SECTION("fat nerve of a category document") {
        const std::string path = "cli_fat.json";
        CHECK(run_cli("construct fat-nerve -i " + fixture("two-object-aut.json") + " -N 3 -o " +
                      path)
                  .exit_code == 0);
        const CliResult result = run_cli("check " + path + " --axioms segal,complete");
        CHECK(result.exit_code == 0);
        std::remove(path.c_str());
    }
    SECTION("construct rejects a mismatched input kind") {
        const CliResult result =
            run_cli("construct partial-nerve -i " + fixture("z2-monoid.json"));
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("needs a partial-monoid document"));
    }
}

TEST_CASE("the environment variable sets the default truncation", "[cli]") {
    const CliResult result = run_cli("check " + fixture("z2-monoid.json") +
                                         " --axioms decomposition",
                                     "DSPACE_TRUNCATION=2 ");
    CHECK(result.exit_code == 0);
    CHECK_THAT(result.output, ContainsSubstring("truncation: 2"));

    const CliResult garbage = run_cli("check " + fixture("z2-monoid.json") +
                                          " --axioms decomposition",
                                      "DSPACE_TRUNCATION=soon ");
    CHECK(garbage.exit_code == 2);
    CHECK_THAT(garbage.output, ContainsSubstring("DSPACE_TRUNCATION"));
}

TEST_CASE("json reports are machine readable and byte identical", "[cli]") {
    const std::string args = "mobius " + fixture("one-letter-partial.json") + " -N 4 --json";
    const CliResult first = run_cli(args);
    const CliResult second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK_THAT(first.output, ContainsSubstring("\"exit\": 0"));
    CHECK_THAT(first.output, ContainsSubstring("\"component\": \"(x)\""));
    CHECK_THAT(first.output, ContainsSubstring("\"value\": \"-1\""));
    CHECK_THAT(first.output, ContainsSubstring("\"truncation\": 4"));
}

TEST_CASE("verify runs the identity checks end to end", "[cli]") {
    SECTION("inversion passes on the divisor poset") {
        const CliResult result =
            run_cli("verify " + fixture("divisors-12.json") + " --identity inversion");
        CHECK(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("outcome: pass -- inverted with L = 3"));
    }
    SECTION("inversion reports the obstruction on a non-tight space") {
        const CliResult result =
            run_cli("verify " + fixture("z2-monoid.json") + " --identity inversion -N 3");
        CHECK(result.exit_code == 1);
        CHECK_THAT(result.output, ContainsSubstring("precondition failed -- not a Moebius space"));
    }
    SECTION("inversion is inconclusive when tightness is undecided") {
        const CliResult result =
            run_cli("verify " + fixture("chain-10.json") + " --identity inversion -N 2");
        CHECK(result.exit_code == 3);
        CHECK_THAT(result.output, ContainsSubstring("tightness inconclusive at truncation 2"));
    }
    SECTION("the remaining identities pass on the divisor poset") {
        for (const std::string identity :
             {"coassociativity", "counit", "phi-recursion", "phi-power", "cocycle"}) {
            const CliResult result = run_cli("verify " + fixture("divisors-12.json") +
                                             " --identity " + identity + " -N 4");
            INFO("identity: " << identity);
            CHECK(result.exit_code == 0);
            CHECK_THAT(result.output, ContainsSubstring("outcome: pass"));
        }
    }
    SECTION("culf-hom runs on a map document") {
        const CliResult result =
            run_cli("verify " + fixture("interval-inclusion.json") + " --identity culf-hom");
        CHECK(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("outcome: pass"));
    }
    SECTION("culf-hom rejects a non-map document") {
        const CliResult result =
            run_cli("verify " + fixture("divisors-12.json") + " --identity culf-hom");
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("needs a map document"));
    }
    SECTION("unknown identity names are invalid input") {
        const CliResult result =
            run_cli("verify " + fixture("divisors-12.json") + " --identity osmosis");
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("unknown identity 'osmosis'"));
    }
}

TEST_CASE("map classifies simplicial maps", "[cli]") {
    SECTION("the interval inclusion is culf and a coalgebra homomorphism") {
        const CliResult result =
            run_cli("map " + fixture("interval-inclusion.json") + " --classify --verify-hom");
        CHECK(result.exit_code == 0);
        CHECK_THAT(result.output, ContainsSubstring("conservative: holds"));
        CHECK_THAT(result.output, ContainsSubstring("ulf: holds"));
        CHECK_THAT(result.output, ContainsSubstring("culf: yes"));
        CHECK_THAT(result.output, ContainsSubstring("outcome: pass"));
    }
    SECTION("the endpoint collapse is not culf") {
        const CliResult result = run_cli("map " + fixture("endpoints-map.json") + " --classify");
        CHECK(result.exit_code == 1);
        CHECK_THAT(result.output, ContainsSubstring("ulf: fails"));
        CHECK_THAT(result.output, ContainsSubstring("is not a pullback"));
        CHECK_THAT(result.output, ContainsSubstring("culf: no"));
    }
    SECTION("map requires a map document") {
        const CliResult result = run_cli("map " + fixture("divisors-12.json") + " --classify");
        CHECK(result.exit_code == 2);
        CHECK_THAT(result.output, ContainsSubstring("needs a map document"));
    }
}

TEST_CASE("coalgebra prints the counit and the section tensor", "[cli]") {
    const CliResult both = run_cli("coalgebra " + fixture("z2-monoid.json") + " -N 2");
    CHECK(both.exit_code == 0);
    CHECK_THAT(both.output, ContainsSubstring("counit[e] = 1"));
    CHECK_THAT(both.output, ContainsSubstring("counit[x] = 0"));
    CHECK_THAT(both.output, ContainsSubstring("tensor[x]: (e, x) = 1, (x, e) = 1"));

    const CliResult counit_only =
        run_cli("coalgebra " + fixture("z2-monoid.json") + " -N 2 --counit");
    CHECK(counit_only.exit_code == 0);
    CHECK_THAT(counit_only.output, !ContainsSubstring("tensor["));

    const CliResult too_shallow = run_cli("coalgebra " + fixture("z2-monoid.json") + " -N 1");
    CHECK(too_shallow.exit_code == 2);
    CHECK_THAT(too_shallow.output, ContainsSubstring("truncation at least 2"));
}

TEST_CASE("reports are byte identical across runs", "[cli]") {
    for (const std::string& args :
         {"analyze " + fixture("retraction.json") + " -N 3",
          "mobius " + fixture("boolean-3.json") + " -N 4",
          "coalgebra " + fixture("two-object-aut.json") + " -N 2 --json"}) {
        const CliResult first = run_cli(args);
        const CliResult second = run_cli(args);
        INFO("args: " << args);
        CHECK(first.output == second.output);
        CHECK(first.exit_code == second.exit_code);
    }
}

TEST_CASE("the retraction nerve is complete but not split", "[cli]") {
    const CliResult result =
        run_cli("check " + fixture("retraction.json") + " --axioms complete,split -N 3");
    CHECK(result.exit_code == 1);
    CHECK_THAT(result.output, ContainsSubstring("complete: holds"));
    CHECK_THAT(result.output, ContainsSubstring("split: fails"));
    CHECK_THAT(result.output, ContainsSubstring("s|r"));
}
