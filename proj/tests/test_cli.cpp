#include "kit/kit.hpp"

#include "llmrisk/cli.hpp"
#include "llmrisk/codec.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace llmrisk;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string src(const std::string& rel) { return (testkit::source_dir() / rel).string(); }

}  // namespace

TEST_CASE("evaluate prints the rating table") {
    const auto r = run({"evaluate", src("fixtures/prompt_injection")});
    CHECK(r.code == 0);
    CHECK(r.out.find("6.75") != std::string::npos);
    CHECK(r.out.find("HIGH") != std::string::npos);
    CHECK(r.out.find("Network and programming skills") != std::string::npos);
    CHECK(r.out.find("Final Impact Score:       4.5") != std::string::npos);
    CHECK(r.out.find("\033[") == std::string::npos);
    CHECK(run({"evaluate", src("fixtures/prompt_injection")}).out == r.out);
}

TEST_CASE("color is opt-in and --no-color wins") {
    std::ostringstream out, err;
    CHECK(cli::run({"evaluate", src("fixtures/prompt_injection.json")}, out, err, true) == 0);
    CHECK(out.str().find("\033[31mHIGH") != std::string::npos);
    std::ostringstream plain;
    CHECK(cli::run({"--no-color", "evaluate", src("fixtures/prompt_injection.json")}, plain, err, true) == 0);
    CHECK(plain.str().find("\033[") == std::string::npos);
}

TEST_CASE("json output is one canonical document") {
    const auto r = run({"evaluate", src("fixtures/training_data_poisoning.json"), "--format", "json"});
    CHECK(r.code == 0);
    const auto j = codec::parse(r.out);
    CHECK(j["likelihood_score"] == "4.25");
    CHECK(j["final_impact_score"] == "5.5");
    CHECK(j["severity"] == "MEDIUM");
    CHECK(codec::dump(j) == r.out);

    const auto v = run({"validate", src("fixtures/prompt_injection.json"), "--format", "json"});
    CHECK(codec::parse(v.out)["ok"] == true);
}

TEST_CASE("matrix csv equals the golden bytes") {
    const auto r = run({"matrix", src("fixtures"), "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == codec::read_text_file(testkit::source_dir() / "tests/golden/example_matrix.csv"));
    CHECK(run({"matrix", src("fixtures")}).out == r.out);
}

TEST_CASE("matrix to a file, filtered, other formats") {
    const auto out_path = std::filesystem::temp_directory_path() / "llmrisk_cli_matrix.md";
    const auto r = run({"matrix", src("fixtures"), "--stakeholder", "end_user", "--format", "md", "--out",
                        out_path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const auto md = codec::read_text_file(out_path);
    CHECK(std::count(md.begin(), md.end(), '\n') == 9);
    std::filesystem::remove(out_path);

    const auto json = run({"matrix", src("fixtures"), "--format", "json"});
    CHECK_FALSE(codec::parse(json.out).contains("generated_at"));
    const auto stamped = run({"matrix", src("fixtures"), "--format", "json", "--stamp"});
    CHECK(codec::parse(stamped.out).contains("generated_at"));
    CHECK(run({"matrix", src("fixtures"), "--format", "pdf"}).code == 2);
    CHECK(run({"matrix", src("fixtures"), "--stakeholder", "auditor"}).code == 2);
}

TEST_CASE("whatif shows before and after") {
    const auto r = run({"whatif", src("fixtures/prompt_injection.json"), "--adjust",
                        src("data/adjustments/robust_prompt_filtering.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("6.75      5.75") != std::string::npos);
    CHECK(r.out.find("HIGH      MEDIUM") != std::string::npos);
    const auto j = codec::parse(run({"whatif", src("fixtures/prompt_injection.json"), "--adjust",
                                     src("data/adjustments/robust_prompt_filtering.json"), "--format", "json"})
                                    .out);
    CHECK(j["after"]["likelihood_score"] == "5.75");
    CHECK(j["overrides"]["ease_of_exploit"]["from"] == 5);
}

TEST_CASE("validate kinds and exit codes") {
    CHECK(run({"validate", src("fixtures/prompt_injection.json")}).code == 0);
    CHECK(run({"validate", src("data/adjustments/robust_prompt_filtering.json")}).code == 0);

    const auto dir = std::filesystem::temp_directory_path() / "llmrisk_cli_validate";
    std::filesystem::create_directories(dir);
    const auto scheme_path = dir / "scheme.json";
    {
        auto j = codec::to_json(rating::default_scheme());
        std::ofstream(scheme_path) << codec::dump(j);
    }
    CHECK(run({"validate", scheme_path.string()}).code == 0);
    CHECK(run({"scheme", "export", "--out", (dir / "exported.json").string()}).code == 0);
    CHECK(run({"validate", (dir / "exported.json").string()}).code == 0);
    CHECK(run({"catalog", "export", "--out", (dir / "catalog.json").string()}).code == 0);
    CHECK(run({"validate", (dir / "catalog.json").string()}).code == 0);

    auto bad = codec::to_json(rating::default_scheme());
    bad["likelihood_thresholds"] = {"6", "3"};
    std::ofstream(dir / "bad_scheme.json") << codec::dump(bad);
    const auto r = run({"validate", (dir / "bad_scheme.json").string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("thresholds not ascending") != std::string::npos);

    auto doc = codec::read_json_file(testkit::fixture("prompt_injection.json"));
    doc["impact"]["business"].erase(3);
    std::ofstream(dir / "incomplete.json") << codec::dump(doc);
    const auto inc = run({"validate", (dir / "incomplete.json").string()});
    CHECK(inc.code == 1);
    CHECK(inc.out.find("privacy_violation") != std::string::npos);
    CHECK(run({"evaluate", (dir / "incomplete.json").string()}).code == 1);

    std::ofstream(dir / "garbage.json") << "{";
    CHECK(run({"validate", (dir / "garbage.json").string()}).code == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("scheme override via flag and environment") {
    const auto dir = std::filesystem::temp_directory_path() / "llmrisk_cli_scheme";
    std::filesystem::create_directories(dir);
    auto s = rating::default_scheme();
    s.id = "business-first";
    s.impact_mode = rating::ImpactMode::BusinessOnly;
    std::ofstream(dir / "scheme.json") << codec::dump(codec::to_json(s));

    const auto flag = run({"--scheme", (dir / "scheme.json").string(), "evaluate",
                           src("fixtures/prompt_injection.json"), "--format", "json"});
    CHECK(codec::parse(flag.out)["severity"] == "CRITICAL");

    ::setenv("LLMRISK_SCHEME", (dir / "scheme.json").c_str(), 1);
    const auto env = run({"evaluate", src("fixtures/prompt_injection.json"), "--format", "json"});
    ::unsetenv("LLMRISK_SCHEME");
    CHECK(codec::parse(env.out)["scheme"] == "business-first");
    std::filesystem::remove_all(dir);
}

TEST_CASE("catalog list") {
    const auto all = run({"catalog", "list"});
    CHECK(all.code == 0);
    CHECK(all.out.find("10 threat(s)") != std::string::npos);
    CHECK(run({"catalog", "list", "--stakeholder", "end_user"}).out.find("7 threat(s)") != std::string::npos);
    CHECK(run({"catalog", "list", "--traditional", "true"}).out.find("3 threat(s)") != std::string::npos);
    const auto j = codec::parse(run({"catalog", "list", "--stakeholder", "fine_tuning_developer", "--format", "json"}).out);
    CHECK(j["entries"].size() == 9);
}

TEST_CASE("usage and io errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"evaluate"}).code == 2);
    CHECK(run({"evaluate", src("fixtures/prompt_injection.json"), "--bogus"}).code == 2);
    CHECK(run({"evaluate", src("fixtures/prompt_injection.json"), "--format", "yaml"}).code == 2);
    CHECK(run({"catalog", "list", "--traditional", "maybe"}).code == 2);
    const auto missing = run({"evaluate", "missing_file"});
    CHECK(missing.code == 3);
    CHECK(missing.err.find("missing_file") != std::string::npos);
    CHECK(run({"matrix", "/nonexistent/dir"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}
