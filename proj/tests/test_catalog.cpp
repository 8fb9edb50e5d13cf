#include "kit/kit.hpp"

#include "llmrisk/catalog.hpp"
#include "llmrisk/codec.hpp"
#include "llmrisk/error.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace llmrisk;
using namespace llmrisk::catalog;

namespace {

std::vector<std::string> names(const std::vector<ThreatEntry>& entries) {
    std::vector<std::string> out;
    for (const auto& e : entries) out.push_back(e.name);
    return out;
}

std::filesystem::path scratch_file(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "llmrisk_catalog_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("bundled catalog shape") {
    const Catalog& c = bundled_catalog();
    REQUIRE(c.entries.size() == 10);
    CHECK(c.entries.front().id == "LLM01");
    CHECK(c.entries.front().name == "Prompt Injection");
    for (std::size_t i = 0; i < c.entries.size(); ++i) {
        const std::string expected = (i + 1 < 10 ? "LLM0" : "LLM") + std::to_string(i + 1);
        CHECK(c.entries[i].id == expected);
        CHECK_FALSE(c.entries[i].stakeholders.empty());
        CHECK_FALSE(c.entries[i].causes.empty());
    }
    CHECK(c.find("LLM02")->name == "Insecure Output Handling");
    CHECK(c.find("LLM07")->name == "Insecure Plugin Design");
    CHECK(c.find("Sensitive Information Disclosure")->dynamic_controls.empty());
    CHECK(c.find("LLM42") == nullptr);
    CHECK_NOTHROW(check_catalog(c));
}

TEST_CASE("overreliance concerns end users only") {
    const auto* e = bundled_catalog().find("Overreliance");
    REQUIRE(e != nullptr);
    CHECK(e->stakeholders == std::vector<StakeholderGroup>{StakeholderGroup::EndUser});
}

TEST_CASE("stakeholder filters") {
    const Catalog& c = bundled_catalog();
    const auto end_users = names(filter_by_stakeholder(c, StakeholderGroup::EndUser));
    CHECK(std::set<std::string>(end_users.begin(), end_users.end()) ==
          std::set<std::string>{"Prompt Injection", "Training Data Poisoning", "Model Denial of Service",
                                "Sensitive Information Disclosure", "Insecure Output Handling", "Excessive Agency",
                                "Overreliance"});

    const auto tuning = names(filter_by_stakeholder(c, StakeholderGroup::FineTuningDeveloper));
    CHECK(tuning.size() == 9);
    CHECK(std::find(tuning.begin(), tuning.end(), "Overreliance") == tuning.end());

    const auto api = names(filter_by_stakeholder(c, StakeholderGroup::ApiIntegrationDeveloper));
    CHECK(api.size() == 7);
    for (const char* excluded : {"Training Data Poisoning", "Overreliance", "Model Theft"}) {
        CHECK(std::find(api.begin(), api.end(), excluded) == api.end());
    }
}

TEST_CASE("filters keep catalog order and cover the catalog") {
    const Catalog& c = bundled_catalog();
    std::set<std::string> covered;
    for (auto g : {StakeholderGroup::FineTuningDeveloper, StakeholderGroup::ApiIntegrationDeveloper,
                   StakeholderGroup::EndUser}) {
        const auto subset = filter_by_stakeholder(c, g);
        for (std::size_t i = 1; i < subset.size(); ++i) CHECK(subset[i - 1].id < subset[i].id);
        for (const auto& e : subset) covered.insert(e.id);
    }
    CHECK(covered.size() == c.entries.size());
}

TEST_CASE("traditional partition") {
    const Catalog& c = bundled_catalog();
    const auto yes = filter_traditional(c, true);
    const auto no = filter_traditional(c, false);
    const auto yes_names = names(yes);
    CHECK(std::set<std::string>(yes_names.begin(), yes_names.end()) ==
          std::set<std::string>{"Insecure Plugin Design", "Model Denial of Service", "Supply Chain Vulnerabilities"});
    CHECK(no.size() == 7);
    std::set<std::string> all;
    for (const auto& e : yes) all.insert(e.id);
    for (const auto& e : no) CHECK(all.insert(e.id).second);
    CHECK(all.size() == 10);
    CHECK(filter_traditional(Catalog{}, true).empty());
}

TEST_CASE("stakeholder names") {
    CHECK(parse_stakeholder("end_user") == StakeholderGroup::EndUser);
    CHECK(parse_stakeholder(to_string(StakeholderGroup::ApiIntegrationDeveloper)) ==
          StakeholderGroup::ApiIntegrationDeveloper);
    CHECK(display_name(StakeholderGroup::FineTuningDeveloper) == "LLM Fine-tuning Developers");
    CHECK_THROWS_AS(parse_stakeholder("auditor"), Error);
}

TEST_CASE("file round trip") {
    const auto path = scratch_file("roundtrip.json", codec::dump(codec::to_json(bundled_catalog())));
    Catalog loaded = load_catalog(path);
    CHECK(loaded.entries == bundled_catalog().entries);
    CHECK(loaded.version == bundled_catalog().version);
    CHECK(codec::dump(codec::to_json(loaded)).size() > 0);
    CHECK(codec::catalog_from_json(codec::to_json(loaded)).entries == loaded.entries);
}

TEST_CASE("bad catalog files") {
    auto expect = [](const std::filesystem::path& p, ErrorCode code, const std::string& fragment) {
        try {
            (void)load_catalog(p);
            FAIL("expected failure for " << p);
        } catch (const Error& e) {
            CHECK(e.code() == code);
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    expect(scratch_file("empty.json", ""), ErrorCode::Parse, "no entries");
    expect(scratch_file("blank.json", "  \n"), ErrorCode::Parse, "no entries");
    expect(scratch_file("broken.json", "{\"kind\": \"catalog\","), ErrorCode::Parse, "");

    codec::Json j = codec::to_json(bundled_catalog());
    j["entries"][1]["id"] = "LLM01";
    expect(scratch_file("dup.json", codec::dump(j)), ErrorCode::Validation, "LLM01");

    j = codec::to_json(bundled_catalog());
    j["entries"][3]["stakeholders"] = codec::Json::array();
    expect(scratch_file("nostake.json", codec::dump(j)), ErrorCode::Validation, "LLM04");

    j = codec::to_json(bundled_catalog());
    j["entries"][0]["id"] = "PI-1";
    expect(scratch_file("badid.json", codec::dump(j)), ErrorCode::Validation, "PI-1");

    j = codec::to_json(bundled_catalog());
    j["entries"] = codec::Json::array();
    expect(scratch_file("noentries.json", codec::dump(j)), ErrorCode::Parse, "no entries");

    CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.json"), Error);
}
