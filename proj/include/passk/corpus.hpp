// Challenge corpus: the on-disk JSON schema (one file per challenge), typed
// difficulty levels, and filtered, deterministically ordered loading.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "passk/errors.hpp"

namespace passk {

enum class Difficulty { introductory, interview, competition, unknown };

inline const char* to_string(Difficulty d) {
    switch (d) {
        case Difficulty::introductory: return "introductory";
        case Difficulty::interview: return "interview";
        case Difficulty::competition: return "competition";
        default: return "unknown";
    }
}

inline Difficulty difficulty_from_string(const std::string& s) {
    if (s == "introductory") return Difficulty::introductory;
    if (s == "interview") return Difficulty::interview;
    if (s == "competition") return Difficulty::competition;
    return Difficulty::unknown;
}

struct TestCase {
    std::string input;
    std::string expected_output;
};

struct TestSuite {
    std::vector<TestCase> cases;
};

enum class ChallengeSource { public_corpus, generated_variant };

struct Challenge {
    std::string id;
    std::string title;
    std::string statement;
    Difficulty difficulty = Difficulty::unknown;
    TestSuite test_suite;
    ChallengeSource source = ChallengeSource::public_corpus;
};

struct CorpusFilter {
    std::optional<Difficulty> difficulty;
    std::optional<int> min_test_cases;

    bool admits(const Challenge& c) const {
        if (difficulty && c.difficulty != *difficulty) return false;
        if (min_test_cases &&
            static_cast<int>(c.test_suite.cases.size()) < *min_test_cases) {
            return false;
        }
        return true;
    }
};

inline Challenge parse_challenge_json(const nlohmann::json& j) {
    Challenge c;
    c.id = j.at("id").get<std::string>();
    c.title = j.value("title", std::string{});
    c.statement = j.at("statement").get<std::string>();
    c.difficulty = difficulty_from_string(j.value("difficulty", std::string{"unknown"}));
    for (const auto& t : j.value("tests", nlohmann::json::array())) {
        c.test_suite.cases.push_back(
            {t.at("input").get<std::string>(), t.at("output").get<std::string>()});
    }
    if (c.id.empty()) throw config_error("challenge id must be non-empty");
    if (c.statement.empty()) throw config_error("challenge statement must be non-empty");
    return c;
}

// Loads every *.json file under `path` (non-recursive), applies the filter,
// and returns the survivors sorted by id. Malformed files are reported
// together, each with its path; an empty result is not an error.
inline std::vector<Challenge> load_corpus(const std::filesystem::path& path,
                                          const CorpusFilter& filter = {}) {
    if (!std::filesystem::is_directory(path)) {
        throw config_error("corpus path is not a directory: " + path.string());
    }
    std::vector<Challenge> out;
    std::vector<std::string> problems;
    std::set<std::string> ids;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        try {
            std::ifstream in(file);
            if (!in) throw config_error("unreadable file");
            Challenge c = parse_challenge_json(nlohmann::json::parse(in));
            if (!ids.insert(c.id).second) {
                throw config_error("duplicate challenge id '" + c.id + "'");
            }
            if (filter.admits(c)) out.push_back(std::move(c));
        } catch (const std::exception& e) {
            problems.push_back(file.string() + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string msg = "corpus contains malformed challenge files:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw config_error(msg);
    }
    std::sort(out.begin(), out.end(),
              [](const Challenge& a, const Challenge& b) { return a.id < b.id; });
    return out;
}

}  // namespace passk
