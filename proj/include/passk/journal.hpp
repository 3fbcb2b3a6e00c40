// Append-only JSONL journal of per-candidate results. A reorder buffer
// releases records in plan order regardless of worker completion order, so a
// journal written with any worker count is byte-identical and any prefix of a
// run is a valid resume point. A torn final line (crash mid-append) is
// discarded on reopen.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "passk/backend.hpp"
#include "passk/errors.hpp"
#include "passk/judge.hpp"
#include "passk/rng.hpp"

namespace passk {

struct ResultRecord {
    std::string experiment;  // experiment identifier chosen by the pipeline
    JobKey key;              // challenge id, task kind, candidate index
    Outcome outcome = Outcome::fail;
    int cases_run = 0;
    int cases_passed = 0;
    double wall_time = 0.0;  // seconds; 0 unless timing capture is enabled
    std::string backend;     // backend label, e.g. "simulated" or "http"
    std::string job_seed;    // hex of the job's derived seed
};

inline std::string seed_hex(std::uint64_t seed) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[seed & 0xF];
        seed >>= 4;
    }
    return out;
}

inline std::string record_to_line(const ResultRecord& record) {
    nlohmann::json j{
        {"experiment", record.experiment},
        {"challenge", record.key.challenge_id},
        {"task", record.key.task},
        {"candidate", record.key.candidate_index},
        {"outcome", to_string(record.outcome)},
        {"cases_run", record.cases_run},
        {"cases_passed", record.cases_passed},
        {"wall_time", record.wall_time},
        {"backend", record.backend},
        {"job_seed", record.job_seed},
    };
    return j.dump();
}

inline ResultRecord record_from_line(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw config_error("journal line is not a JSON object: " + line);
    }
    try {
        ResultRecord r;
        r.experiment = j.at("experiment").get<std::string>();
        r.key.challenge_id = j.at("challenge").get<std::string>();
        r.key.task = j.at("task").get<std::string>();
        r.key.candidate_index = j.at("candidate").get<int>();
        r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
        r.cases_run = j.at("cases_run").get<int>();
        r.cases_passed = j.at("cases_passed").get<int>();
        r.wall_time = j.at("wall_time").get<double>();
        r.backend = j.at("backend").get<std::string>();
        r.job_seed = j.at("job_seed").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("journal line missing field: ") + e.what());
    }
}

// Reads all complete records. Bytes after the last newline are a torn tail
// from an interrupted append and are ignored; malformed complete lines throw.
inline std::vector<ResultRecord> read_journal(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open journal " + path.string());
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    std::vector<ResultRecord> records;
    std::size_t start = 0;
    while (true) {
        std::size_t end = contents.find('\n', start);
        if (end == std::string::npos) break;  // no newline: torn tail (or EOF)
        if (end > start) records.push_back(record_from_line(contents.substr(start, end - start)));
        start = end + 1;
    }
    return records;
}

class JournalWriter {
  public:
    // Opens for append. If the file exists, complete records are counted and
    // a torn trailing line is truncated away; writing resumes after them.
    explicit JournalWriter(const std::filesystem::path& path) : path_(path) {
        if (std::filesystem::exists(path)) {
            std::ifstream in(path, std::ios::binary);
            std::string contents((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
            in.close();
            std::size_t keep = contents.rfind('\n');
            keep = keep == std::string::npos ? 0 : keep + 1;
            if (keep != contents.size()) std::filesystem::resize_file(path, keep);
            for (std::size_t i = 0; i < keep; ++i) {
                if (contents[i] == '\n') ++next_index_;
            }
        }
        out_.open(path, std::ios::binary | std::ios::app);
        if (!out_) throw infrastructure_error("cannot open journal for append: " + path.string());
        existing_ = next_index_;
    }

    // Number of records already present when the journal was opened.
    std::size_t existing_records() const { return existing_; }

    // Hands over the record for plan position `index`. Records are written
    // strictly in index order; out-of-order submissions are buffered.
    void submit(std::size_t index, const ResultRecord& record) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (index < next_index_) {
            throw protocol_error("journal position " + std::to_string(index) +
                                 " already written");
        }
        pending_.emplace(index, record);
        while (!pending_.empty() && pending_.begin()->first == next_index_) {
            out_ << record_to_line(pending_.begin()->second) << '\n';
            out_.flush();
            pending_.erase(pending_.begin());
            ++next_index_;
        }
        if (!out_) throw infrastructure_error("journal write failed: " + path_.string());
    }

    // True once every position below `total` has been written out.
    bool complete_through(std::size_t total) {
        std::lock_guard<std::mutex> lock(mutex_);
        return next_index_ >= total && pending_.empty();
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::mutex mutex_;
    std::map<std::size_t, ResultRecord> pending_;
    std::size_t next_index_ = 0;
    std::size_t existing_ = 0;
};

}  // namespace passk
