// Candidate-solution extraction from raw model output. The program is taken
// from the last well-formed <solution>...</solution> pair, with surrounding
// markdown code fences stripped.

#pragma once

#include <string>
#include <string_view>

namespace passk {

struct CandidateSolution {
    std::string task_ref;
    std::string raw_output;
    std::string program;
    bool extraction_ok = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' ||
                          s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' ||
                          s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Strips one leading fence line (``` or ```lang) and one trailing ``` line,
// if both are present.
inline std::string_view strip_code_fence(std::string_view s) {
    s = trim(s);
    if (s.substr(0, 3) != "```") return s;
    auto first_newline = s.find('\n');
    if (first_newline == std::string_view::npos) return s;
    auto closing = s.rfind("```");
    if (closing == 0 || closing < first_newline) return s;
    std::string_view inner = s.substr(first_newline + 1, closing - first_newline - 1);
    return trim(inner);
}

}  // namespace detail

inline CandidateSolution extract_solution(std::string_view raw_output,
                                          std::string task_ref = {}) {
    static constexpr std::string_view open_tag = "<solution>";
    static constexpr std::string_view close_tag = "</solution>";

    CandidateSolution result;
    result.task_ref = std::move(task_ref);
    result.raw_output = std::string(raw_output);

    // Last well-formed pair: walk open tags from the end and take the first
    // one that still has a close tag after it (a stray trailing close tag or
    // an unclosed final open tag is ignored).
    std::size_t open_pos = std::string_view::npos, close_pos = std::string_view::npos;
    std::size_t search_end = raw_output.size();
    while (search_end > 0) {
        auto candidate = raw_output.rfind(open_tag, search_end - 1);
        if (candidate == std::string_view::npos) break;
        auto close = raw_output.find(close_tag, candidate + open_tag.size());
        if (close != std::string_view::npos) {
            open_pos = candidate;
            close_pos = close;
            break;
        }
        search_end = candidate;
    }
    if (open_pos == std::string_view::npos) return result;

    std::string_view inner =
        raw_output.substr(open_pos + open_tag.size(), close_pos - open_pos - open_tag.size());
    inner = detail::strip_code_fence(inner);
    if (inner.empty()) return result;

    result.program = std::string(inner);
    result.extraction_ok = true;
    return result;
}

}  // namespace passk
