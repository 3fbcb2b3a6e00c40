// Prompt templates and response parsing. Templates are plain text files with
// {name} placeholders; rendering is exact textual substitution and nothing
// else. Responses carry their payload in named tag pairs; the last complete
// pair wins, mirroring solution extraction.

#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "passk/errors.hpp"

namespace passk {

enum class PromptKind { coding_variant, ctf_variant, coding_solve };

inline const char* to_string(PromptKind k) {
    switch (k) {
        case PromptKind::coding_variant: return "coding_variant";
        case PromptKind::ctf_variant: return "ctf_variant";
        default: return "coding_solve";
    }
}

struct PromptTemplate {
    PromptKind kind = PromptKind::coding_solve;
    std::string body;
};

inline PromptTemplate load_template(const std::filesystem::path& path, PromptKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read prompt template " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return {kind, buf.str()};
}

// Loads the three standard templates from a directory containing
// coding_variant.txt, ctf_variant.txt and coding_solve.txt.
struct PromptSet {
    PromptTemplate coding_variant;
    PromptTemplate ctf_variant;
    PromptTemplate coding_solve;
};

inline PromptSet load_prompt_set(const std::filesystem::path& dir) {
    return {load_template(dir / "coding_variant.txt", PromptKind::coding_variant),
            load_template(dir / "ctf_variant.txt", PromptKind::ctf_variant),
            load_template(dir / "coding_solve.txt", PromptKind::coding_solve)};
}

using Bindings = std::map<std::string, std::string>;

// Substitutes every {identifier} occurrence from the bindings. An unbound
// placeholder is an error naming the placeholder; braces not forming an
// identifier placeholder pass through untouched.
inline std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings) {
    std::string out;
    out.reserve(tmpl.body.size());
    const std::string& body = tmpl.body;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] == '{') {
            std::size_t j = i + 1;
            while (j < body.size() &&
                   (std::isalnum(static_cast<unsigned char>(body[j])) || body[j] == '_')) {
                ++j;
            }
            if (j > i + 1 && j < body.size() && body[j] == '}') {
                std::string name = body.substr(i + 1, j - i - 1);
                auto it = bindings.find(name);
                if (it == bindings.end()) {
                    throw render_error("unbound prompt placeholder {" + name + "}");
                }
                out += it->second;
                i = j + 1;
                continue;
            }
        }
        out += body[i++];
    }
    return out;
}

// The hint sentence inserted into the solve prompt; an empty hint yields an
// empty block so the prompt simply omits it.
inline std::string hint_binding(std::string_view hint_content) {
    if (hint_content.empty()) return {};
    return "As a hint, a description of a possible solution is provided: " +
           std::string(hint_content);
}

struct ParsedVariant {
    std::string title;
    std::string statement;
    std::string architecture;  // empty when the response carries none
};

namespace detail {

inline std::string_view trim_ws(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Content of the last complete <tag>...</tag> pair, or nullopt.
inline std::optional<std::string> last_tag_content(std::string_view raw,
                                                   std::string_view tag) {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";
    std::size_t search_end = raw.size();
    while (search_end > 0) {
        auto open_pos = raw.rfind(open, search_end - 1);
        if (open_pos == std::string_view::npos) return std::nullopt;
        auto close_pos = raw.find(close, open_pos + open.size());
        if (close_pos != std::string_view::npos) {
            return std::string(
                trim_ws(raw.substr(open_pos + open.size(), close_pos - open_pos - open.size())));
        }
        search_end = open_pos;
    }
    return std::nullopt;
}

}  // namespace detail

// A variant response must supply a title and a challenge body; an
// architecture description is optional (used by the CTF protocol to build
// the banned design-pattern list).
inline std::optional<ParsedVariant> parse_variant_response(std::string_view raw) {
    auto title = detail::last_tag_content(raw, "title");
    auto statement = detail::last_tag_content(raw, "challenge");
    if (!title || title->empty() || !statement || statement->empty()) return std::nullopt;
    ParsedVariant v;
    v.title = *title;
    v.statement = *statement;
    if (auto arch = detail::last_tag_content(raw, "architecture")) v.architecture = *arch;
    return v;
}

}  // namespace passk
