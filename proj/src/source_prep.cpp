#include "vulmatch/source_prep.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace vulmatch {

namespace {

// Blanks out comment bodies and string/char literal contents, preserving
// length and newlines so offsets and line numbers stay valid.
std::string mask_comments_and_strings(const std::string& text) {
    std::string out = text;
    enum class State { Normal, LineComment, BlockComment, String, Char } state = State::Normal;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const char next = i + 1 < text.size() ? text[i + 1] : '\0';
        switch (state) {
        case State::Normal:
            if (c == '/' && next == '/') {
                state = State::LineComment;
                out[i] = ' ';
            } else if (c == '/' && next == '*') {
                state = State::BlockComment;
                out[i] = ' ';
            } else if (c == '"') {
                state = State::String;
            } else if (c == '\'') {
                state = State::Char;
            }
            break;
        case State::LineComment:
            if (c == '\n') {
                state = State::Normal;
            } else {
                out[i] = ' ';
            }
            break;
        case State::BlockComment:
            if (c == '*' && next == '/') {
                out[i] = ' ';
                out[i + 1] = ' ';
                ++i;
                state = State::Normal;
            } else if (c != '\n') {
                out[i] = ' ';
            }
            break;
        case State::String:
        case State::Char: {
            const char quote = state == State::String ? '"' : '\'';
            if (c == '\\' && i + 1 < text.size()) {
                out[i] = ' ';
                if (text[i + 1] != '\n') {
                    out[i + 1] = ' ';
                }
                ++i;
            } else if (c == quote) {
                state = State::Normal;
            } else if (c != '\n') {
                out[i] = ' ';
            }
            break;
        }
        }
    }
    return out;
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Token {
    std::string text;
    std::size_t offset = 0;
    bool identifier = false;
};

std::vector<Token> tokenize(const std::string& masked) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < masked.size()) {
        const char c = masked[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t j = i + 1;
            while (j < masked.size() && is_ident_char(masked[j])) {
                ++j;
            }
            tokens.push_back({masked.substr(i, j - i), i, true});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < masked.size() && (is_ident_char(masked[j]) || masked[j] == '.')) {
                ++j;
            }
            tokens.push_back({masked.substr(i, j - i), i, false});
            i = j;
            continue;
        }
        tokens.push_back({std::string(1, c), i, false});
        ++i;
    }
    return tokens;
}

class SourceScan {
public:
    explicit SourceScan(const std::string& text)
        : masked_(mask_comments_and_strings(text)), tokens_(tokenize(masked_)) {
        line_starts_.push_back(0);
        for (std::size_t i = 0; i < masked_.size(); ++i) {
            if (masked_[i] == '\n') {
                line_starts_.push_back(i + 1);
            }
        }
        // Preprocessor lines (including backslash continuations) are
        // excluded from definition scanning.
        bool continued = false;
        for (std::size_t l = 0; l < line_starts_.size(); ++l) {
            const std::size_t begin = line_starts_[l];
            const std::size_t end = l + 1 < line_starts_.size() ? line_starts_[l + 1] : masked_.size();
            std::size_t p = begin;
            while (p < end && (masked_[p] == ' ' || masked_[p] == '\t')) {
                ++p;
            }
            const bool directive = continued || (p < end && masked_[p] == '#');
            if (directive) {
                preprocessor_lines_.insert(static_cast<int>(l) + 1);
            }
            std::size_t last = end;
            while (last > begin && (masked_[last - 1] == '\n' || masked_[last - 1] == '\r')) {
                --last;
            }
            continued = directive && last > begin && masked_[last - 1] == '\\';
        }
    }

    int line_of(std::size_t offset) const {
        auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
        return static_cast<int>(it - line_starts_.begin());
    }

    bool on_preprocessor_line(std::size_t offset) const {
        return preprocessor_lines_.count(line_of(offset)) > 0;
    }

    int line_count() const {
        if (masked_.empty()) {
            return 0;
        }
        return static_cast<int>(line_starts_.size()) - (masked_.back() == '\n' ? 1 : 0);
    }

    struct Definition {
        FunctionSpan span;
        std::size_t header_offset = 0;
    };

    std::vector<Definition> find_definitions(const std::string& name) const {
        std::vector<Definition> found;
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (!tokens_[i].identifier || tokens_[i].text != name) {
                continue;
            }
            if (on_preprocessor_line(tokens_[i].offset)) {
                continue;
            }
            if (i + 1 >= tokens_.size() || tokens_[i + 1].text != "(") {
                continue;
            }
            // Match the parameter list.
            std::size_t j = i + 1;
            int depth = 0;
            while (j < tokens_.size()) {
                if (tokens_[j].text == "(") {
                    ++depth;
                } else if (tokens_[j].text == ")") {
                    if (--depth == 0) {
                        break;
                    }
                }
                ++j;
            }
            if (j >= tokens_.size()) {
                continue;
            }
            // Between ')' and '{' only identifier tokens are allowed; a ';'
            // (declaration) or anything else (call inside an expression)
            // disqualifies the occurrence.
            std::size_t k = j + 1;
            while (k < tokens_.size() && tokens_[k].identifier) {
                ++k;
            }
            if (k >= tokens_.size() || tokens_[k].text != "{") {
                continue;
            }

            // Walk back over the declaration header (return type and
            // specifiers) to find where the definition begins.
            std::size_t header = i;
            while (header > 0) {
                const Token& prev = tokens_[header - 1];
                if (!(prev.identifier || prev.text == "*" || prev.text == "&")) {
                    break;
                }
                if (on_preprocessor_line(prev.offset)) {
                    break;
                }
                --header;
            }

            Definition def;
            def.span.name = name;
            def.span.start_line = line_of(tokens_[i].offset);
            def.span.signature_line = line_of(tokens_[header].offset);
            def.header_offset = tokens_[header].offset;
            found.push_back(def);
        }
        return found;
    }

private:
    std::string masked_;
    std::vector<Token> tokens_;
    std::vector<std::size_t> line_starts_;
    std::set<int> preprocessor_lines_;
};

} // namespace

std::vector<FunctionSpan> locate_function_definitions(const std::string& source_text,
                                                      const std::vector<std::string>& names) {
    const SourceScan scan(source_text);
    std::vector<FunctionSpan> spans;
    for (const std::string& name : names) {
        if (name.empty()) {
            raise(ErrorCode::NameNotFound, "empty function name");
        }
        const auto defs = scan.find_definitions(name);
        if (defs.empty()) {
            raise(ErrorCode::NameNotFound, "no definition of '" + name + "' in the file");
        }
        if (defs.size() > 1) {
            raise(ErrorCode::AmbiguousDefinition,
                  "'" + name + "' has " + std::to_string(defs.size()) + " definitions in the file");
        }
        spans.push_back(defs.front().span);
    }
    return spans;
}

TagResult insert_noinline_tags(const std::string& source_text,
                               const std::vector<FunctionSpan>& spans) {
    const SourceScan scan(source_text);
    const int lines = scan.line_count();

    struct Insertion {
        std::size_t offset;
        std::string name;
    };
    std::vector<Insertion> insertions;
    TagResult result;
    result.text = source_text;

    const std::string tag(kNoInlineTag);
    for (const FunctionSpan& span : spans) {
        if (span.start_line < 1 || span.signature_line < 1 || span.start_line > lines ||
            span.signature_line > lines) {
            raise(ErrorCode::SpanOutOfRange,
                  "span for '" + span.name + "' exceeds the text's " + std::to_string(lines) +
                      " lines");
        }
        const auto defs = scan.find_definitions(span.name);
        const auto match = std::find_if(defs.begin(), defs.end(), [&span](const auto& def) {
            return def.span.start_line == span.start_line &&
                   def.span.signature_line == span.signature_line;
        });
        if (match == defs.end()) {
            raise(ErrorCode::NameNotFound,
                  "span for '" + span.name + "' does not match a definition in the text");
        }

        // Already tagged: skip with a warning record.
        std::size_t before = match->header_offset;
        while (before > 0 && std::isspace(static_cast<unsigned char>(source_text[before - 1]))) {
            --before;
        }
        if (before >= tag.size() && source_text.compare(before - tag.size(), tag.size(), tag) == 0) {
            result.skipped.push_back(span.name);
            continue;
        }
        insertions.push_back({match->header_offset, span.name});
    }

    std::sort(insertions.begin(), insertions.end(),
              [](const Insertion& a, const Insertion& b) { return a.offset > b.offset; });
    for (const Insertion& ins : insertions) {
        result.text.insert(ins.offset, tag + " ");
    }
    return result;
}

} // namespace vulmatch
