#include "allotax/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "allotax/detail/label_order.hpp"

namespace allotax {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct RawEntry {
    std::string label;
    double value;
    std::size_t record;
};

IngestResult validate(std::vector<RawEntry> raw, SourceKind kind, std::string name) {
    IngestResult result;
    result.list.name = std::move(name);
    result.list.source_kind = kind;

    for (const auto& e : raw) {
        if (!std::isfinite(e.value)) {
            throw ValueError("non-finite value for \"" + e.label + "\" (record " +
                                 std::to_string(e.record) + ")",
                             e.label);
        }
        if (kind == SourceKind::counts && e.value < 0) {
            throw ValueError("negative count for \"" + e.label + "\" (record " +
                                 std::to_string(e.record) + ")",
                             e.label);
        }
        if (kind == SourceKind::ranks && e.value < 1) {
            throw ValueError("rank below 1 for \"" + e.label + "\" (record " +
                                 std::to_string(e.record) + ")",
                             e.label);
        }
    }

    const auto order = detail::order_by_label(
        raw.size(), [&](std::size_t i) -> std::string_view { return raw[i].label; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (raw[order[i]].label == raw[order[i - 1]].label) {
            throw DuplicateLabelError(raw[order[i]].label);
        }
    }

    result.list.entries.reserve(raw.size());
    for (auto& e : raw) {
        if (kind == SourceKind::counts && e.value == 0) {
            result.dropped.push_back(std::move(e.label));
            continue;
        }
        result.list.entries.push_back(Entry{std::move(e.label), e.value});
    }
    if (result.list.entries.empty()) {
        throw EmptyInputError("no entries with a positive count in \"" + result.list.name + "\"");
    }
    return result;
}

// ---------------------------------------------------------------------------
// JSON

enum class ValueField { none, counts, rank, probs };

class RankedListSax {
public:
    using json = nlohmann::json;
    using number_integer_t = json::number_integer_t;
    using number_unsigned_t = json::number_unsigned_t;
    using number_float_t = json::number_float_t;
    using string_t = json::string_t;
    using binary_t = json::binary_t;

    std::vector<RawEntry> entries;
    std::optional<SourceKind> kind;

    bool null() { return scalar_value(std::nullopt, "null"); }
    bool boolean(bool) { return scalar_value(std::nullopt, "boolean"); }
    bool number_integer(number_integer_t v) { return scalar_value(static_cast<double>(v), "number"); }
    bool number_unsigned(number_unsigned_t v) { return scalar_value(static_cast<double>(v), "number"); }
    bool number_float(number_float_t v, const string_t&) { return scalar_value(v, "number"); }

    bool string(string_t& s) {
        if (depth_ == 2 && key_ == "types") {
            label_ = std::move(s);
            have_label_ = true;
            return true;
        }
        return scalar_value(std::nullopt, "string");
    }

    bool binary(binary_t&) { return fail("unexpected binary value"); }

    bool start_object(std::size_t) {
        if (depth_ != 1) return fail("expected an array of objects");
        ++depth_;
        ++record_;
        have_label_ = false;
        counts_.reset();
        rank_.reset();
        probs_.reset();
        return true;
    }

    bool key(string_t& k) {
        key_ = std::move(k);
        return true;
    }

    bool end_object() {
        --depth_;
        if (!have_label_) return fail("missing \"types\" field");
        double value = 0;
        SourceKind this_kind = SourceKind::counts;
        if (counts_) {
            value = *counts_;
        } else if (rank_) {
            value = *rank_;
            this_kind = SourceKind::ranks;
        } else if (probs_) {
            value = *probs_;
        } else {
            return fail("missing \"counts\" (or \"rank\") field for \"" + label_ + "\"");
        }
        if (kind && *kind != this_kind) {
            return fail("mixes \"counts\" and \"rank\" records");
        }
        kind = this_kind;
        entries.push_back(RawEntry{std::move(label_), value, record_});
        return true;
    }

    bool start_array(std::size_t) {
        if (depth_ != 0) return fail("nested arrays are not allowed");
        ++depth_;
        return true;
    }

    bool end_array() {
        --depth_;
        return true;
    }

    bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
        message_ = "malformed JSON at byte " + std::to_string(position) + ": " + ex.what();
        return false;
    }

    [[noreturn]] void raise() const {
        throw ParseError(message_.empty() ? std::string("malformed JSON") : message_, record_);
    }

private:
    bool scalar_value(std::optional<double> v, const char* what) {
        if (depth_ != 2) {
            return fail(std::string("unexpected ") + what + " outside a record object");
        }
        if (key_ == "types") return fail("\"types\" must be a string");
        if (key_ == "counts" || key_ == "rank" || key_ == "probs") {
            if (!v) return fail("\"" + key_ + "\" must be a number");
            if (key_ == "counts") counts_ = v;
            else if (key_ == "rank") rank_ = v;
            else probs_ = v;
        }
        // Unknown keys with scalar values are ignored.
        return true;
    }

    bool fail(std::string message) {
        message_ = "record " + std::to_string(record_) + ": " + std::move(message);
        return false;
    }

    int depth_ = 0;
    std::size_t record_ = 0;
    std::string key_;
    std::string label_;
    bool have_label_ = false;
    std::optional<double> counts_, rank_, probs_;
    std::string message_;
};

IngestResult parse_json(std::string_view bytes, std::string name) {
    RankedListSax sax;
    const bool ok = nlohmann::json::sax_parse(bytes.begin(), bytes.end(), &sax);
    if (!ok) sax.raise();
    return validate(std::move(sax.entries), sax.kind.value_or(SourceKind::counts), std::move(name));
}

// ---------------------------------------------------------------------------
// CSV / TSV

class DelimitedReader {
public:
    DelimitedReader(std::string_view text, char delim) : text_(text), delim_(delim) {
        if (text_.substr(0, 3) == "\xEF\xBB\xBF") text_.remove_prefix(3);
    }

    std::size_t line() const noexcept { return line_; }
    bool done() const noexcept { return pos_ >= text_.size(); }

    // Reads one record into `fields`; returns false at end of input.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        if (done()) return false;
        ++line_;
        record_line_ = line_;
        std::string field;
        for (;;) {
            field.clear();
            if (pos_ < text_.size() && text_[pos_] == '"') {
                ++pos_;
                for (;;) {
                    if (pos_ >= text_.size()) {
                        throw ParseError("unterminated quoted field", record_line_);
                    }
                    const char c = text_[pos_++];
                    if (c == '"') {
                        if (pos_ < text_.size() && text_[pos_] == '"') {
                            field.push_back('"');
                            ++pos_;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n') ++line_;
                        field.push_back(c);
                    }
                }
                if (pos_ < text_.size() && text_[pos_] != delim_ && text_[pos_] != '\n' &&
                    text_[pos_] != '\r') {
                    throw ParseError("unexpected character after closing quote", record_line_);
                }
            } else {
                const std::size_t start = pos_;
                while (pos_ < text_.size() && text_[pos_] != delim_ && text_[pos_] != '\n' &&
                       text_[pos_] != '\r') {
                    if (text_[pos_] == '"') {
                        throw ParseError("quote inside unquoted field", record_line_);
                    }
                    ++pos_;
                }
                field.assign(text_.substr(start, pos_ - start));
            }
            fields.push_back(field);
            if (pos_ >= text_.size()) return true;
            const char c = text_[pos_];
            if (c == delim_) {
                ++pos_;
                continue;
            }
            if (c == '\r') ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
            return true;
        }
    }

    std::size_t record_line() const noexcept { return record_line_; }

private:
    std::string_view text_;
    char delim_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

IngestResult parse_delimited(std::string_view bytes, char delim, std::string name) {
    DelimitedReader reader(bytes, delim);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw EmptyInputError("empty input \"" + name + "\"");

    SourceKind kind = SourceKind::counts;
    const bool header_ok = fields.size() == 2 && fields[0] == "types" &&
                           (fields[1] == "counts" || fields[1] == "rank");
    if (!header_ok) {
        const std::string d(1, delim == '\t' ? '\t' : ',');
        throw ParseError("header must be \"types" + d + "counts\" (or \"types" + d + "rank\")", 1);
    }
    if (fields[1] == "rank") kind = SourceKind::ranks;

    std::vector<RawEntry> raw;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != 2) {
            throw ParseError("expected 2 fields, found " + std::to_string(fields.size()),
                             reader.record_line());
        }
        const std::string& text = fields[1];
        double value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
            throw ParseError("invalid number \"" + text + "\" for \"" + fields[0] + "\"",
                             reader.record_line());
        }
        raw.push_back(RawEntry{std::move(fields[0]), value, reader.record_line()});
    }
    return validate(std::move(raw), kind, std::move(name));
}

bool needs_quoting(std::string_view s, char delim) {
    return s.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string_view::npos;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

Format detect_format(std::string_view filename) {
    const auto dot = filename.rfind('.');
    const auto slash = filename.find_last_of("/\\");
    if (dot != std::string_view::npos && (slash == std::string_view::npos || dot > slash)) {
        const std::string ext = lowercase(filename.substr(dot + 1));
        if (ext == "json") return Format::json;
        if (ext == "csv") return Format::csv;
        if (ext == "tsv") return Format::tsv;
    }
    throw UnsupportedFormatError("unsupported file type \"" + std::string(filename) +
                                 "\"; supported extensions: .json, .csv, .tsv");
}

std::string_view format_name(Format f) {
    switch (f) {
        case Format::json: return "json";
        case Format::csv: return "csv";
        case Format::tsv: return "tsv";
    }
    return "json";
}

IngestResult parse_ranked_list(std::string_view bytes, Format format, std::string name) {
    switch (format) {
        case Format::json: return parse_json(bytes, std::move(name));
        case Format::csv: return parse_delimited(bytes, ',', std::move(name));
        case Format::tsv: return parse_delimited(bytes, '\t', std::move(name));
    }
    throw UnsupportedFormatError("unknown format");
}

IngestResult parse_ranked_list(const nlohmann::json& array, std::string name) {
    if (!array.is_array()) throw ParseError("expected an array of objects", 0);
    std::vector<RawEntry> raw;
    raw.reserve(array.size());
    std::optional<SourceKind> kind;
    std::size_t record = 0;
    for (const auto& item : array) {
        ++record;
        const auto fail = [&](const std::string& msg) {
            throw ParseError("record " + std::to_string(record) + ": " + msg, record);
        };
        if (!item.is_object()) fail("expected an object");
        const auto types = item.find("types");
        if (types == item.end() || !types->is_string()) fail("missing string \"types\" field");
        SourceKind this_kind = SourceKind::counts;
        const nlohmann::json* value = nullptr;
        if (auto it = item.find("counts"); it != item.end()) {
            value = &*it;
        } else if (auto it = item.find("rank"); it != item.end()) {
            value = &*it;
            this_kind = SourceKind::ranks;
        } else if (auto it = item.find("probs"); it != item.end()) {
            value = &*it;
        }
        if (value == nullptr) fail("missing \"counts\" (or \"rank\") field");
        if (!value->is_number()) fail("count must be a number");
        if (kind && *kind != this_kind) fail("mixes \"counts\" and \"rank\" records");
        kind = this_kind;
        raw.push_back(RawEntry{types->get<std::string>(), value->get<double>(), record});
    }
    return validate(std::move(raw), kind.value_or(SourceKind::counts), std::move(name));
}

IngestResult read_ranked_list(const std::filesystem::path& path, std::string name,
                              std::uint64_t max_bytes) {
    const Format format = detect_format(path.string());
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw Error("cannot read \"" + path.string() + "\": " + ec.message());
    if (size > max_bytes) {
        throw SizeLimitError("\"" + path.string() + "\" is " + std::to_string(size) +
                             " bytes, over the limit of " + std::to_string(max_bytes));
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open \"" + path.string() + "\"");
    std::string bytes(size, '\0');
    in.read(bytes.data(), static_cast<std::streamsize>(size));
    if (in.gcount() != static_cast<std::streamsize>(size)) {
        throw Error("short read on \"" + path.string() + "\"");
    }
    return parse_ranked_list(bytes, format, std::move(name));
}

std::string serialize_ranked_list(const RankedList& list, Format format) {
    const char* value_key = list.source_kind == SourceKind::ranks ? "rank" : "counts";
    if (format == Format::json) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& e : list.entries) {
            out.push_back({{"types", e.label}, {value_key, e.value}});
        }
        return out.dump();
    }
    const char delim = format == Format::tsv ? '\t' : ',';
    std::string out = std::string("types") + delim + value_key + "\n";
    for (const auto& e : list.entries) {
        if (needs_quoting(e.label, delim)) {
            out.push_back('"');
            for (char c : e.label) {
                if (c == '"') out.push_back('"');
                out.push_back(c);
            }
            out.push_back('"');
        } else {
            out += e.label;
        }
        out.push_back(delim);
        out += shortest(e.value);
        out.push_back('\n');
    }
    return out;
}

}  // namespace allotax
