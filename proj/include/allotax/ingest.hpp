#ifndef ALLOTAX_INGEST_HPP
#define ALLOTAX_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "allotax/error.hpp"

namespace allotax {

enum class Format { json, csv, tsv };

/// Whether entry values are sizes (counts) or pre-assigned ranks.
enum class SourceKind { counts, ranks };

struct Entry {
    std::string label;
    double value;  // count, or rank when source_kind == ranks

    bool operator==(const Entry&) const = default;
};

/// One system's types, in the order they were given.
struct RankedList {
    std::string name;
    std::vector<Entry> entries;
    SourceKind source_kind = SourceKind::counts;
};

struct IngestResult {
    RankedList list;
    std::vector<std::string> dropped;  // labels whose count was exactly 0
};

inline constexpr std::uint64_t kDefaultMaxBytes = std::uint64_t{2} << 30;

Format detect_format(std::string_view filename);
std::string_view format_name(Format f);

/// Parses and validates one ranked list. Throws a subclass of allotax::Error.
IngestResult parse_ranked_list(std::string_view bytes, Format format, std::string name);

/// Same validation rules applied to an already-decoded JSON array.
IngestResult parse_ranked_list(const nlohmann::json& array, std::string name);

/// Reads a file, enforcing `max_bytes`, and dispatches on its extension.
IngestResult read_ranked_list(const std::filesystem::path& path, std::string name,
                              std::uint64_t max_bytes = kDefaultMaxBytes);

/// Inverse of parse_ranked_list (used for fixtures and round-trip tests).
std::string serialize_ranked_list(const RankedList& list, Format format);

}  // namespace allotax

#endif
