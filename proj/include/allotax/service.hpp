#ifndef ALLOTAX_SERVICE_HPP
#define ALLOTAX_SERVICE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "allotax/ingest.hpp"
#include "allotax/render.hpp"

namespace allotax {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitWrite = 3;

inline constexpr std::uint64_t kDefaultPayloadLimit = std::uint64_t{256} << 20;

struct CompareConfig {
    std::filesystem::path path_1;
    std::filesystem::path path_2;
    std::string alpha_text;
    std::optional<std::string> title_1;  // defaults to the file stem
    std::optional<std::string> title_2;
    std::filesystem::path output_path;
    std::optional<std::filesystem::path> report_path;
    DocumentOptions options;
    std::uint64_t max_bytes = kDefaultMaxBytes;
};

/// Runs one comparison end to end. Prints "D = <value>" to `out`, diagnostics
/// to `err`, and returns kExitOk, kExitInput or kExitWrite.
int cmd_compare(const CompareConfig& config, std::ostream& out, std::ostream& err);

/// Outcome of one API call, independent of the HTTP layer.
struct ApiResponse {
    int status = 200;
    std::string body;  // JSON
};

/// Handles a `POST /api/allotaxonograph` body.
ApiResponse handle_allotaxonograph(const std::string& body);

struct ServiceConfig {
    std::string bind_address = "127.0.0.1";
    int port = 8080;
    std::uint64_t payload_limit = kDefaultPayloadLimit;
    std::optional<std::filesystem::path> static_dir;
};

/// Payload limit from ALLOTAX_MAX_BYTES when set and valid, else the default.
std::uint64_t payload_limit_from_env();

/// HTTP front end: static UI assets at `/` and the allotaxonograph endpoint.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and blocks until stop(). Returns false if the socket cannot be bound.
    bool run();
    /// Binds to the configured address and port; call run_bound() next.
    bool bind();
    /// Binds to an ephemeral port and returns it (-1 on failure); call run_bound() next.
    int bind_any_port();
    bool run_bound();
    void stop();
    /// Blocks until the server is accepting connections.
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace allotax

#endif
