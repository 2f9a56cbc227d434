#include "allotax/service.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "httplib.h"

namespace allotax {

namespace {

std::string default_title(const std::optional<std::string>& title, const std::filesystem::path& path) {
    return title ? *title : path.stem().string();
}

bool write_file(const std::filesystem::path& path, std::string_view content, std::ostream& err) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        err << "error: cannot write \"" << path.string() << "\"\n";
        return false;
    }
    return true;
}

const char* error_code(const Error& e) {
    if (dynamic_cast<const DuplicateLabelError*>(&e)) return "duplicate_label";
    if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
    if (dynamic_cast<const ValueError*>(&e)) return "invalid_value";
    if (dynamic_cast<const EmptyInputError*>(&e)) return "empty_input";
    if (dynamic_cast<const AlphaParseError*>(&e)) return "invalid_alpha";
    if (dynamic_cast<const SizeLimitError*>(&e)) return "too_large";
    return "invalid_input";
}

ApiResponse error_response(int status, std::string_view error, std::string_view detail) {
    nlohmann::ordered_json body = {{"error", error}, {"detail", detail}};
    return ApiResponse{status, body.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace)};
}

constexpr std::string_view kPlaceholderPage = R"(<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>allotax</title></head>
<body>
<h1>allotax service</h1>
<p>The browser UI assets are not installed. Start the service with
<code>--static-dir</code> pointing at the built UI, or call the API directly:</p>
<pre>POST /api/allotaxonograph
{"system_1": [{"types": "a", "counts": 3}], "system_2": [{"types": "b", "counts": 2}],
 "alpha": "0.17", "title_1": "System 1", "title_2": "System 2"}</pre>
</body>
</html>
)";

}  // namespace

int cmd_compare(const CompareConfig& config, std::ostream& out, std::ostream& err) {
    Alpha alpha = Alpha::zero();
    try {
        alpha = Alpha::parse(config.alpha_text);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    RankedList lists[2];
    const std::filesystem::path* paths[2] = {&config.path_1, &config.path_2};
    const std::string titles[2] = {default_title(config.title_1, config.path_1),
                                   default_title(config.title_2, config.path_2)};
    for (int s = 0; s < 2; ++s) {
        try {
            IngestResult result = read_ranked_list(*paths[s], titles[s], config.max_bytes);
            if (!result.dropped.empty()) {
                err << "warning: " << paths[s]->string() << ": dropped " << result.dropped.size()
                    << " zero-count type(s), first \"" << result.dropped.front() << "\"\n";
            }
            lists[s] = std::move(result.list);
        } catch (const ParseError& e) {
            err << "error: " << paths[s]->string() << ": " << e.what() << " (record " << e.record() << ")\n";
            return kExitInput;
        } catch (const Error& e) {
            err << "error: " << paths[s]->string() << ": " << e.what() << "\n";
            return kExitInput;
        }
    }

    std::string svg;
    std::string report;
    double total = 0;
    try {
        const MergedLexicon lex = merge_systems(std::move(lists[0]), std::move(lists[1]));
        const AllotaxDocument doc = assemble(lex, alpha, titles[0], titles[1], config.options);
        total = doc.divergence;
        svg = render_svg(doc);
        if (config.report_path) report = render_report(doc);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    if (!write_file(config.output_path, svg, err)) return kExitWrite;
    if (config.report_path && !write_file(*config.report_path, report, err)) return kExitWrite;
    out << fmt::format("D = {:.12f}", total) << "\n";
    return kExitOk;
}

ApiResponse handle_allotaxonograph(const std::string& body) {
    nlohmann::json request;
    try {
        request = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        return error_response(400, "malformed_json", e.what());
    }
    if (!request.is_object()) return error_response(400, "bad_request", "request body must be a JSON object");
    for (const char* field : {"system_1", "system_2", "alpha"}) {
        if (!request.contains(field)) {
            return error_response(400, "bad_request", fmt::format("missing field \"{}\"", field));
        }
    }

    try {
        const auto& alpha_field = request["alpha"];
        std::string alpha_text;
        if (alpha_field.is_string()) alpha_text = alpha_field.get<std::string>();
        else if (alpha_field.is_number()) alpha_text = alpha_field.dump();
        else return error_response(400, "invalid_alpha", "\"alpha\" must be text");
        const Alpha alpha = Alpha::parse(alpha_text);

        const auto text_field = [&](const char* key, const char* fallback) {
            const auto it = request.find(key);
            return it != request.end() && it->is_string() ? it->get<std::string>() : std::string(fallback);
        };
        const std::string title_1 = text_field("title_1", "System 1");
        const std::string title_2 = text_field("title_2", "System 2");

        DocumentOptions options;
        if (const auto it = request.find("options"); it != request.end() && it->is_object()) {
            const auto read_int = [&](const char* key, long lo, long hi, auto& target) -> std::optional<ApiResponse> {
                const auto f = it->find(key);
                if (f == it->end()) return std::nullopt;
                if (!f->is_number_integer() || f->get<long>() < lo || f->get<long>() > hi) {
                    return error_response(400, "bad_request",
                                          fmt::format("option \"{}\" must be an integer in [{}, {}]", key, lo, hi));
                }
                target = static_cast<std::remove_reference_t<decltype(target)>>(f->get<long>());
                return std::nullopt;
            };
            if (auto e = read_int("cells", 2, 1000, options.cells)) return *e;
            if (auto e = read_int("wordshift_n", 1, 10000, options.wordshift_n)) return *e;
            if (auto e = read_int("contours", 1, 100, options.contour_levels)) return *e;
            if (auto e = read_int("max_labels", 1, 1000, options.max_labels)) return *e;
        }

        IngestResult one;
        IngestResult two;
        try {
            one = parse_ranked_list(request["system_1"], title_1);
        } catch (const Error& e) {
            return error_response(400, error_code(e), std::string("system_1: ") + e.what());
        }
        try {
            two = parse_ranked_list(request["system_2"], title_2);
        } catch (const Error& e) {
            return error_response(400, error_code(e), std::string("system_2: ") + e.what());
        }

        const MergedLexicon lex = merge_systems(std::move(one.list), std::move(two.list));
        const AllotaxDocument doc = assemble(lex, alpha, title_1, title_2, options);
        nlohmann::ordered_json response = nlohmann::ordered_json::object();
        response["svg"] = render_svg(doc);
        response["report"] = report_json(doc);
        return ApiResponse{200, response.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace)};
    } catch (const Error& e) {
        return error_response(400, error_code(e), e.what());
    }
}

std::uint64_t payload_limit_from_env() {
    if (const char* env = std::getenv("ALLOTAX_MAX_BYTES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultPayloadLimit;
}

struct Service::Impl {
    ServiceConfig config;
    httplib::Server server;
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
    impl_->config = std::move(config);
    auto& server = impl_->server;
    server.set_payload_max_length(impl_->config.payload_limit);
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });

    server.Post("/api/allotaxonograph", [](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse response = handle_allotaxonograph(req.body);
        res.status = response.status;
        res.set_content(response.body, "application/json; charset=utf-8");
    });

    bool mounted = false;
    if (impl_->config.static_dir && std::filesystem::is_directory(*impl_->config.static_dir)) {
        mounted = server.set_mount_point("/", impl_->config.static_dir->string());
    }
    if (!mounted) {
        server.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(std::string(kPlaceholderPage), "text/html; charset=utf-8");
        });
    }

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        std::string_view error = "http_error";
        if (res.status == 413) error = "payload_too_large";
        else if (res.status == 404) error = "not_found";
        const ApiResponse body = error_response(res.status, error, httplib::status_message(res.status));
        res.set_content(body.body, "application/json; charset=utf-8");
    });
}

Service::~Service() { stop(); }

bool Service::run() {
    return impl_->server.listen(impl_->config.bind_address, impl_->config.port);
}

bool Service::bind() { return impl_->server.bind_to_port(impl_->config.bind_address, impl_->config.port); }

int Service::bind_any_port() { return impl_->server.bind_to_any_port(impl_->config.bind_address); }

bool Service::run_bound() { return impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace allotax
