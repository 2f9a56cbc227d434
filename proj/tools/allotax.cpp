// allotax: compare two ranked systems and draw their allotaxonograph.
//
//   allotax compare boys_1968.json boys_2018.json --alpha 0.17
//       --title1 "Baby boy names 1968" --title2 "Baby boy names 2018" -o out.svg
//   allotax serve --port 8080

#include <pthread.h>
#include <unistd.h>

#include <algorithm>
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "allotax/service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Rank-turbulence divergence and allotaxonographs for pairs of ranked systems"};
    app.require_subcommand(1);

    allotax::CompareConfig compare;
    std::string title_1, title_2, report;
    std::uint64_t max_bytes = 0;
    auto* cmd = app.add_subcommand("compare", "Compare two systems and write an SVG allotaxonograph");
    cmd->add_option("system1", compare.path_1, "First system (.json, .csv or .tsv)")->required();
    cmd->add_option("system2", compare.path_2, "Second system (.json, .csv or .tsv)")->required();
    cmd->add_option("--alpha", compare.alpha_text, "Alpha: decimal, p/q, 0 or inf")->required();
    cmd->add_option("--title1", title_1, "Title of the first system (default: file stem)");
    cmd->add_option("--title2", title_2, "Title of the second system (default: file stem)");
    cmd->add_option("-o,--output", compare.output_path, "SVG output path")->required();
    cmd->add_option("--report", report, "Also write a JSON report here");
    cmd->add_option("--cells", compare.options.cells, "Diamond cells per axis")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    cmd->add_option("--wordshift-n", compare.options.wordshift_n, "Number of wordshift bars")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    cmd->add_option("--contours", compare.options.contour_levels, "Number of contour levels")
        ->check(CLI::Range(1, 100))
        ->capture_default_str();
    cmd->add_option("--max-labels", compare.options.max_labels, "Flank labels per side")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    compare.options.threads = std::clamp(std::thread::hardware_concurrency(), 1u, 256u);
    cmd->add_option("--threads", compare.options.threads, "Worker threads for element evaluation")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    cmd->add_option("--max-bytes", max_bytes, "Largest accepted input file in bytes (default 2 GiB)");

    allotax::ServiceConfig serve;
    std::string static_dir;
    std::uint64_t payload = 0;
    auto* srv = app.add_subcommand("serve", "Serve the browser UI and the allotaxonograph API");
    srv->add_option("--port", serve.port, "TCP port")->capture_default_str();
    srv->add_option("--bind", serve.bind_address, "Bind address")->capture_default_str();
    srv->add_option("--static-dir", static_dir, "Directory holding the built browser UI");
    srv->add_option("--max-bytes", payload, "Largest accepted request body (default 256 MiB or $ALLOTAX_MAX_BYTES)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return allotax::kExitInput;
    }

    if (cmd->parsed()) {
        if (!title_1.empty()) compare.title_1 = title_1;
        if (!title_2.empty()) compare.title_2 = title_2;
        if (!report.empty()) compare.report_path = report;
        if (max_bytes > 0) compare.max_bytes = max_bytes;
        return allotax::cmd_compare(compare, std::cout, std::cerr);
    }

    serve.payload_limit = payload > 0 ? payload : allotax::payload_limit_from_env();
    if (!static_dir.empty()) serve.static_dir = static_dir;
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    allotax::Service service(serve);
    if (!service.bind()) {
        std::cerr << "error: cannot listen on " << serve.bind_address << ":" << serve.port << "\n";
        return 1;
    }
    std::thread worker([&] {
        if (!service.run_bound()) ::kill(::getpid(), SIGTERM);
    });
    std::cerr << "listening on http://" << serve.bind_address << ":" << serve.port << "\n";
    int received = 0;
    sigwait(&signals, &received);
    service.stop();
    worker.join();
    return 0;
}
