// seedseg-service: HTTP API for interactive seeded segmentation.

#include <iostream>

#include <CLI11.hpp>

#include "api.hpp"
#include "seedseg/parallel.hpp"

int main(int argc, char** argv) {
    seedseg::service::ServiceConfig config;
    int ttlMinutes = 60;
    std::size_t maxBodyMiB = 16;
    CLI::App app{"Seeded level-set segmentation service"};
    app.add_option("--port", config.port, "Listening port (0 picks a free one)");
    app.add_option("--host", config.host, "Bind address");
    app.add_option("--ttl-minutes", ttlMinutes, "Idle sessions are dropped after this long")->check(CLI::PositiveNumber);
    app.add_option("--max-body-mib", maxBodyMiB, "Request body cap")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    seedseg::applyThreadEnv();

    config.store.ttl = std::chrono::minutes(ttlMinutes);
    config.maxBodyBytes = maxBodyMiB << 20;
    seedseg::service::Service service(config);
    std::cerr << "listening on " << config.host << ":" << config.port << "\n";
    if (!service.listen()) {
        std::cerr << "cannot listen on " << config.host << ":" << config.port << "\n";
        return 1;
    }
    return 0;
}
