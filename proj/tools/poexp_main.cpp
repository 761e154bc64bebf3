// Command-line front end: reads a problem description, runs the expansion
// pipeline, and prints a JSON or text report.
//
// Exit status: 0 on success, 1 on a computation error, 2 on a config
// parse/validation failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "poexp/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Poisson-expansion of E[h(W)] for sums of independent "
                 "nonnegative-integer random variables"};
    std::string configPath;
    std::string format;
    int orderOverride = -1;
    bool noOracle = false;
    app.add_option("--config", configPath, "problem config (JSON)")->required();
    app.add_option("--format", format, "output format: json|text");
    app.add_option("--order", orderOverride, "override expansion order from the config");
    app.add_flag("--no-oracle", noOracle, "skip the exact-convolution path");
    CLI11_PARSE(app, argc, argv);

    poexp::ProblemConfig config;
    try {
        std::ifstream in(configPath);
        if (!in) {
            std::cerr << "error: cannot open config file: " << configPath << "\n";
            return 2;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        config = poexp::parseProblemConfig(buffer.str());
    } catch (const poexp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    if (orderOverride >= 0) config.order = orderOverride;
    if (noOracle) config.report.includeOracle = false;
    if (!format.empty()) {
        if (format != "json" && format != "text") {
            std::cerr << "error: --format must be json or text\n";
            return 2;
        }
        config.report.format = format;
    }

    try {
        const poexp::ExpansionReport<double> report = poexp::runProblem(config);
        if (config.report.format == "text") {
            std::cout << poexp::reportToText(report);
        } else {
            std::cout << poexp::reportToJson(report).dump(2) << "\n";
        }
    } catch (const poexp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
