#include "vorwave/config.hpp"
#include "vorwave/error.hpp"
#include "vorwave/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Small-amplitude N-modal water waves with vorticity"};
    app.require_subcommand(1);
    std::string config, out;
    std::vector<std::string> overrides;
    for (const auto& name : vorwave::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "YAML run configuration")->required();
        sub->add_option("--out", out, "output directory (overrides output.dir)");
        sub->add_option("--override", overrides, "section.key=value, applied before validation");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    vorwave::RunConfig cfg;
    try {
        cfg = vorwave::parse_config(config, overrides);
        if (!out.empty()) cfg.out = out;
    } catch (const vorwave::Error& e) {
        std::cerr << "vorwave: " << e.what() << "\n";
        return vorwave::exit_code(e.kind());
    }
    const auto report = vorwave::run_command(command, cfg);
    for (const auto& w : report.warnings) std::cerr << "vorwave: warning: " << w << "\n";
    if (!report.ok) {
        std::cerr << "vorwave: " << report.error << "\n";
        return report.exit_status;
    }
    for (const auto& f : report.outputs) std::cout << f.path << " " << f.crc32 << "\n";
    return 0;
}
