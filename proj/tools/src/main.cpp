#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sigmmd/errors.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::string> x;
    std::optional<std::string> y;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, Options& o, bool inputs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("-o,--out", o.out, "output file or directory");
    sub->add_option("-f,--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    if (inputs) {
        sub->add_option("--x", o.x, "path batch file for X (overrides data)")->check(CLI::ExistingFile);
        sub->add_option("--y", o.y, "path batch file for Y (overrides data)")->check(CLI::ExistingFile);
    }
    return sub;
}

sigmmd::app::ExperimentConfig resolve(const Options& o) {
    using namespace sigmmd::app;
    ExperimentConfig c = load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.output.path = *o.out;
    if (o.format) c.output.format = *o.format == "csv" ? Format::csv : Format::json;
    if (o.x || o.y) {
        if (!o.x || !o.y) throw sigmmd::ParameterError("--x and --y must be given together");
        c.data = FileData{*o.x, *o.y};
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace sigmmd::app;
    CLI::App app{"Signature-kernel MMD two-sample testing"};
    app.require_subcommand(1);
    Options o;
    auto* simulate = add_command(app, "simulate", "simulate path batches for both hypotheses", o, false);
    auto* test = add_command(app, "test", "run a two-sample test", o, true);
    auto* power = add_command(app, "power", "Type 1 / Type 2 power study over a grid", o, true);
    auto* levels = add_command(app, "levels", "per-level contribution samples", o, true);
    auto* ingest = add_command(app, "ingest", "window and split price files", o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        const ExperimentConfig c = resolve(o);
        if (simulate->parsed()) cmd_simulate(c, std::cerr);
        if (test->parsed()) cmd_test(c, std::cerr);
        if (power->parsed()) cmd_power(c, std::cerr);
        if (levels->parsed()) cmd_levels(c, std::cerr);
        if (ingest->parsed()) cmd_ingest(c, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return ok;
}
