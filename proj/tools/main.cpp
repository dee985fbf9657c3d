#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

#include "ringpair/commands.hpp"
#include "ringpair/error.hpp"

using namespace ringpair;

namespace {

struct Invocation {
    std::string config_path;
    std::string out_dir;
    bool strict = false;
    std::map<std::string, std::string> overrides;
};

using Command = CommandResult (*)(const RunConfig&, const CommandOptions&);

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Invocation& inv,
                      Command* selected, Command fn)
{
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", inv.config_path, "Configuration file")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", inv.out_dir, "Output directory (overrides output.directory)");
    sub->add_flag("--strict", inv.strict, "Fail instead of warning when the pump grid truncates the field");
    for (const std::string& key : RunConfig::known_keys())
        sub->add_option_function<std::string>(
            "--" + key, [&inv, key](const std::string& v) { inv.overrides[key] = v; }, "Override " + key);
    sub->callback([selected, fn] { *selected = fn; });
    return sub;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Photon-pair spectra and purity for ring resonator sources"};
    app.require_subcommand(1);
    Invocation inv;
    Command selected = nullptr;
    add_command(app, "spectrum", "Pump spectra and temporal field", inv, &selected, cmd_spectrum);
    add_command(app, "jsi", "Joint spectral intensity and Schmidt decomposition", inv, &selected, cmd_jsi);
    add_command(app, "sweep", "Purity and rate over the (eta, delta_tau) grid", inv, &selected, cmd_sweep);
    add_command(app, "optimize", "Rate-constrained purity optima versus pulse bandwidth", inv, &selected,
                cmd_optimize);
    add_command(app, "sensitivity", "Purity versus resonance shift or pulse phase", inv, &selected,
                cmd_sensitivity);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        RunConfig config = inv.config_path.empty() ? RunConfig{} : RunConfig::load(inv.config_path);
        for (const auto& [key, value] : inv.overrides)
            config.set(key, value);
        CommandOptions options;
        options.out_dir = inv.out_dir;
        options.strict = inv.strict;
        const CommandResult result = selected(config, options);
        for (const auto& f : result.files)
            std::cout << f.string() << '\n';
        if (result.exit_code == kExitInfeasible)
            std::cerr << "error: at least one optimization has no feasible point\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
