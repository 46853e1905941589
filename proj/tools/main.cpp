#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "config.hpp"
#include "harper/errors.hpp"
#include "output.hpp"

#ifndef HARPERSIM_PRESET_DIR
#define HARPERSIM_PRESET_DIR "presets"
#endif

namespace {

constexpr const char* version = "1.0.0";

std::filesystem::path preset_dir() {
    if (const char* d = std::getenv("HARPERSIM_PRESET_DIR")) return d;
    return HARPERSIM_PRESET_DIR;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace harpersim;
    CLI::App app{"harpersim: transmon-array Harper model toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir = "out", preset;
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for synthetic noise");
    app.add_option("--threads", threads, "worker threads (0: hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--preset", preset, "figure preset name");
    for (const auto& name : command_names()) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        json config = json::object();
        if (!preset.empty()) {
            config = load_json_file((preset_dir() / (preset + ".json")).string(), "preset " + preset);
            if (config.contains("command") && config["command"] != command)
                throw harper::ValidationError("preset " + preset + " is for '" +
                                              config["command"].get<std::string>() + "', not '" +
                                              command + "'");
        }
        if (!config_path.empty()) config.merge_patch(load_json_file(config_path, "config"));
        if (!config.is_object()) throw harper::ValidationError("config: top level must be an object");
        std::string stem = command;
        if (config.contains("stem")) {
            if (!config["stem"].is_string()) throw harper::ValidationError("stem: expected a string");
            stem = config["stem"].get<std::string>();
        }

        std::string thread_source = "flag";
        if (const char* env = std::getenv("HARPERSIM_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end == env || *end || v < 0)
                throw harper::ValidationError("HARPERSIM_THREADS: expected a non-negative integer");
            threads = static_cast<int>(v);
            thread_source = "env HARPERSIM_THREADS";
        } else if (threads == 0) {
            thread_source = "hardware";
        }
        if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

        auto t0 = std::chrono::steady_clock::now();
        Run run(out_dir, stem);
        json resolved = json::object();
        Context ctx{seed, threads};
        json summary = run_command(command, config, resolved, ctx, run);
        summary["seed"] = seed;
        run.write_json("_summary.json", summary);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json manifest = {{"tool", "harpersim"},
                         {"version", version},
                         {"command", command},
                         {"preset", preset},
                         {"config_sha256", sha256_hex(config.dump())},
                         {"resolved_config", resolved},
                         {"seed", seed},
                         {"threads", threads},
                         {"threads_source", thread_source},
                         {"wall_clock_s", wall},
                         {"outputs", run.outputs()}};
        std::ofstream(std::filesystem::path(out_dir) / (stem + "_manifest.json")) << manifest.dump(2) << "\n";
        std::cout << summary.dump(2) << "\n";
        return 0;
    } catch (const harper::ValidationError& e) {
        std::cerr << "harpersim " << command << ": invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "harpersim " << command << ": " << e.what() << "\n";
        return 1;
    }
}
