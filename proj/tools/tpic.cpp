#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tpic/deck.hpp"
#include "tpic/engine.hpp"
#include "tpic/report.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 deck or config error, 4 file error,
// 5 internal error.
constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_deck = 3;
constexpr int exit_file = 4;
constexpr int exit_internal = 5;

std::int64_t total_particles(const tpic::SimState& s) {
    std::int64_t n = 0;
    for (const auto& sp : s.species) n += static_cast<std::int64_t>(sp.map.particles.size());
    return n;
}

int cmd_run(const std::string& deck_path, int threads, bool deterministic,
            const std::string& out_dir) {
    const tpic::SimConfig cfg = tpic::load_deck(deck_path);
    tpic::SimState state = tpic::make_state(cfg);

    std::filesystem::create_directories(out_dir);

    tpic::ExecPolicy policy;
    policy.mode = deterministic ? tpic::ExecMode::deterministic : tpic::ExecMode::fast;
    policy.threads = threads;

    std::printf("grid %dx%d, %lld particles, %lld steps, %s mode\n", cfg.nx, cfg.ny,
                static_cast<long long>(total_particles(state)),
                static_cast<long long>(cfg.n_steps), deterministic ? "deterministic" : "fast");

    long long last_reported = -1;
    tpic::ReportSink sink = [&](const tpic::GridPayload& p) {
        const auto path = std::filesystem::path(out_dir) / tpic::report_filename(p);
        tpic::write_report(path.string(), p);
        if (p.step != last_reported) {
            last_reported = p.step;
            std::printf("  reports written for step %lld (t = %g)\n",
                        static_cast<long long>(p.step), p.time);
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    tpic::run(state, cfg.n_steps, sink, policy);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    const double pushes = static_cast<double>(total_particles(state)) *
                          static_cast<double>(cfg.n_steps);
    std::printf("done: %lld steps in %.2f s (%.3g particle pushes/s)\n",
                static_cast<long long>(cfg.n_steps), secs, secs > 0.0 ? pushes / secs : 0.0);
    std::printf("kinetic energy %.6e, field energy E %.6e B %.6e\n", tpic::kinetic_energy(state),
                tpic::field_energy(state.emf).e, tpic::field_energy(state.emf).b);
    return exit_ok;
}

int cmd_validate(const std::string& deck_path) {
    const tpic::SimConfig cfg = tpic::load_deck(deck_path);
    const tpic::ValidationReport rep = tpic::validate_config(cfg);
    if (rep.ok()) {
        std::printf("ok: %dx%d grid, %zu species, %lld steps\n", cfg.nx, cfg.ny,
                    cfg.species.size(), static_cast<long long>(cfg.n_steps));
        return exit_ok;
    }
    for (const auto& e : rep.errors) std::fprintf(stderr, "invalid: %s\n", e.c_str());
    return exit_deck;
}

int cmd_preset(const std::string& name, double scale, const std::string& out_file) {
    tpic::SimConfig cfg;
    try {
        cfg = tpic::preset(name, scale);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return exit_usage;
    }
    const std::string text = tpic::serialize_deck(cfg);
    if (out_file.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + out_file);
        out << text;
        if (!out.flush()) throw std::runtime_error("cannot write output file: " + out_file);
    }
    return exit_ok;
}

int cmd_report_dump(const std::string& path) {
    const tpic::GridPayload p = tpic::read_report(path);
    tpic::dump_csv(p, std::cout);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tile-parallel particle-in-cell plasma simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run a deck and write grid reports");
    std::string run_deck;
    int threads = 0;
    bool deterministic = false;
    std::string out_dir = ".";
    run_cmd->add_option("deck", run_deck, "deck file")->required();
    run_cmd->add_option("--threads", threads, "worker thread count (0 = runtime default)")
        ->envname("TPIC_THREADS");
    run_cmd->add_flag("--deterministic", deterministic,
                      "bitwise reproducible schedule regardless of thread count");
    run_cmd->add_option("--out", out_dir, "directory for report files (default .)");

    auto* val_cmd = app.add_subcommand("validate", "parse and validate a deck");
    std::string val_deck;
    val_cmd->add_option("deck", val_deck, "deck file")->required();

    auto* pre_cmd = app.add_subcommand("preset", "print a built-in deck");
    std::string pre_name;
    double pre_scale = 1.0;
    std::string pre_out;
    pre_cmd->add_option("name", pre_name, "cold, warm, or weibel")->required();
    pre_cmd->add_option("--scale", pre_scale, "grid scale factor (default 1.0)");
    pre_cmd->add_option("-o,--output", pre_out, "write to a file instead of stdout");

    auto* dump_cmd = app.add_subcommand("report-dump", "print a report file as CSV");
    std::string dump_path;
    dump_cmd->add_option("file", dump_path, "report (.tpic) file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*run_cmd) return cmd_run(run_deck, threads, deterministic, out_dir);
        if (*val_cmd) return cmd_validate(val_deck);
        if (*pre_cmd) return cmd_preset(pre_name, pre_scale, pre_out);
        if (*dump_cmd) return cmd_report_dump(dump_path);
    } catch (const tpic::DeckError& e) {
        std::fprintf(stderr, "deck error: %s\n", e.what());
        return exit_deck;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return exit_deck;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return exit_file;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_internal;
    }
    return exit_usage;
}
