#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpic/deck.hpp"
#include "tpic/engine.hpp"
#include "tpic/reference.hpp"

namespace {

double time_run(const tpic::SimConfig& cfg, std::int64_t steps,
                const std::function<void(tpic::SimState&)>& stepper) {
    tpic::SimState s = tpic::make_state(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::int64_t n = 0; n < steps; ++n) stepper(s);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compare the tile-parallel stepper against the serial reference stepper"};
    double scale = 0.128;
    std::int64_t steps = 20;
    std::vector<int> threads{1, 2, 4};
    app.add_option("--scale", scale, "grid scale factor (default 0.128)");
    app.add_option("--steps", steps, "steps to time (default 20)");
    app.add_option("--threads", threads, "thread counts to try (default 1 2 4)");
    CLI11_PARSE(app, argc, argv);

    tpic::SimConfig cfg = tpic::preset("weibel", scale);
    {
        tpic::SimState probe = tpic::make_state(cfg);
        std::int64_t np = 0;
        for (const auto& sp : probe.species) np += static_cast<std::int64_t>(sp.map.particles.size());
        std::printf("weibel deck, %dx%d grid, %lld particles, %lld steps per run\n\n", cfg.nx,
                    cfg.ny, static_cast<long long>(np), static_cast<long long>(steps));
    }

    const double t_ref = time_run(cfg, steps, [](tpic::SimState& s) { tpic::ref::naive_step(s); });
    std::printf("%-28s %8.3f s  %6.2f steps/s  %5s\n", "serial reference", t_ref,
                steps / t_ref, "1.00x");

    for (int nt : threads) {
        for (const bool fast : {false, true}) {
            tpic::ExecPolicy pol;
            pol.mode = fast ? tpic::ExecMode::fast : tpic::ExecMode::deterministic;
            pol.threads = nt;
            const double t =
                time_run(cfg, steps, [&pol](tpic::SimState& s) { tpic::step(s, pol); });
            char label[64];
            std::snprintf(label, sizeof(label), "%s, %d thread%s",
                          fast ? "fast" : "deterministic", nt, nt == 1 ? "" : "s");
            std::printf("%-28s %8.3f s  %6.2f steps/s  %4.2fx\n", label, t, steps / t,
                        t_ref / t);
        }
    }
    return 0;
}
