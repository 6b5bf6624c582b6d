// Runs the relay-corrected differentiator on a sinusoid and writes SVG plots
// of the tracked derivative next to the truth.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fintime/fintime.hpp"

int main() {
    using namespace fintime;

    const Signal y = Signal::sinusoid(1.0, 1.0);
    const auto cfg = DifferentiatorConfig::make(2, DiffVariant::modified, 1.5);
    SimConfig sim;
    sim.t_max = 30.0;
    sim.record_stride = 10;

    const auto run = simulate_differentiator(y, Vec(cfg.state_dim(), 0.0), cfg, sim);
    for (std::size_t i = 0; i < run.tail_errors.size(); ++i)
        std::cout << "z" << i + 1 << " tail error vs y^(" << i << ") = " << run.tail_errors[i]
                  << "\n";

    std::filesystem::create_directories("differentiator_plots");
    for (std::size_t i = 0; i < cfg.state_dim(); ++i) {
        Vec series(run.trajectory.size());
        for (std::size_t r = 0; r < run.trajectory.size(); ++r)
            series[r] = run.trajectory.states[r][i];
        std::ofstream f("differentiator_plots/z" + std::to_string(i + 1) + ".svg");
        write_timeseries_svg(f, run.trajectory.times, series, "z" + std::to_string(i + 1));
    }
    std::cout << "plots written to differentiator_plots/\n";
    return 0;
}
