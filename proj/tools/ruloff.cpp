#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ruloff/ruloff.hpp"

int main(int argc, char** argv) {
    CLI::App app{"directional 3D curve offsetting and ruled-surface generation"};
    app.require_subcommand(1);

    std::string spec_path;
    auto* offset = app.add_subcommand("offset", "run the offset pipeline from a spec file");
    offset->add_option("spec", spec_path, "key-value pipeline spec file")->required();

    auto* repro = app.add_subcommand("repro", "rerun a built-in benchmark");
    repro->require_subcommand(1);
    auto* table1 =
        repro->add_subcommand("table1", "subdivision + offset accuracy comparison (CSV)");

    std::uint64_t seed = 0;
    int max_iter = 2000;
    std::string trans_prefix = "out";
    auto* transition = repro->add_subcommand("transition", "convex gap transition benchmark");
    transition->add_option("--seed", seed, "optimizer RNG seed")->required();
    transition->add_option("--max-iter", max_iter, "iteration cap");
    transition->add_option("--prefix", trans_prefix, "output file prefix");

    std::string target, out_file, plot_prefix = "out";
    auto* plot = app.add_subcommand("plot", "emit an SVG plot of prior outputs");
    plot->add_option("target", target, "curves | projection | convergence")->required();
    plot->add_option("-o,--out", out_file, "output SVG path")->required();
    plot->add_option("--prefix", plot_prefix, "input file prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*offset)
            ruloff::cmd_offset(spec_path, std::cout);
        else if (*table1)
            ruloff::cmd_repro_table1(std::cout);
        else if (*transition)
            ruloff::cmd_repro_transition(seed, max_iter, trans_prefix, std::cout);
        else if (*plot)
            ruloff::cmd_plot(target, out_file, plot_prefix);
    } catch (const ruloff::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ruloff::convergence_error& e) {
        std::cerr << "error: " << e.what() << " (best value " << e.best_value << ")\n";
        return 4;
    } catch (const ruloff::geometry_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
