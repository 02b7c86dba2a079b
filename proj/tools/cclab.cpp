// Command-line front end: runs the verification suites and writes
// machine-readable reports.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "cclab/report.hpp"
#include "cclab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cclab: sub-Riemannian comparison-geometry laboratory"};
    app.require_subcommand(1);

    cclab::RunConfig cfg;
    try {
        cfg.seed = cclab::default_seed_from_env();
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--manifold", cfg.manifold,
                        "hopf:k=<f>,m=<int>,n=<int> | base:k=<f>,n=<int> | heisenberg");
        sub->add_option("--samples", cfg.samples, "sample count for sweeps");
        sub->add_option("--seed", cfg.seed, "random seed (default: CCLAB_SEED or 7)");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
        sub->add_option("--output", cfg.output, "report file (default: stdout)");
        sub->add_option("--format", cfg.format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tol-scale", cfg.tol_scale, "multiplies built-in check tolerances");
    };

    auto* identities = app.add_subcommand("identities", "appendix identity suite");
    identities->add_option("--select", cfg.selection, "comma-separated identity ids");
    add_common(identities);

    auto* hypotheses = app.add_subcommand("hypotheses", "curvature hypothesis margins");
    hypotheses->add_option("--k1", cfg.k1, "holomorphic-type constant (0 = manifold scale)");
    hypotheses->add_option("--k2", cfg.k2, "trace-type constant (negative = matched)");
    add_common(hypotheses);

    auto* geodesic = app.add_subcommand("geodesic", "integrate the reference geodesic");
    geodesic->add_option("--a", cfg.a, "vertical momentum");
    geodesic->add_option("--t-max", cfg.t_max, "integration span");
    geodesic->add_option("--grid", cfg.grid, "output resolution scale");
    add_common(geodesic);

    auto* riccati = app.add_subcommand("riccati", "point-estimate Riccati along the reference geodesic");
    riccati->add_option("--a", cfg.a, "vertical momentum");
    riccati->add_option("--t-max", cfg.t_max, "integration span");
    riccati->add_option("--grid", cfg.grid, "output resolution scale");
    add_common(riccati);

    auto* diameter = app.add_subcommand("diameter", "diameter bound via Riccati blow-up");
    diameter->add_option("--mode", cfg.mode, "holomorphic | trace")
        ->check(CLI::IsMember({"holomorphic", "trace"}));
    add_common(diameter);

    auto* tube = app.add_subcommand("tube", "tube-volume growth around the closed orbit");
    tube->add_option("--t-max", cfg.t_max, "largest tube radius");
    tube->add_option("--grid", cfg.grid, "number of radius grid points");
    tube->add_option("--angular", cfg.angular, "angular quadrature size");
    tube->add_option("--mc-samples", cfg.mc_samples, "Monte-Carlo oracle size (0 = skip)");
    add_common(tube);

    auto* equality = app.add_subcommand("equality", "focal-set rigidity diagnostics");
    equality->add_option("--k1", cfg.k1, "curvature constant (0 = manifold scale)");
    equality->add_option("--focal", cfg.focal, "focal sample count");
    add_common(equality);

    auto* symplectic = app.add_subcommand("symplectic", "conjugate points on the base");
    add_common(symplectic);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    for (auto* sub : {identities, hypotheses, geodesic, riccati, diameter, tube, equality, symplectic})
        if (sub->parsed()) cfg.command = sub->get_name();

    try {
        const auto outcome = cclab::run_command(cfg);
        cclab::write_report(outcome.report, cfg.format, cfg.output);
        return outcome.exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
