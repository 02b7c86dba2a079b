#ifndef CCLAB_RUNNER_HPP
#define CCLAB_RUNNER_HPP

#include <cstdint>
#include <string>

#include "cclab/report.hpp"

namespace cclab {

// Fully resolved invocation of one subcommand. Defaults here are the CLI
// defaults; the seed falls back to the CCLAB_SEED environment variable.
struct RunConfig {
    std::string command;  // identities | hypotheses | geodesic | riccati |
                          // diameter | tube | equality | symplectic
    std::string manifold = "hopf:k=1,m=1,n=1";
    uint64_t seed = 7;
    int samples = 200;
    int threads = 0;  // 0 = hardware concurrency
    std::string output;
    std::string format = "json";

    double a = 0.0;
    double t_max = 3.141592653589793;
    double k1 = 0.0;   // 0 = use the manifold's curvature scale
    double k2 = -1.0;  // negative = matched to k1
    int grid = 8;
    int mc_samples = 2000;
    int angular = 32;
    int focal = 24;
    double tol_scale = 1.0;  // multiplies the built-in check tolerances
    std::string mode = "holomorphic";
    std::string selection;  // identity subset, comma separated
};

struct RunOutcome {
    Report report;
    int exit_code = 0;  // 0 pass, 1 check failed, 2 usage error
};

uint64_t default_seed_from_env();

// Executes the subcommand and assembles the report (no file output here).
RunOutcome run_command(const RunConfig& cfg);

}  // namespace cclab

#endif
