#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/report.hpp"
#include <cstdlib>

#include "cclab/runner.hpp"

using namespace cclab;

TEST_CASE("identities command: all checks pass on the model") {
    RunConfig cfg;
    cfg.command = "identities";
    cfg.manifold = "hopf:k=1,m=1,n=1";
    cfg.samples = 40;
    cfg.seed = 7;
    cfg.threads = 2;
    const auto out = run_command(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.report.all_pass());
    CHECK(out.report.checks.size() >= 24);
}

TEST_CASE("reports are byte-identical for identical configs") {
    RunConfig cfg;
    cfg.command = "hypotheses";
    cfg.manifold = "hopf:k=1,m=1,n=2";
    cfg.samples = 30;
    cfg.seed = 42;
    cfg.threads = 2;
    const auto a = run_command(cfg);
    const auto b = run_command(cfg);
    CHECK(report_json(a.report) == report_json(b.report));
    // thread count does not change the numbers, only the config echo
    RunConfig cfg1 = cfg;
    cfg1.threads = 1;
    const auto c = run_command(cfg1);
    REQUIRE(c.report.checks.size() == a.report.checks.size());
    for (size_t i = 0; i < c.report.checks.size(); ++i)
        CHECK(c.report.checks[i].value == a.report.checks[i].value);
}

TEST_CASE("geodesic command: csv series ends at the antipodal fiber point") {
    RunConfig cfg;
    cfg.command = "geodesic";
    cfg.manifold = "hopf:k=1,m=1,n=1";
    cfg.a = 0.0;
    cfg.t_max = 3.14159;
    cfg.seed = 7;
    const auto out = run_command(cfg);
    CHECK(out.exit_code == 0);
    REQUIRE(out.report.series.size() == 1);
    const auto& ser = out.report.series[0];
    const auto& last = ser.rows.back();
    // columns: t, x0..x3, ...
    CHECK(std::fabs(last[1] - 0.0) < 1e-5);
    CHECK(std::fabs(last[2]) < 1e-6);
    CHECK(std::fabs(last[3] - 2.0) < 1e-6);
    CHECK(std::fabs(last[4]) < 1e-6);
    const std::string csv = series_csv(ser);
    CHECK(csv.substr(0, 2) == "t,");
}

TEST_CASE("hypotheses command fails loudly on heisenberg") {
    RunConfig cfg;
    cfg.command = "hypotheses";
    cfg.manifold = "heisenberg";
    cfg.k1 = 0.1;
    cfg.samples = 40;
    cfg.seed = 7;
    const auto out = run_command(cfg);
    CHECK(out.exit_code == 1);  // margin1 = -0.01 fails the check
    bool found = false;
    for (const auto& c : out.report.checks)
        if (c.id == "hypotheses.margin1") {
            found = true;
            CHECK(std::fabs(c.value + 0.01) < 1e-6);
            CHECK(!c.pass);
        }
    CHECK(found);
}

TEST_CASE("diameter command reports not-applicable without failing") {
    RunConfig cfg;
    cfg.command = "diameter";
    cfg.manifold = "heisenberg";
    cfg.samples = 30;
    cfg.seed = 7;
    cfg.threads = 2;
    const auto out = run_command(cfg);
    CHECK(out.exit_code == 0);
    REQUIRE(!out.report.checks.empty());
    CHECK(out.report.checks[0].details.find("not applicable") != std::string::npos);
}

TEST_CASE("CCLAB_SEED supplies the default seed") {
    setenv("CCLAB_SEED", "12345", 1);
    CHECK(default_seed_from_env() == 12345);
    setenv("CCLAB_SEED", "not-a-number", 1);
    CHECK_THROWS_AS(default_seed_from_env(), std::invalid_argument);
    unsetenv("CCLAB_SEED");
    CHECK(default_seed_from_env() == 7);
}

TEST_CASE("usage errors throw invalid_argument") {
    RunConfig cfg;
    cfg.command = "nope";
    CHECK_THROWS_AS(run_command(cfg), std::invalid_argument);
    cfg.command = "identities";
    cfg.manifold = "torus";
    CHECK_THROWS_AS(run_command(cfg), std::invalid_argument);
    cfg.manifold = "hopf:k=1,m=1,n=1";
    cfg.samples = 0;
    CHECK_THROWS_AS(run_command(cfg), std::invalid_argument);
}

TEST_CASE("riccati command on the model") {
    RunConfig cfg;
    cfg.command = "riccati";
    cfg.manifold = "hopf:k=1,m=1,n=1";
    cfg.t_max = 3.0;
    cfg.seed = 7;
    const auto out = run_command(cfg);
    CHECK(out.exit_code == 0);
    REQUIRE(!out.report.series.empty());
    CHECK(out.report.series[0].columns.size() == 1 + 9);
}
