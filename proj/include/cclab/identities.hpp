#ifndef CCLAB_IDENTITIES_HPP
#define CCLAB_IDENTITIES_HPP

#include <string>
#include <vector>

#include "cclab/manifold.hpp"

namespace cclab {

struct IdentityResult {
    std::string id;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityResult> items;
    bool all_pass() const;
};

// ids of every identity in the suite (J.*, h.*, Rm.*, bRm.*, Rc.*, CR)
std::vector<std::string> identity_ids();

// Evaluates each selected identity at `samples` random tuples; empty
// selection runs everything. Failures are reported, never thrown.
IdentityReport run_identity_suite(const ManifoldHandle& M, const std::vector<std::string>& selection,
                                  int samples, uint64_t seed, int threads = 1);

// Infima over unit horizontal X of the two curvature quantities entering the
// diameter hypotheses, minus k1^2 resp. k2^2. Contact kinds use the
// Tanaka-Webster curvature, the base kind the Riemann curvature.
struct HypothesisMargins {
    double margin1 = 0.0;
    double margin2 = 0.0;
    double inf_q1 = 0.0;  // inf of the holomorphic-type quantity
    double inf_q2 = 0.0;  // inf of the trace-type quantity
    int samples = 0;
};

HypothesisMargins hypothesis_margins(const ManifoldHandle& M, double k1, double k2, int samples,
                                     uint64_t seed, int threads = 1);

// max over samples of the CR defect
// | (nabla_u J) v - <u + hu, v> xi / 2 + <xi, v> (u + hu) / 2 |
double cr_residual(const ManifoldHandle& M, int samples, uint64_t seed, int threads = 1);

}  // namespace cclab

#endif
