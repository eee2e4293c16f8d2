#pragma once

#include <string>
#include <vector>

namespace paramguide {

struct VerifyCase {
    std::string family;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct DecayAdjudication {
    double kappa_fit = 0.0;
    double kappa_half = 0.0;  // |G|^2 / (2 |d(1/v)|)
    double kappa_full = 0.0;  // |G|^2 / |d(1/v)|
    double alpha = 0.0;
    double rel_err_half = 0.0;
    double rel_err_full = 0.0;
    std::string winner;  // "half", "full", or "none"
    int bands = 0;
};

// Scaled broadband case: kappa_half = 1 /cm, alpha ~ 11.
DecayAdjudication adjudicate_decay_exponent(int half_bands = 2400);

struct VerifyReport {
    std::vector<VerifyCase> cases;
    DecayAdjudication decay;
    bool all_pass() const;
};

VerifyReport run_verify_suite();

} // namespace paramguide
