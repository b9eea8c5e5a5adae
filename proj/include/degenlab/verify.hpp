#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "degenlab/model_clement.hpp"
#include "degenlab/model_st.hpp"
#include "degenlab/report.hpp"

namespace degen {

using Rng = std::mt19937_64;

// Unit-scale random jets. closed = third (ST) or second and third (Clement) derivatives on shell.
Jet3State random_st_jet(Rng& rng, const STParams& p, bool closed = true);
// rejection-samples X until |g(X, X)| > min_square
Jet3State random_clement_jet(Rng& rng, const ClementParams& p, double min_square = 0.1, bool closed = true);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int n_points = 100;
};

// Individual groups; check names are prefixed with the model.
Report verify_geometry(const VerifyOptions& o);
Report verify_oracles(const VerifyOptions& o);
Report verify_rk4_order();
Report verify_dirac_brackets(const VerifyOptions& o);
Report verify_tables(const VerifyOptions& o);
Report verify_ranks(const VerifyOptions& o);
Report verify_det_scaling(const VerifyOptions& o);
Report verify_multipliers(const VerifyOptions& o);
Report verify_constraint_algorithm(const VerifyOptions& o);
Report verify_tangency(const VerifyOptions& o);
Report verify_zermelo(const VerifyOptions& o);

// model in {st, clement, reference, all}; runs the groups touching that model
Report verify_suite(const std::string& model, std::uint64_t seed, int n_points);

}  // namespace degen
