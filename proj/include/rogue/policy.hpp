#pragma once

#include <string>
#include <vector>

#include "rogue/model.hpp"
#include "rogue/rng.hpp"

namespace rogue {

// Abstract bandit policy.  One select() and one observe() per round, in that
// order.  observe() receives the action actually executed, which under
// override layers may differ from whatever the policy would have chosen.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::size_t select(RngStream& rng) = 0;

    // Current-round action distribution.  Exact for weight- or index-based
    // policies; Monte Carlo (driven by prob_rng) for posterior-sampling ones.
    virtual std::vector<double> action_probabilities(RngStream& prob_rng) = 0;

    virtual void observe(std::size_t arm, double reward) = 0;

    virtual std::string name() const = 0;

    virtual EpisodeDiag diag() const { return {}; }
};

}  // namespace rogue
