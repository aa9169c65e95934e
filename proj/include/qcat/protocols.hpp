#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcat/channels.hpp"
#include "qcat/rewrite.hpp"

namespace qcat {

struct ProtocolBranchRow {
    std::string label;
    double probability = 0.0;  // for the maximally mixed input where applicable
    ComplexTensor kraus;
    double deviation = 0.0;  // max-norm distance from the certified target
};

struct ProtocolReport {
    std::string protocol;
    int dim = 0;
    std::uint64_t seed = 0;
    std::vector<ProtocolBranchRow> branches;
    double completeness_residual = 0.0;
    double channel_error = 0.0;  // max over the random-state trials
    double state_error = 0.0;    // ghz: distance from the target state
    RewriteTrace trace;          // ghz: the rewrite trace used
    bool passed = false;
    std::vector<std::string> notes;
};

/// Builds the ADD-ladder GHZ circuit on |0...0>, fuses it to a single copy
/// dot via the documented strategy, and certifies the result.
ProtocolReport run_ghz(int d, int n_wires = 4);

/// Superdense coding with Alice's encoding Z^p X^-q; certifies the outcome
/// distribution is a point mass at (p, q).
ProtocolReport run_superdense(int d, int p, int q);

/// Teleportation: every Bell branch equals I/d, the set is complete, and the
/// channel fixes `trials` random density operators.
ProtocolReport run_teleport(int d, int trials = 10, std::uint64_t seed = 7);

/// Gate teleportation through NADD: corrections are shuttled through the gate
/// symbolically; every branch equals NADD/d^2 and the channel conjugates by NADD.
ProtocolReport run_gate_teleport(int d, int trials = 5, std::uint64_t seed = 7);

/// (1/sqrt d) sum_k |k...k> on n legs.
ComplexTensor ghz_state(int d, int n_legs);

}  // namespace qcat
