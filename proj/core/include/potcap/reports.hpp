#pragma once

#include "potcap/additivity.hpp"
#include "potcap/capacities.hpp"
#include "potcap/io.hpp"
#include "potcap/potential.hpp"
#include "potcap/structure.hpp"

namespace potcap {

// JSON views of every report type. Non-finite numbers become null.

Json to_json(const OptimDiagnostics& d);
Json to_json(const Ensemble& e);
Json to_json(const CapacityReport& r);
Json to_json(const BoundReport& r);
Json to_json(const ActivationWitness& w);
Json to_json(const LiftedChannel& l);
Json to_json(const ClassifyReport& r);
Json to_json(const DegradabilityReport& r);
Json to_json(const PerfectionAudit& a);
Json to_json(const GapRecord& g);
Json to_json(const ActivationResult& r);
Json to_json(const ChainReport& r);
Json to_json(const SubadditivityReport& r);
Json to_json(const EqualityReport& r);
Json to_json(const BlockVerification& v);
Json to_json(const DiscoveryResult& r);

/// {d_b, d_e, blocks: [{prob, d_left, d_right, left_state, phi}], embeddings}
Json to_json(const BlockDecomposition& bd);
BlockDecomposition block_decomposition_from_json(const Json& j);

}  // namespace potcap
